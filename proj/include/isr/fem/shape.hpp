#ifndef ISR_FEM_SHAPE_HPP
#define ISR_FEM_SHAPE_HPP

#include "isr/types.hpp"

#include <array>

namespace isr {

/// Trilinear hexahedron (VTK node ordering), 2x2x2 Gauss quadrature.
struct Hex8 {
  static constexpr int n_nodes = 8;
  static constexpr int n_qp = 8;

  static constexpr double corners[8][3] = {
      {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
      {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

  static std::array<double, 8> shape(const Vec3& xi) {
    std::array<double, 8> N;
    for (int a = 0; a < 8; ++a)
      N[a] = 0.125 * (1 + corners[a][0] * xi[0]) * (1 + corners[a][1] * xi[1]) *
             (1 + corners[a][2] * xi[2]);
    return N;
  }

  static std::array<Vec3, 8> shape_grad(const Vec3& xi) {
    std::array<Vec3, 8> dN;
    for (int a = 0; a < 8; ++a) {
      const double gx = corners[a][0], gy = corners[a][1], gz = corners[a][2];
      dN[a][0] = 0.125 * gx * (1 + gy * xi[1]) * (1 + gz * xi[2]);
      dN[a][1] = 0.125 * gy * (1 + gx * xi[0]) * (1 + gz * xi[2]);
      dN[a][2] = 0.125 * gz * (1 + gx * xi[0]) * (1 + gy * xi[1]);
    }
    return dN;
  }

  static std::array<Vec3, 8> gauss_points() {
    const double g = 1.0 / std::sqrt(3.0);
    std::array<Vec3, 8> pts;
    int q = 0;
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
          pts[q++] = Vec3((2 * i - 1) * g, (2 * j - 1) * g, (2 * k - 1) * g);
    return pts;
  }
  // unit weights for 2-point Gauss
};

/// Bilinear quadrilateral surface element, 2x2 Gauss quadrature.
struct Quad4 {
  static constexpr int n_nodes = 4;
  static constexpr int n_qp = 4;

  static constexpr double corners[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

  static std::array<double, 4> shape(double xi, double eta) {
    std::array<double, 4> N;
    for (int a = 0; a < 4; ++a)
      N[a] = 0.25 * (1 + corners[a][0] * xi) * (1 + corners[a][1] * eta);
    return N;
  }

  static std::array<Eigen::Vector2d, 4> shape_grad(double xi, double eta) {
    std::array<Eigen::Vector2d, 4> dN;
    for (int a = 0; a < 4; ++a) {
      dN[a][0] = 0.25 * corners[a][0] * (1 + corners[a][1] * eta);
      dN[a][1] = 0.25 * corners[a][1] * (1 + corners[a][0] * xi);
    }
    return dN;
  }

  static std::array<Eigen::Vector2d, 4> gauss_points() {
    const double g = 1.0 / std::sqrt(3.0);
    return {Eigen::Vector2d(-g, -g), Eigen::Vector2d(g, -g),
            Eigen::Vector2d(g, g), Eigen::Vector2d(-g, g)};
  }
};

} // namespace isr

#endif
