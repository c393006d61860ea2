#ifndef ISR_TYPES_HPP
#define ISR_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace isr {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

using Index = std::int64_t;

/// Arterial wall layer of a bulk element.
enum class Layer : std::uint8_t { media = 0, adventitia = 1 };

/// Tags for boundary surface patches (projected quadrilaterals).
enum class SurfaceTag : std::uint8_t {
  gamma_ss,   ///< stent apposition region on the lumen
  gamma_e_d,  ///< denuded endothelium on the lumen
  gamma_e_h,  ///< healthy endothelium on the lumen
  exterior,   ///< abluminal surface
  ends,       ///< longitudinal end faces
  symmetry    ///< circumferential symmetry faces of a quadrant
};

inline bool is_lumen(SurfaceTag t) {
  return t == SurfaceTag::gamma_ss || t == SurfaceTag::gamma_e_d ||
         t == SurfaceTag::gamma_e_h;
}
inline bool is_endothelium(SurfaceTag t) {
  return t == SurfaceTag::gamma_e_d || t == SurfaceTag::gamma_e_h;
}

/// Per-node unknown components of the monolithic system. The endothelial
/// density lives on lumen surface nodes only and is indexed separately.
enum Comp : int {
  comp_ux = 0,
  comp_uy = 1,
  comp_uz = 2,
  comp_cP = 3,
  comp_cT = 4,
  comp_cC = 5,
  comp_cD = 6,
  comp_rS = 7,
  comps_per_node = 8
};

/// Scalar transport fields in storage order (bulk first, then surface).
enum Field : int {
  field_cP = 0,
  field_cT = 1,
  field_cC = 2,
  field_cD = 3,
  field_rS = 4,
  field_rE = 5,
  n_bulk_fields = 5,
  n_transport_fields = 6
};

inline const char* field_name(int f) {
  static const char* names[] = {"c_P", "c_T", "c_C", "c_D", "rho_S", "rho_E"};
  return names[f];
}

} // namespace isr

#endif
