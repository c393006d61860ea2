#ifndef ISR_IO_HASH_HPP
#define ISR_IO_HASH_HPP

#include <cstdint>
#include <string>

namespace isr {

/// FNV-1a, used to fingerprint configs and meshes in manifests/checkpoints.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s) {
  return fnv1a(s.data(), s.size());
}

} // namespace isr

#endif
