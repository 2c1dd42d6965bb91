#pragma once

namespace geoloop {

// Absolute slack on length/displacement membership tests so exact-radius
// elements are included deterministically.
inline constexpr double kLengthTol = 1e-9;

// Full-rank threshold on |det(basis)|.
inline constexpr double kRankTol = 1e-12;

inline constexpr const char* kVersion = "1.0.0";

} // namespace geoloop
