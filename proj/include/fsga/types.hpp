#pragma once

#include <complex>
#include <cstddef>

namespace fsga {

using cplx = std::complex<double>;

// Absolute tolerance on complex entries.
inline constexpr double kEntryTolerance = 1e-12;
// Rank / orthogonalization decisions.
inline constexpr double kRankTolerance = 1e-9;

}  // namespace fsga
