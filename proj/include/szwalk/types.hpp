#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace szwalk {

using cxd = std::complex<double>;

// Amplitudes indexed by the canonical arc index (element of l2(A)).
using ArcState = Eigen::VectorXcd;

// Amplitudes indexed by the flattened vertex-block set {(u;j)}.
using VertexState = Eigen::VectorXcd;

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace szwalk
