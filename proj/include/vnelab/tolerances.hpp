#pragma once

namespace vnelab::tol {

// Algebraic identities (closure, idempotence, bimodularity, unitarity).
inline constexpr double alg = 1e-9;
// Eigenvalue floor: anything in [-psd, 0) is treated as zero.
inline constexpr double psd = 1e-10;
// Partition of unity / density normalization.
inline constexpr double part = 1e-8;
// Commuting-square certification.
inline constexpr double cs = 1e-8;
// Lower bound may exceed an analytic upper bound by at most this much.
inline constexpr double bound = 1e-6;
// Default eigenvalue clustering width for spectral projections.
inline constexpr double cluster = 1e-8;

}  // namespace vnelab::tol
