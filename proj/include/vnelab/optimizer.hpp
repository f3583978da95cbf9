#pragma once

// Numerical lower bounds for the partition and decomposition suprema, plus the
// spectral refinement used to split scaled projections along observables.

#include "vnelab/entropy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vnelab {

struct AscentConfig {
  int parts = 0;  // 0 selects dim(A), at least 2
  int restarts = 8;
  int max_iters = 500;
  double step = 0.1;
  std::uint64_t seed = 0;
  double tol_improve = 1e-9;
  double fd_step = 1e-5;
  // Stop after this many consecutive accepted steps gaining < tol_improve.
  int patience = 10;

  void validate() const;
};

// theta -> (x_i), x_i = T^{-1/2} exp(H_i) T^{-1/2}, T = sum_i exp(H_i), where
// H_i = sum_j theta[i * k + j] h_j over a real basis (h_j) of self-adjoint
// elements. A final renormalization by (sum x_i)^{-1/2} removes rounding drift.
// With `home` set, each part is passed through E_home at the end, which keeps
// in-A parts inside A when T is badly conditioned.
class ExpPartitionMap {
 public:
  ExpPartitionMap(std::vector<Matrix> hermitian_basis, int parts,
                  std::optional<Subalgebra> home = std::nullopt);

  Index coordinates() const { return static_cast<Index>(basis_.size()) * parts_; }
  int parts() const { return parts_; }
  std::vector<Matrix> operator()(const RealVector& theta) const;

 private:
  Matrix generator(const RealVector& theta, int part) const;

  std::vector<Matrix> basis_;
  int parts_;
  std::optional<Subalgebra> home_;
};

struct PartitionAscentResult {
  Partition witness;
  double value = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  // Objective after each accepted step of the winning restart.
  std::vector<double> trajectory;
};

// Maximizes partition_value over partitions of the given style (default:
// in-A for Conditional objectives, general for Connes-Stormer). The reported
// value is partition_value recomputed on the returned witness.
[[nodiscard]] PartitionAscentResult ascend_partition(
    const PartitionObjective& obj, const AscentConfig& cfg,
    std::optional<PartitionStyle> domain = std::nullopt);

// Splits each lambda_i p_i along the spectral projections of q o q for every
// observable o in turn. Result parts are lambda_i q_{i,k}.
[[nodiscard]] Partition spectral_refine(const Partition& p, const Subalgebra& home,
                                        std::span<const Matrix> observables,
                                        double cluster_tol = tol::cluster);

struct Bracket {
  double lower = 0.0;
  Partition witness;
  std::string lower_source;
  std::optional<double> upper;
  std::string upper_source;

  bool consistent() const { return !upper || lower <= *upper + tol::bound; }
  std::optional<double> gap() const {
    if (!upper) return std::nullopt;
    return *upper - lower;
  }
};

// Best of the seed partitions and an ascent run. Seeds are validated against
// obj.a and evaluated with partition_value. Throws std::logic_error if the
// lower bound exceeds `upper` by more than tol::bound.
[[nodiscard]] Bracket bracket_partition(const PartitionObjective& obj,
                                        std::span<const std::pair<std::string, Partition>> seeds,
                                        std::optional<double> upper, std::string upper_source,
                                        const AscentConfig& cfg, bool run_ascent = true);

// h(N | uNu*) bracketed by partition witnesses from below and H_N(Ad u) from above.
[[nodiscard]] Bracket bracket_h(const CrossedProduct& m, const Matrix& u, const AscentConfig& cfg);

// Matrix-unit partition {embed(e_jj)} of the fiber.
[[nodiscard]] Partition fiber_matrix_unit_partition(const CrossedProduct& m);

struct DecompositionAscentResult {
  std::vector<Density> witness;
  double value = 0.0;
  // Set when the state was not faithful; the search then runs on its support.
  bool restricted_to_support = false;
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
};

// rho_i = rho^{1/2} y_i rho^{1/2} with (y_i) from an ExpPartitionMap on the
// full ambient. The reported value is decomposition_value on the witness.
[[nodiscard]] DecompositionAscentResult ascend_decomposition(const DecompositionObjective& obj,
                                                             const AscentConfig& cfg);

}  // namespace vnelab
