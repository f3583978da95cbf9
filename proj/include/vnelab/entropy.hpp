#pragma once

// Entropy functionals, all in nats.

#include "vnelab/algebra.hpp"
#include "vnelab/crossed_product.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace vnelab {

// eta(t) = -t log t, eta(0) = 0.
double eta(double t);

// eta applied through the spectrum; eigenvalues in [-psd, 0) are clamped to 0.
// Throws std::invalid_argument below the floor.
[[nodiscard]] Matrix eta_matrix(const Matrix& x);
// tau(eta(x)) without forming eta(x).
[[nodiscard]] double tau_eta(const Matrix& x);

// Tr rho (log rho - log sigma) for positive rho, sigma with matrix-trace
// normalization. Returns +infinity when supp(rho) is not inside supp(sigma).
[[nodiscard]] double umegaki_relative_entropy(const Density& rho, const Density& sigma);
[[nodiscard]] double umegaki_relative_entropy(const Matrix& rho, const Matrix& sigma);

// Density of phi restricted to C, as an ambient matrix: E_C(rho).
[[nodiscard]] Matrix restrict_density(const Subalgebra& c, const Matrix& rho);

enum class PartitionKind {
  ConnesStormer,  // sum tau eta E_B(x) - tau eta E_A(x)
  Conditional,    // sum tau eta E_B(E_A(x)) - tau eta E_A(x)
};

std::string to_string(PartitionKind kind);

struct PartitionObjective {
  PartitionKind kind;
  Subalgebra a;
  Subalgebra b;
};

// Value of a validated partition; throws std::invalid_argument on an
// invariant violation (in-A styles are checked against obj.a).
[[nodiscard]] double partition_value(const PartitionObjective& obj, const Partition& p);
// Same sum on raw parts, no validation. Used in optimizer inner loops.
[[nodiscard]] double partition_sum(const PartitionObjective& obj, const std::vector<Matrix>& parts);

enum class DecompositionKind {
  RelativeH,     // H_phi(A|B): sum S(phi_i|A, phi|A) - S(phi_i|B, phi|B)
  RelativeCond,  // h_phi(A|B): sum S(phi_i|A, phi|A) - S((phi_i E_A)|B, (phi E_A)|B)
  CondA,         // h_phi(A):   sum eta(phi_i(1)) + S(phi_i|A, phi|A), phi_i over Phi(A)
  EntropyA,      // H_phi(A):   same sum, phi_i over Phi
};

std::string to_string(DecompositionKind kind);

struct DecompositionObjective {
  DecompositionKind kind;
  Density state;
  Subalgebra a;
  std::optional<Subalgebra> b;  // required for the relative kinds
};

struct DecompositionValue {
  double value = 0.0;
  // Indices of terms whose relative entropy was +infinity. When nonempty the
  // sum is not a number and `value` is meaningless.
  std::vector<std::size_t> unbounded_terms;

  bool bounded() const { return unbounded_terms.empty(); }
};

// Requires sum_i D_i = rho_phi within tol::part.
[[nodiscard]] DecompositionValue decomposition_value(const DecompositionObjective& obj,
                                                     const std::vector<Density>& parts);

// sum_g eta(tau(u_g u_g*)); throws if u fails the Fourier unitary criterion.
[[nodiscard]] double inner_automorphism_entropy(const CrossedProduct& m, const Matrix& u);

// b(u) = (|u_ij|^2), doubly stochastic for unitary u.
[[nodiscard]] RealMatrix unistochastic_matrix(const Matrix& u);
// (1/n) sum_ij eta(|u_ij|^2)
[[nodiscard]] double unistochastic_entropy(const Matrix& u);

// sum_g tau eta(d_g d_g*) over the diagonal Fourier coefficients of u in
// M_n = D x Z_n; an upper bound for h(D | u D u*).
[[nodiscard]] double abelian_fourier_entropy_bound(const Matrix& u);

}  // namespace vnelab
