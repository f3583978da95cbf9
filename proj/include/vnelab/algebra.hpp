#pragma once

// Finite-dimensional *-algebra infrastructure: the ambient matrix algebra with
// its normalized trace, unital *-subalgebras described by a trace-orthonormal
// basis, and the trace-preserving conditional expectations onto them.

#include "vnelab/linalg.hpp"
#include "vnelab/tolerances.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vnelab {

// M_d with tau = Tr / d.
class TracedMatrixAlgebra {
 public:
  explicit TracedMatrixAlgebra(Index dim);

  Index dim() const { return dim_; }
  Complex trace(const Matrix& x) const;
  // <a, b> = tau(a* b)
  Complex inner(const Matrix& a, const Matrix& b) const;
  Matrix identity() const { return Matrix::Identity(dim_, dim_); }
  void check_member(const Matrix& x) const;

  bool operator==(const TracedMatrixAlgebra&) const = default;

 private:
  Index dim_;
};

// A unital *-subalgebra A of the ambient algebra.
//
// The basis is tau-orthonormal, so E_A is the orthogonal projection
//   E_A(x) = sum_i b_i <b_i, x>.
// Alongside it we keep a real-orthonormal basis of the self-adjoint part
// (same count as the complex dimension), used to parametrize Hermitian
// elements of A.
class Subalgebra {
 public:
  // Orthonormalizes `elements` and verifies the span is a unital *-algebra.
  // Throws std::invalid_argument if it is not.
  static Subalgebra from_spanning_set(const TracedMatrixAlgebra& ambient,
                                      std::span<const Matrix> elements);
  static Subalgebra full(const TracedMatrixAlgebra& ambient);
  static Subalgebra scalars(const TracedMatrixAlgebra& ambient);
  static Subalgebra diagonal(const TracedMatrixAlgebra& ambient);

  const TracedMatrixAlgebra& ambient() const { return ambient_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const std::vector<Matrix>& hermitian_basis() const { return hermitian_basis_; }

  // E_A
  Matrix expect(const Matrix& x) const;
  // tau-norm of x - E_A(x)
  double residual(const Matrix& x) const;
  bool contains(const Matrix& x, double tolerance = tol::alg) const;
  // Whether span(other) lies in span(this).
  bool contains(const Subalgebra& other, double tolerance = tol::alg) const;
  bool same_span(const Subalgebra& other, double tolerance = tol::alg) const;

  // Largest residual of a basis product outside the span; < tol::alg for an algebra.
  double closure_residual() const;
  // max_ij |<b_i, b_j> - delta_ij|
  double orthonormality_defect() const;

 private:
  friend Subalgebra conjugate_subalgebra(const Subalgebra&, const Matrix&);

  Subalgebra(TracedMatrixAlgebra ambient, std::vector<Matrix> basis,
             std::vector<Matrix> hermitian_basis);

  TracedMatrixAlgebra ambient_;
  std::vector<Matrix> basis_;
  std::vector<Matrix> hermitian_basis_;
  // Column j is vec(b_j); E_A(x) = stacked (stacked^* vec x) / d.
  Matrix stacked_;
};

// Hermitian matrix with an optional subalgebra it is asserted to lie in.
struct HermitianElement {
  Matrix matrix;
  std::optional<Subalgebra> home;

  static HermitianElement make(Matrix matrix, std::optional<Subalgebra> home = std::nullopt);
};

enum class PartitionStyle { General, InA, ScaledProjectionsInA };

std::string to_string(PartitionStyle style);

// Finite family of positive elements summing to 1.
struct Partition {
  std::vector<Matrix> parts;
  PartitionStyle style = PartitionStyle::General;
};

// Returns an empty string when `p` satisfies its invariants, otherwise the
// first violation. `home` is required for the in-A styles.
std::string partition_violation(const Partition& p, const Subalgebra* home);
// Validating constructor; throws std::invalid_argument.
Partition make_partition(std::vector<Matrix> parts, PartitionStyle style,
                         const Subalgebra* home = nullptr);
Partition trivial_partition(Index d);

// Density of a positive functional: phi(x) = Tr(rho x) = d tau(rho x).
// `mass` is phi(1) = Tr(rho).
struct Density {
  Matrix matrix;
  double mass = 0.0;
};

Density make_density(Matrix rho);
// The density of the trace tau itself: 1 / d.
Density tracial_density(Index d);

[[nodiscard]] Subalgebra generate_subalgebra(const TracedMatrixAlgebra& ambient,
                                             std::span<const Matrix> generators);
[[nodiscard]] Matrix conditional_expectation(const Subalgebra& a, const Matrix& x);
[[nodiscard]] Subalgebra intersect(const Subalgebra& a, const Subalgebra& b);
[[nodiscard]] Subalgebra conjugate_subalgebra(const Subalgebra& a, const Matrix& u);

// max over matrix units e of ||E_A E_B e - E_B E_A e||.
[[nodiscard]] double commuting_square_defect(const Subalgebra& a, const Subalgebra& b);

struct SpectralComponent {
  double eigenvalue;
  Matrix projection;
};

// Spectral projections of x with eigenvalues grouped when consecutive gaps are
// within cluster_tol. With `support` set (a projection commuting with x), the
// projections are cut down to it and empty pieces are dropped, so they sum to
// the support instead of 1.
std::vector<SpectralComponent> spectral_projections(const HermitianElement& x,
                                                    double cluster_tol = tol::cluster,
                                                    const Matrix* support = nullptr);

}  // namespace vnelab
