#pragma once

// M = N x_alpha Z_n realized as (n k) x (n k) block matrices.
//
// Group elements are 0..n-1 with identity 0. Block rows and columns are
// indexed by g ascending. With x = sum_h embed(x_h) v_h:
//   embed(a)   = blockdiag(alpha_{-g}(a))_g
//   v_h        has identity blocks at (g, g - h)
//   block(g,c) = alpha_{-g}(x_{g - c})
// so v_g embed(a) v_g* = embed(alpha_g(a)) and v_g v_h = v_{g+h}.

#include "vnelab/algebra.hpp"

#include <vector>

namespace vnelab {

// alpha(x) = a x a* on M_k with a^n = mu 1, |mu| = 1.
class CyclicAction {
 public:
  // Throws std::invalid_argument unless a is unitary with a^n scalar.
  static CyclicAction make(int order, Matrix implementer);

  int order() const { return order_; }
  Index fiber_dim() const { return implementer_.rows(); }
  const Matrix& implementer() const { return implementer_; }
  Complex period_scalar() const { return period_scalar_; }

  // alpha_g(x) for any integer g (reduced mod n).
  Matrix apply(const Matrix& x, int g) const;

 private:
  CyclicAction(int order, Matrix implementer, std::vector<Matrix> powers, Complex mu);

  int order_;
  Matrix implementer_;
  std::vector<Matrix> powers_;  // a^g, g = 0..n-1
  Complex period_scalar_;
};

struct FourierVector {
  std::vector<Matrix> coefficients;  // x_g in M_k, g = 0..n-1
};

class CrossedProduct {
 public:
  explicit CrossedProduct(CyclicAction action);

  const CyclicAction& action() const { return action_; }
  int order() const { return action_.order(); }
  Index fiber_dim() const { return action_.fiber_dim(); }
  const TracedMatrixAlgebra& ambient() const { return ambient_; }
  const TracedMatrixAlgebra& fiber() const { return fiber_; }

  Matrix embed(const Matrix& x) const;
  // Canonical unitary v_g, g reduced mod n.
  const Matrix& v(int g) const;
  Matrix block(const Matrix& x, int row, int col) const;
  // The image of N as a subalgebra of the ambient.
  const Subalgebra& fiber_subalgebra() const { return fiber_subalgebra_; }
  // The crossed product itself as a subalgebra of the ambient M_{nk}.
  Subalgebra algebra() const;

 private:
  CyclicAction action_;
  TracedMatrixAlgebra ambient_;
  TracedMatrixAlgebra fiber_;
  std::vector<Matrix> shifts_;
  Subalgebra fiber_subalgebra_;
};

[[nodiscard]] CrossedProduct build_crossed_product(const CyclicAction& action);

// x_g = E_N(x v_g*), read off the (0,0) block.
[[nodiscard]] FourierVector fourier_coefficients(const CrossedProduct& m, const Matrix& x);
[[nodiscard]] Matrix reconstruct(const CrossedProduct& m, const FourierVector& f);
// tau_N(u_g u_g*) for each g.
[[nodiscard]] std::vector<double> fourier_weights(const CrossedProduct& m, const Matrix& u);

// Maximum violation, over h, of the Fourier form of uu* = 1 and u*u = 1:
//   sum_g u_{h+g} alpha_h(u_g*)          = delta_{h,0}
//   sum_g alpha_{-g}(u_g* u_{g+h})       = delta_{h,0}
[[nodiscard]] double verify_unitary_criterion(const CrossedProduct& m, const Matrix& u);

// Clock action on M_n with its matrix units and cyclic shift w = sum_i e_{i+1,i}.
// Matrix units are 0-based: unit(i, j) = e_ij.
struct ClockShiftModel {
  CyclicAction action;
  Complex root;                 // gamma = exp(2 pi i / n)
  Matrix shift;                 // w
  std::vector<Matrix> units;    // row-major, units[i * n + j]

  int n() const { return action.order(); }
  const Matrix& unit(int i, int j) const { return units[static_cast<std::size_t>(i * n() + j)]; }
};

[[nodiscard]] ClockShiftModel clock_shift_model(int n);

// u = n^{-1/2} sum_{j=0}^{n-1} w^{j+1} v_j ; all Fourier weights equal 1/n.
[[nodiscard]] Matrix build_u_flat(const CrossedProduct& m, const ClockShiftModel& model);
// u(lambda) = sqrt(lambda) w + sqrt(1 - lambda) v_1, n = 2 only.
[[nodiscard]] Matrix build_u_lambda(const CrossedProduct& m, const ClockShiftModel& model,
                                    double lambda);

// p_chi = (1/n) sum_g gamma^{chi g} v_g, chi = 0..n-1.
[[nodiscard]] std::vector<Matrix> character_projections(const CrossedProduct& m);

// A seeded random unitary of M: exp(i h) for a random self-adjoint h in M.
[[nodiscard]] Matrix random_unitary_in(const CrossedProduct& m, Rng& rng, double scale = 1.0);

// M_n viewed as D x Z_n, D the diagonal algebra and the generator acting by
// the cyclic shift s = sum_i e_{i+1,i}: u = sum_g d_g s^g with d_g diagonal,
// (d_g)_r = u(r, r - g). Returns the diagonals d_g.
[[nodiscard]] std::vector<Vector> diagonal_fourier_coefficients(const Matrix& u);

}  // namespace vnelab
