#include "vnelab/crossed_product.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vnelab {

namespace {

int mod(int g, int n) { return ((g % n) + n) % n; }

}  // namespace

CyclicAction::CyclicAction(int order, Matrix implementer, std::vector<Matrix> powers, Complex mu)
    : order_(order), implementer_(std::move(implementer)), powers_(std::move(powers)), period_scalar_(mu) {}

CyclicAction CyclicAction::make(int order, Matrix implementer) {
  if (order < 1) throw std::invalid_argument("group order must be at least 1");
  if (implementer.rows() != implementer.cols() || implementer.rows() == 0) {
    throw std::invalid_argument("action implementer must be a nonempty square matrix");
  }
  if (!all_finite(implementer)) throw std::invalid_argument("action implementer is not finite");
  if (unitary_defect(implementer) >= tol::alg) {
    throw std::invalid_argument("action implementer is not unitary");
  }
  const Index k = implementer.rows();
  std::vector<Matrix> powers{Matrix::Identity(k, k)};
  for (int g = 1; g < order; ++g) powers.push_back(powers.back() * implementer);
  const Matrix full_period = powers.back() * implementer;
  const Complex mu = full_period.trace() / static_cast<double>(k);
  if (operator_norm(full_period - mu * Matrix::Identity(k, k)) >= tol::alg ||
      std::abs(std::abs(mu) - 1.0) >= tol::alg) {
    throw std::invalid_argument("implementer^n is not a unimodular scalar: alpha^n != id");
  }
  return CyclicAction(order, std::move(implementer), std::move(powers), mu);
}

Matrix CyclicAction::apply(const Matrix& x, int g) const {
  if (x.rows() != fiber_dim() || x.cols() != fiber_dim()) {
    throw std::invalid_argument("action applied to a matrix of the wrong size");
  }
  const Matrix& a = powers_[static_cast<std::size_t>(mod(g, order_))];
  return a * x * a.adjoint();
}

// ---------------------------------------------------------------------------

CrossedProduct::CrossedProduct(CyclicAction action)
    : action_(std::move(action)),
      ambient_(action_.order() * action_.fiber_dim()),
      fiber_(action_.fiber_dim()),
      fiber_subalgebra_(Subalgebra::scalars(ambient_)) {
  const int n = action_.order();
  const Index k = action_.fiber_dim();
  for (int h = 0; h < n; ++h) {
    Matrix v = Matrix::Zero(n * k, n * k);
    for (int g = 0; g < n; ++g) v.block(g * k, mod(g - h, n) * k, k, k).setIdentity();
    shifts_.push_back(std::move(v));
  }
  std::vector<Matrix> images;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) images.push_back(embed(matrix_unit(k, i, j)));
  }
  fiber_subalgebra_ = Subalgebra::from_spanning_set(ambient_, images);
}

Matrix CrossedProduct::embed(const Matrix& x) const {
  fiber_.check_member(x);
  const int n = order();
  const Index k = fiber_dim();
  Matrix out = Matrix::Zero(n * k, n * k);
  for (int g = 0; g < n; ++g) out.block(g * k, g * k, k, k) = action_.apply(x, -g);
  return out;
}

const Matrix& CrossedProduct::v(int g) const { return shifts_[static_cast<std::size_t>(mod(g, order()))]; }

Matrix CrossedProduct::block(const Matrix& x, int row, int col) const {
  ambient_.check_member(x);
  const Index k = fiber_dim();
  return x.block(mod(row, order()) * k, mod(col, order()) * k, k, k);
}

Subalgebra CrossedProduct::algebra() const {
  const Index k = fiber_dim();
  std::vector<Matrix> spanning;
  for (int g = 0; g < order(); ++g) {
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) spanning.push_back(embed(matrix_unit(k, i, j)) * v(g));
    }
  }
  return Subalgebra::from_spanning_set(ambient_, spanning);
}

CrossedProduct build_crossed_product(const CyclicAction& action) { return CrossedProduct(action); }

FourierVector fourier_coefficients(const CrossedProduct& m, const Matrix& x) {
  m.ambient().check_member(x);
  FourierVector f;
  for (int g = 0; g < m.order(); ++g) {
    f.coefficients.push_back(m.block(x * m.v(g).adjoint(), 0, 0));
  }
  return f;
}

Matrix reconstruct(const CrossedProduct& m, const FourierVector& f) {
  if (static_cast<int>(f.coefficients.size()) != m.order()) {
    throw std::invalid_argument("Fourier vector has the wrong number of coefficients");
  }
  const Index d = m.ambient().dim();
  Matrix x = Matrix::Zero(d, d);
  for (int g = 0; g < m.order(); ++g) {
    x += m.embed(f.coefficients[static_cast<std::size_t>(g)]) * m.v(g);
  }
  return x;
}

std::vector<double> fourier_weights(const CrossedProduct& m, const Matrix& u) {
  const auto f = fourier_coefficients(m, u);
  std::vector<double> w;
  for (const auto& ug : f.coefficients) w.push_back(m.fiber().trace(ug * ug.adjoint()).real());
  return w;
}

double verify_unitary_criterion(const CrossedProduct& m, const Matrix& u) {
  const auto f = fourier_coefficients(m, u);
  const auto& c = f.coefficients;
  const int n = m.order();
  const Index k = m.fiber_dim();
  const auto& alpha = m.action();
  const auto at = [&](int g) -> const Matrix& { return c[static_cast<std::size_t>(mod(g, n))]; };
  double worst = 0.0;
  for (int h = 0; h < n; ++h) {
    Matrix left = Matrix::Zero(k, k);
    Matrix right = Matrix::Zero(k, k);
    for (int g = 0; g < n; ++g) {
      left += at(h + g) * alpha.apply(at(g).adjoint(), h);
      right += alpha.apply(at(g).adjoint() * at(g + h), -g);
    }
    if (h == 0) {
      left -= Matrix::Identity(k, k);
      right -= Matrix::Identity(k, k);
    }
    worst = std::max({worst, operator_norm(left), operator_norm(right)});
  }
  return worst;
}

// ---------------------------------------------------------------------------

ClockShiftModel clock_shift_model(int n) {
  if (n < 2) throw std::invalid_argument("clock/shift model needs n >= 2");
  const Complex gamma = std::polar(1.0, 2.0 * std::numbers::pi / n);
  Matrix clock = Matrix::Zero(n, n);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    clock(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * i / n);
    w(mod(i + 1, n), i) = 1.0;
  }
  ClockShiftModel model{CyclicAction::make(n, clock), gamma, w, {}};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) model.units.push_back(matrix_unit(n, i, j));
  }

  const auto fail = [](const std::string& what) {
    throw std::logic_error("clock/shift identity failed: " + what);
  };
  const auto power = [](Complex z, int p) { return std::pow(z, p); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix lhs = model.action.apply(model.unit(i, j), 1);
      if (operator_norm(lhs - power(gamma, i - j) * model.unit(i, j)) >= tol::alg) fail("alpha(e_ij)");
    }
  }
  Matrix wj = Matrix::Identity(n, n);
  for (int j = 1; j <= n; ++j) {
    wj = wj * w;
    Matrix expected = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) expected(mod(i + j, n), i) = 1.0;
    if (operator_norm(wj - expected) >= tol::alg) fail("w^j");
    for (int jj = 0; jj < n; ++jj) {
      const int target = mod(jj - j, n);
      if (operator_norm(wj.adjoint() * model.unit(jj, jj) * wj - model.unit(target, target)) >= tol::alg) {
        fail("w^i* e_jj w^i");
      }
    }
  }
  if (operator_norm(model.action.apply(w, 1) - gamma * w) >= tol::alg) fail("alpha(w)");
  return model;
}

namespace {

void require_clock_model(const CrossedProduct& m, const ClockShiftModel& model) {
  if (m.order() != model.n() || m.fiber_dim() != model.n() ||
      operator_norm(m.action().implementer() - model.action.implementer()) >= tol::alg) {
    throw std::invalid_argument("crossed product was not built from this clock/shift model");
  }
}

}  // namespace

Matrix build_u_flat(const CrossedProduct& m, const ClockShiftModel& model) {
  require_clock_model(m, model);
  const int n = model.n();
  const Index d = m.ambient().dim();
  Matrix u = Matrix::Zero(d, d);
  Matrix wp = model.shift;  // w^{j+1}
  for (int j = 0; j < n; ++j) {
    u += m.embed(wp) * m.v(j);
    wp = wp * model.shift;
  }
  return u / std::sqrt(static_cast<double>(n));
}

Matrix build_u_lambda(const CrossedProduct& m, const ClockShiftModel& model, double lambda) {
  require_clock_model(m, model);
  if (model.n() != 2) throw std::invalid_argument("u(lambda) is defined for n = 2 only");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  return std::sqrt(lambda) * m.embed(model.shift) + std::sqrt(1.0 - lambda) * m.v(1);
}

std::vector<Matrix> character_projections(const CrossedProduct& m) {
  const int n = m.order();
  const Index d = m.ambient().dim();
  std::vector<Matrix> out;
  for (int chi = 0; chi < n; ++chi) {
    Matrix p = Matrix::Zero(d, d);
    for (int g = 0; g < n; ++g) {
      p += std::polar(1.0, 2.0 * std::numbers::pi * mod(chi * g, n) / n) * m.v(g);
    }
    out.push_back(p / static_cast<double>(n));
  }
  return out;
}

Matrix random_unitary_in(const CrossedProduct& m, Rng& rng, double scale) {
  const Index k = m.fiber_dim();
  const Index d = m.ambient().dim();
  Matrix x = Matrix::Zero(d, d);
  for (int g = 0; g < m.order(); ++g) x += m.embed(scale * random_gaussian(k, k, rng)) * m.v(g);
  return unitary_exp(hermitian_part(x));
}

std::vector<Vector> diagonal_fourier_coefficients(const Matrix& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("matrix must be square");
  const int n = static_cast<int>(u.rows());
  std::vector<Vector> out;
  for (int g = 0; g < n; ++g) {
    Vector dg(n);
    for (int r = 0; r < n; ++r) dg(r) = u(r, mod(r - g, n));
    out.push_back(std::move(dg));
  }
  return out;
}

}  // namespace vnelab
