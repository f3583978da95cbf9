#include "vnelab/algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vnelab {

namespace {

using ConstVecMap = Eigen::Map<const Vector>;

Complex raw_inner(const Matrix& a, const Matrix& b) {
  return ConstVecMap(a.data(), a.size()).dot(ConstVecMap(b.data(), b.size()));
}

double tau_norm(const Matrix& x) {
  return std::sqrt(ConstVecMap(x.data(), x.size()).squaredNorm() / static_cast<double>(x.rows()));
}

// Modified Gram-Schmidt with one re-orthogonalization pass, in the
// tau inner product. Candidates whose relative residual falls below
// 1e-9 * d are treated as dependent.
class TauOrthonormalizer {
 public:
  explicit TauOrthonormalizer(Index d) : d_(d), rank_tol_(1e-9 * static_cast<double>(d)) {}

  bool add(const Matrix& candidate) {
    const double norm = tau_norm(candidate);
    if (!std::isfinite(norm) || norm == 0.0) return false;
    Matrix r = candidate / norm;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis_) r -= b * (raw_inner(b, r) / static_cast<double>(d_));
    }
    const double rn = tau_norm(r);
    if (rn <= rank_tol_) return false;
    basis_.push_back(r / rn);
    return true;
  }

  std::size_t size() const { return basis_.size(); }
  std::vector<Matrix> take() { return std::move(basis_); }

 private:
  Index d_;
  double rank_tol_;
  std::vector<Matrix> basis_;
};

// Real-orthonormal basis of the self-adjoint part of span(basis).
std::vector<Matrix> hermitian_basis_of(const std::vector<Matrix>& basis, Index d) {
  const Complex i_unit(0.0, 1.0);
  const double rank_tol = 1e-9 * static_cast<double>(d);
  std::vector<Matrix> out;
  out.reserve(basis.size());
  auto add = [&](const Matrix& candidate) {
    const double norm = tau_norm(candidate);
    // Basis elements have unit tau-norm, so a tiny candidate is rounding noise.
    if (!std::isfinite(norm) || norm <= rank_tol) return;
    Matrix r = candidate / norm;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& h : out) r -= h * (raw_inner(h, r).real() / static_cast<double>(d));
    }
    const double rn = tau_norm(r);
    if (rn > rank_tol) out.push_back(hermitian_part(r / rn));
  };
  for (const auto& b : basis) {
    if (out.size() == basis.size()) break;
    add((b + b.adjoint()) * 0.5);
    if (out.size() == basis.size()) break;
    add((b - b.adjoint()) / (2.0 * i_unit));
  }
  if (out.size() != basis.size()) {
    throw std::invalid_argument("span is not *-closed: self-adjoint part has the wrong dimension");
  }
  return out;
}

void check_finite(const Matrix& x, const char* what) {
  if (!all_finite(x)) throw std::invalid_argument(std::string(what) + " contains NaN or infinity");
}

}  // namespace

// ---------------------------------------------------------------------------

TracedMatrixAlgebra::TracedMatrixAlgebra(Index dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("ambient dimension must be positive");
}

Complex TracedMatrixAlgebra::trace(const Matrix& x) const {
  check_member(x);
  return x.trace() / static_cast<double>(dim_);
}

Complex TracedMatrixAlgebra::inner(const Matrix& a, const Matrix& b) const {
  check_member(a);
  check_member(b);
  return raw_inner(a, b) / static_cast<double>(dim_);
}

void TracedMatrixAlgebra::check_member(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(dim_) + "x" +
                                std::to_string(dim_) + " matrix, got " + std::to_string(x.rows()) +
                                "x" + std::to_string(x.cols()));
  }
}

// ---------------------------------------------------------------------------

Subalgebra::Subalgebra(TracedMatrixAlgebra ambient, std::vector<Matrix> basis,
                       std::vector<Matrix> hermitian_basis)
    : ambient_(ambient), basis_(std::move(basis)), hermitian_basis_(std::move(hermitian_basis)) {
  const Index d = ambient_.dim();
  stacked_.resize(d * d, static_cast<Index>(basis_.size()));
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    stacked_.col(static_cast<Index>(j)) = ConstVecMap(basis_[j].data(), d * d);
  }
}

Subalgebra Subalgebra::from_spanning_set(const TracedMatrixAlgebra& ambient,
                                         std::span<const Matrix> elements) {
  const Index d = ambient.dim();
  TauOrthonormalizer ortho(d);
  ortho.add(ambient.identity());
  for (const auto& x : elements) {
    ambient.check_member(x);
    check_finite(x, "spanning set");
    ortho.add(x);
  }
  auto basis = ortho.take();
  auto herm = hermitian_basis_of(basis, d);
  Subalgebra result(ambient, std::move(basis), std::move(herm));
  const double closure = result.closure_residual();
  if (closure > tol::alg) {
    throw std::invalid_argument("span is not closed under products (residual " +
                                std::to_string(closure) + ")");
  }
  return result;
}

Subalgebra Subalgebra::full(const TracedMatrixAlgebra& ambient) {
  const Index d = ambient.dim();
  const double scale = std::sqrt(static_cast<double>(d));
  const double off = std::sqrt(static_cast<double>(d) / 2.0);
  const Complex i_unit(0.0, 1.0);
  std::vector<Matrix> basis;
  std::vector<Matrix> herm;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) basis.push_back(scale * matrix_unit(d, i, j));
  }
  for (Index i = 0; i < d; ++i) {
    herm.push_back(scale * matrix_unit(d, i, i));
    for (Index j = i + 1; j < d; ++j) {
      herm.push_back(off * (matrix_unit(d, i, j) + matrix_unit(d, j, i)));
      herm.push_back(off * i_unit * (matrix_unit(d, i, j) - matrix_unit(d, j, i)));
    }
  }
  return Subalgebra(ambient, std::move(basis), std::move(herm));
}

Subalgebra Subalgebra::scalars(const TracedMatrixAlgebra& ambient) {
  std::vector<Matrix> basis{ambient.identity()};
  std::vector<Matrix> herm{ambient.identity()};
  return Subalgebra(ambient, std::move(basis), std::move(herm));
}

Subalgebra Subalgebra::diagonal(const TracedMatrixAlgebra& ambient) {
  const Index d = ambient.dim();
  const double scale = std::sqrt(static_cast<double>(d));
  std::vector<Matrix> basis;
  for (Index i = 0; i < d; ++i) basis.push_back(scale * matrix_unit(d, i, i));
  auto herm = basis;
  return Subalgebra(ambient, std::move(basis), std::move(herm));
}

Matrix Subalgebra::expect(const Matrix& x) const {
  ambient_.check_member(x);
  const Index d = ambient_.dim();
  const Vector coeffs = stacked_.adjoint() * ConstVecMap(x.data(), d * d);
  Vector image = stacked_ * coeffs;
  image /= static_cast<double>(d);
  return Eigen::Map<Matrix>(image.data(), d, d);
}

double Subalgebra::residual(const Matrix& x) const { return tau_norm(x - expect(x)); }

bool Subalgebra::contains(const Matrix& x, double tolerance) const {
  return residual(x) < tolerance * std::max(1.0, tau_norm(x));
}

bool Subalgebra::contains(const Subalgebra& other, double tolerance) const {
  if (other.ambient() != ambient_) return false;
  for (const auto& b : other.basis()) {
    if (!contains(b, tolerance)) return false;
  }
  return true;
}

bool Subalgebra::same_span(const Subalgebra& other, double tolerance) const {
  return dim() == other.dim() && contains(other, tolerance) && other.contains(*this, tolerance);
}

double Subalgebra::closure_residual() const {
  double worst = 0.0;
  for (const auto& a : basis_) {
    const Matrix adj = a.adjoint();
    worst = std::max(worst, residual(adj) / std::max(1.0, tau_norm(adj)));
    for (const auto& b : basis_) {
      const Matrix p = a * b;
      worst = std::max(worst, residual(p) / std::max(1.0, tau_norm(p)));
    }
  }
  return worst;
}

double Subalgebra::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const Complex g = ambient_.inner(basis_[i], basis_[j]);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

HermitianElement HermitianElement::make(Matrix matrix, std::optional<Subalgebra> home) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("hermitian element must be square");
  check_finite(matrix, "hermitian element");
  if (hermitian_defect(matrix) >= tol::alg) {
    throw std::invalid_argument("element is not self-adjoint");
  }
  if (home) {
    home->ambient().check_member(matrix);
    if (operator_norm(matrix - home->expect(matrix)) >= tol::alg * std::max(1.0, operator_norm(matrix))) {
      throw std::invalid_argument("element does not lie in its asserted subalgebra");
    }
  }
  return HermitianElement{hermitian_part(matrix), std::move(home)};
}

std::string to_string(PartitionStyle style) {
  switch (style) {
    case PartitionStyle::General: return "general";
    case PartitionStyle::InA: return "in-A";
    case PartitionStyle::ScaledProjectionsInA: return "scaled-projections-in-A";
  }
  return "unknown";
}

std::string partition_violation(const Partition& p, const Subalgebra* home) {
  if (p.parts.empty()) return "partition is empty";
  const Index d = p.parts.front().rows();
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    const Matrix& x = p.parts[i];
    if (x.rows() != d || x.cols() != d) return "part " + std::to_string(i) + " has the wrong shape";
    if (!all_finite(x)) return "part " + std::to_string(i) + " is not finite";
    if (hermitian_defect(x) >= tol::alg) return "part " + std::to_string(i) + " is not self-adjoint";
    if (hermitian_eigenvalues(x).minCoeff() < -tol::psd) {
      return "part " + std::to_string(i) + " is not positive";
    }
    total += x;
  }
  if (operator_norm(total - Matrix::Identity(d, d)) >= tol::part) return "parts do not sum to 1";
  if (p.style == PartitionStyle::General) return {};
  if (home == nullptr) return "in-A style requires a home subalgebra";
  if (home->ambient().dim() != d) return "home subalgebra has a different ambient dimension";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    const Matrix& x = p.parts[i];
    if (operator_norm(x - home->expect(x)) >= tol::alg) {
      return "part " + std::to_string(i) + " is not in the home subalgebra";
    }
    if (p.style == PartitionStyle::ScaledProjectionsInA) {
      const double scale = hermitian_eigenvalues(x).maxCoeff();
      if (scale <= tol::psd) return "part " + std::to_string(i) + " is zero";
      const Matrix q = x / scale;
      if (operator_norm(q * q - q) >= tol::alg) {
        return "part " + std::to_string(i) + " is not a scaled projection";
      }
    }
  }
  return {};
}

Partition make_partition(std::vector<Matrix> parts, PartitionStyle style, const Subalgebra* home) {
  Partition p{std::move(parts), style};
  const auto why = partition_violation(p, home);
  if (!why.empty()) throw std::invalid_argument("invalid partition: " + why);
  for (auto& x : p.parts) x = hermitian_part(x);
  return p;
}

Partition trivial_partition(Index d) {
  return Partition{{Matrix::Identity(d, d)}, PartitionStyle::ScaledProjectionsInA};
}

Density make_density(Matrix rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density must be square");
  check_finite(rho, "density");
  if (hermitian_defect(rho) >= tol::alg) throw std::invalid_argument("density is not self-adjoint");
  rho = hermitian_part(rho);
  if (hermitian_eigenvalues(rho).minCoeff() < -tol::psd) {
    throw std::invalid_argument("density is not positive semidefinite");
  }
  const double mass = rho.trace().real();
  return Density{std::move(rho), mass};
}

Density tracial_density(Index d) {
  return make_density(Matrix::Identity(d, d) / static_cast<double>(d));
}

// ---------------------------------------------------------------------------

Subalgebra generate_subalgebra(const TracedMatrixAlgebra& ambient,
                               std::span<const Matrix> generators) {
  const Index d = ambient.dim();
  std::vector<Matrix> letters;
  for (const auto& g : generators) {
    ambient.check_member(g);
    check_finite(g, "generator");
    letters.push_back(g);
    if (hermitian_defect(g) > tol::alg) letters.push_back(g.adjoint());
  }

  // Words in the generators and their adjoints, grown by right
  // multiplication. The span dimension strictly increases each round or the
  // loop stops, so at most d^2 rounds.
  TauOrthonormalizer ortho(d);
  ortho.add(ambient.identity());
  std::vector<Matrix> frontier{ambient.identity()};
  while (!frontier.empty()) {
    std::vector<Matrix> next;
    for (const auto& word : frontier) {
      for (const auto& letter : letters) {
        if (static_cast<Index>(ortho.size()) == d * d) break;
        Matrix candidate = word * letter;
        if (ortho.add(candidate)) next.push_back(std::move(candidate));
      }
    }
    frontier = std::move(next);
  }
  auto basis = ortho.take();
  // Products were orthonormalized as they were found; re-run the spanning
  // constructor so the returned basis is orthonormal to full precision.
  return Subalgebra::from_spanning_set(ambient, basis);
}

Matrix conditional_expectation(const Subalgebra& a, const Matrix& x) { return a.expect(x); }

Subalgebra intersect(const Subalgebra& a, const Subalgebra& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("subalgebras live in different ambients");
  const Index d = a.ambient().dim();
  const Index m = a.dim();
  // Coefficient vectors c with (1 - E_B)(sum_j c_j a_j) = 0 span the intersection.
  Matrix residuals(d * d, m);
  for (Index j = 0; j < m; ++j) {
    const Matrix& aj = a.basis()[static_cast<std::size_t>(j)];
    const Matrix r = aj - b.expect(aj);
    residuals.col(j) = ConstVecMap(r.data(), d * d);
  }
  Eigen::JacobiSVD<Matrix> svd(residuals, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double scale = std::sqrt(static_cast<double>(d));
  std::vector<Matrix> shared;
  for (Index k = 0; k < m; ++k) {
    const double s = k < sigma.size() ? sigma(k) : 0.0;
    if (s / scale > tol::cs) continue;
    Matrix x = Matrix::Zero(d, d);
    for (Index j = 0; j < m; ++j) x += svd.matrixV()(j, k) * a.basis()[static_cast<std::size_t>(j)];
    shared.push_back(std::move(x));
  }
  return Subalgebra::from_spanning_set(a.ambient(), shared);
}

Subalgebra conjugate_subalgebra(const Subalgebra& a, const Matrix& u) {
  a.ambient().check_member(u);
  if (unitary_defect(u) >= tol::alg) throw std::invalid_argument("conjugating element is not unitary");
  const Matrix u_adj = u.adjoint();
  std::vector<Matrix> basis;
  std::vector<Matrix> herm;
  basis.reserve(a.basis().size());
  herm.reserve(a.hermitian_basis().size());
  for (const auto& x : a.basis()) basis.push_back(u * x * u_adj);
  for (const auto& h : a.hermitian_basis()) herm.push_back(hermitian_part(u * h * u_adj));
  return Subalgebra(a.ambient(), std::move(basis), std::move(herm));
}

double commuting_square_defect(const Subalgebra& a, const Subalgebra& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("subalgebras live in different ambients");
  const Index d = a.ambient().dim();
  double worst = 0.0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const Matrix e = matrix_unit(d, i, j);
      const Matrix ab = a.expect(b.expect(e));
      const Matrix ba = b.expect(a.expect(e));
      worst = std::max(worst, operator_norm(ab - ba));
    }
  }
  return worst;
}

std::vector<SpectralComponent> spectral_projections(const HermitianElement& x, double cluster_tol,
                                                    const Matrix* support) {
  if (!(cluster_tol >= 0.0)) throw std::invalid_argument("cluster tolerance must be nonnegative");
  const auto eig = hermitian_eigen(x.matrix);
  const Index d = x.matrix.rows();
  std::vector<SpectralComponent> out;
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d && eig.values(stop) - eig.values(stop - 1) <= cluster_tol) ++stop;
    const auto cols = eig.vectors.middleCols(start, stop - start);
    const double mean = eig.values.segment(start, stop - start).mean();
    out.push_back({mean, cols * cols.adjoint()});
    start = stop;
  }
  if (support == nullptr) return out;

  std::vector<SpectralComponent> cut;
  for (auto& comp : out) {
    const Matrix piece = hermitian_part(comp.projection * (*support));
    if (piece.trace().real() < 0.5) continue;
    // Snap to an exact projection: eigenvalues of piece are ~0 or ~1.
    const auto pe = hermitian_eigen(piece);
    Matrix proj = Matrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
      if (pe.values(k) > 0.5) proj += pe.vectors.col(k) * pe.vectors.col(k).adjoint();
    }
    cut.push_back({comp.eigenvalue, std::move(proj)});
  }
  return cut;
}

}  // namespace vnelab
