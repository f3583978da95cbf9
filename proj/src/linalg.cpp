#include "vnelab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace vnelab {

Matrix hermitian_part(const Matrix& x) { return (x + x.adjoint()) * 0.5; }

HermitianEigen hermitian_eigen(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(x));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(x), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  // sqrt of the top eigenvalue of x*x; the Gram matrix is invariant under
  // x -> -x bit for bit, which keeps derived defects exactly symmetric.
  const Matrix gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double hermitian_defect(const Matrix& x) { return operator_norm(x - x.adjoint()); }

double unitary_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return std::max(operator_norm(u.adjoint() * u - id), operator_norm(u * u.adjoint() - id));
}

bool all_finite(const Matrix& x) {
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x.data()[i].real()) || !std::isfinite(x.data()[i].imag())) return false;
  }
  return true;
}

Matrix matrix_unit(Index d, Index row, Index col) {
  Matrix e = Matrix::Zero(d, d);
  e(row, col) = 1.0;
  return e;
}

Matrix unitary_exp(const Matrix& h) {
  const auto eig = hermitian_eigen(h);
  Vector phases(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) phases(i) = std::polar(1.0, eig.values(i));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix random_hermitian(Index d, Rng& rng) { return hermitian_part(random_gaussian(d, d, rng)); }

Matrix random_unitary(Index d, Rng& rng) {
  const Matrix g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Matrix random_density(Index d, Rng& rng) {
  const Matrix g = random_gaussian(d, d, rng);
  Matrix rho = g * g.adjoint() + 0.05 * Matrix::Identity(d, d);
  rho = hermitian_part(rho);
  return rho / rho.trace().real();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace vnelab
