#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace vnelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

// Eigen-decomposition of the Hermitian part (x + x*)/2, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};

HermitianEigen hermitian_eigen(const Matrix& x);
RealVector hermitian_eigenvalues(const Matrix& x);

// f applied to the spectrum: V diag(f(lambda)) V*.
template <typename F>
Matrix spectral_apply(const HermitianEigen& eig, F&& f) {
  RealVector mapped(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

Matrix hermitian_part(const Matrix& x);

double operator_norm(const Matrix& x);
// ||x - x*||
double hermitian_defect(const Matrix& x);
// max(||u*u - 1||, ||uu* - 1||)
double unitary_defect(const Matrix& u);
bool all_finite(const Matrix& x);

Matrix matrix_unit(Index d, Index row, Index col);
// exp(i h) for Hermitian h.
Matrix unitary_exp(const Matrix& h);

// Seeded samplers used by experiments and tests.
Matrix random_gaussian(Index rows, Index cols, Rng& rng);
Matrix random_hermitian(Index d, Rng& rng);
Matrix random_unitary(Index d, Rng& rng);  // Haar, via QR with phase fix
// A random positive definite matrix with unit matrix trace.
Matrix random_density(Index d, Rng& rng);

// Mixes a base seed with a stream index (splitmix64), so every restart or
// sample owns an independent, reproducible generator.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace vnelab
