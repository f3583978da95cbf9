#include "vnelab/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vnelab {

double eta(double t) {
  if (t <= 0.0) return 0.0;
  return -t * std::log(t);
}

namespace {

double clamped(double lambda) {
  if (lambda < -tol::psd) {
    throw std::invalid_argument("eigenvalue " + std::to_string(lambda) + " below the positivity floor");
  }
  return lambda < 0.0 ? 0.0 : lambda;
}

}  // namespace

Matrix eta_matrix(const Matrix& x) {
  return spectral_apply(hermitian_eigen(x), [](double l) { return eta(clamped(l)); });
}

double tau_eta(const Matrix& x) {
  const RealVector ev = hermitian_eigenvalues(x);
  double sum = 0.0;
  for (Index i = 0; i < ev.size(); ++i) sum += eta(clamped(ev(i)));
  return sum / static_cast<double>(x.rows());
}

double umegaki_relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("relative entropy of densities with different shapes");
  }
  const auto se = hermitian_eigen(sigma);
  const Index d = sigma.rows();
  // Support test: the part of rho outside supp(sigma).
  Matrix outside = Matrix::Identity(d, d);
  for (Index i = 0; i < d; ++i) {
    if (se.values(i) > tol::psd) outside -= se.vectors.col(i) * se.vectors.col(i).adjoint();
  }
  if (operator_norm(outside * rho * outside) > tol::psd) return std::numeric_limits<double>::infinity();

  const RealVector re = hermitian_eigenvalues(rho);
  double rho_log_rho = 0.0;
  for (Index i = 0; i < re.size(); ++i) rho_log_rho -= eta(clamped(re(i)));
  const Matrix rho_h = hermitian_part(rho);
  double rho_log_sigma = 0.0;
  for (Index i = 0; i < d; ++i) {
    if (se.values(i) <= tol::psd) continue;
    const double weight = (se.vectors.col(i).adjoint() * rho_h * se.vectors.col(i))(0, 0).real();
    rho_log_sigma += weight * std::log(se.values(i));
  }
  return rho_log_rho - rho_log_sigma;
}

double umegaki_relative_entropy(const Density& rho, const Density& sigma) {
  return umegaki_relative_entropy(rho.matrix, sigma.matrix);
}

Matrix restrict_density(const Subalgebra& c, const Matrix& rho) { return c.expect(rho); }

std::string to_string(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::ConnesStormer: return "connes-stormer";
    case PartitionKind::Conditional: return "conditional";
  }
  return "unknown";
}

double partition_sum(const PartitionObjective& obj, const std::vector<Matrix>& parts) {
  double total = 0.0;
  for (const auto& x : parts) {
    const Matrix ea = obj.a.expect(x);
    const Matrix eb = obj.kind == PartitionKind::Conditional ? obj.b.expect(ea) : obj.b.expect(x);
    total += tau_eta(eb) - tau_eta(ea);
  }
  return total;
}

double partition_value(const PartitionObjective& obj, const Partition& p) {
  if (obj.a.ambient() != obj.b.ambient()) {
    throw std::invalid_argument("objective subalgebras live in different ambients");
  }
  const auto why = partition_violation(p, &obj.a);
  if (!why.empty()) throw std::invalid_argument("invalid partition: " + why);
  if (p.parts.front().rows() != obj.a.ambient().dim()) {
    throw std::invalid_argument("partition and objective have different ambient dimensions");
  }
  return partition_sum(obj, p.parts);
}

std::string to_string(DecompositionKind kind) {
  switch (kind) {
    case DecompositionKind::RelativeH: return "H_phi(A|B)";
    case DecompositionKind::RelativeCond: return "h_phi(A|B)";
    case DecompositionKind::CondA: return "h_phi(A)";
    case DecompositionKind::EntropyA: return "H_phi(A)";
  }
  return "unknown";
}

DecompositionValue decomposition_value(const DecompositionObjective& obj,
                                       const std::vector<Density>& parts) {
  const bool relative =
      obj.kind == DecompositionKind::RelativeH || obj.kind == DecompositionKind::RelativeCond;
  if (relative && !obj.b) throw std::invalid_argument("relative decomposition objective needs B");
  if (parts.empty()) throw std::invalid_argument("decomposition is empty");
  const Matrix& rho = obj.state.matrix;
  obj.a.ambient().check_member(rho);
  Matrix total = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& p : parts) {
    obj.a.ambient().check_member(p.matrix);
    total += p.matrix;
  }
  if (operator_norm(total - rho) >= tol::part) {
    throw std::invalid_argument("decomposition does not sum to the state density");
  }

  const Matrix rho_a = restrict_density(obj.a, rho);
  DecompositionValue out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    // Phi(A) members satisfy phi_i = phi_i o E_A: replace rho_i by E_A(rho_i).
    const Matrix rho_i = obj.kind == DecompositionKind::CondA ? obj.a.expect(parts[i].matrix)
                                                              : Matrix(parts[i].matrix);
    const Matrix rho_i_a = restrict_density(obj.a, rho_i);
    const double s_a = umegaki_relative_entropy(rho_i_a, rho_a);
    double term = 0.0;
    switch (obj.kind) {
      case DecompositionKind::RelativeH: {
        const double s_b = umegaki_relative_entropy(restrict_density(*obj.b, rho_i),
                                                    restrict_density(*obj.b, rho));
        term = s_a - s_b;
        if (std::isinf(s_a) || std::isinf(s_b)) out.unbounded_terms.push_back(i);
        break;
      }
      case DecompositionKind::RelativeCond: {
        const double s_b = umegaki_relative_entropy(restrict_density(*obj.b, rho_i_a),
                                                    restrict_density(*obj.b, rho_a));
        term = s_a - s_b;
        if (std::isinf(s_a) || std::isinf(s_b)) out.unbounded_terms.push_back(i);
        break;
      }
      case DecompositionKind::CondA:
      case DecompositionKind::EntropyA: {
        term = eta(rho_i.trace().real()) + s_a;
        if (std::isinf(s_a)) out.unbounded_terms.push_back(i);
        break;
      }
    }
    if (out.bounded()) out.value += term;
  }
  if (!out.bounded()) out.value = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double inner_automorphism_entropy(const CrossedProduct& m, const Matrix& u) {
  const double defect = verify_unitary_criterion(m, u);
  if (defect >= tol::alg) {
    throw std::invalid_argument("inner automorphism entropy needs a unitary (criterion defect " +
                                std::to_string(defect) + ")");
  }
  double total = 0.0;
  for (double w : fourier_weights(m, u)) total += eta(w);
  return total;
}

RealMatrix unistochastic_matrix(const Matrix& u) {
  if (unitary_defect(u) >= tol::alg) throw std::invalid_argument("b(u) needs a unitary u");
  return u.cwiseAbs2();
}

double unistochastic_entropy(const Matrix& u) {
  const RealMatrix b = unistochastic_matrix(u);
  double total = 0.0;
  for (Index i = 0; i < b.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) total += eta(b(i, j));
  }
  return total / static_cast<double>(u.rows());
}

double abelian_fourier_entropy_bound(const Matrix& u) {
  if (unitary_defect(u) >= tol::alg) throw std::invalid_argument("Fourier bound needs a unitary u");
  const auto coeffs = diagonal_fourier_coefficients(u);
  double total = 0.0;
  for (const auto& dg : coeffs) {
    const Matrix dd = (dg.cwiseAbs2()).cast<Complex>().asDiagonal();
    total += tau_eta(dd);
  }
  return total;
}

}  // namespace vnelab
