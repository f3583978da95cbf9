#include "vnelab/optimizer.hpp"

#include "vnelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace vnelab {

void AscentConfig::validate() const {
  if (parts < 0) throw std::invalid_argument("parts must be nonnegative");
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (!(tol_improve >= 0.0)) throw std::invalid_argument("tol_improve must be nonnegative");
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) throw std::invalid_argument("fd_step must be positive");
  if (patience < 1) throw std::invalid_argument("patience must be at least 1");
}

ExpPartitionMap::ExpPartitionMap(std::vector<Matrix> hermitian_basis, int parts,
                                 std::optional<Subalgebra> home)
    : basis_(std::move(hermitian_basis)), parts_(parts), home_(std::move(home)) {
  if (basis_.empty()) throw std::invalid_argument("parametrization basis is empty");
  if (parts_ < 1) throw std::invalid_argument("need at least one part");
}

Matrix ExpPartitionMap::generator(const RealVector& theta, int part) const {
  const Index k = static_cast<Index>(basis_.size());
  const Index d = basis_.front().rows();
  Matrix h = Matrix::Zero(d, d);
  for (Index j = 0; j < k; ++j) h += theta(part * k + j) * basis_[static_cast<std::size_t>(j)];
  return h;
}

namespace {

Matrix inverse_sqrt(const Matrix& t) {
  const auto eig = hermitian_eigen(t);
  if (eig.values.minCoeff() <= 0.0) throw std::runtime_error("partition normalizer is singular");
  return spectral_apply(eig, [](double l) { return 1.0 / std::sqrt(l); });
}

}  // namespace

std::vector<Matrix> ExpPartitionMap::operator()(const RealVector& theta) const {
  if (theta.size() != coordinates()) throw std::invalid_argument("coordinate vector has the wrong size");
  std::vector<HermitianEigen> eigs;
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < parts_; ++i) {
    eigs.push_back(hermitian_eigen(generator(theta, i)));
    shift = std::max(shift, eigs.back().values.maxCoeff());
  }
  // Parts are kept as x_i = z_i z_i*, so they stay positive under rounding.
  std::vector<Matrix> roots;
  const Index d = basis_.front().rows();
  Matrix t = Matrix::Zero(d, d);
  for (const auto& e : eigs) {
    roots.push_back(spectral_apply(e, [shift](double l) { return std::exp(0.5 * (l - shift)); }));
    t += roots.back() * roots.back();
  }
  const Matrix ti = inverse_sqrt(t);
  Matrix s = Matrix::Zero(d, d);
  for (auto& z : roots) {
    z = ti * z;
    s += z * z.adjoint();
  }
  const Matrix si = inverse_sqrt(s);
  std::vector<Matrix> ys;
  for (const auto& z : roots) {
    const Matrix w = si * z;
    ys.push_back(home_ ? hermitian_part(home_->expect(w * w.adjoint())) : hermitian_part(w * w.adjoint()));
  }
  return ys;
}

namespace {

struct Climb {
  RealVector theta;
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> trajectory;
};

// Normalized-gradient ascent with central differences. Steps double on
// acceptance and halve on rejection; only strict improvements are accepted,
// so the trajectory is monotone.
Climb climb(const std::function<double(const RealVector&)>& objective, RealVector theta,
            const AscentConfig& cfg) {
  // Far from the start the normalizer can become ill-conditioned and a part
  // can fail the positivity floor; such points count as rejected.
  const auto f = [&](const RealVector& x) {
    try {
      return objective(x);
    } catch (const std::invalid_argument&) {
      return -std::numeric_limits<double>::infinity();
    } catch (const std::runtime_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  constexpr double max_step = 50.0;
  constexpr double min_step = 1e-10;
  Climb out;
  out.value = f(theta);
  if (!std::isfinite(out.value)) throw std::runtime_error("objective is not finite at the start point");
  out.trajectory.push_back(out.value);
  double step = cfg.step;
  int stall = 0;
  RealVector grad(theta.size());
  for (int it = 0; it < cfg.max_iters; ++it) {
    for (Index j = 0; j < theta.size(); ++j) {
      const double keep = theta(j);
      theta(j) = keep + cfg.fd_step;
      const double up = f(theta);
      theta(j) = keep - cfg.fd_step;
      const double down = f(theta);
      theta(j) = keep;
      grad(j) = (up - down) / (2.0 * cfg.fd_step);
    }
    if (!grad.allFinite()) break;
    const double norm = grad.norm();
    if (norm < 1e-14) break;
    const RealVector dir = grad / norm;
    bool accepted = false;
    double gain = 0.0;
    while (step >= min_step) {
      const RealVector trial = theta + step * dir;
      const double v = f(trial);
      if (std::isfinite(v) && v > out.value) {
        gain = v - out.value;
        theta = trial;
        out.value = v;
        out.trajectory.push_back(v);
        step = std::min(2.0 * step, max_step);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    stall = gain < cfg.tol_improve ? stall + 1 : 0;
    if (stall >= cfg.patience) break;
  }
  out.theta = std::move(theta);
  return out;
}

RealVector random_start(Index size, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector theta(size);
  for (Index j = 0; j < size; ++j) theta(j) = normal(rng);
  return theta;
}

}  // namespace

PartitionAscentResult ascend_partition(const PartitionObjective& obj, const AscentConfig& cfg,
                                       std::optional<PartitionStyle> domain) {
  cfg.validate();
  if (obj.a.ambient() != obj.b.ambient()) {
    throw std::invalid_argument("objective subalgebras live in different ambients");
  }
  const PartitionStyle style = domain.value_or(
      obj.kind == PartitionKind::Conditional ? PartitionStyle::InA : PartitionStyle::General);
  if (style == PartitionStyle::ScaledProjectionsInA) {
    throw std::invalid_argument("ascent does not search over scaled projections");
  }
  const Index d = obj.a.ambient().dim();
  const auto basis = style == PartitionStyle::InA ? obj.a.hermitian_basis()
                                                  : Subalgebra::full(obj.a.ambient()).hermitian_basis();
  const int m = cfg.parts > 0 ? cfg.parts : static_cast<int>(std::max<Index>(obj.a.dim(), 2));
  const ExpPartitionMap map(basis, m,
                            style == PartitionStyle::InA ? std::optional<Subalgebra>(obj.a) : std::nullopt);
  const auto f = [&](const RealVector& theta) { return partition_sum(obj, map(theta)); };

  struct Attempt {
    Climb climb;
    bool valid = false;
  };
  const auto attempts = parallel_map(static_cast<std::size_t>(cfg.restarts), [&](std::size_t r) {
    Attempt a;
    a.climb = climb(f, random_start(map.coordinates(), derive_seed(cfg.seed, r)), cfg);
    a.valid = partition_violation(Partition{map(a.climb.theta), style}, &obj.a).empty();
    return a;
  });

  PartitionAscentResult out;
  out.witness = trivial_partition(d);
  out.value = partition_value(obj, out.witness);
  bool found = false;
  for (std::size_t r = 0; r < attempts.size(); ++r) {
    const auto& a = attempts[r];
    out.restart_values.push_back(a.valid ? a.climb.value : std::numeric_limits<double>::quiet_NaN());
    if (a.valid && (!found || a.climb.value > out.value)) {
      found = true;
      out.best_restart = r;
      out.value = a.climb.value;
      out.trajectory = a.climb.trajectory;
    }
  }
  if (found) {
    const auto& best = attempts[out.best_restart].climb;
    out.witness = make_partition(map(best.theta), style, &obj.a);
    out.value = partition_value(obj, out.witness);
  }
  return out;
}

Partition spectral_refine(const Partition& p, const Subalgebra& home, std::span<const Matrix> observables,
                          double cluster_tol) {
  const auto why = partition_violation(
      Partition{p.parts, PartitionStyle::ScaledProjectionsInA}, &home);
  if (!why.empty()) throw std::invalid_argument("spectral refinement needs scaled projections in A: " + why);
  for (const auto& o : observables) {
    home.ambient().check_member(o);
    if (hermitian_defect(o) >= tol::alg) throw std::invalid_argument("observable is not self-adjoint");
  }

  std::vector<Matrix> out;
  for (const auto& x : p.parts) {
    const double scale = hermitian_eigenvalues(x).maxCoeff();
    const HermitianElement whole = HermitianElement::make(x / scale);
    // Snap the seed to an exact projection.
    std::vector<Matrix> pieces{spectral_projections(whole, 0.5).back().projection};
    for (const auto& o : observables) {
      std::vector<Matrix> next;
      for (const auto& q : pieces) {
        const auto comps = spectral_projections(HermitianElement::make(hermitian_part(q * o * q)),
                                                cluster_tol, &q);
        for (const auto& c : comps) next.push_back(c.projection);
      }
      pieces = std::move(next);
      if (static_cast<Index>(pieces.size()) > home.dim()) {
        throw std::runtime_error("spectral refinement produced more pieces than dim(A)");
      }
    }
    for (auto& q : pieces) out.push_back(scale * q);
  }
  bool in_a = true;
  for (const auto& x : out) in_a = in_a && operator_norm(x - home.expect(x)) < tol::alg;
  return make_partition(std::move(out),
                        in_a ? PartitionStyle::ScaledProjectionsInA : PartitionStyle::General, &home);
}

Bracket bracket_partition(const PartitionObjective& obj,
                          std::span<const std::pair<std::string, Partition>> seeds,
                          std::optional<double> upper, std::string upper_source, const AscentConfig& cfg,
                          bool run_ascent) {
  Bracket b;
  b.upper = upper;
  b.upper_source = std::move(upper_source);
  b.witness = trivial_partition(obj.a.ambient().dim());
  b.lower = partition_value(obj, b.witness);
  b.lower_source = "trivial";
  for (const auto& [name, p] : seeds) {
    const double v = partition_value(obj, p);
    if (v > b.lower) {
      b.lower = v;
      b.witness = p;
      b.lower_source = name;
    }
  }
  if (run_ascent) {
    auto r = ascend_partition(obj, cfg);
    if (r.value > b.lower) {
      b.lower = r.value;
      b.witness = std::move(r.witness);
      b.lower_source = "ascent";
    }
  }
  if (!b.consistent()) {
    throw std::logic_error("lower bound " + std::to_string(b.lower) + " exceeds upper bound " +
                           std::to_string(*b.upper));
  }
  return b;
}

Partition fiber_matrix_unit_partition(const CrossedProduct& m) {
  std::vector<Matrix> parts;
  for (Index j = 0; j < m.fiber_dim(); ++j) parts.push_back(m.embed(matrix_unit(m.fiber_dim(), j, j)));
  return make_partition(std::move(parts), PartitionStyle::ScaledProjectionsInA, &m.fiber_subalgebra());
}

Bracket bracket_h(const CrossedProduct& m, const Matrix& u, const AscentConfig& cfg) {
  cfg.validate();
  const double upper = inner_automorphism_entropy(m, u);
  const Subalgebra& n_alg = m.fiber_subalgebra();
  const PartitionObjective obj{PartitionKind::Conditional, n_alg, conjugate_subalgebra(n_alg, u)};
  const Index d = m.ambient().dim();
  if (upper <= 1e-12) {
    // Zero upper bound: the trivial partition is optimal.
    Bracket b;
    b.witness = trivial_partition(d);
    b.lower = partition_value(obj, b.witness);
    b.lower_source = "trivial";
    b.upper = upper;
    b.upper_source = "H_N(Ad u)";
    if (!b.consistent()) throw std::logic_error("lower bound exceeds a zero upper bound");
    return b;
  }

  std::vector<Matrix> observables;
  for (const auto& ug : fourier_coefficients(m, u).coefficients) {
    observables.push_back(m.embed(hermitian_part(ug * ug.adjoint())));
  }
  std::vector<std::pair<std::string, Partition>> seeds;
  const Partition units = fiber_matrix_unit_partition(m);
  seeds.emplace_back("matrix-units", units);
  seeds.emplace_back("refined-trivial", spectral_refine(trivial_partition(d), n_alg, observables));
  seeds.emplace_back("refined-matrix-units", spectral_refine(units, n_alg, observables));

  // Skip the ascent when a closed-form witness already meets the upper bound.
  bool closed = false;
  for (const auto& [name, p] : seeds) closed = closed || upper - partition_value(obj, p) <= 1e-10;
  return bracket_partition(obj, seeds, upper, "H_N(Ad u)", cfg, !closed);
}

DecompositionAscentResult ascend_decomposition(const DecompositionObjective& obj, const AscentConfig& cfg) {
  cfg.validate();
  const Matrix& rho = obj.state.matrix;
  obj.a.ambient().check_member(rho);
  const auto eig = hermitian_eigen(rho);
  if (eig.values.minCoeff() < -tol::psd) throw std::invalid_argument("state density is not positive");
  const Matrix root = spectral_apply(eig, [](double l) { return std::sqrt(std::max(l, 0.0)); });

  DecompositionAscentResult out;
  out.restricted_to_support = eig.values.minCoeff() <= tol::psd;
  const auto basis = Subalgebra::full(obj.a.ambient()).hermitian_basis();
  const int m = cfg.parts > 0 ? cfg.parts : static_cast<int>(std::max<Index>(obj.a.dim(), 2));
  const ExpPartitionMap map(basis, m);
  const auto densities = [&](const RealVector& theta) {
    std::vector<Density> ds;
    for (const auto& y : map(theta)) {
      Matrix r = hermitian_part(root * y * root);
      const double mass = r.trace().real();
      ds.push_back(Density{std::move(r), mass});
    }
    return ds;
  };
  const auto f = [&](const RealVector& theta) {
    const auto v = decomposition_value(obj, densities(theta));
    return v.bounded() ? v.value : -std::numeric_limits<double>::infinity();
  };

  const auto climbs = parallel_map(static_cast<std::size_t>(cfg.restarts), [&](std::size_t r) {
    return climb(f, random_start(map.coordinates(), derive_seed(cfg.seed, r)), cfg);
  });
  for (std::size_t r = 0; r < climbs.size(); ++r) {
    out.restart_values.push_back(climbs[r].value);
    if (climbs[r].value > climbs[out.best_restart].value) out.best_restart = r;
  }
  out.witness = densities(climbs[out.best_restart].theta);
  for (auto& w : out.witness) w = make_density(w.matrix);
  const auto v = decomposition_value(obj, out.witness);
  out.value = v.bounded() ? v.value : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace vnelab
