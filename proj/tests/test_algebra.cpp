#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "property_suite.hpp"
#include "vnelab/algebra.hpp"

using namespace vnelab;

namespace {

std::vector<Matrix> all_units(Index d) {
  std::vector<Matrix> out;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) out.push_back(matrix_unit(d, i, j));
  }
  return out;
}

}  // namespace

TEST_CASE("normalized trace") {
  const TracedMatrixAlgebra m(3);
  CHECK(m.trace(m.identity()).real() == doctest::Approx(1.0));
  CHECK(m.trace(matrix_unit(3, 1, 1)).real() == doctest::Approx(1.0 / 3.0));
  Rng rng(1);
  const Matrix x = random_gaussian(3, 3, rng);
  const Matrix y = random_gaussian(3, 3, rng);
  CHECK(std::abs(m.trace(x * y) - m.trace(y * x)) < 1e-12);
  CHECK_THROWS_AS(m.check_member(Matrix::Zero(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(TracedMatrixAlgebra(0), std::invalid_argument);
}

TEST_CASE("subalgebra construction") {
  const TracedMatrixAlgebra m(3);

  SUBCASE("full and scalar algebras") {
    CHECK(Subalgebra::full(m).dim() == 9);
    CHECK(Subalgebra::scalars(m).dim() == 1);
    CHECK(Subalgebra::diagonal(m).dim() == 3);
    CHECK(Subalgebra::full(m).orthonormality_defect() < 1e-12);
    CHECK(Subalgebra::full(m).hermitian_basis().size() == 9);
  }

  SUBCASE("identity is added to the span") {
    const std::vector<Matrix> span = {matrix_unit(3, 0, 0)};
    const auto a = Subalgebra::from_spanning_set(m, span);
    CHECK(a.dim() == 2);
    CHECK(a.contains(m.identity()));
  }

  SUBCASE("non-closed spans are rejected") {
    const std::vector<Matrix> span = {matrix_unit(3, 0, 1)};
    CHECK_THROWS_AS((void)Subalgebra::from_spanning_set(m, span), std::invalid_argument);
  }

  SUBCASE("hermitian basis stays inside the algebra") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
      const auto ra = props::random_subalgebra(4, rng);
      CHECK(ra.algebra.hermitian_basis().size() == static_cast<std::size_t>(ra.algebra.dim()));
      for (const auto& h : ra.algebra.hermitian_basis()) {
        CHECK(ra.algebra.residual(h) < 1e-12);
        CHECK(hermitian_defect(h) < 1e-12);
      }
    }
  }
}

TEST_CASE("conditional expectation") {
  const TracedMatrixAlgebra m(2);

  SUBCASE("onto the diagonal keeps the diagonal") {
    Matrix x(2, 2);
    x << 1.0, 2.0, 3.0, 4.0;
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 4.0;
    CHECK(operator_norm(conditional_expectation(Subalgebra::diagonal(m), x) - expected) < 1e-12);
  }

  SUBCASE("onto the scalars is the trace") {
    Matrix x(2, 2);
    x << 1.0, 2.0, 3.0, 4.0;
    const Matrix e = Subalgebra::scalars(m).expect(x);
    CHECK(operator_norm(e - 2.5 * m.identity()) < 1e-12);
  }

  SUBCASE("randomized axioms") {
    const auto r = props::conditional_expectation_axioms(200, 11);
    INFO(r.first_failure);
    CHECK(r.passed());
  }
}

TEST_CASE("generated subalgebras") {
  const TracedMatrixAlgebra m(4);

  SUBCASE("a single projection generates span{p, 1-p}") {
    const std::vector<Matrix> gens = {matrix_unit(4, 0, 0) + matrix_unit(4, 1, 1)};
    CHECK(generate_subalgebra(m, gens).dim() == 2);
  }

  SUBCASE("a shift generates the cyclic group algebra") {
    Matrix w = Matrix::Zero(4, 4);
    for (Index i = 0; i < 4; ++i) w((i + 1) % 4, i) = 1.0;
    const std::vector<Matrix> gens = {w};
    CHECK(generate_subalgebra(m, gens).dim() == 4);
  }

  SUBCASE("matrix units generate everything") {
    const std::vector<Matrix> gens = {matrix_unit(4, 0, 1), matrix_unit(4, 1, 2), matrix_unit(4, 2, 3)};
    CHECK(generate_subalgebra(m, gens).dim() == 16);
  }
}

TEST_CASE("intersection and conjugation") {
  const TracedMatrixAlgebra m4(4);
  const Matrix id2 = Matrix::Identity(2, 2);
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  for (const auto& e : all_units(2)) {
    left.push_back(oracle::kron(e, id2));
    right.push_back(oracle::kron(id2, e));
  }
  const auto a = Subalgebra::from_spanning_set(m4, left);
  const auto b = Subalgebra::from_spanning_set(m4, right);

  CHECK(intersect(a, b).dim() == 1);
  CHECK(intersect(a, a).same_span(a));
  CHECK(intersect(a, Subalgebra::full(m4)).same_span(a));

  Rng rng(3);
  const Matrix u = random_unitary(4, rng);
  const auto ua = conjugate_subalgebra(a, u);
  CHECK(ua.dim() == 4);
  CHECK(ua.contains(Matrix(u * left[1] * u.adjoint())));
  CHECK_THROWS_AS((void)conjugate_subalgebra(a, 2.0 * u), std::invalid_argument);
}

TEST_CASE("commuting squares") {
  const TracedMatrixAlgebra m4(4);
  const Matrix id2 = Matrix::Identity(2, 2);
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  for (const auto& e : all_units(2)) {
    left.push_back(oracle::kron(e, id2));
    right.push_back(oracle::kron(id2, e));
  }
  const auto a = Subalgebra::from_spanning_set(m4, left);
  const auto b = Subalgebra::from_spanning_set(m4, right);
  CHECK(commuting_square_defect(a, b) < 1e-12);
  CHECK(commuting_square_defect(a, Subalgebra::scalars(m4)) < 1e-12);

  // Two diagonal algebras in general position do not commute.
  const TracedMatrixAlgebra m2(2);
  Rng rng(8);
  const auto d = Subalgebra::diagonal(m2);
  const auto rotated = conjugate_subalgebra(d, random_unitary(2, rng));
  CHECK(commuting_square_defect(d, rotated) > 1e-3);

  // The defect agrees with the oracle expectations.
  std::vector<Matrix> dspan = {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)};
  std::vector<Matrix> rspan = {rotated.basis()[0], rotated.basis()[1]};
  double worst = 0.0;
  for (const auto& e : all_units(2)) {
    const Matrix lhs = oracle::expect(dspan, oracle::expect(rspan, e));
    const Matrix rhs = oracle::expect(rspan, oracle::expect(dspan, e));
    worst = std::max(worst, operator_norm(lhs - rhs));
  }
  CHECK(commuting_square_defect(d, rotated) == doctest::Approx(worst).epsilon(1e-9));
}

TEST_CASE("partitions") {
  const TracedMatrixAlgebra m(2);
  const auto d = Subalgebra::diagonal(m);

  CHECK(partition_violation(trivial_partition(2), &d).empty());
  CHECK_NOTHROW((void)make_partition({matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)},
                                     PartitionStyle::ScaledProjectionsInA, &d));
  CHECK_THROWS_AS((void)make_partition({matrix_unit(2, 0, 0)}, PartitionStyle::General),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_partition({2.0 * m.identity(), -1.0 * m.identity()}, PartitionStyle::General),
                  std::invalid_argument);
  // 0.5 (1 + sigma_x) is a projection outside the diagonal
  Matrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  CHECK(partition_violation({{p, m.identity() - p}, PartitionStyle::General}, nullptr).empty());
  CHECK_FALSE(partition_violation({{p, m.identity() - p}, PartitionStyle::InA}, &d).empty());
  // half the identity is a scaled projection
  CHECK(partition_violation({{0.5 * m.identity(), 0.5 * m.identity()}, PartitionStyle::ScaledProjectionsInA}, &d)
            .empty());
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 0.3;
  q(1, 1) = 0.6;
  CHECK_FALSE(partition_violation({{q, m.identity() - q}, PartitionStyle::ScaledProjectionsInA}, &d).empty());
}

TEST_CASE("spectral projections") {
  const TracedMatrixAlgebra m(3);
  Matrix x = Matrix::Zero(3, 3);
  x(0, 0) = 1.0;
  x(1, 1) = 1.0 + 1e-12;
  x(2, 2) = 2.0;
  const auto comps = spectral_projections(HermitianElement::make(x));
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].projection.trace().real() == doctest::Approx(2.0));
  Matrix total = Matrix::Zero(3, 3);
  for (const auto& c : comps) total += c.projection;
  CHECK(operator_norm(total - m.identity()) < 1e-12);

  const Matrix support = matrix_unit(3, 1, 1) + matrix_unit(3, 2, 2);
  const auto cut = spectral_projections(HermitianElement::make(support * x * support), 1e-8, &support);
  CHECK(cut.size() == 2);
}

TEST_CASE("densities") {
  CHECK(tracial_density(4).mass == doctest::Approx(1.0));
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS((void)make_density(bad), std::invalid_argument);
}
