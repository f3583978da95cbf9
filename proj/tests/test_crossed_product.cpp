#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "property_suite.hpp"
#include "vnelab/crossed_product.hpp"
#include "vnelab/serialize.hpp"

#include <numbers>

using namespace vnelab;

TEST_CASE("cyclic actions") {
  SUBCASE("implementer must be unitary with a scalar n-th power") {
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS((void)CyclicAction::make(2, bad), std::invalid_argument);
    Matrix rot(2, 2);
    const double t = 0.3;
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    CHECK_THROWS_AS((void)CyclicAction::make(3, rot), std::invalid_argument);
  }

  SUBCASE("alpha_n is the identity map") {
    const auto model = clock_shift_model(3);
    Rng rng(2);
    const Matrix x = random_gaussian(3, 3, rng);
    CHECK(operator_norm(model.action.apply(x, 3) - x) < 1e-12);
    CHECK(operator_norm(model.action.apply(model.action.apply(x, 1), 2) - x) < 1e-12);
  }
}

TEST_CASE("crossed product layout") {
  Rng rng(4);
  for (int n : {2, 3, 4}) {
    const CrossedProduct m(props::random_action(n, 2, rng));
    CAPTURE(n);
    CHECK(m.ambient().dim() == 2 * n);
    const Matrix a = random_gaussian(2, 2, rng);
    for (int g = 0; g < n; ++g) {
      // covariance and the group law
      CHECK(operator_norm(m.v(g) * m.embed(a) * m.v(g).adjoint() - m.embed(m.action().apply(a, g))) < 1e-12);
      for (int h = 0; h < n; ++h) CHECK(operator_norm(m.v(g) * m.v(h) - m.v(g + h)) < 1e-12);
      CHECK(unitary_defect(m.v(g)) < 1e-12);
    }
    CHECK(m.fiber_subalgebra().dim() == 4);
    CHECK(m.algebra().dim() == 4 * n);
  }
}

TEST_CASE("Fourier expansion") {
  const auto model = clock_shift_model(3);
  const CrossedProduct m(model.action);

  SUBCASE("v_g has a single coefficient") {
    const auto f = fourier_coefficients(m, m.v(1));
    CHECK(operator_norm(f.coefficients[1] - Matrix::Identity(3, 3)) < 1e-12);
    CHECK(operator_norm(f.coefficients[0]) < 1e-12);
    CHECK(operator_norm(f.coefficients[2]) < 1e-12);
  }

  SUBCASE("randomized round trip") {
    const auto r = props::fourier_roundtrip(150, 21);
    INFO(r.first_failure);
    CHECK(r.passed());
  }

  SUBCASE("wrong coefficient count") {
    FourierVector f;
    f.coefficients.push_back(Matrix::Identity(3, 3));
    CHECK_THROWS_AS((void)reconstruct(m, f), std::invalid_argument);
  }
}

TEST_CASE("unitary criterion") {
  const auto model = clock_shift_model(2);
  const CrossedProduct m(model.action);
  CHECK(verify_unitary_criterion(m, m.v(1)) < 1e-12);
  CHECK(verify_unitary_criterion(m, build_u_lambda(m, model, 0.3)) < 1e-12);
  CHECK(verify_unitary_criterion(m, 0.5 * m.v(1)) > 0.1);
  // a non-unitary with unit total weight still fails
  const Matrix x = std::sqrt(0.5) * (m.v(0) + m.v(1));
  CHECK(verify_unitary_criterion(m, x) > 0.1);
}

TEST_CASE("clock and shift model") {
  CHECK_THROWS_AS((void)clock_shift_model(1), std::invalid_argument);
  for (int n : {2, 3, 5}) {
    const auto model = clock_shift_model(n);
    CAPTURE(n);
    CHECK(std::abs(model.root - std::polar(1.0, 2.0 * std::numbers::pi / n)) < 1e-15);
    CHECK(operator_norm(model.action.apply(model.shift, 1) - model.root * model.shift) < 1e-12);
    const CrossedProduct m(model.action);
    const Matrix u = build_u_flat(m, model);
    CHECK(unitary_defect(u) < 1e-12);
    CHECK(verify_unitary_criterion(m, u) < 1e-12);
    for (double w : fourier_weights(m, u)) CHECK(w == doctest::Approx(1.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("u(lambda)") {
  const auto model = clock_shift_model(2);
  const CrossedProduct m(model.action);
  for (double l : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const Matrix u = build_u_lambda(m, model, l);
    CHECK(unitary_defect(u) < 1e-12);
    const auto w = fourier_weights(m, u);
    CHECK(w[0] == doctest::Approx(l));
    CHECK(w[1] == doctest::Approx(1.0 - l));
  }
  CHECK_THROWS_AS((void)build_u_lambda(m, model, 1.5), std::invalid_argument);
  const auto model3 = clock_shift_model(3);
  const CrossedProduct m3(model3.action);
  CHECK_THROWS_AS((void)build_u_lambda(m3, model3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)build_u_flat(m3, model), std::invalid_argument);
}

TEST_CASE("character projections") {
  for (int n : {2, 3, 4}) {
    const auto model = clock_shift_model(n);
    const CrossedProduct m(model.action);
    const auto ps = character_projections(m);
    REQUIRE(ps.size() == static_cast<std::size_t>(n));
    Matrix total = Matrix::Zero(m.ambient().dim(), m.ambient().dim());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      total += ps[i];
      CHECK(m.ambient().trace(ps[i]).real() == doctest::Approx(1.0 / n));
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const Matrix expected = i == j ? ps[i] : Matrix::Zero(ps[i].rows(), ps[i].cols());
        CHECK(operator_norm(ps[i] * ps[j] - expected) < 1e-12);
      }
    }
    CHECK(operator_norm(total - Matrix::Identity(total.rows(), total.cols())) < 1e-12);
  }
  const auto model = clock_shift_model(2);
  const CrossedProduct m(model.action);
  const auto ps = character_projections(m);
  const Matrix one = Matrix::Identity(4, 4);
  CHECK(operator_norm(ps[0] - 0.5 * (one + m.v(1))) < 1e-12);
  CHECK(operator_norm(ps[1] - 0.5 * (one - m.v(1))) < 1e-12);
}

TEST_CASE("diagonal Fourier coefficients of a matrix") {
  Rng rng(9);
  const Matrix u = random_unitary(3, rng);
  const auto d = diagonal_fourier_coefficients(u);
  Matrix s = Matrix::Zero(3, 3);
  for (Index i = 0; i < 3; ++i) s((i + 1) % 3, i) = 1.0;
  Matrix rebuilt = Matrix::Zero(3, 3);
  Matrix sg = Matrix::Identity(3, 3);
  for (const auto& dg : d) {
    rebuilt += dg.asDiagonal() * sg;
    sg = s * sg;
  }
  CHECK(operator_norm(rebuilt - u) < 1e-12);
}

TEST_CASE("matrix JSON") {
  Rng rng(10);
  const Matrix x = random_gaussian(2, 3, rng);
  const auto j = matrix_to_json(x);
  REQUIRE(j.size() == 2);
  CHECK(j[0].size() == 3);
  CHECK(j[1][2][0].get<double>() == x(1, 2).real());
  CHECK(j[1][2][1].get<double>() == x(1, 2).imag());
  CHECK(matrix_from_json(nlohmann::json::parse(j.dump())) == x);

  for (const char* bad : {"[]", "[[]]", "[[[1, 0]], [[1, 0], [2, 0]]]", "[[[1]]]", "[[1, 2]]", "{\"a\": 1}"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS((void)matrix_from_json(nlohmann::json::parse(bad)), std::invalid_argument);
  }
}

TEST_CASE("model descriptors") {
  const ModelDescriptor d{3, 3, "clock", 77};
  const auto j = descriptor_to_json(d);
  CHECK(j["action"] == "clock");
  CHECK(descriptor_from_json(nlohmann::json::parse(j.dump())) == d);
  CHECK(sample_unitary(d) == sample_unitary(descriptor_from_json(j)));
  CHECK(unitary_defect(sample_unitary(d)) < 1e-12);

  // the clock action agrees with the clock/shift model bit for bit
  CHECK(clock_action(3, 3).implementer() == clock_shift_model(3).action.implementer());
  CHECK(build_action({2, 4, "clock", 0}).fiber_dim() == 4);

  CHECK_THROWS_AS((void)build_action({2, 2, "shift", 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)descriptor_from_json(nlohmann::json::parse(R"({"n": 2})")), std::invalid_argument);
  CHECK_THROWS_AS((void)clock_action(2, 0), std::invalid_argument);
}
