#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "vnelab/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

using namespace vnelab;

namespace {

CaseRecord record(std::string key, double lower, double upper, bool pass) {
  CaseRecord c;
  c.key = std::move(key);
  c.quantity = "h";
  c.lower = lower;
  c.upper = upper;
  c.tolerance = 1e-9;
  c.pass = pass;
  return c;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = text.find("\r\n", pos)) != std::string::npos; pos += 2) ++n;
  return n;
}

}  // namespace

TEST_CASE("lambda grid parsing") {
  const auto g = LambdaGrid::parse("0:1:11");
  CHECK(g.points == 11);
  const auto v = g.values();
  REQUIRE(v.size() == 11);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.0);
  CHECK(v[3] == doctest::Approx(0.3));
  CHECK(LambdaGrid::parse("0.5:0.5:1").values() == std::vector<double>{0.5});
  for (const char* bad : {"0:1", "0;1;3", "0:2:3", "0.6:0.4:3", "0:1:0", "0:1:3x", "0.2:0.4:1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS((void)LambdaGrid::parse(bad), UsageError);
  }
}

TEST_CASE("binary entropy preimage") {
  for (double l : {0.0, 0.01, 0.2, 0.37, 0.5}) {
    CHECK(binary_entropy_preimage(oracle::binary_entropy(l)) == doctest::Approx(l).epsilon(1e-7));
  }
  CHECK_THROWS_AS((void)binary_entropy_preimage(1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)binary_entropy_preimage(-0.1), std::invalid_argument);
}

TEST_CASE("random subalgebra pairs") {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto nested = random_pair(PairKind::Nested, rng);
    CHECK(nested.a.contains(nested.b));
    CHECK(nested.a.dim() < 16);
    CHECK(nested.a.dim() > 1);
    const auto cs = random_pair(PairKind::CommutingSquare, rng);
    CHECK(commuting_square_defect(cs.a, cs.b) < 1e-8);
    CHECK_FALSE(cs.a.same_span(cs.b));
  }
}

TEST_CASE("scenario registry") {
  CHECK(scenarios().size() == 9);
  CHECK_THROWS_AS((void)run_scenario("thm-9-9-9", {}), UsageError);
  ScenarioParams p;
  p.n = 1;
  CHECK_THROWS_AS((void)run_scenario("thm-3-2-2", p), UsageError);
  p = {};
  p.dim = 2;
  CHECK_THROWS_AS((void)run_scenario("thm-3-2-3", p), UsageError);
}

TEST_CASE("flat unitary scenario") {
  ScenarioParams p;
  p.n = 3;
  const auto report = run_scenario("thm-3-2-2", p);
  CHECK(report.verdict());
  for (const auto& c : report.cases) {
    CAPTURE(c.key);
    CHECK(c.pass);
    if (c.key == "h/n=3") {
      REQUIRE(c.lower);
      CHECK(*c.lower == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    }
  }

  SUBCASE("JSON is deterministic without metadata") {
    const auto again = run_scenario("thm-3-2-2", p);
    CHECK(report_to_json(report, false).dump() == report_to_json(again, false).dump());
    const auto j = report_to_json(report);
    CHECK(j.contains("metadata"));
    CHECK(j["verdict"] == "pass");
    CHECK(j["units"] == "nats");
    CHECK(j["schema_version"] == 1);
  }

  SUBCASE("golden file") {
    const std::string path = std::string(VNELAB_TEST_DATA_DIR) + "/golden/thm-3-2-2_n3.json";
    const auto produced = report_to_json(report, false);
    if (std::getenv("VNELAB_UPDATE_GOLDEN")) {
      std::ofstream(path) << produced.dump(2) << "\n";
    }
    std::ifstream in(path);
    REQUIRE(in.good());
    const auto golden = nlohmann::json::parse(in);
    REQUIRE(golden["cases"].size() == produced["cases"].size());
    CHECK(golden["scenario"] == produced["scenario"]);
    CHECK(golden["inputs"] == produced["inputs"]);
    CHECK(golden["verdict"] == produced["verdict"]);
    for (std::size_t i = 0; i < golden["cases"].size(); ++i) {
      const auto& g = golden["cases"][i];
      const auto& q = produced["cases"][i];
      CAPTURE(g["key"]);
      CHECK(g["key"] == q["key"]);
      CHECK(g["pass"] == q["pass"]);
      for (const char* field : {"paper_value", "lower", "upper"}) {
        if (g[field].is_null()) {
          CHECK(q[field].is_null());
        } else {
          CHECK(q[field].get<double>() == doctest::Approx(g[field].get<double>()).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("dump carries witness matrices") {
    const auto d = dump_to_json(report);
    CHECK(d["scenario"] == "thm-3-2-2");
    const auto& first = d["cases"][0];
    CHECK(first["key"] == "h/n=3");
    CHECK(descriptor_from_json(first["model"]) == ModelDescriptor{3, 3, "clock", 0});
    Matrix total = Matrix::Zero(9, 9);
    for (const auto& part : first["witness_parts"]) total += matrix_from_json(part);
    CHECK(operator_norm(total - Matrix::Identity(9, 9)) < 1e-12);
    CHECK(d["cases"][1]["model"].is_null());
  }

  SUBCASE("bits scale entropy fields") {
    ScenarioParams pb = p;
    pb.bits = true;
    const auto jb = report_to_json(run_scenario("thm-3-2-2", pb), false);
    const auto jn = report_to_json(report, false);
    CHECK(jb["units"] == "bits");
    CHECK(jb["cases"][0]["lower"].get<double>() ==
          doctest::Approx(jn["cases"][0]["lower"].get<double>() / std::numbers::ln2).epsilon(1e-12));
  }
}

TEST_CASE("CSV export") {
  EntropyReport r;
  r.scenario = "demo";
  SUBCASE("one line per case plus a header") {
    r.cases = {record("a", 0.1, 0.2, true), record("b", 0.3, 0.3, true), record("c,d", 0.0, 1.0, false)};
    const auto text = csv_text(r);
    CHECK(count_lines(text) == 4);
    CHECK(text.rfind("\"scenario\",\"case\",\"paper_value\",\"lower\",\"upper\",\"gap\",\"pass\"\r\n", 0) == 0);
    CHECK(text.find("\"c,d\"") != std::string::npos);
    CHECK_FALSE(r.verdict());
  }
  SUBCASE("empty report is header only") {
    CHECK(count_lines(csv_text(r)) == 1);
  }
  SUBCASE("lambda run has one bracket row per grid point") {
    const auto text = csv_text(run_scenario("thm-3-2-3", {}));
    std::size_t rows = 0;
    for (std::size_t pos = 0; (pos = text.find("\"thm-3-2-3\",\"h/lambda=", pos)) != std::string::npos; ++pos) {
      ++rows;
      // fields: scenario, case, paper_value, lower, upper, gap, pass
      std::size_t field = pos;
      for (int i = 0; i < 5; ++i) field = text.find("\",\"", field) + 3;
      const double gap = std::stod(text.substr(field, text.find('"', field) - field));
      CHECK(gap <= 1e-3);
    }
    CHECK(rows == 11);
  }
}

TEST_CASE("JSON sanitizes non-finite values") {
  EntropyReport r;
  r.scenario = "demo";
  auto c = record("inf", 0.0, std::numeric_limits<double>::infinity(), true);
  r.cases.push_back(c);
  const auto j = report_to_json(r, false);
  CHECK(j["cases"][0]["upper"].is_null());
  CHECK(j["cases"][0]["gap"].is_null());
  CHECK(j["verdict"] == "pass");
}

TEST_CASE("small scenario runs pass") {
  ScenarioParams p;
  SUBCASE("lambda family") {
    p.lambda_grid = LambdaGrid::parse("0:1:5");
    p.value_grid = 21;
    CHECK(run_scenario("thm-3-2-3", p).verdict());
  }
  SUBCASE("coarse value grid fails only the gap case") {
    p.lambda_grid = LambdaGrid::parse("0:1:3");
    p.value_grid = 5;
    const auto r = run_scenario("thm-3-2-3", p);
    CHECK_FALSE(r.verdict());
    for (const auto& c : r.cases) CHECK(c.pass == (c.key != "interval/max-adjacent-gap"));
  }
  SUBCASE("weights") { CHECK(run_scenario("cor-3-1-5", p).verdict()); }
  SUBCASE("group algebra") { CHECK(run_scenario("ex-3-1-6", p).verdict()); }
  SUBCASE("commuting squares") {
    p.samples = 3;
    CHECK(run_scenario("commuting-restriction", p).verdict());
  }
  SUBCASE("unistochastic") {
    p.samples = 4;
    CHECK(run_scenario("unistochastic-link", p).verdict());
  }
  SUBCASE("bound") {
    p.samples = 4;
    p.iters = 10;
    const auto r = run_scenario("thm-3-1-4", p);
    CHECK(r.verdict());
    // the sampled unitary is rebuilt from its descriptor alone
    const auto& c = r.cases[1];
    REQUIRE(c.model);
    const Matrix u = sample_unitary(*c.model);
    const CrossedProduct m(build_action(*c.model));
    REQUIRE(c.upper);
    CHECK(inner_automorphism_entropy(m, u) == *c.upper);
  }
}
