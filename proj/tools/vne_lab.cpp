// vne-lab: run a named scenario and write its report.

#include "vnelab/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

std::uint64_t env_seed() {
  const char* text = std::getenv("VNE_LAB_SEED");
  if (text == nullptr || *text == '\0') return 0;
  std::size_t used = 0;
  const auto value = std::stoull(text, &used);
  if (used != std::string(text).size()) throw vnelab::UsageError("VNE_LAB_SEED is not an integer");
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy experiments for subalgebra pairs in matrix algebras"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List scenario ids");
  auto* run = app.add_subcommand("run", "Run a scenario");

  std::string id;
  std::optional<int> n, dim, value_grid, restarts, iters, samples;
  std::optional<std::string> lambda_grid;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out_path, csv_path, dump_path;
  bool bits = false;
  bool quiet = false;

  run->add_option("scenario", id, "Scenario id (see `vne-lab list`)")->required();
  run->add_option("--n", n, "Group order n");
  run->add_option("--dim", dim, "Fiber dimension k");
  run->add_option("--lambda-grid", lambda_grid, "Lambda grid a:b:points");
  run->add_option("--value-grid", value_grid, "Number of target values in [0, log 2]");
  run->add_option("--restarts", restarts, "Ascent restarts");
  run->add_option("--iters", iters, "Ascent iterations per restart");
  run->add_option("--samples", samples, "Number of random samples");
  run->add_option("--seed", seed, "Base seed (default: VNE_LAB_SEED or 0)");
  run->add_option("--tol", tol, "Lower-bound slack for optimizer checks");
  run->add_option("--out", out_path, "Write the JSON report here");
  run->add_option("--csv", csv_path, "Write a CSV export here");
  run->add_option("--dump", dump_path, "Write witness matrices and model descriptors here");
  run->add_flag("--bits", bits, "Report entropies in bits");
  run->add_flag("--quiet", quiet, "Suppress the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& s : vnelab::scenarios()) std::cout << s.id << "  " << s.summary << '\n';
    return 0;
  }

  vnelab::EntropyReport report;
  try {
    vnelab::ScenarioParams params;
    params.n = n;
    params.dim = dim;
    params.value_grid = value_grid;
    params.restarts = restarts;
    params.iters = iters;
    params.samples = samples;
    params.tol = tol;
    params.bits = bits;
    params.seed = seed ? *seed : env_seed();
    if (lambda_grid) params.lambda_grid = vnelab::LambdaGrid::parse(*lambda_grid);
    if (tol && !(*tol > 0.0)) throw vnelab::UsageError("--tol must be positive");
    report = vnelab::run_scenario(id, params);
  } catch (const vnelab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (!quiet) std::cout << vnelab::report_summary(report);
  try {
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path);
      out << vnelab::report_to_json(report).dump(2) << '\n';
      if (!out) throw std::runtime_error("failed writing " + out_path);
    }
    if (!csv_path.empty()) vnelab::export_csv(report, csv_path);
    if (!dump_path.empty()) {
      std::ofstream out(dump_path);
      if (!out) throw std::runtime_error("cannot open " + dump_path);
      out << vnelab::dump_to_json(report).dump() << '\n';
      if (!out) throw std::runtime_error("failed writing " + dump_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return report.verdict() ? 0 : 1;
}
