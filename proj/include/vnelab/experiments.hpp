#pragma once

// Named scenarios with machine-readable reports.

#include "vnelab/optimizer.hpp"
#include "vnelab/serialize.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vnelab {

// Bad scenario id or parameters; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// `points` evenly spaced values from start to stop inclusive.
struct LambdaGrid {
  double start = 0.0;
  double stop = 1.0;
  int points = 11;

  // Parses "a:b:points".
  static LambdaGrid parse(const std::string& text);
  std::vector<double> values() const;
};

struct ScenarioParams {
  std::optional<int> n;
  std::optional<int> dim;  // fiber dimension k
  std::optional<LambdaGrid> lambda_grid;
  std::optional<int> value_grid;
  std::optional<int> restarts;
  std::optional<int> iters;
  std::optional<int> samples;
  std::uint64_t seed = 0;
  // Overrides the lower-bound slack of optimizer checks (default 1e-3).
  std::optional<double> tol;
  bool bits = false;
};

struct CaseRecord {
  std::string key;
  std::string quantity;
  std::optional<double> paper_value;
  std::optional<double> lower;
  std::optional<double> upper;
  double tolerance = 0.0;
  nlohmann::json witness = nlohmann::json::object();
  bool pass = false;
  std::string note;
  // Entropy values are converted by --bits; defects and norms are not.
  bool entropy = true;
  double runtime = 0.0;
  // --dump payload
  std::optional<ModelDescriptor> model;
  std::vector<Matrix> witness_parts;

  std::optional<double> gap() const {
    if (!lower || !upper) return std::nullopt;
    return *upper - *lower;
  }
};

struct EntropyReport {
  static constexpr int schema_version = 1;
  std::string scenario;
  nlohmann::json inputs = nlohmann::json::object();
  bool bits = false;
  std::vector<CaseRecord> cases;
  std::string timestamp;

  bool verdict() const;
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
};

const std::vector<ScenarioInfo>& scenarios();

// Throws UsageError for an unknown id or invalid parameters.
[[nodiscard]] EntropyReport run_scenario(const std::string& id, const ScenarioParams& params);

// Metadata (timestamp, runtimes) is the only part outside the determinism contract.
[[nodiscard]] nlohmann::json report_to_json(const EntropyReport& report, bool with_metadata = true);
[[nodiscard]] std::string report_summary(const EntropyReport& report);
[[nodiscard]] std::string csv_text(const EntropyReport& report);
void export_csv(const EntropyReport& report, const std::filesystem::path& path);
// Witness matrices and model descriptors per case.
[[nodiscard]] nlohmann::json dump_to_json(const EntropyReport& report);

// Seeded subalgebra pairs in M_2 (x) M_2, conjugated by a Haar unitary.
struct SubalgebraPair {
  Subalgebra a;
  Subalgebra b;
  std::string label;
};

enum class PairKind { Nested, CommutingSquare };

[[nodiscard]] SubalgebraPair random_pair(PairKind kind, Rng& rng);

// Solves eta(l) + eta(1 - l) = target for l in [0, 1/2] by bisection.
[[nodiscard]] double binary_entropy_preimage(double target);

}  // namespace vnelab
