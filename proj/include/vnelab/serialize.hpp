#pragma once

// JSON forms for matrices and crossed-product model descriptors.

#include "vnelab/crossed_product.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace vnelab {

// Row-major array of rows, each entry an [re, im] pair.
[[nodiscard]] nlohmann::json matrix_to_json(const Matrix& x);
[[nodiscard]] Matrix matrix_from_json(const nlohmann::json& j);

// Enough to rebuild a model and its sampled unitary bit-identically.
struct ModelDescriptor {
  int n = 2;
  Index k = 2;
  std::string action = "clock";
  std::uint64_t seed = 0;

  bool operator==(const ModelDescriptor&) const = default;
};

[[nodiscard]] nlohmann::json descriptor_to_json(const ModelDescriptor& d);
[[nodiscard]] ModelDescriptor descriptor_from_json(const nlohmann::json& j);

// Z_n acting on M_k by Ad diag(gamma^(i mod n)); the clock action when k = n.
[[nodiscard]] CyclicAction clock_action(int n, Index k);
[[nodiscard]] CyclicAction build_action(const ModelDescriptor& d);
// random_unitary_in(build_action(d), Rng(d.seed))
[[nodiscard]] Matrix sample_unitary(const ModelDescriptor& d);

}  // namespace vnelab
