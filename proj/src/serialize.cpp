#include "vnelab/serialize.hpp"

#include <numbers>
#include <stdexcept>

namespace vnelab {

using nlohmann::json;

json matrix_to_json(const Matrix& x) {
  json rows = json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < x.cols(); ++j) row.push_back({x(i, j).real(), x(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty()) {
    throw std::invalid_argument("matrix JSON must be a nonempty array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.front().size());
  Matrix x(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix JSON rows have different lengths");
    }
    for (Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw std::invalid_argument("matrix JSON entries must be [re, im] pairs");
      }
      x(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return x;
}

json descriptor_to_json(const ModelDescriptor& d) {
  return json{{"n", d.n}, {"k", d.k}, {"action", d.action}, {"seed", d.seed}};
}

ModelDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("model descriptor must be an object");
  ModelDescriptor d;
  try {
    d.n = j.at("n").get<int>();
    d.k = j.at("k").get<Index>();
    d.action = j.at("action").get<std::string>();
    d.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad model descriptor: ") + e.what());
  }
  return d;
}

CyclicAction clock_action(int n, Index k) {
  if (n < 1 || k < 1) throw std::invalid_argument("clock action needs n >= 1 and k >= 1");
  Matrix a = Matrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) a(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i % n) / n);
  return CyclicAction::make(n, a);
}

CyclicAction build_action(const ModelDescriptor& d) {
  if (d.action != "clock") throw std::invalid_argument("unknown action '" + d.action + "'");
  return clock_action(d.n, d.k);
}

Matrix sample_unitary(const ModelDescriptor& d) {
  const CrossedProduct m(build_action(d));
  Rng rng(d.seed);
  return random_unitary_in(m, rng);
}

}  // namespace vnelab
