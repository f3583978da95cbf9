#include "vnelab/experiments.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace vnelab;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict bracket_dict(const Bracket& b) {
  py::dict d;
  d["lower"] = b.lower;
  d["lower_source"] = b.lower_source;
  d["upper"] = b.upper ? py::cast(*b.upper) : py::none();
  d["upper_source"] = b.upper_source;
  d["witness"] = b.witness.parts;
  return d;
}

AscentConfig make_config(int restarts, int iters, std::uint64_t seed) {
  AscentConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iters = iters;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(vnelab, m) {
  m.doc() = "Entropy of inclusions of finite-dimensional von Neumann algebras";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.def("eta", &eta, py::arg("t"));
  m.def("tau_eta", &tau_eta, py::arg("x"));
  m.def(
      "relative_entropy", [](const Matrix& rho, const Matrix& sigma) { return umegaki_relative_entropy(rho, sigma); },
      py::arg("rho"), py::arg("sigma"));
  m.def("unistochastic_entropy", &unistochastic_entropy, py::arg("u"));
  m.def("abelian_fourier_entropy_bound", &abelian_fourier_entropy_bound, py::arg("u"));

  m.def(
      "commuting_square_defect",
      [](const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
        if (a.empty() || b.empty()) throw std::invalid_argument("spanning sets must be nonempty");
        const TracedMatrixAlgebra ambient(a.front().rows());
        return commuting_square_defect(Subalgebra::from_spanning_set(ambient, a),
                                       Subalgebra::from_spanning_set(ambient, b));
      },
      py::arg("a_span"), py::arg("b_span"));

  m.def(
      "conditional_expectation",
      [](const std::vector<Matrix>& span, const Matrix& x) {
        const TracedMatrixAlgebra ambient(x.rows());
        return conditional_expectation(Subalgebra::from_spanning_set(ambient, span), x);
      },
      py::arg("span"), py::arg("x"));

  m.def(
      "clock_shift_u",
      [](int n, std::optional<double> lambda) {
        const auto model = clock_shift_model(n);
        const CrossedProduct cp(model.action);
        return lambda ? build_u_lambda(cp, model, *lambda) : build_u_flat(cp, model);
      },
      py::arg("n"), py::arg("lam") = py::none(),
      "u(lambda) for n = 2 when lam is given, else the flat unitary.");

  m.def(
      "fourier_weights",
      [](int n, const Matrix& u) {
        const CrossedProduct cp(clock_shift_model(n).action);
        return fourier_weights(cp, u);
      },
      py::arg("n"), py::arg("u"));

  m.def(
      "inner_automorphism_entropy",
      [](int n, const Matrix& u) {
        const CrossedProduct cp(clock_shift_model(n).action);
        return inner_automorphism_entropy(cp, u);
      },
      py::arg("n"), py::arg("u"));

  m.def(
      "bracket_h",
      [](int n, const Matrix& u, int restarts, int iters, std::uint64_t seed) {
        const CrossedProduct cp(clock_shift_model(n).action);
        return bracket_dict(bracket_h(cp, u, make_config(restarts, iters, seed)));
      },
      py::arg("n"), py::arg("u"), py::arg("restarts") = 2, py::arg("iters") = 200, py::arg("seed") = 0);

  m.def("scenarios", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : scenarios()) out.emplace_back(s.id, s.summary);
    return out;
  });

  m.def(
      "run_scenario",
      [](const std::string& id, std::optional<int> n, std::optional<int> restarts, std::optional<int> iters,
         std::optional<int> samples, std::uint64_t seed, bool bits, bool metadata) {
        ScenarioParams p;
        p.n = n;
        p.restarts = restarts;
        p.iters = iters;
        p.samples = samples;
        p.seed = seed;
        p.bits = bits;
        EntropyReport report;
        {
          py::gil_scoped_release release;
          report = run_scenario(id, p);
        }
        return to_python(report_to_json(report, metadata));
      },
      py::arg("scenario"), py::kw_only(), py::arg("n") = py::none(), py::arg("restarts") = py::none(),
      py::arg("iters") = py::none(), py::arg("samples") = py::none(), py::arg("seed") = 0,
      py::arg("bits") = false, py::arg("metadata") = true);
}
