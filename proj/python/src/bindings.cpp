#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heatlab/classifier.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/heat_solver.hpp"
#include "heatlab/initial_data.hpp"
#include "heatlab/io.hpp"

namespace py = pybind11;
using namespace heatlab;

namespace {

Json parse(const std::string& s) { return s.empty() ? Json() : Json::parse(s); }

std::optional<Nonlinearity> maybe_f(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return nonlinearity_from_json(Json::parse(s));
}

std::string classify_qr(int N, double q, double r, std::optional<bool> bound, const std::string& data_class) {
  RegimeQuery Q;
  Q.N = N;
  Q.q = q;
  Q.r = r;
  Q.bound_fF_holds = bound;
  Q.data_class = data_class_from_string(data_class);
  return to_json(classify_qr_regime(Q)).dump();
}

std::string heat_flow(const std::string& datum, int N, double t, const std::string& grid, const std::string& f) {
  auto g = make_grid(grid_from_json(parse(grid)));
  auto u = apply_semigroup(sample_profile(profile_from_json(parse(datum), N, maybe_f(f)), g), t);
  return Json{{"r", g->nodes()}, {"u", u.values}, {"far", number(u.far)}}.dump();
}

std::string simulate(const std::string& f, const std::string& datum, int N, const std::string& grid, double T, int steps,
                     int grading, int max_n, double tol) {
  auto nl = maybe_f(f);
  auto g = make_grid(grid_from_json(parse(grid)));
  PicardOptions opt;
  opt.T = T;
  opt.steps = steps;
  opt.grading = grading;
  opt.max_n = max_n;
  opt.tol = tol;
  py::gil_scoped_release release;
  const auto tr = picard_iterate(nl, sample_profile(profile_from_json(parse(datum), N, nl), g), opt);
  Json j = to_json(tr);
  j["r"] = g->nodes();
  j["u_final"] = Json::array();
  if (!tr.solution.empty())
    for (double v : tr.solution.back().values) j["u_final"].push_back(number(v));
  return j.dump();
}

std::string blowup(double beta, int N, double rho, double H0, double C2) {
  BlowupOptions o;
  o.beta = beta;
  o.N = N;
  o.rho = rho;
  o.H0 = H0;
  o.C2 = C2;
  return to_json(integrate_H(o)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of heatlab; the public API lives in the heatlab package.";

  auto spec_error = py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  (void)spec_error;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("kappa", [] { return solve_kappa().value; });
  m.def("classify_qr", &classify_qr, py::arg("N"), py::arg("q"), py::arg("r"), py::arg("bound_fF_holds") = py::none(),
        py::arg("data_class") = "L1ul");
  m.def("classify_f_beta", [](int N, double alpha, double beta) { return to_json(classify_f_beta(N, alpha, beta)).dump(); });
  m.def("eval_F", [](const std::string& f, double u) { return eval_F(nonlinearity_from_json(Json::parse(f)), u, {}); });
  m.def("F_inverse",
        [](const std::string& f, double v) { return eval_F_inverse(nonlinearity_from_json(Json::parse(f)), v, {}); });
  m.def("exponent_profile",
        [](const std::string& f) { return to_json(exponent_profile(nonlinearity_from_json(Json::parse(f)), {})).dump(); });
  m.def("ul_norm", [](const std::string& datum, int N, double r, const std::string& f) {
    return to_json(ul_norm(profile_from_json(Json::parse(datum), N, maybe_f(f)), r)).dump();
  });
  m.def("heat_flow", &heat_flow);
  m.def("simulate", &simulate);
  m.def("blowup_functional", &blowup);
  m.def("contradiction_sides", [](double beta, double eps, int N, double rho, double C2) {
    return to_json(contradiction_sides(beta, eps, N, rho, C2)).dump();
  });
}
