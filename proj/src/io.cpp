#include "heatlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "heatlab/errors.hpp"

namespace heatlab {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

const Json& require(const Json& j, const std::string& key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) throw SpecError("missing field '" + context + "." + key + "'");
  return j.at(key);
}

double require_number(const Json& j, const std::string& key, const std::string& context) {
  const Json& v = require(j, key, context);
  if (!v.is_number()) throw SpecError("field '" + context + "." + key + "' must be a number");
  return v.get<double>();
}

int require_int(const Json& j, const std::string& key, const std::string& context) {
  const Json& v = require(j, key, context);
  if (!v.is_number_integer()) throw SpecError("field '" + context + "." + key + "' must be an integer");
  return v.get<int>();
}

namespace {

double opt_number(const Json& j, const std::string& key, double fallback) {
  return j.is_object() && j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : fallback;
}

const Json& params_of(const Json& j, const std::string& context) {
  static const Json empty = Json::object();
  if (!j.is_object()) throw SpecError(context + " spec must be an object");
  return j.contains("params") ? j.at("params") : empty;
}

std::string kind_of(const Json& j, const std::string& context) {
  const Json& k = require(j, "kind", context);
  if (!k.is_string()) throw SpecError("field '" + context + ".kind' must be a string");
  return k.get<std::string>();
}

}  // namespace

Nonlinearity nonlinearity_from_json(const Json& j) {
  const std::string ctx = "nonlinearity";
  const std::string kind = kind_of(j, ctx);
  const Json& p = params_of(j, ctx);
  const std::string pc = ctx + ".params";
  const double u_min = opt_number(j, "u_min", 0.0);
  if (kind == "Power") return Nonlinearity(PowerLaw{require_number(p, "p", pc), opt_number(p, "coef", 1.0)}, u_min);
  if (kind == "LogPerturbedPower")
    return Nonlinearity(LogPerturbedPower{require_number(p, "p", pc), require_number(p, "beta", pc)}, u_min);
  if (kind == "FBeta") return Nonlinearity::f_beta(require_int(p, "N", pc), require_number(p, "beta", pc));
  if (kind == "ExpPower") return Nonlinearity(ExpPower{require_number(p, "p", pc)}, u_min);
  if (kind == "ExpLogPower") return Nonlinearity(ExpLogPower{require_number(p, "p", pc)}, u_min);
  if (kind == "Example3") return Nonlinearity(Example3{require_number(p, "p", pc)}, u_min);
  if (kind == "IteratedExp") return Nonlinearity(IteratedExp{require_int(p, "n", pc)}, u_min);
  if (kind == "LogCorrectedCritical")
    return Nonlinearity(LogCorrectedCritical{require_number(p, "alpha", pc), require_int(p, "N", pc)}, u_min);
  if (kind == "Tabulated") {
    const Json& u = require(p, "u", pc);
    const Json& f = require(p, "f", pc);
    if (!u.is_array() || !f.is_array()) throw SpecError("fields 'nonlinearity.params.u' and '.f' must be arrays");
    return Nonlinearity(Tabulated{u.get<std::vector<double>>(), f.get<std::vector<double>>()}, u_min);
  }
  throw SpecError("unknown nonlinearity kind '" + kind + "'");
}

namespace {

struct KindJson {
  Json operator()(const PowerLaw& k) const { return {{"kind", "Power"}, {"params", {{"p", k.p}, {"coef", k.coef}}}}; }
  Json operator()(const LogPerturbedPower& k) const {
    return {{"kind", "LogPerturbedPower"}, {"params", {{"p", k.p}, {"beta", k.beta}}}};
  }
  Json operator()(const ExpPower& k) const { return {{"kind", "ExpPower"}, {"params", {{"p", k.p}}}}; }
  Json operator()(const ExpLogPower& k) const { return {{"kind", "ExpLogPower"}, {"params", {{"p", k.p}}}}; }
  Json operator()(const Example3& k) const { return {{"kind", "Example3"}, {"params", {{"p", k.p}}}}; }
  Json operator()(const IteratedExp& k) const { return {{"kind", "IteratedExp"}, {"params", {{"n", k.n}}}}; }
  Json operator()(const LogCorrectedCritical& k) const {
    return {{"kind", "LogCorrectedCritical"}, {"params", {{"alpha", k.alpha}, {"N", k.N}}}};
  }
  Json operator()(const Tabulated& k) const { return {{"kind", "Tabulated"}, {"params", {{"u", k.u}, {"f", k.f}}}}; }
};

}  // namespace

Json to_json(const Nonlinearity& f) {
  Json j = std::visit(KindJson{}, f.kind());
  if (f.u_min() != 0.0) j["u_min"] = f.u_min();
  return j;
}

Monitor monitor_from_json(const Json& j, const std::optional<Nonlinearity>& f) {
  const std::string ctx = "monitor";
  const std::string kind = kind_of(j, ctx);
  const Json& p = params_of(j, ctx);
  const std::string pc = ctx + ".params";
  if (kind == "Identity") return Monitor::identity();
  if (kind == "Power") return Monitor::power(require_number(p, "r", pc));
  if (kind == "LogWeight") return Monitor::log_weight(require_number(p, "gamma", pc));
  if (kind == "FNegPower" || kind == "JAlpha") {
    if (!f) throw SpecError("monitor '" + kind + "' needs a nonlinearity");
    if (kind == "FNegPower") return Monitor::f_neg_power(*f, require_number(p, "r", pc));
    return Monitor::j_alpha(*f, require_number(p, "alpha", pc), require_int(p, "N", pc));
  }
  throw SpecError("unknown monitor kind '" + kind + "'");
}

RadialProfile profile_from_json(const Json& j, int N, const std::optional<Nonlinearity>& f) {
  const std::string ctx = "datum";
  const std::string kind = kind_of(j, ctx);
  const Json& p = params_of(j, ctx);
  const std::string pc = ctx + ".params";
  if (kind == "Constant") return RadialProfile::constant(require_number(p, "c", pc), N);
  if (kind == "PowerSingularity")
    return RadialProfile::power_singularity(require_number(p, "c", pc), require_number(p, "a", pc), N,
                                            require_number(p, "cutoff", pc));
  if (kind == "Gaussian") return RadialProfile::gaussian(require_number(p, "t0", pc), N, opt_number(p, "mass", 1.0));
  if (kind == "Counterexample") {
    std::optional<Nonlinearity> target;
    if (p.contains("target")) target = nonlinearity_from_json(p.at("target"));
    return build_counterexample(require_number(p, "beta", pc), require_number(p, "eps", pc), N,
                                opt_number(p, "alpha", 0.0), target)
        .profile;
  }
  if (kind == "FInversePower") {
    if (!f) throw SpecError("datum 'FInversePower' needs a nonlinearity");
    return build_F_inverse_power(*f, require_number(p, "alpha", pc), require_number(p, "r", pc), N).profile;
  }
  throw SpecError("unknown datum kind '" + kind + "'");
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  if (j.is_null()) return g;
  if (!j.is_object()) throw SpecError("grid spec must be an object");
  g.R = opt_number(j, "R", g.R);
  g.h = opt_number(j, "h", g.h);
  g.r_min = opt_number(j, "r_min", g.r_min);
  g.grading = opt_number(j, "grading", g.grading);
  g.validate();
  return g;
}

GridSpec grid_from_string(const std::string& s, GridSpec base) {
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SpecError("grid: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw SpecError("grid: bad number in '" + item + "'");
    }
    if (key == "R") base.R = v;
    else if (key == "h") base.h = v;
    else if (key == "r_min") base.r_min = v;
    else if (key == "grading") base.grading = v;
    else throw SpecError("grid: unknown key '" + key + "'");
  }
  base.validate();
  return base;
}

Json to_json(const LimitEstimate& e) {
  return {{"value", number(e.value)}, {"error", number(e.error)}, {"kind", to_string(e.kind)}, {"rate", number(e.rate)}};
}

Json to_json(const ClassificationOutcome& c) {
  Json fired = Json::array();
  for (const auto& h : c.fired) fired.push_back({{"name", h.name}, {"margin", number(h.margin)}, {"holds", h.holds}});
  return {{"verdict", to_string(c.verdict)},
          {"sub_verdict", to_string(c.sub)},
          {"clause", c.clause},
          {"label", c.label()},
          {"code", verdict_code(c.verdict)},
          {"hypotheses", fired},
          {"citations", c.citations}};
}

Json to_json(const ExponentProfile& p) {
  return {{"q", number(p.q_estimate)},
          {"p", number(p.p_estimate)},
          {"q_limit", to_json(p.q_limit)},
          {"p_limit", to_json(p.p_limit)},
          {"conjugacy_residual", number(p.conjugacy_residual)},
          {"bound_fF_le_q", p.bound_holds_fFq},
          {"bound_margin", number(p.bound_margin)},
          {"converged", p.converged}};
}

Json to_json(const ULNormEstimate& u) {
  return {{"r", number(u.r)},
          {"value", number(u.value)},
          {"center_argmax", number(u.center_argmax)},
          {"method", to_string(u.method)},
          {"origin_value", number(u.origin_value)},
          {"grid_sup", number(u.grid_sup)},
          {"divergent", u.divergent},
          {"divergence_exponent", number(u.divergence_exponent)}};
}

Json to_json(const ClosureHeuristic& c) {
  Json levels = Json::array();
  for (const auto& l : c.trace)
    levels.push_back({{"n", number(l.n)}, {"log_inv_radius", number(l.log_inv_radius)}, {"error", number(l.error)}});
  return {{"in_closure_likely", c.in_closure_likely}, {"status", c.status}, {"levels", levels}};
}

Json to_json(const SingularIntegral& s) {
  Json j = {{"value", number(s.value)},
            {"error", number(s.error)},
            {"divergent", s.divergent},
            {"decay_exponent", number(s.decay_exponent)}};
  j["closed_form"] = s.closed_form ? number(*s.closed_form) : Json(nullptr);
  return j;
}

Json to_json(const IterationTrace& t) {
  Json steps = Json::array();
  bool monotone = true;
  for (const auto& r : t.records) {
    monotone = monotone && r.monotone;
    steps.push_back({{"n", r.n},
                     {"sup", number(r.sup)},
                     {"ul", number(r.ul)},
                     {"monotone", r.monotone},
                     {"residual", number(r.residual)}});
  }
  return {{"verdict", to_string(t.verdict)},
          {"iterations", t.records.size()},
          {"monotone", monotone},
          {"aborted", t.aborted},
          {"message", t.message},
          {"divergence_time", t.verdict == SolverVerdict::DivergedInf ? number(t.divergence_time) : Json(nullptr)},
          {"final_time", t.times.empty() ? Json(nullptr) : number(t.times.back())},
          {"steps", steps}};
}

Json to_json(const SupersolutionCheck& s) {
  return {{"holds", s.holds},
          {"min_margin", number(s.min_margin)},
          {"t_at_min", number(s.t_at_min)},
          {"r_at_min", number(s.r_at_min)},
          {"jensen_violation", number(s.jensen_violation)}};
}

Json to_json(const BlowupFunctional& b, std::size_t max_points) {
  Json traj = Json::array();
  const std::size_t n = b.trajectory.size();
  const std::size_t stride = n > max_points && max_points > 0 ? (n + max_points - 1) / max_points : 1;
  for (std::size_t i = 0; i < n; i += stride) traj.push_back({number(b.trajectory[i].first), number(b.trajectory[i].second)});
  if (n > 0 && (n - 1) % stride != 0) traj.push_back({number(b.trajectory.back().first), number(b.trajectory.back().second)});
  return {{"beta", b.beta},
          {"N", b.N},
          {"rho", b.rho},
          {"C2", b.C2},
          {"C3", b.C3},
          {"H0", number(b.H0)},
          {"blew_up", b.blew_up},
          {"blowup_time", b.blew_up ? number(b.blowup_time) : Json(nullptr)},
          {"blowup_time_exact", b.blowup_time_exact ? number(*b.blowup_time_exact) : Json(nullptr)},
          {"identity_rel_error", number(b.identity_rel_error)},
          {"nondecreasing", b.nondecreasing},
          {"trajectory", traj}};
}

Json to_json(const ContradictionSides& s) {
  return {{"rho", s.rho},
          {"ratio", number(s.ratio)},
          {"ratio_limit", number(s.ratio_limit)},
          {"log_side", number(s.log_side)},
          {"separation", number(s.separation)},
          {"mass_bound", number(s.mass_bound)},
          {"mass_lower", number(s.mass_lower)}};
}

Json to_json(const SmoothingFit& s) {
  Json pts = Json::array();
  for (const auto& [t, v] : s.samples) pts.push_back({number(t), number(v)});
  return {{"slope", number(s.slope)}, {"intercept", number(s.intercept)}, {"samples", pts}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string manifest_hash(const Json& manifest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(manifest.dump())));
  return buf;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isfinite(row[i])) std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      else std::snprintf(buf, sizeof buf, "%s", std::isnan(row[i]) ? "nan" : (row[i] > 0 ? "inf" : "-inf"));
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace heatlab
