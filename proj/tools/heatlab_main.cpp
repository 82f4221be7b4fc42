#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "heatlab/classifier.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/heat_solver.hpp"
#include "heatlab/initial_data.hpp"
#include "heatlab/io.hpp"

namespace fs = std::filesystem;
using namespace heatlab;

namespace {

enum Exit { kOk = 0, kSpecError = 2, kNumerical = 3, kInconclusive = 4 };

struct Options {
  std::string spec_path;
  std::string out_dir;
  std::string window;
  std::string grid;
  std::vector<std::string> sweeps;
  std::optional<double> tol;
  double c_star = 1.0;
};

struct Sweep {
  std::string name;
  std::vector<double> values;
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SpecError("bad number '" + s + "' in " + what);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw SpecError("sweep: need at least one point");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

// name=lo:hi:n
Sweep parse_sweep(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw SpecError("--sweep expects param=lo:hi:n, got '" + s + "'");
  const auto parts = split(s.substr(eq + 1), ':');
  if (parts.size() != 3) throw SpecError("--sweep expects param=lo:hi:n, got '" + s + "'");
  const double n = parse_double(parts[2], "--sweep");
  if (n != std::floor(n)) throw SpecError("--sweep: point count must be an integer");
  return {s.substr(0, eq),
          linspace(parse_double(parts[0], "--sweep"), parse_double(parts[1], "--sweep"), static_cast<int>(n))};
}

WindowOptions parse_window(const std::string& s) {
  WindowOptions w;
  if (s.empty()) return w;
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw SpecError("--window expects lo:hi");
  w.lo = parse_double(parts[0], "--window");
  w.hi = parse_double(parts[1], "--window");
  if (!(w.lo > 0.0 && w.hi > w.lo)) throw SpecError("--window needs 0 < lo < hi");
  return w;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  std::string command;
  Options opt;
  Json spec;
  Json manifest;
  std::string hash;
  fs::path out;
  QuadratureConfig quad;
  WindowOptions window;
  std::vector<Sweep> sweeps;
};

Context make_context(const std::string& command, const Options& opt, bool spec_required) {
  Context ctx;
  ctx.command = command;
  ctx.opt = opt;
  if (!opt.spec_path.empty()) {
    std::ifstream in(opt.spec_path);
    if (!in) throw SpecError("cannot read spec file " + opt.spec_path);
    try {
      ctx.spec = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw SpecError("spec " + opt.spec_path + " is not valid JSON: " + e.what());
    }
  } else if (spec_required) {
    throw SpecError("missing --spec for '" + command + "'");
  } else {
    ctx.spec = Json::object();
  }
  if (!ctx.spec.is_object()) throw SpecError("spec must be a JSON object");
  if (opt.tol) {
    if (!(*opt.tol > 0.0)) throw SpecError("--tol must be > 0");
    ctx.quad.rel_tol = *opt.tol;
  }
  ctx.window = parse_window(opt.window);
  for (const auto& s : opt.sweeps) ctx.sweeps.push_back(parse_sweep(s));

  Json overrides = Json::object();
  if (opt.tol) overrides["tol"] = *opt.tol;
  if (!opt.window.empty()) overrides["window"] = opt.window;
  if (!opt.grid.empty()) overrides["grid"] = opt.grid;
  if (!opt.sweeps.empty()) overrides["sweep"] = opt.sweeps;
  if (opt.c_star != 1.0) overrides["c_star"] = opt.c_star;
  ctx.manifest = {{"command", command}, {"spec", ctx.spec}, {"overrides", overrides}, {"deterministic", true}};
  ctx.hash = manifest_hash(ctx.manifest);

  std::string root = opt.out_dir;
  if (root.empty()) {
    const char* env = std::getenv("HEATLAB_OUT");
    root = env && *env ? env : "heatlab_out";
  }
  ctx.out = root;
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec || !fs::is_directory(ctx.out)) throw SpecError("output directory " + root + " is not writable");
  return ctx;
}

Json report_for(const Context& ctx) {
  return {{"command", ctx.command}, {"manifest_hash", ctx.hash}, {"manifest", ctx.manifest}};
}

void finish(const Context& ctx, Json report) {
  report["generated_at"] = timestamp();
  write_json((ctx.out / (ctx.command + ".json")).string(), report);
}

template <class F>
auto parallel_map(std::size_t n, F fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::future<std::vector<std::pair<std::size_t, R>>>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [=] {
      std::vector<std::pair<std::size_t, R>> part;
      for (std::size_t i = w; i < n; i += workers) part.emplace_back(i, fn(i));
      return part;
    }));
  }
  std::vector<std::optional<R>> slots(n);
  for (auto& j : jobs)
    for (auto& [i, r] : j.get()) slots[i] = std::move(r);
  std::vector<R> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Cartesian product of the sweeps as spec overrides.
std::vector<Json> sweep_points(const Json& spec, const std::vector<Sweep>& sweeps) {
  std::vector<Json> points{spec};
  for (const auto& s : sweeps) {
    std::vector<Json> next;
    for (const auto& p : points)
      for (double v : s.values) {
        Json q = p;
        q[s.name] = v;
        next.push_back(q);
      }
    points = std::move(next);
  }
  return points;
}

std::optional<Nonlinearity> optional_nonlinearity(const Json& spec) {
  if (!spec.contains("nonlinearity")) return std::nullopt;
  return nonlinearity_from_json(spec.at("nonlinearity"));
}

bool is_f_beta(const Nonlinearity& f, int N) {
  const auto* k = std::get_if<LogPerturbedPower>(&f.kind());
  return k && std::abs(k->p - (1.0 + 2.0 / N)) < 1e-12;
}

struct Classified {
  ClassificationOutcome outcome;
  Json extra;
};

Classified classify_spec(const Json& spec, const QuadratureConfig& cfg, const WindowOptions& win) {
  const int N = require_int(spec, "N", "spec");
  const double band = spec.value("band", 1e-9);
  Classified out;
  RegimeQuery query;
  query.N = N;
  query.band = band;
  if (spec.contains("data_class")) query.data_class = data_class_from_string(spec.at("data_class").get<std::string>());
  query.jalpha = spec.value("jalpha", 0.0);
  if (spec.contains("nonlinearity")) {
    const Nonlinearity f = nonlinearity_from_json(spec.at("nonlinearity"));
    if (is_f_beta(f, N) && spec.contains("alpha")) {
      out.outcome = classify_f_beta(N, require_number(spec, "alpha", "spec"), std::get<LogPerturbedPower>(f.kind()).beta, band);
      return out;
    }
    query.r = require_number(spec, "r", "spec");
    const ExponentProfile prof = exponent_profile(f, cfg);
    query.q = prof.q_estimate;
    const BoundCheck bound = check_fF_bound(f, prof.q_estimate, win.lo, win.hi, cfg, 1e-9 * std::max(1.0, prof.q_estimate),
                                            win.per_decade);
    query.bound_fF_holds = bound.holds;
    out.extra["exponents"] = to_json(prof);
    out.extra["bound_fF_le_q"] = {{"holds", bound.holds}, {"worst_margin", number(bound.worst_margin)}, {"worst_u", number(bound.worst_u)}};
  } else {
    query.q = require_number(spec, "q", "spec");
    query.r = require_number(spec, "r", "spec");
    if (spec.contains("bound_fF_holds")) query.bound_fF_holds = spec.at("bound_fF_holds").get<bool>();
  }
  out.outcome = classify_qr_regime(query);
  return out;
}

int cmd_classify(const Context& ctx) {
  Json report = report_for(ctx);
  if (ctx.sweeps.empty()) {
    const Classified c = classify_spec(ctx.spec, ctx.quad, ctx.window);
    report["outcome"] = to_json(c.outcome);
    for (const auto& [k, v] : c.extra.items()) report[k] = v;
    finish(ctx, report);
    std::cout << c.outcome.label() << '\n';
    return kOk;
  }
  const std::vector<Json> points = sweep_points(ctx.spec, ctx.sweeps);
  const auto results = parallel_map(points.size(), [&](std::size_t i) { return classify_spec(points[i], ctx.quad, ctx.window); });
  std::vector<std::string> header;
  for (const auto& s : ctx.sweeps) header.push_back(s.name);
  header.push_back("code");
  header.push_back("sub_code");
  std::vector<std::vector<double>> rows;
  Json list = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> row;
    Json params = Json::object();
    for (const auto& s : ctx.sweeps) {
      row.push_back(points[i].at(s.name).get<double>());
      params[s.name] = points[i].at(s.name);
    }
    row.push_back(verdict_code(results[i].outcome.verdict));
    row.push_back(static_cast<double>(results[i].outcome.sub));
    rows.push_back(row);
    list.push_back({{"params", params}, {"outcome", to_json(results[i].outcome)}});
  }
  write_csv((ctx.out / "classify_sweep.csv").string(), header, rows);
  report["sweep"] = list;
  finish(ctx, report);
  std::cout << points.size() << " points classified\n";
  return kOk;
}

int cmd_kappa(const Context& ctx) {
  const KappaConstant k = solve_kappa();
  Json report = report_for(ctx);
  report["kappa"] = k.value;
  report["residual"] = k.residual;
  report["citations"] = {"fbeta:monotonicity-floor"};
  finish(ctx, report);
  std::cout.precision(15);
  std::cout << k.value << '\n';
  return kOk;
}

int cmd_profile(const Context& ctx) {
  const Nonlinearity f = nonlinearity_from_json(require(ctx.spec, "nonlinearity", "spec"));
  const ExponentProfile prof = exponent_profile(f, ctx.quad);
  Json report = report_for(ctx);
  report["nonlinearity"] = to_json(f);
  report["exponents"] = to_json(prof);
  if (!f.tabulated()) {
    const BoundCheck b = check_fF_bound(f, prof.q_estimate, ctx.window.lo, ctx.window.hi, ctx.quad,
                                        1e-9 * std::max(1.0, prof.q_estimate), ctx.window.per_decade);
    report["bound_fF_le_q"] = {{"holds", b.holds}, {"worst_margin", number(b.worst_margin)}, {"worst_u", number(b.worst_u)}};
  }
  if (ctx.spec.value("karamata", false)) {
    const KaramataProfile k = karamata_profile(f, ctx.quad);
    report["karamata"] = {{"base_point", k.base_point},
                          {"rv_index", number(k.rv_index)},
                          {"representation_residual", number(k.representation_residual)}};
  }
  std::vector<std::vector<double>> rows;
  for (const auto& s : prof.samples) rows.push_back({s.u, s.f, s.fprime, s.F, s.fprime_F});
  write_csv((ctx.out / "exponent_samples.csv").string(), {"u", "f", "fprime", "F", "fprime_F"}, rows);
  finish(ctx, report);
  std::cout << "q = " << prof.q_estimate << ", p = " << prof.p_estimate << '\n';
  return kOk;
}

int cmd_data(const Context& ctx) {
  const int N = require_int(ctx.spec, "N", "spec");
  const auto f = optional_nonlinearity(ctx.spec);
  const Json& dj = require(ctx.spec, "datum", "spec");
  Json report = report_for(ctx);
  std::optional<RadialProfile> prof;
  if (dj.value("kind", "") == "Counterexample") {
    const Json& p = require(dj, "params", "datum");
    std::optional<Nonlinearity> target;
    if (p.contains("target")) target = nonlinearity_from_json(p.at("target"));
    const CounterexampleData c = build_counterexample(require_number(p, "beta", "datum.params"),
                                                      require_number(p, "eps", "datum.params"), N, p.value("alpha", 0.0), target);
    report["counterexample"] = {{"m", c.m}, {"C0", c.C0}, {"log_h_beta_C0", number(c.log_h_beta_C0)}, {"eps", c.eps}, {"beta", c.beta}};
    prof = c.profile;
  } else {
    prof = profile_from_json(dj, N, f);
  }
  report["datum"] = {{"name", prof->name()}, {"N", N}, {"cutoff", number(prof->cutoff())}, {"far_field", number(prof->far_field())},
                     {"singular_at_origin", prof->singular_at_origin()}, {"nonincreasing", prof->nonincreasing_sampled()}};
  report["ul_norm"] = to_json(ul_norm(*prof, ctx.spec.value("r", 1.0)));
  if (ctx.spec.value("closure", false)) report["closure"] = to_json(closure_membership_heuristic(*prof));
  if (ctx.spec.contains("monitor")) {
    const Monitor J = monitor_from_json(ctx.spec.at("monitor"), f);
    report["singular_integral"] = to_json(singular_integrability(*prof, J, ctx.spec.value("rho", 0.1)));
    report["monitor"] = J.name();
  }
  std::vector<std::vector<double>> rows;
  for (int k = -240; k <= 10; ++k) {
    const double s = std::pow(10.0, k / 20.0);
    rows.push_back({s, prof->value(s)});
  }
  write_csv((ctx.out / "profile.csv").string(), {"s", "u0"}, rows);
  finish(ctx, report);
  std::cout << prof->name() << ": ||u0||_ul = " << report["ul_norm"]["value"] << '\n';
  return kOk;
}

GridSpec grid_for(const Json& spec, const Options& opt) {
  GridSpec g = spec.contains("grid") ? grid_from_json(spec.at("grid")) : GridSpec{};
  if (!opt.grid.empty()) g = grid_from_string(opt.grid, g);
  return g;
}

struct Simulation {
  Json summary;
  IterationTrace trace;
  std::vector<std::pair<double, double>> monitor_trace;
};

Simulation run_simulation(const Json& spec, const Options& opt, const GridSpec& gs) {
  const int N = require_int(spec, "N", "spec");
  const auto f = optional_nonlinearity(spec);
  const RadialProfile prof = profile_from_json(require(spec, "datum", "spec"), N, f);
  const GridPtr grid = make_grid(gs);
  const GridFunction u0 = sample_profile(prof, grid);
  PicardOptions po;
  po.T = require_number(spec, "T", "spec");
  po.steps = spec.value("steps", po.steps);
  po.grading = spec.value("grading", po.grading);
  po.max_n = spec.value("max_n", po.max_n);
  po.tol = opt.tol.value_or(spec.value("tol", po.tol));
  po.r_ul = spec.value("r_ul", po.r_ul);

  Simulation sim;
  sim.trace = picard_iterate(f, u0, po);
  Json s = to_json(sim.trace);
  s["grid"] = {{"R", gs.R}, {"h", gs.h}, {"r_min", gs.r_min}, {"grading", gs.grading}, {"nodes", grid->size()}};

  Json inv = Json::object();
  inv["monotone"] = s["monotone"];
  std::optional<Monitor> J;
  if (spec.contains("monitor")) J = monitor_from_json(spec.at("monitor"), f);
  {
    GridFunction phi = u0;
    for (double& v : phi.values) v = std::max(v, 1.0);
    phi.far = std::max(phi.far, 1.0);
    const JensenCheck jc = jensen_check(J ? *J : Monitor::power(2.0), phi, po.T);
    inv["jensen_max_violation"] = number(jc.max_violation);
    inv["jensen_scaled_violation"] = number(jc.scaled_violation);
  }
  {
    std::vector<double> ts;
    for (int k = 0; k <= 4; ++k) ts.push_back(po.T * std::pow(10.0, -1.0 + k / 4.0));
    inv["smoothing_slope_1_to_inf"] = number(smoothing_exponent_probe(u0, 1.0, INFINITY, ts).slope);
  }
  s["invariants"] = inv;

  if (J) {
    sim.monitor_trace = monitor_ul_trace(*J, sim.trace);
    double mx = 0.0;
    for (const auto& [t, v] : sim.monitor_trace) mx = std::max(mx, v);
    const double first = sim.monitor_trace.empty() ? 0.0 : sim.monitor_trace.front().second;
    s["monitor"] = {{"name", J->name()}, {"initial", number(first)}, {"max", number(mx)}, {"ratio", number(first > 0 ? mx / first : NAN)}};
  }
  if (spec.contains("blowup")) {
    const Json& b = spec.at("blowup");
    BlowupOptions bo;
    bo.N = N;
    if (b.contains("beta")) bo.beta = require_number(b, "beta", "blowup");
    else if (f && is_f_beta(*f, N)) bo.beta = std::get<LogPerturbedPower>(f->kind()).beta;
    else throw SpecError("missing field 'blowup.beta'");
    bo.rho = b.value("rho", bo.rho);
    bo.C2 = b.value("C2", bo.C2);
    bo.H0 = default_H0(u0, bo.rho, opt.c_star);
    Json h = to_json(integrate_H(bo));
    h["c_star"] = opt.c_star;
    if (b.contains("eps")) h["contradiction"] = to_json(contradiction_sides(bo.beta, b.at("eps").get<double>(), N, bo.rho, bo.C2));
    s["blowup_functional"] = h;
  }
  sim.summary = s;
  return sim;
}

int exit_for(SolverVerdict v) {
  switch (v) {
    case SolverVerdict::Converged: return kOk;
    case SolverVerdict::DivergedInf: return kNumerical;
    case SolverVerdict::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int cmd_simulate(const Context& ctx) {
  Json report = report_for(ctx);
  if (!ctx.sweeps.empty()) {
    const std::vector<Json> points = sweep_points(ctx.spec, ctx.sweeps);
    const auto sims = parallel_map(points.size(), [&](std::size_t i) { return run_simulation(points[i], ctx.opt, grid_for(points[i], ctx.opt)); });
    std::vector<std::string> header;
    for (const auto& s : ctx.sweeps) header.push_back(s.name);
    for (const char* h : {"verdict_code", "iterations", "final_sup"}) header.push_back(h);
    std::vector<std::vector<double>> rows;
    Json list = Json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<double> row;
      for (const auto& s : ctx.sweeps) row.push_back(points[i].at(s.name).get<double>());
      row.push_back(static_cast<double>(sims[i].trace.verdict));
      row.push_back(static_cast<double>(sims[i].trace.records.size()));
      row.push_back(sims[i].trace.records.empty() ? 0.0 : sims[i].trace.records.back().sup);
      rows.push_back(row);
      list.push_back(sims[i].summary);
    }
    write_csv((ctx.out / "simulate_sweep.csv").string(), header, rows);
    report["runs"] = list;
    finish(ctx, report);
    std::cout << points.size() << " runs\n";
    return kOk;
  }
  const GridSpec gs = grid_for(ctx.spec, ctx.opt);
  const Simulation sim = run_simulation(ctx.spec, ctx.opt, gs);
  report["summary"] = sim.summary;
  if (ctx.spec.value("refine", false)) {
    const Simulation fine = run_simulation(ctx.spec, ctx.opt, gs.refined());
    report["refined"] = fine.summary;
    report["verdict_stable_under_refinement"] = fine.trace.verdict == sim.trace.verdict;
  }
  std::vector<std::vector<double>> rows;
  for (const auto& r : sim.trace.records) rows.push_back({double(r.n), r.sup, r.ul, r.monotone ? 1.0 : 0.0, r.residual});
  write_csv((ctx.out / "trace.csv").string(), {"n", "sup", "ul", "monotone", "residual"}, rows);
  if (!sim.monitor_trace.empty()) {
    rows.clear();
    for (const auto& [t, v] : sim.monitor_trace) rows.push_back({t, v});
    write_csv((ctx.out / "monitor_trace.csv").string(), {"t", "monitor_ul"}, rows);
  }
  if (!sim.trace.solution.empty()) {
    rows.clear();
    const GridFunction& u = sim.trace.solution.back();
    for (std::size_t i = 0; i < u.values.size(); ++i) rows.push_back({u.grid->nodes()[i], u.values[i]});
    write_csv((ctx.out / "solution.csv").string(), {"r", "u"}, rows);
  }
  finish(ctx, report);
  std::cout << to_string(sim.trace.verdict) << " after " << sim.trace.records.size() << " iterations";
  if (!sim.trace.records.empty()) std::cout << ", sup = " << sim.trace.records.back().sup;
  std::cout << '\n';
  return exit_for(sim.trace.verdict);
}

int cmd_verify(const Context& ctx) {
  const Json& spec = ctx.spec;
  const int N = require_int(spec, "N", "spec");
  const auto f = optional_nonlinearity(spec);
  const Monitor J = monitor_from_json(require(spec, "monitor", "spec"), f);
  const RadialProfile prof = profile_from_json(require(spec, "datum", "spec"), N, f);
  const GridSpec gs = grid_for(spec, ctx.opt);
  const GridFunction u0 = sample_profile(prof, make_grid(gs));
  SupersolutionOptions so;
  so.T = require_number(spec, "T", "spec");
  so.steps = spec.value("steps", so.steps);
  so.grading = spec.value("grading", so.grading);
  so.C1 = spec.value("C1", so.C1);
  so.xi = spec.value("xi", so.xi);
  so.tol = ctx.opt.tol.value_or(spec.value("tol", so.tol));
  const SupersolutionCheck c = verify_supersolution(f, J, require_number(spec, "sigma", "spec"), u0, so);
  Json report = report_for(ctx);
  report["supersolution"] = to_json(c);
  report["monitor"] = J.name();
  report["citations"] = {"supersolution:monitor-transport", "jensen:convex-monitor"};
  finish(ctx, report);
  std::cout << (c.holds ? "holds" : "fails") << ", min margin " << c.min_margin << '\n';
  return c.holds ? kOk : kInconclusive;
}

std::vector<double> axis(const Context& ctx, const std::string& name) {
  for (const auto& s : ctx.sweeps)
    if (s.name == name) return s.values;
  const Json& a = require(ctx.spec, name, "spec");
  if (!a.is_array() || a.size() != 3) throw SpecError("field 'spec." + name + "' must be [lo, hi, n]");
  return linspace(a[0].get<double>(), a[1].get<double>(), a[2].get<int>());
}

int cmd_figure_map(const Context& ctx) {
  const int N = require_int(ctx.spec, "N", "spec");
  const std::vector<double> qs = axis(ctx, "q"), rs = axis(ctx, "r");
  for (double q : qs)
    if (!(q >= 1.0 && q <= 1.0 + N)) throw SpecError("figure-map: q must lie in [1, 1+N]");
  for (double r : rs)
    if (!(r > 0.0 && r <= N)) throw SpecError("figure-map: r must lie in (0, N]");
  RegimeQuery base;
  base.N = N;
  if (ctx.spec.contains("data_class")) base.data_class = data_class_from_string(ctx.spec.at("data_class").get<std::string>());
  if (ctx.spec.contains("bound_fF_holds")) base.bound_fF_holds = ctx.spec.at("bound_fF_holds").get<bool>();
  std::vector<std::vector<double>> rows;
  std::map<std::string, int> counts;
  for (double q : qs)
    for (double r : rs) {
      RegimeQuery query = base;
      query.q = q;
      query.r = r;
      const ClassificationOutcome c = classify_qr_regime(query);
      rows.push_back({q, r, double(verdict_code(c.verdict))});
      ++counts[to_string(c.verdict)];
    }
  write_csv((ctx.out / "region_map.csv").string(), {"q", "r", "code"}, rows);
  Json legend = Json::object();
  for (Verdict v : {Verdict::ExistenceSubcritical1, Verdict::ExistenceSubcritical2, Verdict::ExistenceCritical,
                    Verdict::Nonexistence, Verdict::DoublyCritical, Verdict::OutsideTheory})
    legend[std::to_string(verdict_code(v))] = to_string(v);
  Json report = report_for(ctx);
  report["legend"] = legend;
  report["counts"] = counts;
  report["points"] = rows.size();
  finish(ctx, report);
  std::cout << rows.size() << " points written to " << (ctx.out / "region_map.csv").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatlab: solvability experiments for semilinear heat equations with singular data"};
  app.require_subcommand(1);
  Options opt;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Context&);
    bool spec_required;
  };
  const std::vector<Command> commands = {
      {"classify", "classify a (f, data) pair or an f_beta instance", cmd_classify, true},
      {"profile", "exponent profile q, p and hypothesis checks of a nonlinearity", cmd_profile, true},
      {"data", "build an initial datum and report its norms", cmd_data, true},
      {"simulate", "monotone Picard iteration on a radial grid", cmd_simulate, true},
      {"verify", "supersolution inequality on the space-time grid", cmd_verify, true},
      {"figure-map", "region map of the (q, r) plane as CSV", cmd_figure_map, true},
      {"kappa", "the constant kappa with log kappa + 2 = kappa", cmd_kappa, false},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--spec", opt.spec_path, "JSON spec file");
    sub->add_option("--out", opt.out_dir, "output directory (default $HEATLAB_OUT or ./heatlab_out)");
    sub->add_option("--tol", opt.tol, "tolerance override");
    sub->add_option("--window", opt.window, "hypothesis window lo:hi");
    sub->add_option("--grid", opt.grid, "grid override, e.g. R=6,h=0.02,r_min=1e-6,grading=1.2");
    sub->add_option("--sweep", opt.sweeps, "param=lo:hi:n, repeatable");
    sub->add_option("--c-star", opt.c_star, "constant c_* in the H functional's initial value");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kSpecError;
  }
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return commands[i].run(make_context(commands[i].name, opt, commands[i].spec_required));
    } catch (const SpecError& e) {
      std::cerr << "spec error: " << e.what() << '\n';
      return kSpecError;
    } catch (const Json::exception& e) {
      std::cerr << "spec error: " << e.what() << '\n';
      return kSpecError;
    } catch (const NumericalError& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return kNumerical;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kNumerical;
    }
  }
  return kSpecError;
}
