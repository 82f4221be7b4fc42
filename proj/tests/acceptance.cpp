// Acceptance checks. Usage: heatlab_acceptance [criterion ...], default all of 1..11.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "heatlab/classifier.hpp"
#include "heatlab/heat_solver.hpp"
#include "heatlab/initial_data.hpp"
#include "heatlab/nonlinearity.hpp"

using namespace heatlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const QuadratureConfig cfg{};

Outcome exponent_calculus() {
  bool ok = true;
  double worst_power = 0, worst_exp = 0, worst_fbeta = 0, slowest = 0;
  auto q_of = [&](const Nonlinearity& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const double q = exponent_profile(f, cfg).q_estimate;
    slowest = std::max(slowest, seconds_since(t0));
    return q;
  };
  for (double p : {1.5, 2.0, 3.0, 5.0}) worst_power = std::max(worst_power, std::abs(q_of(Nonlinearity::power(p)) - p / (p - 1)));
  for (double p : {0.5, 1.0, 2.0}) worst_exp = std::max(worst_exp, std::abs(q_of(Nonlinearity::exp_power(p)) - 1.0));
  for (int N : {1, 2, 3})
    for (double beta : {-1.0, 0.0, 1.0})
      worst_fbeta = std::max(worst_fbeta, std::abs(q_of(Nonlinearity::f_beta(N, beta)) - (1.0 + 0.5 * N)));
  ok = worst_power <= 1e-4 && worst_exp <= 2e-2 && worst_fbeta <= 1e-3 && slowest <= 10.0;
  return {ok, fmt("max |q - exact|: power %.2e, exp %.2e, f_beta %.2e; slowest case %.2fs", worst_power, worst_exp,
                  worst_fbeta, slowest)};
}

Outcome closed_form_tail() {
  double worst = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    auto f = Nonlinearity::example3(p);
    for (int k = 0; k <= 48; ++k) {
      const double u = std::pow(10.0, k / 8.0);
      const double exact = *f.closed_form_F(u);
      worst = std::max(worst, std::abs(eval_F(f, u, cfg) / exact - 1.0));
    }
  }
  return {worst <= 1e-8, fmt("max rel error %.2e over u in [1, 1e6], p in {1.5, 2, 3}", worst)};
}

Outcome kappa() {
  auto k = solve_kappa();
  const double res = std::abs(std::log(k.value) + 2.0 - k.value);
  return {res <= 1e-9 && std::abs(k.value - 3.146) <= 1e-3, fmt("kappa = %.12f, residual %.2e", k.value, res)};
}

// Reference decision logic for f_beta written from the clause inequalities.
std::string reference_clause(int N, double alpha, double beta) {
  const double h = 0.5 * N;
  if (beta < -1.0) return "strong-damping";
  if (alpha > h) return "large-alpha";
  if (beta == -1.0) return "borderline-beta";
  if (alpha == h) return "critical-alpha";
  return "small-alpha";
}

Outcome f_beta_table() {
  int mismatches = 0, cells = 0;
  std::vector<std::string> seen;
  for (int N : {1, 2, 3}) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double alpha = i * N / 10.0;  // hits N/2 at i = 5
        const double beta = -3.0 + 0.25 * j;  // hits -1 at j = 8
        const auto out = classify_f_beta(N, alpha, beta);
        const std::string ref = reference_clause(N, alpha, beta);
        ++cells;
        if (out.label().find(ref) == std::string::npos) ++mismatches;
        if (std::find(seen.begin(), seen.end(), ref) == seen.end()) seen.push_back(ref);
      }
    }
  }
  return {mismatches == 0 && seen.size() == 5,
          fmt("%d misclassifications over %d cells (three 20x20 grids), %zu of 5 clauses exercised", mismatches, cells,
              seen.size())};
}

Outcome tail_condition() {
  const double beta = -2.0;
  TailConditionOptions opt;
  opt.eta_hi = 1e6;
  auto res = check_tail_condition(Nonlinearity::f_beta(1, beta), Monitor::identity(), 1.0, 0.0, 1, cfg, opt);
  double worst = 0, lo_ratio = INFINITY, hi_ratio = 0;
  bool below_display = true;
  for (auto [eta, T] : res.trace) {
    const double display = 2.0 / (-beta - 1.0) * std::pow(std::log(eta + std::numbers::e), beta + 1.0);
    worst = std::max(worst, std::abs(T / display - 1.0));
    lo_ratio = std::min(lo_ratio, T / display);
    hi_ratio = std::max(hi_ratio, T / display);
    below_display = below_display && T <= display;
  }
  auto zero = check_tail_condition(Nonlinearity::f_beta(1, 0.0), Monitor::identity(), 1.0, 0.0, 1, cfg);
  const bool ok = worst <= 0.05 && !zero.is_bounded;
  return {ok, fmt("tail / displayed expression in [%.4f, %.4f] (max deviation %.1f%%, needs 5%%); "
                  "tail <= display: %s, limit zero: %s; beta = 0 bounded flag: %s",
                  lo_ratio, hi_ratio, 100 * worst, below_display ? "yes" : "no", res.is_zero_limit ? "yes" : "no",
                  zero.is_bounded ? "true" : "false")};
}

Outcome singular_integrals() {
  double worst = 0;
  for (double lambda : {1.2, 1.4, 1.8})
    for (double rho : {1e-1, 1e-2, 1e-3}) {
      auto r = model_singular_integral(lambda, rho, cfg);
      worst = std::max(worst, std::abs(r.value / *r.closed_form - 1.0));
    }
  return {worst <= 1e-6, fmt("max rel error %.2e over 9 (lambda, rho) pairs", worst)};
}

double rel_sup_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m / b.sup();
}

Outcome semigroup() {
  auto grid = make_grid(GridSpec{12.0, 0.005, 1e-4, 1.2});
  double cst = 0;
  for (double v : apply_semigroup(constant_function(1.0, grid, 1), 0.5).values) cst = std::max(cst, std::abs(v - 1.0));

  auto g1 = gaussian_function(1.0, grid, 1);
  auto bump = g1;
  for (std::size_t i = 0; i < bump.values.size(); ++i) bump.values[i] += 0.1 * std::exp(-grid->nodes()[i]);
  auto s_lo = apply_semigroup(g1, 0.3), s_hi = apply_semigroup(bump, 0.3);
  bool order = true;
  for (std::size_t i = 0; i < s_lo.values.size(); ++i) order = order && s_lo.values[i] <= s_hi.values[i];

  const double gauss = rel_sup_diff(apply_semigroup(g1, 0.5), gaussian_function(1.5, grid, 1));
  const double comp = rel_sup_diff(apply_semigroup(apply_semigroup(g1, 0.5), 0.7), apply_semigroup(g1, 1.2));

  auto sgrid = make_grid(GridSpec{8.0, 0.02, 1e-6, 1.1});
  std::vector<double> ts;
  for (int k = 0; k <= 8; ++k) ts.push_back(1e-3 * std::pow(10.0, k / 8.0));
  double slope_dev = 0;
  std::string slopes;
  for (int N : {1, 2}) {
    const double s = smoothing_exponent_probe(gaussian_function(1e-6, sgrid, N), 1.0, INFINITY, ts).slope;
    slope_dev = std::max(slope_dev, std::abs(s / (-0.5 * N) - 1.0));
    slopes += fmt(" N=%d %.4f", N, s);
  }
  const bool ok = cst <= 1e-12 && order && gauss <= 1e-6 && comp <= 1e-6 && slope_dev <= 0.05;
  return {ok, fmt("constant %.1e, order %s, Gaussian %.1e, composition %.1e, smoothing slopes%s", cst,
                  order ? "kept" : "broken", gauss, comp, slopes.c_str())};
}

Outcome monotone_iteration() {
  const auto t0 = std::chrono::steady_clock::now();
  auto grid = make_grid(GridSpec{1.0, 0.25, 1e-3, 2.0});
  PicardOptions opt;
  opt.T = 0.75;
  opt.steps = 300;
  opt.grading = 6;
  opt.tol = 1e-12;
  auto tr = picard_iterate(Nonlinearity::power(2.0), constant_function(1.0, grid, 1), opt);
  bool mono = !tr.aborted;
  for (const auto& r : tr.records) mono = mono && r.monotone;
  double worst = 0;
  for (double t : {0.25, 0.5, 0.75}) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      if (std::abs(tr.times[i] - t) < std::abs(tr.times[k] - t)) k = i;
    for (double v : tr.solution[k].values) worst = std::max(worst, std::abs(v * (1.0 - tr.times[k]) - 1.0));
  }
  const double secs = seconds_since(t0);
  const bool ok = tr.verdict == SolverVerdict::Converged && mono && worst <= 1e-4 && secs <= 60.0;
  return {ok, fmt("%s after %zu iterates, monotone %s, max rel error %.2e at t = 0.25/0.5/0.75, %.1fs",
                  to_string(tr.verdict).c_str(), tr.records.size(), mono ? "yes" : "no", worst, secs)};
}

Outcome jensen() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto grid = make_grid(GridSpec{4.0, 0.1, 1e-3, 1.5});
  double worst = 0;
  int violations = 0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const int which = k % 4;
    Monitor J = which == 0   ? Monitor::power(1.0 + 3.0 * U(rng))
                : which == 1 ? Monitor::log_weight(2.0 * U(rng))
                : which == 2 ? Monitor::f_neg_power(Nonlinearity::power(2.0 + 2.0 * U(rng)), 1.0 + U(rng))
                             : Monitor::identity();
    GridFunction phi{grid, std::vector<double>(grid->size()), 0.0, 1 + k % 3};
    for (auto& v : phi.values) v = 1.0 + 10.0 * U(rng);
    phi.far = 1.0 + 10.0 * U(rng);
    const double t = std::pow(10.0, -3.0 + 3.0 * U(rng));
    const double v = jensen_check(J, phi, t).max_violation;
    worst = std::max(worst, v);
    if (v > 1e-8) ++violations;
  }
  return {violations == 0, fmt("%d violations over %d triples, worst %.2e", violations, trials, worst)};
}

Outcome blowup_functional() {
  double identity = 0;
  for (int N : {1, 2})
    for (double beta : {0.5, 1.0}) {
      BlowupOptions o;
      o.N = N;
      o.beta = beta;
      o.H0 = 0.5;
      identity = std::max(identity, integrate_H(o).identity_rel_error);
    }
  double prev_log = 0;
  bool grows = true;
  ContradictionSides last;
  for (double rho : {1e-1, 1e-2, 1e-3, 1e-4}) {
    last = contradiction_sides(1.0, 0.1, 1, rho);
    grows = grows && last.log_side > prev_log;
    prev_log = last.log_side;
  }
  const double conv = std::abs(last.ratio - last.ratio_limit);
  const bool ok = identity <= 1e-6 && conv <= 1e-3 && grows && last.separation >= 10.0;
  return {ok, fmt("identity rel error %.1e; ratio %.6f vs limit %.6f; log side grows %s; separation at rho = 1e-4 "
                  "is %.3f (needs >= 10)",
                  identity, last.ratio, last.ratio_limit, grows ? "yes" : "no", last.separation)};
}

Outcome contrast() {
  const auto t0 = std::chrono::steady_clock::now();
  auto f3 = Nonlinearity::power(3.0);
  auto f1 = Nonlinearity::f_beta(1, 1.0);
  const double r = 2.0;
  auto J = Monitor::f_neg_power(f3, r);

  RegimeQuery q;
  q.N = 1;
  q.q = exponent_profile(f3, cfg).q_estimate;
  q.r = r;
  const bool regime = classify_qr_regime(q).verdict == Verdict::ExistenceSubcritical1;

  auto A = RadialProfile::power_singularity(1.0, 0.2, 1, 1.0);
  auto B = build_counterexample(1.0, 0.1, 1).profile;
  PicardOptions opt;
  opt.T = 0.01;
  opt.steps = 40;
  opt.grading = 12;
  opt.max_n = 60;

  const GridSpec base{6.0, 0.02, 1e-6, 1.2};
  bool a_ok = true, b_ok = true;
  std::vector<double> a_max;
  std::string b_desc;
  for (const GridSpec& gs : {base, base.refined()}) {
    auto grid = make_grid(gs);
    auto ta = picard_iterate(f3, sample_profile(A, grid), opt);
    double mx = 0;
    for (auto [t, v] : monitor_ul_trace(J, ta)) mx = std::max(mx, v);
    a_max.push_back(mx);
    a_ok = a_ok && ta.verdict == SolverVerdict::Converged && std::isfinite(mx);

    auto tb = picard_iterate(f1, sample_profile(B, grid), opt);
    bool growing = !tb.records.empty();
    for (std::size_t i = 1; i < tb.records.size(); ++i) {
      const double u = tb.records[i].ul;
      growing = growing && (!std::isfinite(u) || u >= tb.records[i - 1].ul);
    }
    b_ok = b_ok && tb.verdict != SolverVerdict::Converged && growing;
    b_desc += fmt(" %s/%zu", to_string(tb.verdict).c_str(), tb.records.size());
  }
  const bool bounded = std::abs(a_max[1] / a_max[0] - 1.0) <= 0.1;
  const double secs = seconds_since(t0);
  const bool ok = regime && a_ok && bounded && b_ok && secs <= 600.0;
  return {ok, fmt("regime %s; datum A converged on both grids, max ||F(u)^-2||_ul %.4g -> %.4g; datum B%s with "
                  "growing ul-norm %s; %.1fs",
                  regime ? "ExistenceSubcritical1" : "unexpected", a_max[0], a_max[1], b_desc.c_str(),
                  b_ok ? "yes" : "no", secs)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "exponent calculus", exponent_calculus},
      {2, "closed-form tail", closed_form_tail},
      {3, "kappa", kappa},
      {4, "f_beta classification table", f_beta_table},
      {5, "tail condition for f_beta", tail_condition},
      {6, "model singular integrals", singular_integrals},
      {7, "semigroup invariants", semigroup},
      {8, "monotone iteration", monotone_iteration},
      {9, "Jensen checks", jensen},
      {10, "blow-up functional", blowup_functional},
      {11, "contrast experiment", contrast},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s: %s (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
