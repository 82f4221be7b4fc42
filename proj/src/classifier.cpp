#include "heatlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatlab/errors.hpp"
#include "heatlab/roots.hpp"
#include "logmath.hpp"

namespace heatlab {

namespace {

using detail::kE;
using detail::log_exp_plus;

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn10 = std::log(10.0);

bool near(double a, double b, double band) {
  return std::abs(a - b) <= band * std::max({1.0, std::abs(a), std::abs(b)});
}

ClassificationOutcome make(Verdict v, std::string citation, SubVerdict sub = SubVerdict::None, std::string clause = {}) {
  ClassificationOutcome out;
  out.verdict = v;
  out.sub = sub;
  out.clause = std::move(clause);
  out.citations.push_back(std::move(citation));
  return out;
}

}  // namespace

KappaConstant solve_kappa() {
  static const KappaConstant cached = [] {
    auto g = [](double k) { return std::log(k) + 2.0 - k; };
    const RootResult root = brent(g, 3.0, 4.0, 1e-15);
    return KappaConstant{root.x, std::abs(g(root.x))};
  }();
  return cached;
}

std::string to_string(DataClass c) {
  switch (c) {
    case DataClass::L1ul: return "L1ul";
    case DataClass::CalL1ul: return "calL1ul";
    case DataClass::JAlphaIntegrable: return "JAlpha";
  }
  return "L1ul";
}

DataClass data_class_from_string(const std::string& s) {
  if (s == "L1ul") return DataClass::L1ul;
  if (s == "calL1ul") return DataClass::CalL1ul;
  if (s == "JAlpha") return DataClass::JAlphaIntegrable;
  throw SpecError("unknown data class '" + s + "'");
}

void RegimeQuery::validate() const {
  if (N < 1) throw SpecError("N must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw SpecError("r must be > 0");
  if (!(q >= 1.0) || !std::isfinite(q)) throw SpecError("q must be >= 1");
  if (!(band >= 0.0)) throw SpecError("band must be >= 0");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ExistenceSubcritical1: return "ExistenceSubcritical1";
    case Verdict::ExistenceSubcritical2: return "ExistenceSubcritical2";
    case Verdict::ExistenceCritical: return "ExistenceCritical";
    case Verdict::Nonexistence: return "Nonexistence";
    case Verdict::DoublyCritical: return "DoublyCritical";
    case Verdict::OutsideTheory: return "OutsideTheory";
  }
  return "OutsideTheory";
}

std::string to_string(SubVerdict v) {
  switch (v) {
    case SubVerdict::None: return "";
    case SubVerdict::Existence: return "Existence";
    case SubVerdict::Nonexistence: return "Nonexistence";
    case SubVerdict::Conditional: return "Conditional";
  }
  return "";
}

int verdict_code(Verdict v) { return static_cast<int>(v); }

std::string ClassificationOutcome::label() const {
  std::string s = to_string(verdict);
  if (sub != SubVerdict::None) s += "{" + to_string(sub) + (clause.empty() ? "" : ":" + clause) + "}";
  return s;
}

ClassificationOutcome classify_qr_regime(const RegimeQuery& query) {
  query.validate();
  const double half_n = 0.5 * query.N;
  const double r = query.r, q = query.q, band = query.band;
  const bool r_crit = near(r, half_n, band);
  const bool q_edge = near(q, 1.0 + r, band);

  if (r_crit && near(q, 1.0 + half_n, band)) {
    auto out = make(Verdict::DoublyCritical, "doubly-critical:log-corrected-criteria", SubVerdict::Conditional);
    out.fired.push_back({"data-class:" + to_string(query.data_class), 0.0, true});
    return out;
  }
  if (!r_crit && r > half_n) {
    if (!q_edge && q < 1.0 + r) {
      auto out = make(Verdict::ExistenceSubcritical1, "existence:subcritical-r-above-half-N");
      out.fired.push_back({"q < 1+r", 1.0 + r - q, true});
      return out;
    }
    if (q_edge) {
      const bool bound = query.bound_fF_holds.value_or(false);
      if (bound) {
        auto out = make(Verdict::ExistenceSubcritical2, "existence:subcritical-q-on-edge");
        out.fired.push_back({"f'F <= q", 0.0, true});
        return out;
      }
      auto out = make(Verdict::OutsideTheory, "outside:edge-without-fF-bound");
      out.fired.push_back({"f'F <= q", 0.0, false});
      return out;
    }
    return make(Verdict::OutsideTheory, "outside:q-above-1+r");
  }
  if (r_crit) {
    if (!q_edge && q < 1.0 + r) {
      if (query.data_class == DataClass::CalL1ul) {
        auto out = make(Verdict::ExistenceCritical, "existence:critical-r-half-N-closure-data");
        out.fired.push_back({"q < 1+r", 1.0 + r - q, true});
        return out;
      }
      auto out = make(Verdict::OutsideTheory, "outside:critical-r-needs-closure-data");
      out.fired.push_back({"data-class:calL1ul", 0.0, false});
      return out;
    }
    return make(Verdict::OutsideTheory, "outside:q-above-1+r");
  }
  if (q_edge || q < 1.0 + r) {
    auto out = make(Verdict::Nonexistence, "nonexistence:singular-datum-r-below-half-N");
    out.fired.push_back({"r < N/2", half_n - r, true});
    return out;
  }
  return make(Verdict::OutsideTheory, "outside:q-above-1+r");
}

ClassificationOutcome classify_f_beta(int N, double alpha, double beta, double band) {
  if (N < 1) throw SpecError("N must be >= 1");
  if (!(alpha >= 0.0)) throw SpecError("alpha must be >= 0");
  const double floor = -(1.0 + 2.0 / N) * solve_kappa().value;
  if (!(beta >= floor - band)) throw SpecError("beta below the monotonicity floor -(1+2/N) kappa");
  const double half_n = 0.5 * N;
  const bool beta_edge = near(beta, -1.0, band);
  const bool alpha_edge = near(alpha, half_n, band);

  ClassificationOutcome out;
  if (!beta_edge && beta < -1.0) {
    out = make(Verdict::DoublyCritical, "fbeta:existence:beta-below-minus-one", SubVerdict::Existence, "strong-damping");
    out.fired.push_back({"beta < -1", -1.0 - beta, true});
  } else if (!alpha_edge && alpha > half_n) {
    out = make(Verdict::DoublyCritical, "fbeta:existence:alpha-above-half-N", SubVerdict::Existence, "large-alpha");
    out.fired.push_back({"alpha > N/2", alpha - half_n, true});
  } else if (beta_edge) {
    out = make(Verdict::DoublyCritical, "fbeta:nonexistence:beta-minus-one", SubVerdict::Nonexistence, "borderline-beta");
    out.fired.push_back({"alpha <= N/2", half_n - alpha, true});
  } else if (alpha_edge) {
    out = make(Verdict::DoublyCritical, "fbeta:existence:alpha-half-N-closure-data", SubVerdict::Existence,
               "critical-alpha");
    out.fired.push_back({"beta > -1", beta + 1.0, true});
  } else {
    out = make(Verdict::DoublyCritical, "fbeta:nonexistence:alpha-below-half-N", SubVerdict::Nonexistence,
               "small-alpha");
    out.fired.push_back({"alpha < N/2", half_n - alpha, true});
  }
  out.fired.push_back({"beta >= floor", beta - floor, true});
  return out;
}

TailConditionResult check_tail_condition(const Nonlinearity& f, const Monitor& J, double theta, double xi, int N,
                                         const QuadratureConfig& cfg, const TailConditionOptions& opt) {
  if (!(theta > 0.0 && theta <= 1.0)) throw SpecError("theta must lie in (0, 1]");
  if (!(xi >= 0.0)) throw SpecError("xi must be >= 0");
  if (N < 1) throw SpecError("N must be >= 1");
  if (!(opt.eta_lo > 0.0 && opt.eta_hi > opt.eta_lo)) throw SpecError("bad eta window");
  if (opt.grid_per_decade < 1 || opt.eta_per_decade < 1 || opt.grid_per_decade % opt.eta_per_decade != 0)
    throw SpecError("grid_per_decade must be a positive multiple of eta_per_decade");

  const double s_lo = std::log(opt.eta_lo);
  const double s_start = std::log(std::max(xi, 1.0));
  if (s_start > s_lo) throw SpecError("xi lies above the eta window");
  const double ds = kLn10 / opt.grid_per_decade;
  const long before = static_cast<long>(std::ceil((s_lo - s_start) / ds - 1e-9));
  const long after = static_cast<long>(std::llround((std::log10(opt.eta_hi / opt.eta_lo) + opt.extend_decades) *
                                                    opt.grid_per_decade));
  const long n = before + after + 1;
  const double p_exp = 1.0 + 2.0 / N;

  auto log_f_over = [&](double s, double lJ) { return f.log_value(s) - theta * lJ; };

  TailConditionResult out;
  out.monitor_ok = true;
  std::vector<double> s(n), lJt(n), le(n);
  double M = -kInf, Jt = -kInf;
  for (long i = 0; i < n; ++i) {
    s[i] = s_lo + (i - before) * ds;
    const double lJ = J.log_value(s[i]);
    const double lJ1 = J.log_d1(s[i]);
    if (!std::isfinite(lJ1)) out.monitor_ok = false;
    M = std::max(M, log_f_over(s[i], lJ));
    Jt = std::max(Jt, lJ1 - (1.0 - theta) * lJ);
    lJt[i] = Jt;
    le[i] = M + lJ1 - p_exp * lJ + s[i];
  }

  const double s_end = s[n - 1];
  const double M_end = M;
  auto beyond_integrand = [&](double x) {
    const double sv = s_end + x;
    const double lJ = J.log_value(sv);
    const double m = std::max(M_end, log_f_over(sv, lJ));
    return std::exp(m + J.log_d1(sv) - p_exp * lJ + sv);
  };
  TailOptions topt;
  topt.x_cap = 1e250;
  const TailSeries beyond = integrate_to_infinity(beyond_integrand, 0.0, cfg, topt);
  if (beyond.divergent || !beyond.converged) {
    out.tail_divergent = true;
    out.limit.kind = LimitKind::Divergent;
    out.limit.value = kInf;
    out.limit_estimate = kInf;
    return out;
  }

  // Suffix sums of the trapezoid rule in s.
  std::vector<double> tail(n);
  tail[n - 1] = beyond.value;
  for (long i = n - 2; i >= 0; --i) tail[i] = tail[i + 1] + 0.5 * ds * (std::exp(le[i]) + std::exp(le[i + 1]));

  std::vector<double> etas, ts;
  const long stride = opt.grid_per_decade / opt.eta_per_decade;
  for (long i = before; i < before + after + 1; i += stride) {
    if (s[i] > std::log(opt.eta_hi) + 1e-9) break;
    const double eta = std::exp(s[i]);
    const double T = std::exp(lJt[i]) * tail[i];
    etas.push_back(eta);
    ts.push_back(T);
    out.trace.emplace_back(eta, T);
    out.tail_trace.emplace_back(eta, tail[i]);
  }

  out.limit = extrapolate_limit(etas, ts);
  out.limit_estimate = out.limit.value;
  const double tmax = *std::max_element(ts.begin(), ts.end());
  if (out.limit.converged()) {
    out.is_zero_limit = std::abs(out.limit.value) <= 1e-3 * tmax + out.limit.error;
    out.is_bounded = std::isfinite(out.limit.value);
  } else if (out.limit.kind != LimitKind::Divergent) {
    // Bounded if the last decade does not rise.
    const std::size_t k = ts.size() - static_cast<std::size_t>(opt.eta_per_decade) - 1;
    out.is_bounded = ts.back() <= ts[k] * 1.05;
  }
  return out;
}

LogCorrectionCheck check_log_correction_bound(const Nonlinearity& f, double alpha, double rho, int N,
                                              const QuadratureConfig& cfg, const WindowOptions& win) {
  if (N < 1) throw SpecError("N must be >= 1");
  if (!(rho < 1.0)) throw SpecError("rho must be < 1");
  if (!(win.lo > 0.0 && win.hi > win.lo) || win.per_decade < 1) throw SpecError("bad window");
  const double q = 1.0 + 0.5 * N;
  LogCorrectionCheck out;
  const ExponentProfile prof = exponent_profile(f, cfg);
  out.q_estimate = prof.q_estimate;
  out.regime_ok = std::abs(prof.q_estimate - q) <= 1e-3;

  out.margin = kInf;
  const int count = static_cast<int>(std::llround(std::log10(win.hi / win.lo) * win.per_decade));
  for (int k = 0; k <= count; ++k) {
    const double w = std::log(win.lo) + k * kLn10 / win.per_decade;
    const TailValue t = tail_at_log(f, w, cfg);
    const double lhs = t.fprime_F - q;
    const double rhs = 0.5 * N * alpha * rho / log_exp_plus(-0.5 * N * t.log_F, kE);
    if (rhs - lhs < out.margin) {
      out.margin = rhs - lhs;
      out.worst_u = std::exp(w);
    }
  }
  out.holds = out.margin >= 0.0;
  return out;
}

ComparisonHypotheses check_comparison_hypotheses(const Nonlinearity& f, double beta, int N, const QuadratureConfig& cfg,
                                                 const WindowOptions& win) {
  if (!(beta > 0.0)) throw SpecError("beta must be > 0");
  if (!(win.lo > 0.0 && win.hi > win.lo) || win.per_decade < 1) throw SpecError("bad window");
  const Nonlinearity fb = Nonlinearity::f_beta(N, beta);
  auto log_fprime = [](const Nonlinearity& g, double w) { return g.log_value(w) + std::log(g.elasticity(w)) - w; };

  ComparisonHypotheses out;
  const int count = static_cast<int>(std::llround(std::log10(win.hi / win.lo) * win.per_decade));
  std::vector<double> margins, ub;
  std::vector<double> xs, psis, ws;
  double w_guess = std::log(win.lo);
  for (int k = 0; k <= count; ++k) {
    const double wb = std::log(win.lo) + k * kLn10 / win.per_decade;
    const double log_v = tail_at_log(fb, wb, cfg).log_F;
    const double w = log_F_inverse(f, log_v, cfg, w_guess);
    w_guess = w;
    margins.push_back(log_fprime(f, w) - log_fprime(fb, wb));
    ub.push_back(std::exp(wb));

    const double ww = std::log(win.lo) + k * kLn10 / win.per_decade;
    const double psi = tail_at_log(f, ww, cfg).log_F + 2.0 / N * ww;
    ws.push_back(ww);
    xs.push_back(std::log(log_exp_plus(ww, kE)));
    psis.push_back(psi);
  }

  // Derivative condition, tolerating round-off at the level of the inverse solve.
  const double tol = 1e-9;
  std::size_t first_ok = margins.size();
  for (std::size_t i = margins.size(); i-- > 0;) {
    if (margins[i] < -tol) break;
    first_ok = i;
  }
  out.convexity_margin = *std::min_element(margins.begin() + static_cast<long>(margins.size() / 2), margins.end());
  out.convexity_ok = first_ok <= margins.size() / 2;
  out.C1 = first_ok < ub.size() ? ub[first_ok] : kInf;

  // Local exponent of F u^(2/N) against log log(u+e); its limit is the smallest admissible delta.
  std::vector<double> mids, slopes;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    mids.push_back(std::exp(0.5 * (ws[i] + ws[i + 1])));
    slopes.push_back((psis[i + 1] - psis[i]) / (xs[i + 1] - xs[i]));
  }
  out.delta_limit = extrapolate_limit(mids, slopes);
  const double d = out.delta_limit.converged() ? out.delta_limit.value : slopes.back();
  out.delta_found = std::max(d, 0.0);
  out.growth_ok = out.delta_limit.kind != LimitKind::Divergent && out.delta_found < 1.0;
  return out;
}

ExtremeEstimate estimate_extreme(const std::function<double(double)>& log_ratio, double w_hi, bool upper,
                                 int per_decade) {
  auto decade_ext = [&](double w_top) {
    double e = upper ? -kInf : kInf;
    for (int k = 0; k <= per_decade; ++k) {
      const double v = log_ratio(w_top - kLn10 + k * kLn10 / per_decade);
      e = upper ? std::max(e, v) : std::min(e, v);
    }
    return e;
  };
  const double tol = std::log(1.05);
  const double prev = decade_ext(w_hi - kLn10);
  const double last = decade_ext(w_hi);
  ExtremeEstimate out;
  out.trend = last - prev;
  out.value = std::exp(last);
  const double signed_trend = upper ? out.trend : -out.trend;
  if (signed_trend <= tol) {
    out.status = upper ? "finite" : "positive";
    out.holds = true;
    return out;
  }
  // Keep going further out; persistent drift decides.
  bool persistent = true;
  double cur = last;
  for (int d = 1; d <= 3 && persistent; ++d) {
    const double nxt = decade_ext(w_hi + d * kLn10);
    const double t = upper ? nxt - cur : cur - nxt;
    persistent = t > tol;
    cur = nxt;
  }
  out.status = persistent ? (upper ? "infinite" : "zero") : "inconclusive";
  out.value = persistent ? (upper ? kInf : 0.0) : std::exp(cur);
  out.holds = false;
  return out;
}

SourcewiseResult check_sourcewise_solvability(const Nonlinearity& f, double r, int N, const QuadratureConfig& cfg) {
  if (!(r >= 1.0)) throw SpecError("r must be >= 1");
  if (N < 1) throw SpecError("N must be >= 1");
  SourcewiseResult out;
  if (r > 1.0) {
    const double c = 1.0 + 2.0 * r / N;
    auto lr = [&](double w) { return f.log_value(w) - c * w; };
    const ExtremeEstimate e = estimate_extreme(lr, std::log(1e9), true);
    out.criterion_value = e.value;
    out.status = e.status;
    out.solvable_for_all_data = e.holds;
    return out;
  }

  // Running sup of f(u)/u from u = 1, tabulated in w = log u up to u = 1e12.
  const double dw = kLn10 / 1000.0;
  const int n = 12000;
  std::vector<double> run(n + 1);
  double m = -kInf;
  for (int i = 0; i <= n; ++i) {
    m = std::max(m, f.log_value(i * dw) - i * dw);
    run[i] = m;
  }
  const double w_end = n * dw;
  auto integrand = [&](double w) {
    const double psi = f.log_value(w) - w;
    const double base = w < w_end ? run[static_cast<int>(w / dw)] : run[n];
    return std::exp(std::max(base, psi) - 2.0 / N * w);
  };
  const TailSeries ts = integrate_to_infinity(integrand, 0.0, cfg);
  double acc = 0.0;
  for (const auto& [x, v] : ts.panels) {
    acc += v;
    out.partial_sums.emplace_back(std::exp(std::min(x, 700.0)), acc);
  }
  if (ts.divergent) {
    out.status = "divergent";
    out.criterion_value = kInf;
  } else if (ts.converged) {
    out.status = "finite";
    out.criterion_value = ts.value;
    out.solvable_for_all_data = true;
  } else {
    out.status = "inconclusive";
    out.criterion_value = ts.value;
  }
  return out;
}

GrowthCriteria check_growth_criteria(const Nonlinearity& f, const Monitor& J, int N, const GrowthParams& params,
                                     const QuadratureConfig& cfg, const WindowOptions& win) {
  (void)cfg;
  if (N < 1) throw SpecError("N must be >= 1");
  if (!(params.eps > 0.0)) throw SpecError("eps must be > 0");
  const double half_n = 0.5 * N;
  const double gu = params.gamma_upper.value_or(half_n + 0.5);
  const double gl = params.gamma_lower.value_or(0.5 * half_n);
  if (!(gu > half_n)) throw SpecError("upper gamma must exceed N/2");
  if (!(gl > 0.0 && gl < half_n)) throw SpecError("lower gamma must lie in (0, N/2)");
  const double p_exp = 1.0 + 2.0 / N;
  const double w_hi = std::log(win.hi);

  auto core = [&](double w) { return f.log_value(w) + J.log_d1(w); };
  auto loglog = [&](double lJ) { return std::log(log_exp_plus(lJ, kE)); };

  GrowthCriteria out;
  out.upper_eps = estimate_extreme([&](double w) { return core(w) - (p_exp - params.eps) * J.log_value(w); }, w_hi, true);
  out.upper_log = estimate_extreme(
      [&](double w) {
        const double lJ = J.log_value(w);
        return core(w) + 2.0 * gu / N * loglog(lJ) - p_exp * lJ;
      },
      w_hi, true);
  out.lower_eps = estimate_extreme([&](double w) { return core(w) - (p_exp + params.eps) * J.log_value(w); }, w_hi, false);
  out.lower_log = estimate_extreme(
      [&](double w) {
        const double lJ = J.log_value(w);
        return core(w) + 2.0 * gl / N * loglog(lJ) - p_exp * lJ;
      },
      w_hi, false);
  if (const auto* lw = std::get_if<LogWeightMonitor>(&J.kind()); lw && lw->gamma > 0.0 && lw->gamma < half_n)
    out.lower_log_weight = estimate_extreme([&](double w) { return f.log_value(w) - p_exp * w; }, w_hi, false);

  const double u = win.hi;
  const double j0 = J.value(u), j1 = J.d1(u), j2 = J.d2(u);
  out.second_ratio = j0 * j2 / (j1 * j1);
  const double j3 = J.d3(u);
  out.third_ratio = j2 != 0.0 ? j0 * j3 / (j1 * j2) : 0.0;
  return out;
}

}  // namespace heatlab
