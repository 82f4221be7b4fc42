#include "heatlab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chebyshev.hpp"
#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
// Radii below exp(-kXCap) carry no weight any double computation can resolve.
constexpr double kXCap = 1e12;

struct CoreName {
  std::string operator()(const ConstantCore&) const { return "Constant"; }
  std::string operator()(const PowerSingularityCore&) const { return "PowerSingularity"; }
  std::string operator()(const GaussianCore&) const { return "Gaussian"; }
  std::string operator()(const CounterexampleCore& c) const { return c.target ? "CounterexampleTransported" : "Counterexample"; }
  std::string operator()(const FInversePowerCore&) const { return "FInversePower"; }
  std::string operator()(const TruncatedCore& t) const { return "Truncated(" + t.base->name() + ")"; }
};

double x_of(double s) { return -std::log(s); }

}  // namespace

RadialProfile::RadialProfile(ProfileCore core, int N, double cutoff, QuadratureConfig cfg)
    : core_(std::move(core)), N_(N), cutoff_(cutoff), cfg_(cfg) {
  if (N < 1) throw SpecError("profile: N must be >= 1");
  if (!(cutoff > 0.0)) throw SpecError("profile: cutoff radius must be > 0");
  if (const auto* c = std::get_if<ConstantCore>(&core_); c && !(c->c >= 0.0)) throw SpecError("profile: constant must be >= 0");
  if (const auto* c = std::get_if<PowerSingularityCore>(&core_); c && !(c->c > 0.0 && c->a > 0.0))
    throw SpecError("profile: power singularity needs c > 0 and a > 0");
  if (const auto* c = std::get_if<GaussianCore>(&core_); c && !(c->t0 > 0.0 && c->mass >= 0.0))
    throw SpecError("profile: Gaussian needs t0 > 0 and mass >= 0");
  if (const auto* c = std::get_if<TruncatedCore>(&core_); c && (!c->base || !(c->radius > 0.0)))
    throw SpecError("profile: truncation needs a base profile and a positive radius");
  if (std::holds_alternative<CounterexampleCore>(core_) && !(cutoff < std::exp(-1.0)))
    throw SpecError("profile: counterexample cutoff must lie in (0, 1/e)");
  if (const auto* c = std::get_if<CounterexampleCore>(&core_)) {
    const double expo = 0.5 * N_ + 1.0 - c->eps;
    auto rem = [&](double xi) {
      const double x = std::exp(xi);
      return exact_core_log_value_x(x) - (N_ * x - expo * xi);
    };
    const double lo = std::log(x_of(cutoff_));
    table_hi_ = std::log(1e8);
    table_ = std::make_shared<const detail::PiecewiseChebyshev>(rem, lo, table_hi_, 48, 20);
  }
}

RadialProfile RadialProfile::truncated(const RadialProfile& base, double radius) {
  return RadialProfile(TruncatedCore{std::make_shared<const RadialProfile>(base), radius}, base.N(), base.cutoff(),
                       base.config());
}

std::string RadialProfile::name() const { return std::visit(CoreName{}, core_); }

double RadialProfile::core_log_value_x(double x) const {
  if (table_ && std::holds_alternative<CounterexampleCore>(core_)) {
    const double xi = std::log(x);
    const double expo = 0.5 * N_ + 1.0 - std::get<CounterexampleCore>(core_).eps;
    if (table_->contains(xi)) return N_ * x - expo * xi + (*table_)(xi);
    // Past the table the remainder is affine in log x up to O(log x / x).
    if (xi > table_hi_) {
      const double d = 1e-3;
      const double slope = ((*table_)(table_hi_) - (*table_)(table_hi_ - d)) / d;
      return N_ * x - expo * xi + (*table_)(table_hi_) + slope * (xi - table_hi_);
    }
  }
  return exact_core_log_value_x(x);
}

double RadialProfile::exact_core_log_value_x(double x) const {
  if (const auto* c = std::get_if<ConstantCore>(&core_)) return std::log(c->c);
  if (const auto* c = std::get_if<PowerSingularityCore>(&core_)) return std::log(c->c) + c->a * x;
  if (const auto* c = std::get_if<GaussianCore>(&core_))
    return std::log(c->mass) - 0.5 * N_ * std::log(4.0 * kPi * c->t0) - std::exp(-2.0 * x) / (4.0 * c->t0);
  if (const auto* c = std::get_if<CounterexampleCore>(&core_)) {
    const double expo = 0.5 * N_ + 1.0 - c->eps;
    const double log_T = N_ * x - expo * std::log(x);
    const Nonlinearity& g = c->target ? *c->target : c->f_beta;
    return log_F_inverse(g, -2.0 / N_ * log_T, cfg_, log_T);
  }
  if (const auto* c = std::get_if<FInversePowerCore>(&core_)) {
    const double lv = -c->alpha * x;
    if (std::isfinite(c->F0) && lv >= std::log(c->F0)) return -kInf;
    return log_F_inverse(c->f, lv, cfg_);
  }
  const auto& t = std::get<TruncatedCore>(core_);
  return t.base->log_value_x(std::min(x, x_of(t.radius)));
}

double RadialProfile::log_value_x(double x) const {
  const double xc = std::isfinite(cutoff_) ? x_of(cutoff_) : -kInf;
  return core_log_value_x(std::max(x, xc));
}

bool RadialProfile::singular_at_origin() const {
  return std::holds_alternative<PowerSingularityCore>(core_) || std::holds_alternative<CounterexampleCore>(core_) ||
         std::holds_alternative<FInversePowerCore>(core_);
}

double RadialProfile::value(double s) const {
  if (!(s >= 0.0)) throw SpecError("profile: radius must be >= 0");
  if (s == 0.0) return singular_at_origin() ? kInf : std::exp(log_value_x(1e3));
  return std::exp(log_value_x(x_of(s)));
}

double RadialProfile::far_field() const {
  if (std::isfinite(cutoff_)) return value(cutoff_);
  if (const auto* c = std::get_if<ConstantCore>(&core_)) return c->c;
  if (const auto* t = std::get_if<TruncatedCore>(&core_)) return t->base->far_field();
  return 0.0;
}

bool RadialProfile::nonincreasing_sampled(int per_decade) const {
  double prev = kInf;
  for (int k = 0; k <= 15 * per_decade; ++k) {
    const double x = 12.0 * std::log(10.0) - k * std::log(10.0) / per_decade;
    const double lv = log_value_x(x);
    if (lv > prev + 1e-12 * std::max(1.0, std::abs(prev))) return false;
    prev = lv;
  }
  return true;
}

double sphere_area(int N) { return 2.0 * std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N); }
double ball_volume(int N) { return sphere_area(N) / N; }

double sphere_fraction_in_ball(int N, double s, double d) {
  if (d == 0.0) return s < 1.0 ? 1.0 : 0.0;
  if (s == 0.0) return d < 1.0 ? 1.0 : 0.0;
  const double c = (s * s + d * d - 1.0) / (2.0 * s * d);
  if (N == 1) return 0.5 * ((c < 1.0 ? 1.0 : 0.0) + (c < -1.0 ? 1.0 : 0.0));
  if (c <= -1.0) return 1.0;
  if (c >= 1.0) return 0.0;
  if (N == 2) return std::acos(c) / kPi;
  if (N == 3) return 0.5 * (1.0 - c);
  const double th = std::acos(c);
  auto w = [&](double t) { return std::pow(std::sin(t), N - 2); };
  QuadratureConfig cfg;
  return integrate(w, 0.0, th, cfg).value / integrate(w, 0.0, kPi, cfg).value;
}

double h_beta(double beta, int N, double u, const QuadratureConfig& cfg) {
  return std::exp(-0.5 * N * tail_at(Nonlinearity::f_beta(N, beta), u, cfg).log_F);
}

double log_h_beta_inverse(double beta, int N, double log_y, const QuadratureConfig& cfg) {
  return log_F_inverse(Nonlinearity::f_beta(N, beta), -2.0 / N * log_y, cfg, log_y);
}

double h_beta_lower(double beta, int N, double u) {
  return std::pow(0.25 * N, 0.5 * N) * u * std::pow(std::log(u + std::numbers::e), -0.5 * N * beta);
}

CounterexampleData build_counterexample(double beta, double eps, int N, double alpha, std::optional<Nonlinearity> target,
                                        const QuadratureConfig& cfg) {
  if (N < 1) throw SpecError("counterexample: N must be >= 1");
  if (!(beta > 0.0)) throw SpecError("counterexample: beta must be > 0");
  if (!(alpha >= 0.0 && alpha < 0.5 * N)) throw SpecError("counterexample: alpha must lie in [0, N/2)");
  if (!(eps > 0.0 && eps < 0.5 * N - alpha)) throw SpecError("counterexample: eps must lie in (0, N/2 - alpha)");
  const Nonlinearity fb = Nonlinearity::f_beta(N, beta);

  // f_beta'' has the sign of a^2 - a + da/dw in w = log u.
  double C0 = 1e-8;
  const double h = 1e-4;
  for (double w = std::log(1e-8); w <= std::log(1e8); w += 0.05) {
    const double a = fb.elasticity(w);
    const double da = (fb.elasticity(w + h) - fb.elasticity(w - h)) / (2.0 * h);
    if (a * a - a + da < 0.0) C0 = std::exp(w + 0.05);
  }
  const double log_h_C0 = -0.5 * N * tail_at(fb, C0, cfg).log_F;

  // Largest dyadic m < 1/e with the core decreasing on (0, m] and above h_beta(C0) there.
  const double expo = 0.5 * N + 1.0 - eps;
  const double x_min = std::max(1.0, expo / N);
  double m = 0.0;
  for (int k = 2; k <= 1074; ++k) {
    const double x = k * std::log(2.0);
    if (x <= x_min) continue;
    if (N * x - expo * std::log(x) >= log_h_C0) {
      m = std::ldexp(1.0, -k);
      break;
    }
  }
  if (m == 0.0) throw NumericalError("counterexample: no dyadic m in (0, 1/e) reaches h_beta(C0)");

  RadialProfile profile(CounterexampleCore{beta, eps, fb, std::move(target)}, N, m, cfg);
  return {std::move(profile), m, C0, log_h_C0, eps, beta};
}

FInversePowerData build_F_inverse_power(const Nonlinearity& f, double alpha, double r, int N, const QuadratureConfig& cfg) {
  if (N < 1) throw SpecError("F-inverse datum: N must be >= 1");
  if (!(r > 0.0 && r < 0.5 * N)) throw SpecError("F-inverse datum: r must lie in (0, N/2)");
  if (!(alpha > 2.0 && alpha < N / r)) throw SpecError("F-inverse datum: alpha must lie in (2, N/r)");
  const double F0 = F_at_zero(f, cfg);
  const double q = exponent_profile(f, cfg).q_estimate;
  RadialProfile profile(FInversePowerCore{alpha, f, F0}, N, kInf, cfg);
  return {std::move(profile), q, q <= 1.0 + r + 1e-9, F0};
}

namespace {

// Integral over s in [s_lo, s_hi] of exp(log_g(x)) ds-weight, written in x = log(1/s); s_lo = 0 allowed.
struct XIntegral {
  double value = 0.0;
  double error = 0.0;
  bool divergent = false;
  double decay = 0.0;
};

XIntegral integrate_x(const std::function<double(double)>& g, double s_lo, double s_hi, double s_break,
                      const QuadratureConfig& cfg) {
  XIntegral out;
  if (!(s_hi > s_lo)) return out;
  const double xa = x_of(s_hi);
  const double xb = s_lo > 0.0 ? x_of(s_lo) : kInf;
  std::vector<double> cuts{xa};
  if (s_break > s_lo && s_break < s_hi) cuts.push_back(x_of(s_break));
  cuts.push_back(xb);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (std::isfinite(cuts[i + 1])) {
      const QuadResult q = integrate(g, cuts[i], cuts[i + 1], cfg);
      out.value += q.value;
      out.error += q.error;
    } else {
      TailOptions opt;
      opt.first_width = std::max(1.0, std::abs(cuts[i]));
      opt.x_cap = kXCap;
      const TailSeries t = integrate_to_infinity(g, cuts[i], cfg, opt);
      if (t.divergent) {
        out.divergent = true;
        out.decay = t.decay_exponent;
        out.value = kInf;
        return out;
      }
      out.value += t.value;
      out.error += t.error;
    }
  }
  return out;
}

}  // namespace

BallIntegral ball_integral(const RadialProfile& u0, double r, double d, double radius) {
  if (!(r > 0.0)) throw SpecError("ball integral: r must be > 0");
  if (!(d >= 0.0) || !(radius > 0.0)) throw SpecError("ball integral: bad centre or radius");
  const int N = u0.N();
  const double area = sphere_area(N);
  const QuadratureConfig& cfg = u0.config();
  const double sb = std::isfinite(u0.cutoff()) ? u0.cutoff() : -1.0;

  auto full = [&](double x) {
    const double lv = u0.log_value_x(x);
    return lv == -kInf ? 0.0 : area * std::exp(r * lv - N * x);
  };
  auto partial = [&](double x) {
    const double s = std::exp(-x);
    const double fr = sphere_fraction_in_ball(N, s / radius, d / radius);
    if (fr == 0.0) return 0.0;
    const double lv = u0.log_value_x(x);
    return lv == -kInf ? 0.0 : area * fr * std::exp(r * lv - N * x);
  };

  BallIntegral out;
  XIntegral a, b;
  if (d < radius) {
    a = integrate_x(full, 0.0, radius - d, sb, cfg);
    if (d > 0.0) b = integrate_x(partial, radius - d, radius + d, sb, cfg);
  } else {
    b = integrate_x(partial, d - radius, d + radius, sb, cfg);
  }
  out.divergent = a.divergent || b.divergent;
  out.decay_exponent = a.divergent ? a.decay : b.decay;
  out.value = out.divergent ? kInf : a.value + b.value;
  out.error = a.error + b.error;
  return out;
}

std::string to_string(NormMethod m) { return m == NormMethod::RadialReduction ? "radial-reduction" : "grid-sup"; }

ULNormEstimate ul_norm(const RadialProfile& u0, double r, int grid_centers) {
  if (!(r >= 1.0)) throw SpecError("ul norm: r must be >= 1");
  ULNormEstimate out;
  out.r = r;
  const BallIntegral origin = ball_integral(u0, r, 0.0);
  if (origin.divergent) {
    out.value = out.origin_value = kInf;
    out.divergent = true;
    out.divergence_exponent = origin.decay_exponent;
    return out;
  }
  out.origin_value = std::pow(origin.value, 1.0 / r);
  for (int k = 1; k <= grid_centers; ++k) {
    const double d = 3.0 * k / grid_centers;
    const double v = std::pow(ball_integral(u0, r, d).value, 1.0 / r);
    if (v > out.grid_sup) {
      out.grid_sup = v;
      out.center_argmax = d;
    }
  }
  if (out.origin_value >= out.grid_sup * (1.0 - 1e-9)) {
    out.value = out.origin_value;
    out.center_argmax = 0.0;
    out.method = NormMethod::RadialReduction;
  } else {
    out.value = out.grid_sup;
    out.method = NormMethod::GridSup;
  }
  return out;
}

SingularIntegral singular_integrability(const RadialProfile& u0, const Monitor& J, double rho) {
  if (!(rho > 0.0)) throw SpecError("singular integral: rho must be > 0");
  const int N = u0.N();
  const double area = sphere_area(N);
  auto g = [&](double x) {
    const double lv = u0.log_value_x(x);
    if (lv == -kInf) return 0.0;
    return area * std::exp(J.log_value(lv) - N * x);
  };
  const double sb = std::isfinite(u0.cutoff()) ? u0.cutoff() : -1.0;
  const XIntegral xi = integrate_x(g, 0.0, rho, sb, u0.config());
  SingularIntegral out;
  out.value = xi.value;
  out.error = xi.error;
  out.divergent = xi.divergent;
  out.decay_exponent = xi.decay;
  return out;
}

SingularIntegral model_singular_integral(double lambda, double rho, const QuadratureConfig& cfg) {
  if (!(rho > 0.0 && rho < 1.0)) throw SpecError("model integral: rho must lie in (0, 1)");
  const double x0 = x_of(rho);
  TailOptions opt;
  opt.first_width = x0;
  const TailSeries t = integrate_to_infinity([&](double x) { return std::pow(x, -lambda); }, x0, cfg, opt);
  SingularIntegral out;
  out.divergent = t.divergent;
  out.decay_exponent = t.decay_exponent;
  out.value = t.divergent ? kInf : t.value;
  out.error = t.error;
  if (lambda > 1.0) out.closed_form = std::pow(x0, 1.0 - lambda) / (lambda - 1.0);
  return out;
}

ClosureHeuristic closure_membership_heuristic(const RadialProfile& u0, int levels, double threshold) {
  if (levels < 1) throw SpecError("closure heuristic: levels must be >= 1");
  const int N = u0.N();
  const double area = sphere_area(N);
  const double m = std::isfinite(u0.cutoff()) ? u0.cutoff() : std::exp(-1.0);
  ClosureHeuristic out;
  for (int k = 0; k < levels; ++k) {
    const double n = std::ldexp(1.0, k);
    const double xn = n * std::log(2.0) + x_of(m);
    const double l_n = u0.log_value_x(xn);
    auto g = [&](double x) {
      const double lv = u0.log_value_x(x);
      if (lv == -kInf || lv <= l_n) return 0.0;
      return area * std::exp(lv - N * x) * -std::expm1(l_n - lv);
    };
    TailOptions opt;
    opt.first_width = std::max(1.0, xn);
    opt.x_cap = kXCap;
    const TailSeries t = integrate_to_infinity(g, xn, u0.config(), opt);
    if (t.divergent) {
      out.trace.push_back({n, xn, kInf});
      out.status = "divergent";
      return out;
    }
    out.trace.push_back({n, xn, t.value});
  }
  const std::size_t L = out.trace.size();
  const std::size_t need = std::min<std::size_t>(10, L - 1);
  bool monotone = true;
  for (std::size_t i = L - need; i < L; ++i)
    monotone = monotone && out.trace[i].error <= out.trace[i - 1].error * (1.0 + 1e-9) + 1e-300;
  const bool small = out.trace.back().error < threshold;
  out.in_closure_likely = monotone && small;
  out.status = out.in_closure_likely ? "decaying" : "plateau";
  return out;
}

}  // namespace heatlab
