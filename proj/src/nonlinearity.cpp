#include "heatlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatlab/classifier.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/roots.hpp"
#include "logmath.hpp"

namespace heatlab {

namespace {

using detail::kE;
using detail::log_exp_plus;
using detail::log_exp_plus_increment;
using detail::g_derivs;
using detail::GDerivs;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- PowerLaw
double value(const PowerLaw& k, double u) { return k.coef * std::pow(u, k.p); }
double derivative(const PowerLaw& k, double u) {
  if (k.p == 0.0) return 0.0;
  if (u == 0.0) return k.p < 1.0 ? kInf : (k.p == 1.0 ? k.coef : 0.0);
  return k.coef * k.p * std::pow(u, k.p - 1.0);
}
double log_value(const PowerLaw& k, double w) { return std::log(k.coef) + k.p * w; }
double elasticity(const PowerLaw& k, double) { return k.p; }
double log_increment(const PowerLaw& k, double, double y) { return k.p * y; }
std::optional<double> closed_form_F(const PowerLaw& k, double u) {
  if (k.p <= 1.0) return std::nullopt;
  return std::pow(u, 1.0 - k.p) / (k.coef * (k.p - 1.0));
}

// ---- LogPerturbedPower
double value(const LogPerturbedPower& k, double u) {
  if (u == 0.0) return 0.0;
  return std::pow(u, k.p) * std::pow(std::log(u + kE), k.beta);
}
double derivative(const LogPerturbedPower& k, double u) {
  if (u == 0.0) return k.p < 1.0 ? kInf : (k.p == 1.0 ? 1.0 : 0.0);
  const double L = std::log(u + kE);
  return std::pow(u, k.p - 1.0) * std::pow(L, k.beta - 1.0) * (k.p * L + k.beta * u / (u + kE));
}
double log_value(const LogPerturbedPower& k, double w) { return k.p * w + k.beta * std::log(log_exp_plus(w, kE)); }
double elasticity(const LogPerturbedPower& k, double w) {
  const double frac = 1.0 / (1.0 + kE * std::exp(-w));
  return k.p + k.beta * frac / log_exp_plus(w, kE);
}
double log_increment(const LogPerturbedPower& k, double w, double y) {
  const double L0 = log_exp_plus(w, kE);
  const double dL = log_exp_plus_increment(w, y, kE);
  return k.p * y + k.beta * std::log1p(dL / L0);
}
std::optional<double> closed_form_F(const LogPerturbedPower& k, double u) {
  if (k.beta == 0.0 && k.p > 1.0) return std::pow(u, 1.0 - k.p) / (k.p - 1.0);
  return std::nullopt;
}

// ---- ExpPower
double value(const ExpPower& k, double u) { return std::exp(std::pow(u, k.p)); }
double derivative(const ExpPower& k, double u) {
  if (u == 0.0) return k.p < 1.0 ? kInf : (k.p == 1.0 ? 1.0 : 0.0);
  return k.p * std::pow(u, k.p - 1.0) * std::exp(std::pow(u, k.p));
}
double log_value(const ExpPower& k, double w) { return std::exp(k.p * w); }
double elasticity(const ExpPower& k, double w) { return k.p * std::exp(k.p * w); }
double log_increment(const ExpPower& k, double w, double y) {
  const double m = std::expm1(k.p * y);
  return m == 0.0 ? 0.0 : std::exp(k.p * w) * m;
}
std::optional<double> closed_form_F(const ExpPower&, double) { return std::nullopt; }

// ---- ExpLogPower
double phi_exp_log(double p, double w) { return w >= 0.0 ? std::pow(w, p) : -std::pow(-w, p); }
double value(const ExpLogPower& k, double u) {
  if (u == 0.0) return 0.0;
  return std::exp(phi_exp_log(k.p, std::log(u)));
}
double derivative(const ExpLogPower& k, double u) {
  if (u == 0.0) return 0.0;
  const double w = std::log(u);
  return value(k, u) * k.p * std::pow(std::abs(w), k.p - 1.0) / u;
}
double log_value(const ExpLogPower& k, double w) { return phi_exp_log(k.p, w); }
double elasticity(const ExpLogPower& k, double w) { return k.p * std::pow(std::abs(w), k.p - 1.0); }
double log_increment(const ExpLogPower& k, double w, double y) {
  if (w > 0.0) {
    const double m = std::expm1(k.p * std::log1p(y / w));
    return m == 0.0 ? 0.0 : std::pow(w, k.p) * m;
  }
  return phi_exp_log(k.p, w + y) - phi_exp_log(k.p, w);
}
std::optional<double> closed_form_F(const ExpLogPower&, double) { return std::nullopt; }

// ---- Example3
double shift_a(const Example3& k) { return std::exp(2.0 / (k.p - 1.0)); }
double value(const Example3& k, double u) {
  const double A = u + shift_a(k);
  return std::pow(A, k.p) / ((k.p - 1.0) * std::log(A) - 1.0);
}
double derivative(const Example3& k, double u) {
  const double A = u + shift_a(k);
  const double D = (k.p - 1.0) * std::log(A) - 1.0;
  return std::pow(A, k.p - 1.0) * (k.p * D - (k.p - 1.0)) / (D * D);
}
double log_value(const Example3& k, double w) {
  const double lA = log_exp_plus(w, shift_a(k));
  return k.p * lA - std::log((k.p - 1.0) * lA - 1.0);
}
double elasticity(const Example3& k, double w) {
  const double a = shift_a(k);
  const double lA = log_exp_plus(w, a);
  const double D = (k.p - 1.0) * lA - 1.0;
  const double frac = 1.0 / (1.0 + a * std::exp(-w));
  return frac * (k.p * D - (k.p - 1.0)) / D;
}
double log_increment(const Example3& k, double w, double y) {
  const double a = shift_a(k);
  const double lA = log_exp_plus(w, a);
  const double dlA = log_exp_plus_increment(w, y, a);
  const double D = (k.p - 1.0) * lA - 1.0;
  return k.p * dlA - std::log1p((k.p - 1.0) * dlA / D);
}
std::optional<double> closed_form_F(const Example3& k, double u) {
  const double A = u + shift_a(k);
  return std::log(A) / std::pow(A, k.p - 1.0);
}

// ---- IteratedExp: log f = E_{n-1}(u), E_0(u) = u, E_k = exp(E_{k-1}).
double iterate_exp(int m, double u) {
  double x = u;
  for (int i = 0; i < m; ++i) x = std::exp(x);
  return x;
}
double value(const IteratedExp& k, double u) { return iterate_exp(k.n, u); }
double derivative(const IteratedExp& k, double u) {
  double prod = 1.0;
  for (int i = 1; i < k.n; ++i) prod *= iterate_exp(i, u);
  return iterate_exp(k.n, u) * prod;
}
double log_value(const IteratedExp& k, double w) { return iterate_exp(k.n - 1, std::exp(w)); }
double elasticity(const IteratedExp& k, double w) {
  const double u = std::exp(w);
  double prod = u;
  for (int i = 1; i < k.n; ++i) prod *= iterate_exp(i, u);
  return prod;
}
double log_increment(const IteratedExp& k, double w, double y) {
  const double u = std::exp(w);
  double d = u * std::expm1(y);
  for (int i = 1; i < k.n; ++i) {
    const double m = std::expm1(d);
    d = (m == 0.0) ? 0.0 : iterate_exp(i, u) * m;
  }
  return d;
}
std::optional<double> closed_form_F(const IteratedExp&, double) { return std::nullopt; }

// ---- LogCorrectedCritical
double log_g_inverse(const LogCorrectedCritical& k, double w) { return detail::log_g_inverse(k.alpha, w); }
double value(const LogCorrectedCritical& k, double u) {
  if (u == 0.0) return 0.0;
  const double v = std::exp(log_g_inverse(k, std::log(u)));
  return 0.5 * k.N * g_derivs(k.alpha, v).g1 * std::pow(v, 1.0 + 2.0 / k.N);
}
double elasticity(const LogCorrectedCritical& k, double w) {
  const double t = log_g_inverse(k, w);
  const double v = std::exp(t);
  const GDerivs d = g_derivs(k.alpha, v);
  const double g = std::exp(w);
  return g / d.g1 * (d.g2 / d.g1 + (1.0 + 2.0 / k.N) / v);
}
double derivative(const LogCorrectedCritical& k, double u) {
  if (u == 0.0) return 0.0;
  return value(k, u) * elasticity(k, std::log(u)) / u;
}
double log_value(const LogCorrectedCritical& k, double w) {
  const double t = log_g_inverse(k, w);
  return std::log(0.5 * k.N) + std::log(g_derivs(k.alpha, std::exp(t)).g1) + (1.0 + 2.0 / k.N) * t;
}
double log_increment(const LogCorrectedCritical& k, double w, double y) { return log_value(k, w + y) - log_value(k, w); }
std::optional<double> closed_form_F(const LogCorrectedCritical& k, double u) {
  return std::exp(-2.0 / k.N * log_g_inverse(k, std::log(u)));
}

// ---- Tabulated
std::size_t table_cell(const Tabulated& k, double u) {
  if (!(u >= k.u.front() && u <= k.u.back()))
    throw OutOfRange("tabulated nonlinearity evaluated outside its sample range");
  auto it = std::upper_bound(k.u.begin(), k.u.end(), u);
  std::size_t i = static_cast<std::size_t>(it - k.u.begin());
  return std::clamp<std::size_t>(i, 1, k.u.size() - 1) - 1;
}
double table_slope(const Tabulated& k, std::size_t i) {
  return std::log(k.f[i + 1] / k.f[i]) / std::log(k.u[i + 1] / k.u[i]);
}
double value(const Tabulated& k, double u) {
  const std::size_t i = table_cell(k, u);
  return k.f[i] * std::pow(u / k.u[i], table_slope(k, i));
}
double elasticity(const Tabulated& k, double w) { return table_slope(k, table_cell(k, std::exp(w))); }
double derivative(const Tabulated& k, double u) { return value(k, u) * elasticity(k, std::log(u)) / u; }
double log_value(const Tabulated& k, double w) { return std::log(value(k, std::exp(w))); }
double log_increment(const Tabulated& k, double w, double y) { return log_value(k, w + y) - log_value(k, w); }
std::optional<double> closed_form_F(const Tabulated&, double) { return std::nullopt; }

void validate(const PowerLaw& k) {
  if (!(k.p >= 0.0)) throw SpecError("Power: p must be >= 0");
  if (!(k.coef > 0.0)) throw SpecError("Power: coef must be > 0");
}
void validate(const LogPerturbedPower& k) {
  if (!(k.p > 0.0)) throw SpecError("LogPerturbedPower: p must be > 0");
  const double floor = -k.p * solve_kappa().value;
  if (!(k.beta >= floor))
    throw SpecError("LogPerturbedPower: beta below the monotonicity floor -p*kappa = " + std::to_string(floor));
}
void validate(const ExpPower& k) {
  if (!(k.p > 0.0)) throw SpecError("ExpPower: p must be > 0");
}
void validate(const ExpLogPower& k) {
  if (!(k.p > 1.0)) throw SpecError("ExpLogPower: p must be > 1");
}
void validate(const Example3& k) {
  if (!(k.p > 1.0)) throw SpecError("Example3: p must be > 1");
}
void validate(const IteratedExp& k) {
  if (k.n < 1) throw SpecError("IteratedExp: n must be >= 1");
}
void validate(const LogCorrectedCritical& k) {
  if (k.N < 1) throw SpecError("LogCorrectedCritical: N must be >= 1");
  if (!(k.alpha >= 0.0)) throw SpecError("LogCorrectedCritical: alpha must be >= 0");
}
void validate(const Tabulated& k) {
  if (k.u.size() != k.f.size() || k.u.size() < 2) throw SpecError("Tabulated: need matching u and f with >= 2 samples");
  for (std::size_t i = 0; i < k.u.size(); ++i) {
    if (!(k.u[i] > 0.0) || !(k.f[i] > 0.0)) throw SpecError("Tabulated: samples must be positive");
    if (i > 0 && !(k.u[i] > k.u[i - 1])) throw SpecError("Tabulated: u must be strictly increasing");
    if (i > 0 && k.f[i] < k.f[i - 1]) throw SpecError("Tabulated: f must be nondecreasing");
  }
}

struct NameOf {
  std::string operator()(const PowerLaw&) const { return "Power"; }
  std::string operator()(const LogPerturbedPower&) const { return "LogPerturbedPower"; }
  std::string operator()(const ExpPower&) const { return "ExpPower"; }
  std::string operator()(const ExpLogPower&) const { return "ExpLogPower"; }
  std::string operator()(const Example3&) const { return "Example3"; }
  std::string operator()(const IteratedExp&) const { return "IteratedExp"; }
  std::string operator()(const LogCorrectedCritical&) const { return "LogCorrectedCritical"; }
  std::string operator()(const Tabulated&) const { return "Tabulated"; }
};

}  // namespace

Nonlinearity::Nonlinearity(NonlinearityKind kind, double u_min) : kind_(std::move(kind)), u_min_(u_min) {
  if (!(u_min >= 0.0)) throw SpecError("u_min must be >= 0");
  std::visit([](const auto& k) { validate(k); }, kind_);
}

Nonlinearity Nonlinearity::f_beta(int N, double beta) {
  if (N < 1) throw SpecError("f_beta: N must be >= 1");
  return Nonlinearity(LogPerturbedPower{1.0 + 2.0 / N, beta});
}

std::string Nonlinearity::kind_name() const { return std::visit(NameOf{}, kind_); }

double Nonlinearity::value(double u) const {
  if (!(u >= 0.0)) throw SpecError("f evaluated at negative u");
  return std::visit([u](const auto& k) { return heatlab::value(k, u); }, kind_);
}
double Nonlinearity::derivative(double u) const {
  if (!(u >= 0.0)) throw SpecError("f' evaluated at negative u");
  return std::visit([u](const auto& k) { return heatlab::derivative(k, u); }, kind_);
}
double Nonlinearity::log_value(double w) const {
  return std::visit([w](const auto& k) { return heatlab::log_value(k, w); }, kind_);
}
double Nonlinearity::elasticity(double w) const {
  return std::visit([w](const auto& k) { return heatlab::elasticity(k, w); }, kind_);
}
double Nonlinearity::log_increment(double w, double y) const {
  if (y == 0.0) return 0.0;
  return std::visit([w, y](const auto& k) { return heatlab::log_increment(k, w, y); }, kind_);
}
std::optional<double> Nonlinearity::closed_form_F(double u) const {
  return std::visit([u](const auto& k) { return heatlab::closed_form_F(k, u); }, kind_);
}
bool Nonlinearity::rapidly_varying() const {
  return std::holds_alternative<ExpPower>(kind_) || std::holds_alternative<ExpLogPower>(kind_) ||
         std::holds_alternative<IteratedExp>(kind_);
}
ProbeGrid Nonlinearity::default_probe() const {
  if (const auto* it = std::get_if<IteratedExp>(&kind_); it && it->n >= 2) return {1.0, std::pow(2.0, 0.25), 21};
  // Logarithmic corrections decay like 1/log u; sample far out where the series in 1/log u is short.
  if (std::holds_alternative<LogPerturbedPower>(kind_) || std::holds_alternative<LogCorrectedCritical>(kind_))
    return {1e10, 1e14, 21};
  return {};
}

double eval_f(const Nonlinearity& f, double u) { return f.value(u); }
double eval_fprime(const Nonlinearity& f, double u) { return f.derivative(u); }

double fd_derivative(const Nonlinearity& f, double u, const QuadratureConfig& cfg) {
  const double h = std::max(u, 1.0) * cfg.fd_rel_step;
  if (u - h < 0.0) return (f.value(u + h) - f.value(u)) / h;
  return (f.value(u + h) - f.value(u - h)) / (2.0 * h);
}

double fd_second_derivative(const Nonlinearity& f, double u, const QuadratureConfig& cfg) {
  const double h = std::max(u, 1.0) * std::sqrt(cfg.fd_rel_step) * 1e-1;
  const double lo = std::max(u - h, 0.0);
  const double c = lo + h;
  return (f.value(c + h) - 2.0 * f.value(c) + f.value(lo)) / (h * h);
}

TailValue tail_at_log(const Nonlinearity& f, double w, const QuadratureConfig& cfg) {
  if (f.tabulated()) throw OutOfRange("F is undefined for a tabulated nonlinearity: its tail lies beyond the samples");
  cfg.validate();
  TailTransform mode = cfg.tail_transform;
  if (mode == TailTransform::Automatic) mode = f.rapidly_varying() ? TailTransform::Exponential : TailTransform::Reciprocal;
  TailValue out;
  out.u = std::exp(w);
  const double a = f.elasticity(w);
  if (mode == TailTransform::Reciprocal) {
    // tau = u / s: F f(u) / u = int_0^1 exp(2y - (log f(tau) - log f(u))) ds, y = -log s
    auto h = [&](double y) { return y - f.log_increment(w, y); };
    // e^h(y) is the integrand in y = log(tau/u). No power gap and a decay no faster than 1/y per decade of y
    // both mean divergence.
    const double d1 = h(3.0) - h(30.0), d2 = h(30.0) - h(300.0);
    const bool log_like = d2 <= 1.5 * d1 + 1e-12 && d2 <= std::numbers::ln10 * 1.02;
    if (h(230.0) - h(23.0) >= std::log(0.99) || log_like)
      throw DivergentTail("F(u) diverges: 1/f is not integrable at infinity (" + f.kind_name() + ")");
    auto g = [&](double s) {
      const double y = -std::log(s);
      return std::exp(2.0 * y - f.log_increment(w, y));
    };
    QuadResult r = integrate(g, 0.0, 1.0, cfg);
    if (!r.converged)
      throw QuadratureFailure("F quadrature did not converge at u = " + std::to_string(out.u) + " (" + f.kind_name() + ")");
    out.scaled = r.value;
    out.rel_error = r.error / std::abs(r.value);
    out.fprime_F = a * out.scaled;
  } else {
    // tau = u e^(z/b) with b the local elasticity: f'F = (a/b) int_0^inf exp(z/b - (log f(tau) - log f(u))) dz
    const double b = std::max(a, 1.0);
    auto g = [&](double z) {
      const double y = z / b;
      return std::exp(y - f.log_increment(w, y));
    };
    TailSeries ts = integrate_to_infinity(g, 0.0, cfg);
    if (ts.divergent) throw DivergentTail("F(u) diverges (" + f.kind_name() + ")");
    if (!ts.converged || !std::isfinite(ts.value))
      throw QuadratureFailure("F quadrature did not converge at u = " + std::to_string(out.u) + " (" + f.kind_name() + ")");
    out.scaled = ts.value / b;
    out.rel_error = ts.error / std::abs(ts.value);
    out.fprime_F = a * out.scaled;
  }
  out.log_F = w + std::log(out.scaled) - f.log_value(w);
  out.F = std::exp(out.log_F);
  return out;
}

TailValue tail_at(const Nonlinearity& f, double u, const QuadratureConfig& cfg) {
  if (!(u > 0.0)) throw SpecError("F requires u > 0");
  return tail_at_log(f, std::log(u), cfg);
}

double eval_F(const Nonlinearity& f, double u, const QuadratureConfig& cfg) { return tail_at(f, u, cfg).F; }

double F_at_zero(const Nonlinearity& f, const QuadratureConfig& cfg) {
  if (f.tabulated()) throw OutOfRange("F is undefined for a tabulated nonlinearity");
  const double f0 = f.value(0.0);
  if (f0 == 0.0) return kInf;
  QuadResult r = integrate([&](double t) { return 1.0 / f.value(t); }, 0.0, 1.0, cfg);
  return r.value + eval_F(f, 1.0, cfg);
}

double log_F_inverse(const Nonlinearity& f, double log_v, const QuadratureConfig& cfg, double w_guess) {
  double lo = -kInf, hi = kInf;
  double w = w_guess;
  const double tol = 1e-13;
  for (int it = 0; it < 200; ++it) {
    const TailValue t = tail_at_log(f, w, cfg);
    const double G = log_v - t.log_F;  // increasing in w with slope 1 / scaled
    if (std::abs(G) <= tol * std::max(1.0, std::abs(log_v))) return w;
    if (G > 0.0)
      hi = w;
    else
      lo = w;
    double next = w - G * t.scaled;
    const double cap = 8.0 * std::max(1.0, std::abs(w));
    if (!std::isfinite(next)) next = G > 0.0 ? w - cap : w + cap;
    next = std::clamp(next, w - cap, w + cap);
    if (std::isfinite(lo) && std::isfinite(hi) && !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 1e-15 * std::max(1.0, std::abs(w))) return next;
    if (lo < -1e6 && !std::isfinite(hi) && G < 0.0) break;
    w = next;
  }
  throw OutOfRange("F^{-1}: value outside the attainable range of F");
}

double eval_F_inverse(const Nonlinearity& f, double v, const QuadratureConfig& cfg) {
  if (!(v > 0.0)) throw SpecError("F^{-1} requires v > 0");
  const double F0 = F_at_zero(f, cfg);
  if (std::isfinite(F0) && v >= F0) throw OutOfRange("F^{-1}: v >= F(0) is not attained");
  return std::exp(log_F_inverse(f, std::log(v), cfg));
}

BoundCheck check_fF_bound(const Nonlinearity& f, double q, double lo, double hi, const QuadratureConfig& cfg, double slack,
                          int per_decade) {
  if (!(lo > 0.0 && hi > lo)) throw SpecError("check_fF_bound: window must satisfy 0 < lo < hi");
  BoundCheck out;
  out.worst_margin = -kInf;
  const int n = std::max(2, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1);
  for (int i = 0; i < n; ++i) {
    const double w = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1);
    const double m = tail_at_log(f, w, cfg).fprime_F - q;
    if (m > out.worst_margin) {
      out.worst_margin = m;
      out.worst_u = std::exp(w);
    }
  }
  out.holds = out.worst_margin <= slack * std::max(1.0, q);
  return out;
}

ExponentProfile exponent_profile(const Nonlinearity& f, const QuadratureConfig& cfg, std::optional<ProbeGrid> grid) {
  const ProbeGrid g = grid.value_or(f.default_probe());
  ExponentProfile out;
  std::vector<double> us, qs, ps;
  for (int k = 0; k < g.count; ++k) {
    const double u = g.start * std::pow(g.ratio, k);
    const double w = std::log(u);
    const double a = f.elasticity(w);
    if (!std::isfinite(a) || !std::isfinite(f.log_value(w))) break;
    TailValue t;
    try {
      t = tail_at_log(f, w, cfg);
    } catch (const QuadratureFailure&) {
      break;
    }
    if (!std::isfinite(t.fprime_F)) break;
    out.samples.push_back({u, f.value(u), f.derivative(u), t.F, t.fprime_F, a});
    us.push_back(u);
    qs.push_back(t.fprime_F);
    ps.push_back(a);
  }
  if (us.size() < 6) throw NumericalError("exponent_profile: fewer than 6 finite samples on the probe grid");
  out.q_limit = extrapolate_limit(us, qs);
  out.p_limit = extrapolate_limit(us, ps);
  out.q_estimate = out.q_limit.value;
  out.p_estimate = out.p_limit.value;
  const bool p_infinite = out.p_limit.kind == LimitKind::Divergent && out.p_estimate > 0.0;
  if (p_infinite) out.p_estimate = kInf;
  const double inv_p = p_infinite ? 0.0 : 1.0 / out.p_estimate;
  out.conjugacy_residual = std::abs(inv_p + 1.0 / out.q_estimate - 1.0);
  out.converged = out.q_limit.converged() && (out.p_limit.converged() || p_infinite);
  double margin = -kInf;
  for (std::size_t i = qs.size() / 2; i < qs.size(); ++i) margin = std::max(margin, qs[i] - out.q_estimate);
  out.bound_margin = margin;
  out.bound_holds_fFq = margin <= 1e-9 * std::max(1.0, out.q_estimate);
  return out;
}

KaramataProfile karamata_profile(const Nonlinearity& f, const QuadratureConfig& cfg, double base_point,
                                 std::optional<ProbeGrid> grid) {
  if (!(base_point > 0.0)) throw SpecError("karamata_profile: base point must be > 0");
  const ProbeGrid g = grid.value_or(f.default_probe());
  KaramataProfile out;
  out.base_point = base_point;
  const double w0 = std::log(base_point);
  const double logf0 = f.log_value(w0);
  double residual = 0.0;
  for (int k = 0; k < g.count; ++k) {
    const double u = g.start * std::pow(g.ratio, k);
    const double w = std::log(u);
    const double a = f.elasticity(w);
    const double lf = f.log_value(w);
    if (!std::isfinite(a) || !std::isfinite(lf)) break;
    QuadResult r = integrate([&](double t) { return f.elasticity(t); }, w0, w, cfg);
    const double log_b = lf - r.value;
    out.u.push_back(u);
    out.a.push_back(a);
    out.b.push_back(std::exp(log_b));
    // a is the exact elasticity, so b must reproduce f(base_point)
    residual = std::max(residual, std::abs(log_b - logf0) / std::max(1.0, std::abs(lf)));
  }
  out.representation_residual = residual;

  std::vector<double> us, idx2;
  bool rapid = false;
  for (int k = 0; k <= 10; ++k) {
    const double u = std::pow(10.0, 6.0 + 0.2 * k);
    const double w = std::log(u);
    const double r2 = f.log_increment(w, std::log(2.0)) / std::log(2.0);
    const double r4 = f.log_increment(w, std::log(4.0)) / std::log(4.0);
    out.ratio_tests.emplace_back(u, r2);
    out.ratio_tests.emplace_back(u, r4);
    if (!std::isfinite(r2) || !std::isfinite(r4) || r2 > 1e3) rapid = true;
    us.push_back(u);
    idx2.push_back(r2);
  }
  if (rapid) {
    out.rv_index = kInf;
    return out;
  }
  const LimitEstimate lim = extrapolate_limit(us, idx2);
  out.rv_index = (lim.kind == LimitKind::Divergent && lim.value > 0.0) ? kInf : lim.value;
  return out;
}

}  // namespace heatlab
