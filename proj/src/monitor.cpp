#include "heatlab/monitor.hpp"

#include <cmath>
#include <limits>

#include "heatlab/errors.hpp"
#include "logmath.hpp"

namespace heatlab {

namespace {

using detail::g_derivs;
using detail::kE;
using detail::log_exp_plus;

struct MonitorName {
  std::string operator()(const IdentityMonitor&) const { return "Identity"; }
  std::string operator()(const PowerMonitor&) const { return "Power"; }
  std::string operator()(const LogWeightMonitor&) const { return "LogWeight"; }
  std::string operator()(const FNegPowerMonitor&) const { return "FNegPower"; }
  std::string operator()(const JAlphaMonitor&) const { return "JAlpha"; }
};

struct Derivs {
  double j0, j1, j2;
};

}  // namespace

Monitor::Monitor(MonitorKind kind, std::optional<Nonlinearity> f, QuadratureConfig cfg)
    : kind_(std::move(kind)), f_(std::move(f)), cfg_(cfg) {
  const bool needs_f = std::holds_alternative<FNegPowerMonitor>(kind_) || std::holds_alternative<JAlphaMonitor>(kind_);
  if (needs_f && !f_) throw SpecError("monitor " + name() + " requires a nonlinearity");
  if (const auto* p = std::get_if<PowerMonitor>(&kind_); p && !(p->r > 0.0)) throw SpecError("Power monitor: r must be > 0");
  if (const auto* p = std::get_if<FNegPowerMonitor>(&kind_); p && !(p->r > 0.0))
    throw SpecError("FNegPower monitor: r must be > 0");
  if (const auto* p = std::get_if<LogWeightMonitor>(&kind_); p && !(p->gamma >= 0.0))
    throw SpecError("LogWeight monitor: gamma must be >= 0");
  if (const auto* p = std::get_if<JAlphaMonitor>(&kind_); p && (p->N < 1 || !(p->alpha >= 0.0)))
    throw SpecError("JAlpha monitor: need N >= 1 and alpha >= 0");
}

std::string Monitor::name() const { return std::visit(MonitorName{}, kind_); }

namespace {

Derivs derivs(const MonitorKind& kind, const std::optional<Nonlinearity>& f, const QuadratureConfig& cfg, double u) {
  if (std::holds_alternative<IdentityMonitor>(kind)) return {u, 1.0, 0.0};
  if (const auto* p = std::get_if<PowerMonitor>(&kind)) {
    const double r = p->r;
    return {std::pow(u, r), r * std::pow(u, r - 1.0), r * (r - 1.0) * std::pow(u, r - 2.0)};
  }
  if (const auto* p = std::get_if<LogWeightMonitor>(&kind)) {
    const auto g = g_derivs(p->gamma, u);
    return {g.g0, g.g1, g.g2};
  }
  const TailValue t = tail_at(*f, u, cfg);
  const double uFf = u * t.scaled;  // F(u) f(u)
  if (const auto* p = std::get_if<FNegPowerMonitor>(&kind)) {
    const double j0 = std::exp(-p->r * t.log_F);
    const double j1 = p->r * j0 / uFf;
    const double j2 = j1 * (p->r + 1.0 - t.fprime_F) / uFf;
    return {j0, j1, j2};
  }
  const auto& ja = std::get<JAlphaMonitor>(kind);
  const double half_n = 0.5 * ja.N;
  const double h = std::exp(-half_n * t.log_F);
  const double h1 = half_n * h / uFf;
  const double h2 = h1 * (half_n + 1.0 - t.fprime_F) / uFf;
  const auto g = g_derivs(ja.alpha, h);
  return {g.g0, g.g1 * h1, g.g2 * h1 * h1 + g.g1 * h2};
}

}  // namespace

double Monitor::value(double u) const { return derivs(kind_, f_, cfg_, u).j0; }
double Monitor::d1(double u) const { return derivs(kind_, f_, cfg_, u).j1; }
double Monitor::d2(double u) const { return derivs(kind_, f_, cfg_, u).j2; }
double Monitor::d3(double u) const {
  if (const auto* p = std::get_if<PowerMonitor>(&kind_))
    return p->r * (p->r - 1.0) * (p->r - 2.0) * std::pow(u, p->r - 3.0);
  if (std::holds_alternative<IdentityMonitor>(kind_)) return 0.0;
  const double h = std::max(u, 1.0) * 1e-4;
  return (d2(u + h) - d2(u - h)) / (2.0 * h);
}

double Monitor::log_value(double w) const {
  if (std::holds_alternative<IdentityMonitor>(kind_)) return w;
  if (const auto* p = std::get_if<PowerMonitor>(&kind_)) return p->r * w;
  if (const auto* p = std::get_if<LogWeightMonitor>(&kind_)) return w + p->gamma * std::log(log_exp_plus(w, kE));
  const double log_F = tail_at_log(*f_, w, cfg_).log_F;
  if (const auto* p = std::get_if<FNegPowerMonitor>(&kind_)) return -p->r * log_F;
  const auto& ja = std::get<JAlphaMonitor>(kind_);
  const double lh = -0.5 * ja.N * log_F;
  return lh + ja.alpha * std::log(log_exp_plus(lh, kE));
}

double Monitor::log_d1(double w) const {
  if (std::holds_alternative<IdentityMonitor>(kind_)) return 0.0;
  if (const auto* p = std::get_if<PowerMonitor>(&kind_)) return std::log(p->r) + (p->r - 1.0) * w;
  if (const auto* p = std::get_if<LogWeightMonitor>(&kind_)) {
    const double L = log_exp_plus(w, kE);
    const double frac = 1.0 / (1.0 + kE * std::exp(-w));
    return p->gamma * std::log(L) + std::log1p(p->gamma * frac / L);
  }
  const TailValue t = tail_at_log(*f_, w, cfg_);
  const double log_uFf = w + std::log(t.scaled);
  if (const auto* p = std::get_if<FNegPowerMonitor>(&kind_)) return std::log(p->r) - p->r * t.log_F - log_uFf;
  const auto& ja = std::get<JAlphaMonitor>(kind_);
  const double lh = -0.5 * ja.N * t.log_F;
  const double log_h1 = std::log(0.5 * ja.N) + lh - log_uFf;
  const double L = log_exp_plus(lh, kE);
  const double frac = 1.0 / (1.0 + kE * std::exp(-lh));
  return log_h1 + ja.alpha * std::log(L) + std::log1p(ja.alpha * frac / L);
}

double Monitor::at_zero() const {
  if (!f_ || std::holds_alternative<IdentityMonitor>(kind_) || std::holds_alternative<PowerMonitor>(kind_) ||
      std::holds_alternative<LogWeightMonitor>(kind_))
    return 0.0;
  const double F0 = F_at_zero(*f_, cfg_);
  if (!std::isfinite(F0)) return 0.0;
  if (const auto* p = std::get_if<FNegPowerMonitor>(&kind_)) return std::pow(F0, -p->r);
  const auto& ja = std::get<JAlphaMonitor>(kind_);
  return g_derivs(ja.alpha, std::pow(F0, -0.5 * ja.N)).g0;
}

double Monitor::inverse(double y) const {
  const double j0 = at_zero();
  if (!(y >= j0)) throw OutOfRange("J^{-1}: argument below J(0)");
  if (y == j0) return 0.0;
  if (std::holds_alternative<IdentityMonitor>(kind_)) return y;
  if (const auto* p = std::get_if<PowerMonitor>(&kind_)) return std::pow(y, 1.0 / p->r);
  if (const auto* p = std::get_if<LogWeightMonitor>(&kind_)) return std::exp(detail::log_g_inverse(p->gamma, std::log(y)));
  if (const auto* p = std::get_if<FNegPowerMonitor>(&kind_)) return std::exp(log_F_inverse(*f_, -std::log(y) / p->r, cfg_));
  const auto& ja = std::get<JAlphaMonitor>(kind_);
  const double lh = detail::log_g_inverse(ja.alpha, std::log(y));
  return std::exp(log_F_inverse(*f_, -2.0 / ja.N * lh, cfg_));
}

}  // namespace heatlab
