#pragma once

#include <cmath>
#include <algorithm>
#include <numbers>

#include "heatlab/roots.hpp"

namespace heatlab::detail {

constexpr double kE = std::numbers::e;

// log(e^w + c) for c > 0 without overflow.
inline double log_exp_plus(double w, double c) {
  const double lc = std::log(c);
  return w > lc ? w + std::log1p(c * std::exp(-w)) : lc + std::log1p(std::exp(w - lc));
}

// log(e^(w+y) + c) - log(e^w + c), accurate for small y.
inline double log_exp_plus_increment(double w, double y, double c) {
  const double lc = std::log(c);
  if (w > lc) return y + std::log1p(c * std::exp(-w - y)) - std::log1p(c * std::exp(-w));
  const double ew = std::exp(w);
  return std::log1p(ew * std::expm1(y) / (ew + c));
}

struct GDerivs {
  double g0, g1, g2;
};

// g(v) = v [log(v+e)]^alpha and its first two derivatives.
inline GDerivs g_derivs(double alpha, double v) {
  const double s = v + kE;
  const double L = std::log(s);
  const double g0 = v * std::pow(L, alpha);
  const double g1 = std::pow(L, alpha) + alpha * v * std::pow(L, alpha - 1.0) / s;
  const double g2 = alpha * std::pow(L, alpha - 2.0) / s * (2.0 * L - v * L / s + (alpha - 1.0) * v / s);
  return {g0, g1, g2};
}

// t = log v solving log g(v) = w for g(v) = v [log(v+e)]^alpha.
inline double log_g_inverse(double alpha, double w) {
  auto G = [&](double t) { return t + alpha * std::log(log_exp_plus(t, kE)) - w; };
  auto dG = [&](double t) {
    const double frac = 1.0 / (1.0 + kE * std::exp(-t));
    return 1.0 + alpha * frac / log_exp_plus(t, kE);
  };
  double lo = w - 1.0 - alpha * std::log(std::max(std::abs(w), 1.0) + 2.0) - 2.0;
  double hi = w + 1.0;
  expand_bracket(G, lo, hi);
  return safeguarded_newton(G, dG, lo, hi, w - alpha * std::log(log_exp_plus(w, kE)), 1e-15).x;
}

}  // namespace heatlab::detail
