#include "heatlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatlab/errors.hpp"

namespace heatlab {

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Constant: return "constant";
    case LimitKind::Geometric: return "geometric";
    case LimitKind::Logarithmic: return "logarithmic";
    case LimitKind::Divergent: return "divergent";
    case LimitKind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double neville_at_zero(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> p(ys);
  const std::size_t n = xs.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
  return p[0];
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

LimitEstimate extrapolate_limit(const std::vector<double>& us, const std::vector<double>& ys) {
  if (us.size() != ys.size() || us.size() < 6) throw SpecError("extrapolate_limit needs at least 6 samples");
  const std::size_t n = ys.size();
  LimitEstimate out;
  const double scale = std::max(1.0, std::abs(ys.back()));
  std::vector<double> d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) d[k] = ys[k + 1] - ys[k];

  double tail_max = 0.0;
  for (std::size_t k = n - 6; k + 1 < n; ++k) tail_max = std::max(tail_max, std::abs(d[k]));
  if (tail_max <= 1e-10 * scale) {
    out.kind = LimitKind::Constant;
    out.value = ys.back();
    out.error = tail_max;
    return out;
  }

  // Geometric decay of increments: y = L + c u^-g on a geometric grid.
  {
    bool ok = true;
    std::vector<double> rho;
    for (std::size_t k = n - 4; k + 1 < n; ++k) {
      if (d[k - 1] == 0.0) {
        ok = false;
        break;
      }
      rho.push_back(d[k] / d[k - 1]);
    }
    if (ok) {
      for (double r : rho) ok = ok && r > 0.0 && r < 0.9;
      for (std::size_t i = 1; ok && i < rho.size(); ++i) ok = std::abs(rho[i] - rho[i - 1]) < 0.05;
    }
    if (ok) {
      const double r = rho.back(), rp = rho[rho.size() - 2];
      const double est = ys.back() + d.back() * r / (1.0 - r);
      const double est_prev = ys[n - 2] + d[n - 3] * rp / (1.0 - rp);
      out.kind = LimitKind::Geometric;
      out.value = est;
      out.error = std::abs(est - est_prev) + 1e-14 * scale;
      out.rate = -std::log(r) / std::log(us[n - 1] / us[n - 2]);
      return out;
    }
  }

  // Decay exponent of the increments against log u.
  std::vector<double> ll, ld;
  bool same_sign = true;
  for (std::size_t k = n - 7; k + 1 < n; ++k) {
    if (d[k] == 0.0 || (d[k] > 0.0) != (d.back() > 0.0)) same_sign = false;
    ll.push_back(std::log(std::log(us[k + 1])));
    ld.push_back(std::log(std::abs(d[k]) + 1e-300));
  }
  const double sigma = fit_slope(ll, ld);
  if (same_sign && sigma < -1.2) {
    double g = -sigma - 1.0;
    if (std::abs(g - std::round(g)) < 0.2) g = std::round(g);
    g = std::clamp(g, 0.25, 4.0);
    std::vector<double> t6, y6, t5, y5;
    for (std::size_t k = n - 1, c = 0; c < 6; k -= 2, ++c) {
      t6.push_back(std::pow(std::log(us[k]), -g));
      y6.push_back(ys[k]);
      if (c < 5) {
        t5.push_back(t6.back());
        y5.push_back(ys[k]);
      }
      if (k < 2) break;
    }
    const double e6 = neville_at_zero(t6, y6);
    const double e5 = neville_at_zero(t5, y5);
    out.kind = LimitKind::Logarithmic;
    out.value = e6;
    out.error = std::abs(e6 - e5);
    out.rate = g;
    return out;
  }

  bool monotone = same_sign;
  if (monotone && sigma >= -1.2) {
    out.kind = LimitKind::Divergent;
    out.value = d.back() > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    out.error = std::numeric_limits<double>::infinity();
    out.rate = sigma;
    return out;
  }
  out.kind = LimitKind::Inconclusive;
  out.value = ys.back();
  out.error = tail_max;
  return out;
}

}  // namespace heatlab
