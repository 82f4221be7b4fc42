#include "heatlab/roots.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "heatlab/errors.hpp"

namespace heatlab {

RootResult brent(const std::function<double(double)>& g, double a, double b, double xtol, int max_iter) {
  double fa = g(a), fb = g(b);
  RootResult out;
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  if ((fa > 0.0) == (fb > 0.0)) throw NumericalError("brent: interval does not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return {b, fb, it, true};
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = g(b);
  }
  out = {b, fb, max_iter, false};
  return out;
}

RootResult safeguarded_newton(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                              double lo, double hi, double x0, double xtol, int max_iter) {
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int it = 1; it <= max_iter; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return {x, 0.0, it, true};
    if (gx > 0.0)
      hi = x;
    else
      lo = x;
    const double slope = dg(x);
    double next = x - gx / slope;
    if (!(slope > 0.0) || !std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= xtol * std::max(1.0, std::abs(x)) || (hi - lo) <= xtol * std::max(1.0, std::abs(x)))
      return {x, g(x), it, true};
  }
  return {x, g(x), max_iter, false};
}

bool expand_bracket(const std::function<double(double)>& g, double& lo, double& hi, int max_steps) {
  double glo = g(lo), ghi = g(hi);
  for (int i = 0; i < max_steps; ++i) {
    if (glo <= 0.0 && ghi >= 0.0) return true;
    const double w = hi - lo;
    if (glo > 0.0) {
      lo -= w;
      glo = g(lo);
    }
    if (ghi < 0.0) {
      hi += w;
      ghi = g(hi);
    }
  }
  return glo <= 0.0 && ghi >= 0.0;
}

}  // namespace heatlab
