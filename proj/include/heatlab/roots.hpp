#pragma once

#include <functional>

namespace heatlab {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method on a sign-changing bracket [a, b]. Throws NumericalError without a sign change.
RootResult brent(const std::function<double(double)>& g, double a, double b, double xtol = 1e-14,
                 int max_iter = 300);

/// Root of an increasing function g on [lo, hi] using Newton steps from x0, falling back to
/// bisection whenever a step leaves the current bracket. dg must be positive.
RootResult safeguarded_newton(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                              double lo, double hi, double x0, double xtol = 1e-14, int max_iter = 200);

/// Grows [lo, hi] geometrically about its midpoint until an increasing g changes sign.
/// Returns false if no bracket was found within max_steps doublings.
bool expand_bracket(const std::function<double(double)>& g, double& lo, double& hi, int max_steps = 60);

}  // namespace heatlab
