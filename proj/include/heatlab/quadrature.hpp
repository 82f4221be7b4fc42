#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace heatlab {

enum class TailTransform { Automatic, Reciprocal, Exponential };

struct QuadratureConfig {
  double abs_tol = 1e-300;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
  TailTransform tail_transform = TailTransform::Automatic;
  double fd_rel_step = 1e-6;  // central differences use h = max(u,1) * fd_rel_step

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G10/K21) on a finite interval [a, b].
/// Never evaluates the integrand at the endpoints.
QuadResult integrate(const Integrand& g, double a, double b, const QuadratureConfig& cfg);

// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre_rule(int order);

/// Fixed-order Gauss-Legendre rule on [a, b]; order must be 4 or 8.
double gauss_legendre(const Integrand& g, double a, double b, int order);

struct TailOptions {
  int max_panels = 1200;
  double x_cap = 1e280;
  double first_width = 1.0;
  int min_panels = 4;
};

// Result of integrating over [x0, inf) with doubling panels.
struct TailSeries {
  double value = 0.0;
  double error = 0.0;
  double ratio = 0.0;             // last ratio of successive panel contributions
  double decay_exponent = 0.0;    // lambda in an x^-lambda fit of the integrand
  bool divergent = false;
  bool extrapolated = false;
  bool converged = false;
  std::vector<std::pair<double, double>> panels;  // (right boundary, contribution)
};

/// Integrates g over [x0, inf). Panels are [x0 + w(2^k - 1), x0 + w(2^{k+1} - 1)].
/// Algebraic tails are summed until negligible or closed by a geometric extrapolation
/// of the panel contributions; ratios that stay at or above one are reported divergent.
TailSeries integrate_to_infinity(const Integrand& g, double x0, const QuadratureConfig& cfg,
                                 const TailOptions& opt = {});

}  // namespace heatlab
