#pragma once

#include <string>
#include <vector>

namespace heatlab {

enum class LimitKind { Constant, Geometric, Logarithmic, Divergent, Inconclusive };

std::string to_string(LimitKind k);

struct LimitEstimate {
  double value = 0.0;
  double error = 0.0;
  LimitKind kind = LimitKind::Inconclusive;
  double rate = 0.0;  // algebraic rate in u (Geometric) or power of log u (Logarithmic)
  bool converged() const { return kind == LimitKind::Constant || kind == LimitKind::Geometric || kind == LimitKind::Logarithmic; }
};

/// Estimates lim y(u) as u -> infinity from samples on an increasing grid us.
/// Corrections of the form u^-g are removed by Aitken's process, (log u)^-g by polynomial
/// extrapolation in (log u)^-g. Sequences whose increments do not decay are reported Divergent.
LimitEstimate extrapolate_limit(const std::vector<double>& us, const std::vector<double>& ys);

/// Value at x = 0 of the interpolating polynomial through (xs, ys).
double neville_at_zero(const std::vector<double>& xs, const std::vector<double>& ys);

/// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace heatlab
