#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace heatlab::detail {

// Piecewise Chebyshev interpolant on [lo, hi] split into equal segments.
class PiecewiseChebyshev {
 public:
  PiecewiseChebyshev() = default;
  PiecewiseChebyshev(const std::function<double(double)>& g, double lo, double hi, int segments, int degree)
      : lo_(lo), hi_(hi), width_((hi - lo) / segments), degree_(degree), coef_(segments * (degree + 1)) {
    const int n = degree + 1;
    std::vector<double> vals(n);
    for (int s = 0; s < segments; ++s) {
      const double a = lo + s * width_;
      for (int k = 0; k < n; ++k) {
        const double t = std::cos(std::numbers::pi * (k + 0.5) / n);
        vals[k] = g(a + 0.5 * width_ * (t + 1.0));
      }
      for (int j = 0; j < n; ++j) {
        double c = 0.0;
        for (int k = 0; k < n; ++k) c += vals[k] * std::cos(std::numbers::pi * j * (k + 0.5) / n);
        coef_[s * n + j] = (j == 0 ? 1.0 : 2.0) * c / n;
      }
    }
  }

  bool contains(double x) const { return !coef_.empty() && x >= lo_ && x <= hi_; }

  double operator()(double x) const {
    const int n = degree_ + 1;
    const int segments = static_cast<int>(coef_.size()) / n;
    int s = static_cast<int>((x - lo_) / width_);
    s = s < 0 ? 0 : (s >= segments ? segments - 1 : s);
    const double a = lo_ + s * width_;
    const double t = 2.0 * (x - a) / width_ - 1.0;
    const double* c = &coef_[s * n];
    double b1 = 0.0, b2 = 0.0;
    for (int j = degree_; j >= 1; --j) {
      const double b0 = 2.0 * t * b1 - b2 + c[j];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + c[0];
  }

 private:
  double lo_ = 0.0, hi_ = 0.0, width_ = 1.0;
  int degree_ = 0;
  std::vector<double> coef_;
};

}  // namespace heatlab::detail
