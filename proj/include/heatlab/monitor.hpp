#pragma once

#include <optional>
#include <string>
#include <variant>

#include "heatlab/nonlinearity.hpp"

namespace heatlab {

// J(u) = u
struct IdentityMonitor {};
// J(u) = u^r
struct PowerMonitor {
  double r;
};
// J(u) = u [log(u+e)]^gamma
struct LogWeightMonitor {
  double gamma;
};
// J(u) = F(u)^-r
struct FNegPowerMonitor {
  double r;
};
// J(u) = h [log(h+e)]^alpha with h = F(u)^(-N/2)
struct JAlphaMonitor {
  double alpha;
  int N;
};

using MonitorKind = std::variant<IdentityMonitor, PowerMonitor, LogWeightMonitor, FNegPowerMonitor, JAlphaMonitor>;

/// Monitor function J. The F-based kinds carry the nonlinearity whose tail defines them.
class Monitor {
 public:
  explicit Monitor(MonitorKind kind, std::optional<Nonlinearity> f = std::nullopt, QuadratureConfig cfg = {});

  static Monitor identity() { return Monitor(IdentityMonitor{}); }
  static Monitor power(double r) { return Monitor(PowerMonitor{r}); }
  static Monitor log_weight(double gamma) { return Monitor(LogWeightMonitor{gamma}); }
  static Monitor f_neg_power(const Nonlinearity& f, double r, QuadratureConfig cfg = {}) {
    return Monitor(FNegPowerMonitor{r}, f, cfg);
  }
  static Monitor j_alpha(const Nonlinearity& f, double alpha, int N, QuadratureConfig cfg = {}) {
    return Monitor(JAlphaMonitor{alpha, N}, f, cfg);
  }

  const MonitorKind& kind() const { return kind_; }
  const std::optional<Nonlinearity>& nonlinearity() const { return f_; }
  std::string name() const;

  double value(double u) const;
  double d1(double u) const;
  double d2(double u) const;
  double d3(double u) const;
  /// log J(e^w)
  double log_value(double w) const;
  /// log J'(e^w)
  double log_d1(double w) const;
  /// J(0), the infimum of the range on [0, inf)
  double at_zero() const;
  double inverse(double y) const;

 private:
  MonitorKind kind_;
  std::optional<Nonlinearity> f_;
  QuadratureConfig cfg_;
};

}  // namespace heatlab
