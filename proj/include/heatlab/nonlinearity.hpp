#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heatlab/limits.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

// f(u) = coef * u^p
struct PowerLaw {
  double p;
  double coef = 1.0;
};

// f(u) = u^p [log(u+e)]^beta; with p = 1 + 2/N this is the family f_beta.
struct LogPerturbedPower {
  double p;
  double beta;
};

// f(u) = exp(u^p)
struct ExpPower {
  double p;
};

// f(u) = exp(|log u|^(p-1) log u), p > 1
struct ExpLogPower {
  double p;
};

// f(u) = (u+a)^p / ((p-1) log(u+a) - 1) with a = e^(2/(p-1)); F(u) = log(u+a) / (u+a)^(p-1).
struct Example3 {
  double p;
};

// f(u) = exp(exp(...exp(u))) with n exponentials.
struct IteratedExp {
  int n;
};

// f(u) = (N/2) g'(v) v^(1+2/N), v = g^-1(u), g(v) = v [log(v+e)]^alpha; F(u) = v^(-2/N).
struct LogCorrectedCritical {
  double alpha;
  int N;
};

// Samples (u_i, f_i) with 0 < u_0 < ... ; log f is interpolated linearly in log u.
struct Tabulated {
  std::vector<double> u;
  std::vector<double> f;
};

using NonlinearityKind =
    std::variant<PowerLaw, LogPerturbedPower, ExpPower, ExpLogPower, Example3, IteratedExp, LogCorrectedCritical, Tabulated>;

// Geometric sample grid u_k = start * ratio^k, k < count.
struct ProbeGrid {
  double start = 100.0;
  double ratio = 2.0;
  int count = 21;
};

class Nonlinearity {
 public:
  explicit Nonlinearity(NonlinearityKind kind, double u_min = 0.0);

  static Nonlinearity power(double p, double coef = 1.0) { return Nonlinearity(PowerLaw{p, coef}); }
  static Nonlinearity log_power(double p, double beta) { return Nonlinearity(LogPerturbedPower{p, beta}); }
  /// f_beta(u) = u^(1+2/N) [log(u+e)]^beta
  static Nonlinearity f_beta(int N, double beta);
  static Nonlinearity exp_power(double p) { return Nonlinearity(ExpPower{p}); }
  static Nonlinearity exp_log_power(double p) { return Nonlinearity(ExpLogPower{p}); }
  static Nonlinearity example3(double p) { return Nonlinearity(Example3{p}); }
  static Nonlinearity iterated_exp(int n) { return Nonlinearity(IteratedExp{n}); }
  static Nonlinearity log_corrected_critical(double alpha, int N) { return Nonlinearity(LogCorrectedCritical{alpha, N}); }
  static Nonlinearity tabulated(std::vector<double> u, std::vector<double> f) {
    return Nonlinearity(Tabulated{std::move(u), std::move(f)});
  }

  const NonlinearityKind& kind() const { return kind_; }
  std::string kind_name() const;
  double u_min() const { return u_min_; }

  double value(double u) const;
  double derivative(double u) const;
  /// log f(e^w)
  double log_value(double w) const;
  /// u f'(u) / f(u) at u = e^w
  double elasticity(double w) const;
  /// log f(e^(w+y)) - log f(e^w) for y >= 0, without cancellation for small y
  double log_increment(double w, double y) const;
  std::optional<double> closed_form_F(double u) const;
  bool rapidly_varying() const;
  bool tabulated() const { return std::holds_alternative<Tabulated>(kind_); }
  ProbeGrid default_probe() const;

 private:
  NonlinearityKind kind_;
  double u_min_;
};

double eval_f(const Nonlinearity& f, double u);
double eval_fprime(const Nonlinearity& f, double u);
/// Central difference with h = max(u,1) * cfg.fd_rel_step.
double fd_derivative(const Nonlinearity& f, double u, const QuadratureConfig& cfg);
double fd_second_derivative(const Nonlinearity& f, double u, const QuadratureConfig& cfg);

// The tail F(u) together with the scale-free quantities computed alongside it.
struct TailValue {
  double u = 0.0;
  double scaled = 0.0;   // f(u) F(u) / u
  double log_F = 0.0;
  double F = 0.0;
  double fprime_F = 0.0;  // f'(u) F(u)
  double rel_error = 0.0;
};

/// Evaluates F at u = e^w entirely in logarithmic variables.
TailValue tail_at_log(const Nonlinearity& f, double w, const QuadratureConfig& cfg);
TailValue tail_at(const Nonlinearity& f, double u, const QuadratureConfig& cfg);

double eval_F(const Nonlinearity& f, double u, const QuadratureConfig& cfg);
/// F(0), +infinity when f(0) = 0.
double F_at_zero(const Nonlinearity& f, const QuadratureConfig& cfg);
/// u with F(u) = v.
double eval_F_inverse(const Nonlinearity& f, double v, const QuadratureConfig& cfg);
/// w = log u with log F(e^w) = log_v; usable far beyond the double range of u.
double log_F_inverse(const Nonlinearity& f, double log_v, const QuadratureConfig& cfg, double w_guess = 0.0);

struct ExponentSample {
  double u, f, fprime, F, fprime_F, elasticity;
};

struct KaramataProfile {
  double base_point = 10.0;
  std::vector<double> u, a, b;
  double rv_index = 0.0;  // +infinity for rapid variation
  std::vector<std::pair<double, double>> ratio_tests;  // (u, log_lambda(f(lambda u)/f(u))) for lambda = 2 and 4
  double representation_residual = 0.0;
};

struct ExponentProfile {
  double q_estimate = 0.0;
  double p_estimate = 0.0;
  LimitEstimate q_limit;
  LimitEstimate p_limit;
  std::vector<ExponentSample> samples;
  double conjugacy_residual = 0.0;
  bool bound_holds_fFq = false;
  double bound_margin = 0.0;
  bool converged = false;
};

ExponentProfile exponent_profile(const Nonlinearity& f, const QuadratureConfig& cfg,
                                 std::optional<ProbeGrid> grid = std::nullopt);

struct BoundCheck {
  bool holds = false;
  double worst_margin = 0.0;  // max over the window of f'F - q
  double worst_u = 0.0;
};

/// f'(u)F(u) <= q + slack on a geometric sample of [lo, hi].
BoundCheck check_fF_bound(const Nonlinearity& f, double q, double lo, double hi, const QuadratureConfig& cfg,
                          double slack = 1e-9, int per_decade = 8);

KaramataProfile karamata_profile(const Nonlinearity& f, const QuadratureConfig& cfg, double base_point = 10.0,
                                 std::optional<ProbeGrid> grid = std::nullopt);

}  // namespace heatlab
