#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/initial_data.hpp"
#include "heatlab/monitor.hpp"
#include "heatlab/nonlinearity.hpp"

namespace heatlab {

struct GridSpec {
  double R = 8.0;         // far-field radius
  double h = 0.02;        // spacing of the uniform outer part
  double r_min = 1e-6;    // first positive node
  double grading = 1.2;   // ratio of successive spacings near the origin

  void validate() const;
  /// Halved spacings and a finer core.
  GridSpec refined() const;
};

/// Radial nodes 0 = r_0 < r_1 < ... < r_n = R, geometric near 0 then uniform.
class RadialGrid {
 public:
  explicit RadialGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double R() const { return nodes_.back(); }
  double min_spacing() const { return nodes_[1] - nodes_[0]; }

 private:
  GridSpec spec_;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;
GridPtr make_grid(const GridSpec& spec);

/// Piecewise-linear radial function on a grid, constant `far` beyond R.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;
  double far = 0.0;
  int N = 1;

  double at(double r) const;
  double sup() const;
  /// int_{B(0,rho)} |u|^r, exact for the piecewise-linear interpolant up to Gauss-Legendre error.
  double ball_integral(double rho, double r = 1.0) const;
  /// Origin-centred unit-ball norm; the maximising centre for radially nonincreasing data.
  double ul_norm(double r) const;
};

/// Samples u0 at the nodes. A singular origin gets the value that keeps the mass of [0, r_1] exact.
GridFunction sample_profile(const RadialProfile& u0, GridPtr grid);
GridFunction constant_function(double c, GridPtr grid, int N);
/// (4 pi t)^(-N/2) exp(-r^2 / 4t) times mass.
GridFunction gaussian_function(double t, GridPtr grid, int N, double mass = 1.0);
double gaussian_value(double r, double t, int N, double mass = 1.0);

struct SemigroupConfig {
  int gauss_points = 8;
  double band_sigmas = 9.0;  // kernel truncated at |r - rho| > band_sigmas * sqrt(2t)
  bool enforce_floor = true;  // reject t below (smallest spacing)^2
};

/// z^(-nu) I_nu(z) e^(-z) for z >= 0
double scaled_bessel_i(double nu, double z);

/// S(t) on a fixed grid as a banded Markov matrix acting on (node values, far value).
class HeatOperator {
 public:
  HeatOperator(GridPtr grid, int N, double t, const SemigroupConfig& cfg = {});

  double t() const { return t_; }
  int N() const { return N_; }
  /// x and y hold size()+1 entries, the last being the far-field value.
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  GridFunction apply(const GridFunction& phi) const;
  /// Row sums of the node weights and the far-field weight of node i.
  double far_weight(std::size_t i) const { return far_[i]; }

 private:
  GridPtr grid_;
  int N_;
  double t_;
  std::vector<std::size_t> first_, offset_;
  std::vector<double> weights_, far_;
};

GridFunction apply_semigroup(const GridFunction& phi, double t, const SemigroupConfig& cfg = {});

/// Graded time grid: K halvings inside the first of M uniform steps.
struct TimeGrid {
  std::vector<double> t;

  static TimeGrid graded(double T, int M, int K);
  std::vector<double> steps() const;
};

enum class SolverVerdict { Converged, DivergedInf, Inconclusive };
std::string to_string(SolverVerdict v);

struct IterationRecord {
  int n = 0;
  double sup = 0.0;
  double ul = 0.0;  // ul-norm of u_n at the final time
  bool monotone = true;
  double residual = 0.0;
};

struct PicardOptions {
  double T = 0.1;
  int steps = 64;        // uniform steps M
  int grading = 10;      // halvings K of the first step
  int max_n = 200;
  double tol = 1e-9;     // relative sup residual
  double r_ul = 1.0;     // exponent of the recorded ul-norm
  double guard = 1e300;
  double monotone_slack = 1e-12;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  SolverVerdict verdict = SolverVerdict::Inconclusive;
  bool aborted = false;
  std::string message;
  double divergence_time = 0.0;
  std::vector<double> times;
  std::vector<GridFunction> solution;  // last iterate at every time
};

/// Monotone Picard ladder u_n = S(t)u0 + int_0^t S(t-s) f(u_{n-1}(s)) ds from u_0 = 0; no f means f = 0.
IterationTrace picard_iterate(const std::optional<Nonlinearity>& f, const GridFunction& u0, const PicardOptions& opt,
                              const SemigroupConfig& cfg = {});

/// ||J(u(t))||_{1,ul} along the stored solution.
std::vector<std::pair<double, double>> monitor_ul_trace(const Monitor& J, const IterationTrace& trace);

struct SupersolutionOptions {
  double T = 1e-3;
  int steps = 32;
  int grading = 8;
  double C1 = 1.0;
  double xi = 0.0;
  double tol = 1e-8;
};

struct SupersolutionCheck {
  bool holds = false;
  double min_margin = 0.0;  // min of (lhs - rhs) / max(1, ubar)
  double t_at_min = 0.0;
  double r_at_min = 0.0;
  double jensen_violation = 0.0;  // max of J(S(t)u1) - S(t)J(u1), absolute
};

/// Both sides of ubar(t) - S(t)u0 >= int_0^t S(t-s) f(ubar(s)) ds with ubar = J^-1((1+sigma) S(t) J(u1)),
/// u1 = max(u0, C1, 1, xi).
SupersolutionCheck verify_supersolution(const std::optional<Nonlinearity>& f, const Monitor& J, double sigma,
                                        const GridFunction& u0, const SupersolutionOptions& opt,
                                        const SemigroupConfig& cfg = {});

struct JensenCheck {
  double max_violation = 0.0;  // max_i J(S phi)_i - (S J(phi))_i
  double scaled_violation = 0.0;  // same divided by max(1, S J(phi))
};

JensenCheck jensen_check(const Monitor& J, const GridFunction& phi, double t, const SemigroupConfig& cfg = {});

struct BlowupOptions {
  int N = 1;
  double beta = 1.0;
  double rho = 0.1;
  double H0 = 1.0;
  double C2 = 0.0;
  double rtol = 1e-12;
  double guard = 1e100;
};

struct BlowupFunctional {
  double beta = 0.0, rho = 0.0, C2 = 0.0, C3 = 0.0, H0 = 0.0;
  int N = 1;
  std::vector<std::pair<double, double>> trajectory;  // (t, H)
  bool blew_up = false;
  double blowup_time = 0.0;        // time at which H passed the guard
  std::optional<double> blowup_time_exact;  // from the antiderivative
  double identity_rel_error = 0.0;  // max along the trajectory
  bool nondecreasing = true;
};

/// H' = (C3/t)(log(1/t) + C2)^beta H^(1+2/N) from t = rho^2 toward t = rho, C3 = 2^(-N/2) (N/2)^beta.
BlowupFunctional integrate_H(const BlowupOptions& opt);

/// c_star M 3^(-N/2) G(0,1), M the mass of u on B(0,rho).
double default_H0(const GridFunction& u, double rho, double c_star = 1.0);

struct ContradictionSides {
  double rho = 0.0;
  double ratio = 0.0;      // {((2L+C2)/L)^(b+1) - ((L+C2)/L)^(b+1)}^(-N/2), L = log 1/rho
  double ratio_limit = 0.0;  // (2^(b+1) - 1)^(-N/2)
  double log_side = 0.0;   // L^eps
  double separation = 0.0;  // log_side / ratio
  double mass_bound = 0.0;  // {(2L+C2)^(b+1) - (L+C2)^(b+1)}^(-N/2)
  double mass_lower = 0.0;  // L^(-N(b+1)/2 + eps) / (N(b+1)/2 - eps)
};

ContradictionSides contradiction_sides(double beta, double eps, int N, double rho, double C2 = 0.0);

struct SmoothingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, norm)
};

/// Least-squares slope of log ||S(t)phi||_{r_to,ul} against log t; r_to = inf gives the sup norm.
SmoothingFit smoothing_exponent_probe(const GridFunction& phi, double r_from, double r_to, const std::vector<double>& t,
                                      const SemigroupConfig& cfg = {});

}  // namespace heatlab
