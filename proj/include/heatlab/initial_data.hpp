#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heatlab/monitor.hpp"
#include "heatlab/nonlinearity.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

class RadialProfile;

namespace detail {
class PiecewiseChebyshev;
}

// u0 = c
struct ConstantCore {
  double c;
};
// u0 = c s^-a
struct PowerSingularityCore {
  double c;
  double a;
};
// u0 = mass (4 pi t0)^(-N/2) exp(-s^2 / (4 t0))
struct GaussianCore {
  double t0;
  double mass = 1.0;
};
// u0 = h_beta^-1(s^-N (log 1/s)^(-N/2-1+eps)); with a target f, u0 = F^-1(F_beta(that)).
struct CounterexampleCore {
  double beta;
  double eps;
  Nonlinearity f_beta;
  std::optional<Nonlinearity> target;
};
// u0 = F^-1(min(s^alpha, F(0)))
struct FInversePowerCore {
  double alpha;
  Nonlinearity f;
  double F0;
};
// The base profile held constant on the ball of the given radius.
struct TruncatedCore {
  std::shared_ptr<const RadialProfile> base;
  double radius;
};

using ProfileCore =
    std::variant<ConstantCore, PowerSingularityCore, GaussianCore, CounterexampleCore, FInversePowerCore, TruncatedCore>;

/// Radial datum u0(|x|) on R^N, held at its value at `cutoff` for s > cutoff.
class RadialProfile {
 public:
  RadialProfile(ProfileCore core, int N, double cutoff = std::numeric_limits<double>::infinity(),
                QuadratureConfig cfg = {});

  static RadialProfile constant(double c, int N) { return RadialProfile(ConstantCore{c}, N); }
  static RadialProfile power_singularity(double c, double a, int N, double cutoff) {
    return RadialProfile(PowerSingularityCore{c, a}, N, cutoff);
  }
  static RadialProfile gaussian(double t0, int N, double mass = 1.0) { return RadialProfile(GaussianCore{t0, mass}, N); }
  /// Holds the profile at its value u0(radius) inside the ball of that radius.
  static RadialProfile truncated(const RadialProfile& base, double radius);

  const ProfileCore& core() const { return core_; }
  std::string name() const;
  int N() const { return N_; }
  double cutoff() const { return cutoff_; }
  const QuadratureConfig& config() const { return cfg_; }

  /// u0 at radius s >= 0; +inf at a singular origin.
  double value(double s) const;
  /// log u0(e^-x); valid for x far beyond the double range of s.
  double log_value_x(double x) const;
  /// Limit of u0 as s -> infinity.
  double far_field() const;
  bool singular_at_origin() const;
  /// Radially nonincreasing on a log grid of s in [1e-12, 1e3].
  bool nonincreasing_sampled(int per_decade = 20) const;

 private:
  double core_log_value_x(double x) const;
  double exact_core_log_value_x(double x) const;

  ProfileCore core_;
  // log u0 - log(target) of the counterexample as a function of log x, precomputed.
  std::shared_ptr<const detail::PiecewiseChebyshev> table_;
  double table_hi_ = 0.0;
  int N_;
  double cutoff_;
  QuadratureConfig cfg_;
};

/// Surface area of the unit sphere in R^N.
double sphere_area(int N);
/// Volume of the unit ball in R^N.
double ball_volume(int N);
/// Fraction of the sphere |x| = s lying inside the unit ball centred at distance d from the origin.
double sphere_fraction_in_ball(int N, double s, double d);

/// F_beta(u)^(-N/2)
double h_beta(double beta, int N, double u, const QuadratureConfig& cfg = {});
/// log h_beta^-1(e^log_y)
double log_h_beta_inverse(double beta, int N, double log_y, const QuadratureConfig& cfg = {});
/// Explicit lower bound (N/4)^(N/2) u [log(u+e)]^(-N beta/2) for h_beta^-1(u).
double h_beta_lower(double beta, int N, double u);

struct CounterexampleData {
  RadialProfile profile;
  double m = 0.0;
  double C0 = 0.0;
  double log_h_beta_C0 = 0.0;
  double eps = 0.0;
  double beta = 0.0;
};

/// Singular datum at the doubly critical exponent. alpha is the monitor exponent it must defeat
/// (0 < eps < N/2 - alpha). With a target f the datum is transported by F^-1 o F_beta.
CounterexampleData build_counterexample(double beta, double eps, int N, double alpha = 0.0,
                                        std::optional<Nonlinearity> target = std::nullopt, const QuadratureConfig& cfg = {});

struct FInversePowerData {
  RadialProfile profile;
  double q_estimate = 0.0;
  bool q_condition_ok = false;  // q <= 1 + r
  double F0 = 0.0;
};

/// u0 = F^-1(min(|x|^alpha, F(0))) for 0 < r < N/2 and 2 < alpha < N/r.
FInversePowerData build_F_inverse_power(const Nonlinearity& f, double alpha, double r, int N,
                                        const QuadratureConfig& cfg = {});

struct BallIntegral {
  double value = 0.0;
  double error = 0.0;
  bool divergent = false;
  double decay_exponent = 0.0;  // of the integrand in log(1/s) when divergent
};

/// Integral of u0^r over the ball of the given radius centred at distance d from the origin.
BallIntegral ball_integral(const RadialProfile& u0, double r, double d, double radius = 1.0);

enum class NormMethod { RadialReduction, GridSup };
std::string to_string(NormMethod m);

struct ULNormEstimate {
  double r = 1.0;
  double value = 0.0;
  double center_argmax = 0.0;  // distance of the maximising centre from the origin
  NormMethod method = NormMethod::RadialReduction;
  double origin_value = 0.0;
  double grid_sup = 0.0;
  bool divergent = false;
  double divergence_exponent = 0.0;
};

/// sup_y (int_{B(y,1)} u0^r)^(1/r), from the origin ball cross-checked on off-origin centres.
ULNormEstimate ul_norm(const RadialProfile& u0, double r, int grid_centers = 24);

struct SingularIntegral {
  double value = 0.0;
  double error = 0.0;
  bool divergent = false;
  double decay_exponent = 0.0;
  std::optional<double> closed_form;
};

/// int_{B(0,rho)} J(u0)
SingularIntegral singular_integrability(const RadialProfile& u0, const Monitor& J, double rho);

/// int_0^rho (1/s)(log 1/s)^(-lambda) ds by quadrature, with the closed form (log 1/rho)^(1-lambda)/(lambda-1).
SingularIntegral model_singular_integral(double lambda, double rho, const QuadratureConfig& cfg = {});

struct TruncationLevel {
  double n = 0.0;
  double log_inv_radius = 0.0;  // log(2^n / m)
  double error = 0.0;           // || u0 - phi_n ||_{1,ul}
};

struct ClosureHeuristic {
  bool in_closure_likely = false;
  std::vector<TruncationLevel> trace;
  std::string status;  // decaying, plateau, divergent
};

/// Truncations phi_n at radius 2^-n m for n = 0 and n = 2^k, k < levels.
ClosureHeuristic closure_membership_heuristic(const RadialProfile& u0, int levels = 21, double threshold = 1e-4);

}  // namespace heatlab
