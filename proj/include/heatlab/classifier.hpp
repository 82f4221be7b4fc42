#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/limits.hpp"
#include "heatlab/monitor.hpp"
#include "heatlab/nonlinearity.hpp"

namespace heatlab {

struct KappaConstant {
  double value = 0.0;
  double residual = 0.0;
};

/// Largest root of log k + 2 = k.
KappaConstant solve_kappa();

enum class DataClass { L1ul, CalL1ul, JAlphaIntegrable };
std::string to_string(DataClass c);
DataClass data_class_from_string(const std::string& s);

struct RegimeQuery {
  int N = 1;
  double r = 1.0;
  double q = 1.0;
  std::optional<bool> bound_fF_holds;  // f'F <= q for all u > 0
  DataClass data_class = DataClass::L1ul;
  double jalpha = 0.0;
  double band = 1e-9;

  void validate() const;
};

enum class Verdict { ExistenceSubcritical1, ExistenceSubcritical2, ExistenceCritical, Nonexistence, DoublyCritical, OutsideTheory };
enum class SubVerdict { None, Existence, Nonexistence, Conditional };

std::string to_string(Verdict v);
std::string to_string(SubVerdict v);
/// Stable integer code used by the region-map export.
int verdict_code(Verdict v);

struct FiredHypothesis {
  std::string name;
  double margin = 0.0;
  bool holds = false;
};

struct ClassificationOutcome {
  Verdict verdict = Verdict::OutsideTheory;
  SubVerdict sub = SubVerdict::None;
  std::string clause;
  std::vector<FiredHypothesis> fired;
  std::vector<std::string> citations;

  std::string label() const;
};

ClassificationOutcome classify_qr_regime(const RegimeQuery& query);

/// Complete classification for f_beta = u^(1+2/N) [log(u+e)]^beta with data in the J_alpha class.
ClassificationOutcome classify_f_beta(int N, double alpha, double beta, double band = 1e-9);

struct TailConditionOptions {
  double eta_lo = 1e3;
  double eta_hi = 1e9;
  int grid_per_decade = 10000;  // running-sup grid
  int eta_per_decade = 4;
  double extend_decades = 3.0;  // fine grid continues this far beyond eta_hi
};

struct TailConditionResult {
  std::vector<std::pair<double, double>> trace;  // (eta, T(eta))
  std::vector<std::pair<double, double>> tail_trace;  // (eta, tail integral alone)
  LimitEstimate limit;
  double limit_estimate = 0.0;
  bool is_zero_limit = false;
  bool is_bounded = false;
  bool tail_divergent = false;
  bool monitor_ok = false;
};

/// J~(eta) times the tail integral of f~ J' / J^(1+2/N), where f~ and J~ are running sups from xi.
TailConditionResult check_tail_condition(const Nonlinearity& f, const Monitor& J, double theta, double xi, int N,
                                         const QuadratureConfig& cfg, const TailConditionOptions& opt = {});

struct WindowOptions {
  double lo = 1e3;
  double hi = 1e9;
  int per_decade = 8;
};

struct LogCorrectionCheck {
  bool holds = false;
  double margin = 0.0;  // min over the window of rhs - lhs
  double worst_u = 0.0;
  double q_estimate = 0.0;
  bool regime_ok = false;
};

/// f'F - (1+N/2) <= (N alpha / 2) rho / log(F^(-N/2) + e) on the window.
LogCorrectionCheck check_log_correction_bound(const Nonlinearity& f, double alpha, double rho, int N,
                                              const QuadratureConfig& cfg, const WindowOptions& win = {});

struct ComparisonHypotheses {
  bool convexity_ok = false;
  double convexity_margin = 0.0;
  double C1 = 0.0;  // first window point after which the derivative condition holds
  bool growth_ok = false;
  double delta_found = 0.0;
  LimitEstimate delta_limit;
};

/// Convexity of F^-1 o F_beta and the growth bound F <= C u^(-2/N) [log(u+e)]^delta.
ComparisonHypotheses check_comparison_hypotheses(const Nonlinearity& f, double beta, int N, const QuadratureConfig& cfg,
                                                 const WindowOptions& win = {});

struct SourcewiseResult {
  double criterion_value = 0.0;
  bool solvable_for_all_data = false;
  std::string status;  // finite, divergent, inconclusive
  std::vector<std::pair<double, double>> partial_sums;
};

SourcewiseResult check_sourcewise_solvability(const Nonlinearity& f, double r, int N, const QuadratureConfig& cfg);

struct ExtremeEstimate {
  double value = 0.0;  // estimated limsup or liminf of the ratio
  std::string status;  // finite / infinite, positive / zero, or inconclusive
  bool holds = false;
  double trend = 0.0;  // log change between the last two decades
};

struct GrowthCriteria {
  ExtremeEstimate upper_eps;    // limsup f J' / J^(1+2/N-eps) < inf
  ExtremeEstimate upper_log;    // limsup f J' [log(J+e)]^(2g/N) / J^(1+2/N) < inf, g > N/2
  ExtremeEstimate lower_eps;    // liminf f J' / J^(1+2/N+eps) > 0
  ExtremeEstimate lower_log;    // liminf f J' [log(J+e)]^(2g/N) / J^(1+2/N) > 0, g < N/2
  std::optional<ExtremeEstimate> lower_log_weight;  // liminf f / u^(1+2/N) > 0 when J is a log weight
  double second_ratio = 0.0;  // J J'' / J'^2 at the top of the window
  double third_ratio = 0.0;   // J J''' / (J' J'')
};

struct GrowthParams {
  double eps = 0.1;
  std::optional<double> gamma_upper;  // default N/2 + 0.5
  std::optional<double> gamma_lower;  // default N/4
};

GrowthCriteria check_growth_criteria(const Nonlinearity& f, const Monitor& J, int N, const GrowthParams& params,
                                     const QuadratureConfig& cfg, const WindowOptions& win = {});

/// limsup (upper = true) or liminf of exp(log_ratio(w)) judged from the top two decades below exp(w_hi).
ExtremeEstimate estimate_extreme(const std::function<double(double)>& log_ratio, double w_hi, bool upper,
                                 int per_decade = 16);

}  // namespace heatlab
