#include <cmath>

#include "doctest.h"

#include "heatlab/classifier.hpp"
#include "heatlab/errors.hpp"

using namespace heatlab;

namespace {
const QuadratureConfig cfg{};

RegimeQuery query(int N, double q, double r, std::optional<bool> bound = std::nullopt, DataClass dc = DataClass::L1ul) {
  RegimeQuery Q;
  Q.N = N;
  Q.q = q;
  Q.r = r;
  Q.bound_fF_holds = bound;
  Q.data_class = dc;
  return Q;
}
}  // namespace

TEST_CASE("kappa") {
  auto k = solve_kappa();
  CHECK(k.value == doctest::Approx(3.14619322062058).epsilon(1e-12));
  CHECK(std::abs(std::log(k.value) + 2.0 - k.value) <= 1e-12);
}

TEST_CASE("(q, r) regimes") {
  CHECK(classify_qr_regime(query(1, 1.5, 2.0)).verdict == Verdict::ExistenceSubcritical1);
  CHECK(classify_qr_regime(query(1, 3.0, 2.0, true)).verdict == Verdict::ExistenceSubcritical2);
  CHECK(classify_qr_regime(query(1, 3.0, 2.0)).verdict == Verdict::OutsideTheory);
  CHECK(classify_qr_regime(query(1, 1.3, 0.5, std::nullopt, DataClass::CalL1ul)).verdict == Verdict::ExistenceCritical);
  CHECK(classify_qr_regime(query(2, 2.0, 1.0)).verdict == Verdict::DoublyCritical);
  CHECK(classify_qr_regime(query(2, 1.05, 0.1)).verdict == Verdict::Nonexistence);
  // nonexistence needs q <= 1 + r
  CHECK(classify_qr_regime(query(2, 1.2, 0.1)).verdict == Verdict::OutsideTheory);
  CHECK_THROWS_AS(classify_qr_regime(query(0, 2.0, 1.0)), SpecError);
}

TEST_CASE("region codes are stable") {
  CHECK(verdict_code(Verdict::ExistenceSubcritical1) == 0);
  CHECK(verdict_code(Verdict::Nonexistence) == 3);
  CHECK(verdict_code(Verdict::DoublyCritical) == 4);
  CHECK(verdict_code(Verdict::OutsideTheory) == 5);
}

TEST_CASE("f_beta clauses") {
  auto sub = [](int N, double a, double b) {
    auto o = classify_f_beta(N, a, b);
    CHECK(o.verdict == Verdict::DoublyCritical);
    return o.sub;
  };
  CHECK(sub(2, 1.5, 0.0) == SubVerdict::Existence);
  CHECK(sub(2, 1.0, 0.0) == SubVerdict::Existence);
  CHECK(sub(2, 0.5, 0.0) == SubVerdict::Nonexistence);
  CHECK(sub(2, 0.5, -2.0) == SubVerdict::Existence);
  CHECK(sub(2, 0.5, -1.0) == SubVerdict::Nonexistence);
  CHECK(sub(2, 1.0, -1.0) == SubVerdict::Nonexistence);
  CHECK(sub(2, 1.5, -1.0) == SubVerdict::Existence);
  CHECK(classify_f_beta(2, 1.0, 0.0).label().find("critical-alpha") != std::string::npos);
  CHECK_THROWS_AS(classify_f_beta(1, 1.0, -9.5), SpecError);
}

TEST_CASE("tail condition for f_beta with beta below -1") {
  const double beta = -2.0;
  TailConditionOptions opt;
  opt.eta_hi = 1e6;
  opt.grid_per_decade = 2000;
  auto res = check_tail_condition(Nonlinearity::f_beta(1, beta), Monitor::identity(), 1.0, 0.0, 1, cfg, opt);
  REQUIRE_FALSE(res.trace.empty());
  for (auto [eta, T] : res.trace) {
    const double half = std::pow(std::log(eta + std::numbers::e), beta + 1.0) / (-beta - 1.0);
    CHECK(T == doctest::Approx(half).epsilon(2e-3));
  }
  CHECK(res.is_zero_limit);
}

TEST_CASE("tail condition for f_beta with beta = 0 is unbounded") {
  TailConditionOptions opt;
  opt.grid_per_decade = 2000;
  auto res = check_tail_condition(Nonlinearity::f_beta(1, 0.0), Monitor::identity(), 1.0, 0.0, 1, cfg, opt);
  CHECK_FALSE(res.is_bounded);
}

TEST_CASE("log correction bound and comparison hypotheses") {
  auto f = Nonlinearity::log_corrected_critical(1.0, 1);
  // f'F - 3/2 decays like (alpha/2) / log, so the bound needs a larger alpha when rho < 1
  auto lc = check_log_correction_bound(f, 2.0, 0.9, 1, cfg);
  CHECK(lc.regime_ok);
  CHECK(lc.holds);
  CHECK_FALSE(check_log_correction_bound(f, 1.0, 0.5, 1, cfg).holds);

  auto ch = check_comparison_hypotheses(Nonlinearity::f_beta(1, 1.0), 1.0, 1, cfg);
  CHECK(ch.convexity_ok);
  CHECK(ch.growth_ok);
}

TEST_CASE("sourcewise solvability") {
  CHECK(check_sourcewise_solvability(Nonlinearity::power(2.0), 1.0, 1, cfg).solvable_for_all_data);
  CHECK_FALSE(check_sourcewise_solvability(Nonlinearity::power(4.0), 1.0, 1, cfg).solvable_for_all_data);
}

TEST_CASE("growth criteria for the critical power with the identity monitor") {
  auto f = Nonlinearity::f_beta(1, 0.0);
  auto g = check_growth_criteria(f, Monitor::identity(), 1, GrowthParams{}, cfg);
  // f J' / J^(1+2/N) = 1 exactly, so only the log-weighted lower bound survives
  CHECK_FALSE(g.upper_eps.holds);
  CHECK_FALSE(g.lower_eps.holds);
  CHECK_FALSE(g.upper_log.holds);
  CHECK(g.lower_log.holds);
}
