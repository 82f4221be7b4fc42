#include <cmath>
#include <numbers>

#include "doctest.h"

#include "heatlab/errors.hpp"
#include "heatlab/monitor.hpp"
#include "heatlab/nonlinearity.hpp"

using namespace heatlab;

namespace {
const QuadratureConfig cfg{};
}

TEST_CASE("power law tail has the closed form u^(1-p)/(p-1)") {
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    auto f = Nonlinearity::power(p);
    for (double u : {0.5, 1.0, 10.0, 1e4}) {
      const double exact = std::pow(u, 1.0 - p) / (p - 1.0);
      CHECK(eval_F(f, u, cfg) == doctest::Approx(exact).epsilon(1e-10));
    }
  }
}

TEST_CASE("tail of exp(u) is exp(-u)") {
  auto f = Nonlinearity::exp_power(1.0);
  for (double u : {0.1, 1.0, 5.0, 30.0}) CHECK(eval_F(f, u, cfg) == doctest::Approx(std::exp(-u)).epsilon(1e-10));
  // F stays representable in logarithms long after e^-u underflows
  auto t = tail_at(f, 800.0, cfg);
  CHECK(t.log_F == doctest::Approx(-800.0).epsilon(1e-10));
}

TEST_CASE("log-corrected critical nonlinearity has F(g(v)) = v^(-2/N)") {
  for (int N : {1, 2}) {
    const double alpha = 0.7;
    auto f = Nonlinearity::log_corrected_critical(alpha, N);
    for (double v : {2.0, 50.0, 1e5}) {
      const double u = v * std::pow(std::log(v + std::numbers::e), alpha);
      CHECK(eval_F(f, u, cfg) == doctest::Approx(std::pow(v, -2.0 / N)).epsilon(1e-8));
    }
  }
}

TEST_CASE("F inverse round trip") {
  for (auto f : {Nonlinearity::power(3.0), Nonlinearity::f_beta(2, 1.0), Nonlinearity::exp_power(1.0),
                 Nonlinearity::example3(2.5)}) {
    for (double u : {0.5, 3.0, 30.0}) {
      const double v = eval_F(f, u, cfg);
      CHECK(eval_F_inverse(f, v, cfg) == doctest::Approx(u).epsilon(1e-9));
    }
  }
  // beyond double range of u the inverse still works in logarithms
  auto f = Nonlinearity::power(3.0);
  const double w = log_F_inverse(f, -2.0 * 1000.0 - std::log(2.0), cfg);
  CHECK(w == doctest::Approx(1000.0).epsilon(1e-10));
}

TEST_CASE("analytic derivatives agree with central differences") {
  for (auto f : {Nonlinearity::power(2.5, 3.0), Nonlinearity::f_beta(1, -1.5), Nonlinearity::exp_log_power(1.5),
                 Nonlinearity::example3(3.0), Nonlinearity::iterated_exp(2)}) {
    for (double u : {0.3, 2.0, 3.0}) {
      CHECK(eval_fprime(f, u) == doctest::Approx(fd_derivative(f, u, cfg)).epsilon(1e-6));
    }
  }
}

TEST_CASE("log_value and log_increment are consistent with value") {
  auto f = Nonlinearity::f_beta(3, 0.5);
  for (double w : {-2.0, 0.0, 3.0, 20.0}) {
    CHECK(f.log_value(w) == doctest::Approx(std::log(f.value(std::exp(w)))).epsilon(1e-12));
    CHECK(f.log_increment(w, 1e-9) == doctest::Approx(f.log_value(w + 1e-9) - f.log_value(w)).epsilon(1e-5));
  }
}

TEST_CASE("f_beta monotonicity floor") {
  CHECK_NOTHROW(Nonlinearity::f_beta(1, -9.0));
  CHECK_THROWS_AS(Nonlinearity::f_beta(1, -9.5), SpecError);
  CHECK_THROWS_AS(Nonlinearity::power(2.0, -1.0), SpecError);
}

TEST_CASE("tabulated nonlinearity interpolates but has no tail") {
  auto f = Nonlinearity::tabulated({1.0, 10.0, 100.0}, {1.0, 100.0, 10000.0});
  CHECK(f.value(3.0) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK_THROWS_AS(f.value(1000.0), OutOfRange);
  CHECK_THROWS_AS(eval_F(f, 5.0, cfg), OutOfRange);
}

TEST_CASE("subcritical growth gives a divergent tail") {
  CHECK_THROWS_AS(eval_F(Nonlinearity::power(1.0), 2.0, cfg), DivergentTail);
  CHECK_THROWS_AS(eval_F(Nonlinearity::log_power(1.0, 1.0), 2.0, cfg), DivergentTail);
  // 1 / (u log^2 u) is integrable
  CHECK(std::isfinite(eval_F(Nonlinearity::log_power(1.0, 2.0), 2.0, cfg)));
}

TEST_CASE("exponent profile of a power law") {
  auto prof = exponent_profile(Nonlinearity::power(3.0), cfg);
  CHECK(prof.converged);
  CHECK(prof.q_estimate == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(prof.p_estimate == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(prof.conjugacy_residual < 1e-6);
}

TEST_CASE("f'F bound") {
  auto f = Nonlinearity::power(3.0);
  CHECK(check_fF_bound(f, 1.5, 1e3, 1e9, cfg).holds);
  CHECK_FALSE(check_fF_bound(f, 1.4, 1e3, 1e9, cfg).holds);
}

TEST_CASE("Karamata profile separates regular from rapid variation") {
  auto k = karamata_profile(Nonlinearity::power(2.0), cfg);
  CHECK(k.rv_index == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_FALSE(Nonlinearity::power(2.0).rapidly_varying());
  CHECK(Nonlinearity::exp_power(1.0).rapidly_varying());
}

TEST_CASE("monitors") {
  auto f = Nonlinearity::power(3.0);
  auto J = Monitor::f_neg_power(f, 2.0);
  // F = u^-2 / 2, so F^-2 = 4 u^4
  CHECK(J.value(2.0) == doctest::Approx(64.0).epsilon(1e-9));
  CHECK(J.d1(2.0) == doctest::Approx(128.0).epsilon(1e-6));
  CHECK(J.inverse(64.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(J.log_value(std::log(2.0)) == doctest::Approx(std::log(64.0)).epsilon(1e-10));

  auto L = Monitor::log_weight(1.0);
  CHECK(L.value(1.0) == doctest::Approx(std::log(1.0 + std::numbers::e)));
  CHECK(L.at_zero() == 0.0);
  CHECK(Monitor::power(2.0).inverse(9.0) == doctest::Approx(3.0));
}
