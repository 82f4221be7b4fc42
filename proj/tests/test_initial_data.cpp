#include <cmath>
#include <numbers>

#include "doctest.h"

#include "heatlab/errors.hpp"
#include "heatlab/initial_data.hpp"

using namespace heatlab;

TEST_CASE("sphere and ball measures") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(sphere_fraction_in_ball(2, 0.5, 0.0) == doctest::Approx(1.0));
  CHECK(sphere_fraction_in_ball(2, 1.5, 0.0) == doctest::Approx(0.0));
  // circle of radius 1 about the origin, unit disc centred at distance 1: a third of the circle lies inside
  CHECK(sphere_fraction_in_ball(2, 1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("ball integrals of power singularities") {
  for (int N : {1, 2, 3}) {
    auto u0 = RadialProfile::power_singularity(2.0, 0.4, N, 10.0);
    auto b = ball_integral(u0, 1.5, 0.0, 0.5);
    CHECK_FALSE(b.divergent);
    const double e = N - 0.6;
    const double exact = sphere_area(N) * std::pow(2.0, 1.5) * std::pow(0.5, e) / e;
    CHECK(b.value == doctest::Approx(exact).epsilon(1e-8));
  }
  auto bad = RadialProfile::power_singularity(1.0, 0.8, 1, 1.0);
  CHECK(ball_integral(bad, 2.0, 0.0, 1.0).divergent);
}

TEST_CASE("ul norms") {
  auto c = RadialProfile::constant(3.0, 2);
  auto n = ul_norm(c, 2.0);
  CHECK(n.value == doctest::Approx(3.0 * std::sqrt(std::numbers::pi)).epsilon(1e-9));

  auto s = RadialProfile::power_singularity(1.0, 0.2, 1, 1.0);
  auto m = ul_norm(s, 1.0);
  // int_{-1}^{1} |x|^-0.2 = 2 / 0.8, centred at the origin for a nonincreasing profile
  CHECK(m.value == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(m.center_argmax == doctest::Approx(0.0));
}

TEST_CASE("model singular integral matches its closed form") {
  for (double lambda : {1.2, 1.4, 1.8}) {
    for (double rho : {1e-1, 1e-2, 1e-3}) {
      auto r = model_singular_integral(lambda, rho);
      REQUIRE(r.closed_form);
      CHECK(r.value == doctest::Approx(*r.closed_form).epsilon(1e-8));
    }
  }
  CHECK(model_singular_integral(1.0, 0.1).divergent);
}

TEST_CASE("h_beta and its inverse") {
  for (int N : {1, 2}) {
    for (double u : {2.0, 1e3, 1e8}) {
      const double y = h_beta(1.0, N, u);
      CHECK(std::exp(log_h_beta_inverse(1.0, N, std::log(y))) == doctest::Approx(u).epsilon(1e-9));
      CHECK(h_beta_lower(1.0, N, y) <= u * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("counterexample datum") {
  auto d = build_counterexample(1.0, 0.1, 1);
  CHECK(d.m == doctest::Approx(0.125));
  CHECK(d.profile.singular_at_origin());
  CHECK(d.profile.nonincreasing_sampled());
  // J = u is integrable near the origin, so the datum lies in L^1_ul
  auto n = ul_norm(d.profile, 1.0);
  CHECK_FALSE(n.divergent);
  CHECK(n.value == doctest::Approx(3.7789).epsilon(1e-4));

  auto cl = closure_membership_heuristic(d.profile);
  CHECK(cl.status == "decaying");

  CHECK_THROWS_AS(build_counterexample(1.0, 0.6, 1), SpecError);
  CHECK_THROWS_AS(build_counterexample(0.0, 0.1, 1), SpecError);
}

TEST_CASE("F-inverse power datum flags q above 1 + r") {
  auto f = Nonlinearity::power(2.0);
  auto d = build_F_inverse_power(f, 2.5, 0.6, 2);
  CHECK(d.q_estimate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_FALSE(d.q_condition_ok);
  // F(u0) = |x|^alpha inside the ball where F(0) is not reached
  const QuadratureConfig cfg;
  CHECK(eval_F(f, d.profile.value(0.3), cfg) == doctest::Approx(std::pow(0.3, 2.5)).epsilon(1e-8));
}

TEST_CASE("truncated profile is flat inside its radius") {
  auto base = RadialProfile::power_singularity(1.0, 0.5, 1, 1.0);
  auto t = RadialProfile::truncated(base, 0.25);
  CHECK(t.value(0.0) == doctest::Approx(2.0));
  CHECK(t.value(0.1) == doctest::Approx(2.0));
  CHECK(t.value(0.5) == doctest::Approx(base.value(0.5)));
  CHECK_FALSE(t.singular_at_origin());
}
