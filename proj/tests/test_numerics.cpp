#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "heatlab/errors.hpp"
#include "heatlab/limits.hpp"
#include "heatlab/quadrature.hpp"
#include "heatlab/roots.hpp"

using namespace heatlab;

TEST_CASE("adaptive quadrature on smooth and endpoint-singular integrands") {
  QuadratureConfig cfg;
  auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-13));

  // integrable log singularity at the left end, never sampled
  auto s = integrate([](double x) { return -std::log(x); }, 0.0, 1.0, cfg);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10));

  auto p = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 4.0, cfg);
  CHECK(p.value == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int order : {4, 8}) {
    const auto& rule = gauss_legendre_rule(order);
    REQUIRE(rule.x.size() == static_cast<std::size_t>(order));
    double wsum = 0.0;
    for (double w : rule.w) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
    const int deg = 2 * order - 1;
    const double got = gauss_legendre([deg](double x) { return std::pow(x, deg - 1); }, 0.0, 2.0, order);
    CHECK(got == doctest::Approx(std::pow(2.0, deg) / deg).epsilon(1e-13));
  }
  CHECK_THROWS(gauss_legendre([](double x) { return x; }, 0.0, 1.0, 5));
}

TEST_CASE("integrals to infinity") {
  QuadratureConfig cfg;
  auto a = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, cfg);
  CHECK_FALSE(a.divergent);
  CHECK(a.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));

  auto b = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, cfg);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-11));

  auto c = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x); }, 0.0, cfg);
  CHECK(c.divergent);
}

TEST_CASE("root finding") {
  auto r = brent([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(r.converged);
  CHECK(r.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(brent([](double x) { return x * x + 1.0; }, 0.0, 2.0), NumericalError);

  auto n = safeguarded_newton([](double x) { return std::exp(x) - 3.0; }, [](double x) { return std::exp(x); }, -5.0,
                              5.0, 4.0);
  CHECK(n.x == doctest::Approx(std::log(3.0)).epsilon(1e-14));

  double lo = 1.0, hi = 2.0;
  REQUIRE(expand_bracket([](double x) { return x - 1000.0; }, lo, hi));
  CHECK(lo <= 1000.0);
  CHECK(hi >= 1000.0);
}

TEST_CASE("limit extrapolation") {
  std::vector<double> us, geo, logc, div;
  for (int k = 0; k < 21; ++k) {
    const double u = 100.0 * std::pow(2.0, k);
    us.push_back(u);
    geo.push_back(1.5 + 3.0 / u);
    logc.push_back(2.0 + 1.0 / std::log(u));
    div.push_back(std::log(u));
  }
  auto g = extrapolate_limit(us, geo);
  CHECK(g.converged());
  CHECK(g.value == doctest::Approx(1.5).epsilon(1e-10));

  auto l = extrapolate_limit(us, logc);
  CHECK(l.converged());
  CHECK(l.value == doctest::Approx(2.0).epsilon(1e-6));

  auto d = extrapolate_limit(us, div);
  CHECK(d.kind == LimitKind::Divergent);

  CHECK(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  CHECK(neville_at_zero({1, 2, 3}, {2, 3, 4}) == doctest::Approx(1.0));
}
