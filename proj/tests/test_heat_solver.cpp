#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"

#include "heatlab/errors.hpp"
#include "heatlab/heat_solver.hpp"

using namespace heatlab;

namespace {

double max_rel_error(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  const double scale = b.sup();
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]) / scale);
  return m;
}

}  // namespace

TEST_CASE("radial grid layout") {
  RadialGrid g(GridSpec{1.0, 0.25, 1e-3, 2.0});
  const auto& r = g.nodes();
  CHECK(r.front() == 0.0);
  CHECK(r[1] == doctest::Approx(1e-3));
  CHECK(g.R() == doctest::Approx(1.0));
  for (std::size_t i = 1; i + 1 < r.size(); ++i) CHECK(r[i + 1] - r[i] <= 0.25 + 1e-12);
  CHECK_THROWS_AS(GridSpec({1.0, 0.25, 1e-3, 0.9}).validate(), SpecError);
  auto fine = GridSpec{}.refined();
  CHECK(fine.h == doctest::Approx(0.01));
  CHECK(fine.grading == doctest::Approx(std::sqrt(1.2)));
}

TEST_CASE("scaled Bessel function across its branches") {
  for (double nu : {-0.5, 0.0, 0.5, 1.0}) {
    for (double z : {1e-4, 0.3, 7.0, 200.0}) {
      const double ref = std::pow(z, -nu) * boost::math::cyl_bessel_i(nu, z) * std::exp(-z);
      CHECK(scaled_bessel_i(nu, z) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
  // Hankel branch against the leading asymptotics
  const double z = 1e4;
  CHECK(scaled_bessel_i(0.0, z) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * z)).epsilon(1e-4));
}

TEST_CASE("time grid") {
  auto tg = TimeGrid::graded(1.0, 4, 3);
  REQUIRE(tg.t.size() == 8);
  CHECK(tg.t[1] == doctest::Approx(0.25 / 8.0));
  CHECK(tg.t[4] == doctest::Approx(0.25));
  CHECK(tg.t.back() == doctest::Approx(1.0));
}

TEST_CASE("semigroup preserves constants and order") {
  auto grid = make_grid(GridSpec{4.0, 0.05, 1e-3, 1.3});
  for (int N : {1, 2, 3}) {
    auto c = apply_semigroup(constant_function(2.5, grid, N), 0.3);
    for (double v : c.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(c.far == doctest::Approx(2.5));

    auto lo = gaussian_function(0.5, grid, N);
    auto hi = gaussian_function(0.5, grid, N, 2.0);
    auto slo = apply_semigroup(lo, 0.2);
    auto shi = apply_semigroup(hi, 0.2);
    for (std::size_t i = 0; i < slo.values.size(); ++i) CHECK(slo.values[i] <= shi.values[i]);
  }
}

TEST_CASE("Gaussian reproduction and composition on a fine grid") {
  auto grid = make_grid(GridSpec{12.0, 0.005, 1e-4, 1.2});
  auto g1 = gaussian_function(1.0, grid, 1);
  CHECK(max_rel_error(apply_semigroup(g1, 0.5), gaussian_function(1.5, grid, 1)) < 1e-6);
  auto a = apply_semigroup(apply_semigroup(g1, 0.5), 0.7);
  CHECK(max_rel_error(a, apply_semigroup(g1, 1.2)) < 1e-6);
}

TEST_CASE("time floor") {
  auto grid = make_grid(GridSpec{1.0, 0.25, 1e-2, 2.0});
  CHECK_THROWS_AS(HeatOperator(grid, 1, 1e-5), NumericalError);
}

TEST_CASE("smoothing exponent of a point-like mass") {
  auto grid = make_grid(GridSpec{8.0, 0.02, 1e-6, 1.1});
  std::vector<double> ts;
  for (int k = 0; k <= 8; ++k) ts.push_back(1e-3 * std::pow(10.0, k / 8.0));
  for (int N : {1, 2}) {
    auto fit = smoothing_exponent_probe(gaussian_function(1e-6, grid, N), 1.0, INFINITY, ts);
    CHECK(fit.slope == doctest::Approx(-0.5 * N).epsilon(2e-3));
  }
  auto flat = smoothing_exponent_probe(constant_function(1.0, grid, 1), 1.0, INFINITY, ts);
  CHECK(std::abs(flat.slope) < 1e-10);
}

TEST_CASE("Picard ladder reproduces the ODE u' = u^2") {
  auto grid = make_grid(GridSpec{1.0, 0.25, 1e-3, 2.0});
  PicardOptions opt;
  opt.T = 0.75;
  opt.steps = 300;
  opt.grading = 6;
  opt.tol = 1e-12;
  auto tr = picard_iterate(Nonlinearity::power(2.0), constant_function(1.0, grid, 1), opt);
  REQUIRE(tr.verdict == SolverVerdict::Converged);
  for (const auto& rec : tr.records) CHECK(rec.monotone);
  for (double t : {0.25, 0.5, 0.75}) {
    auto it = std::min_element(tr.times.begin(), tr.times.end(),
                               [t](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    const auto& u = tr.solution[it - tr.times.begin()];
    CHECK(u.values[0] == doctest::Approx(1.0 / (1.0 - *it)).epsilon(1e-4));
  }
}

TEST_CASE("no nonlinearity gives the heat flow in one step") {
  auto grid = make_grid(GridSpec{4.0, 0.05, 1e-3, 1.3});
  PicardOptions opt;
  opt.T = 0.1;
  opt.steps = 8;
  auto tr = picard_iterate(std::nullopt, gaussian_function(0.1, grid, 1), opt);
  CHECK(tr.verdict == SolverVerdict::Converged);
  CHECK(tr.records.size() == 1);
}

TEST_CASE("overflow is reported as divergence") {
  auto grid = make_grid(GridSpec{1.0, 0.25, 1e-3, 2.0});
  PicardOptions opt;
  opt.T = 2.0;
  opt.steps = 40;
  opt.grading = 4;
  opt.max_n = 400;
  auto tr = picard_iterate(Nonlinearity::power(2.0), constant_function(1.0, grid, 1), opt);
  CHECK(tr.verdict == SolverVerdict::DivergedInf);
}

TEST_CASE("supersolution for a mildly singular datum under u^3") {
  auto grid = make_grid(GridSpec{4.0, 0.02, 1e-6, 1.2});
  auto f = Nonlinearity::power(3.0);
  auto J = Monitor::f_neg_power(f, 2.0);
  auto u0 = sample_profile(RadialProfile::power_singularity(1.0, 0.2, 1, 1.0), grid);
  auto chk = verify_supersolution(f, J, 0.5, u0, SupersolutionOptions{});
  CHECK(chk.holds);
  CHECK(chk.min_margin == doctest::Approx(0.0952).epsilon(0.02));
  CHECK(chk.jensen_violation < 1e-8);
}

TEST_CASE("Jensen inequality for a convex monitor") {
  auto grid = make_grid(GridSpec{4.0, 0.1, 1e-3, 1.5});
  auto phi = gaussian_function(0.05, grid, 2, 3.0);
  auto j = jensen_check(Monitor::power(3.0), phi, 0.1);
  CHECK(j.max_violation <= 1e-8);
}

TEST_CASE("blow-up functional") {
  BlowupOptions opt;
  opt.H0 = 0.5;
  auto b = integrate_H(opt);
  CHECK(b.blew_up);
  REQUIRE(b.blowup_time_exact);
  CHECK(b.blowup_time == doctest::Approx(0.0430474).epsilon(1e-5));
  CHECK(*b.blowup_time_exact == doctest::Approx(0.0430474).epsilon(1e-5));
  CHECK(b.identity_rel_error < 1e-6);
  CHECK(b.nondecreasing);

  opt.H0 = 1e-3;
  CHECK_FALSE(integrate_H(opt).blew_up);
}

TEST_CASE("contradiction sides") {
  for (double rho : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto s = contradiction_sides(1.0, 0.1, 1, rho);
    CHECK(s.ratio == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s.ratio_limit == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s.log_side == doctest::Approx(std::pow(std::log(1.0 / rho), 0.1)));
  }
  CHECK(contradiction_sides(1.0, 0.1, 1, 1e-4).separation == doctest::Approx(2.163).epsilon(1e-3));
}

TEST_CASE("mass-preserving sample at a singular origin") {
  auto prof = RadialProfile::power_singularity(1.0, 0.5, 1, 1.0);
  const double exact = ball_integral(prof, 1.0, 0.0, 0.5).value;
  const GridSpec spec{2.0, 0.05, 1e-4, 1.3};
  auto coarse = sample_profile(prof, make_grid(spec));
  auto fine = sample_profile(prof, make_grid(spec.refined()));
  CHECK(std::isfinite(coarse.values[0]));
  const double e0 = std::abs(coarse.ball_integral(0.5) - exact), e1 = std::abs(fine.ball_integral(0.5) - exact);
  CHECK(e0 / exact < 5e-3);
  CHECK(e1 < 0.5 * e0);
}
