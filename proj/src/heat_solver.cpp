#include "heatlab/heat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/limits.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec = std::vector<double>;

double sup_of(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

GridFunction wrap(const GridPtr& grid, int N, const Vec& x) {
  GridFunction g{grid, Vec(x.begin(), x.end() - 1), x.back(), N};
  return g;
}

Vec unwrap(const GridFunction& g) {
  Vec x(g.values);
  x.push_back(g.far);
  return x;
}

void check_compatible(const GridFunction& g) {
  if (!g.grid) throw SpecError("grid function: missing grid");
  if (g.values.size() != g.grid->size()) throw SpecError("grid function: value count does not match the grid");
  if (g.N < 1) throw SpecError("grid function: N must be >= 1");
  for (double v : g.values)
    if (!std::isfinite(v)) throw SpecError("grid function: values must be finite");
  if (!std::isfinite(g.far)) throw SpecError("grid function: far-field value must be finite");
}

}  // namespace

void GridSpec::validate() const {
  if (!(R > 0.0 && h > 0.0 && r_min > 0.0 && grading > 1.0)) throw SpecError("grid: need R, h, r_min > 0 and grading > 1");
  if (!(r_min < h && h < R)) throw SpecError("grid: need r_min < h < R");
}

GridSpec GridSpec::refined() const { return GridSpec{R, 0.5 * h, 0.5 * r_min, std::sqrt(grading)}; }

RadialGrid::RadialGrid(const GridSpec& spec) : spec_(spec) {
  spec.validate();
  nodes_.push_back(0.0);
  double r = spec.r_min, dr = spec.r_min;
  while (dr < spec.h && r < spec.R) {
    nodes_.push_back(r);
    dr *= spec.grading;
    r += dr;
  }
  const double start = nodes_.back();
  const int count = std::max(1, static_cast<int>(std::ceil((spec.R - start) / spec.h)));
  for (int k = 1; k <= count; ++k) nodes_.push_back(start + (spec.R - start) * k / count);
}

GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const RadialGrid>(spec); }

double GridFunction::at(double r) const {
  const Vec& x = grid->nodes();
  if (r >= x.back()) return r == x.back() ? values.back() : far;
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - x.begin()) - 1;
  const double lam = (r - x[j]) / (x[j + 1] - x[j]);
  return (1.0 - lam) * values[j] + lam * values[j + 1];
}

double GridFunction::sup() const { return std::max(sup_of(values), std::abs(far)); }

double GridFunction::ball_integral(double rho, double r) const {
  const Vec& x = grid->nodes();
  const GaussRule& rule = gauss_legendre_rule(8);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < x.size() && x[j] < rho; ++j) {
    const double a = x[j], b = std::min(x[j + 1], rho);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const double y = c + h * rule.x[q];
      const double lam = (y - x[j]) / (x[j + 1] - x[j]);
      const double u = std::abs((1.0 - lam) * values[j] + lam * values[j + 1]);
      s += rule.w[q] * h * std::pow(u, r) * std::pow(y, N - 1);
    }
  }
  if (rho > x.back()) s += std::pow(std::abs(far), r) * (std::pow(rho, N) - std::pow(x.back(), N)) / N;
  return sphere_area(N) * s;
}

double GridFunction::ul_norm(double r) const {
  if (std::isinf(r)) return sup();
  return std::pow(ball_integral(1.0, r), 1.0 / r);
}

GridFunction sample_profile(const RadialProfile& u0, GridPtr grid) {
  const Vec& x = grid->nodes();
  GridFunction g{grid, Vec(x.size()), u0.far_field(), u0.N()};
  for (std::size_t i = 1; i < x.size(); ++i) {
    g.values[i] = u0.value(x[i]);
    if (!std::isfinite(g.values[i])) throw SpecError("sample_profile: datum is not finite at r = " + std::to_string(x[i]));
  }
  if (u0.singular_at_origin()) {
    const int N = u0.N();
    const double r1 = x[1];
    const BallIntegral b = heatlab::ball_integral(u0, 1.0, 0.0, r1);
    if (b.divergent) throw SpecError("sample_profile: datum is not locally integrable at the origin");
    const double E = b.value / sphere_area(N);
    g.values[0] = N * (N + 1.0) * (E / std::pow(r1, N) - g.values[1] / (N + 1.0));
  } else {
    g.values[0] = u0.value(0.0);
  }
  return g;
}

GridFunction constant_function(double c, GridPtr grid, int N) {
  const std::size_t n = grid->size();
  return GridFunction{std::move(grid), Vec(n, c), c, N};
}

double gaussian_value(double r, double t, int N, double mass) {
  return mass * std::pow(4.0 * kPi * t, -0.5 * N) * std::exp(-r * r / (4.0 * t));
}

GridFunction gaussian_function(double t, GridPtr grid, int N, double mass) {
  GridFunction g{grid, Vec(grid->size()), 0.0, N};
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = gaussian_value(grid->nodes()[i], t, N, mass);
  return g;
}

double scaled_bessel_i(double nu, double z) {
  if (nu == -0.5) return std::sqrt(2.0 / kPi) * 0.5 * (1.0 + std::exp(-2.0 * z));
  if (nu == 0.5) return z < 1e-8 ? std::sqrt(2.0 / kPi) * std::exp(-z) : std::sqrt(2.0 / kPi) * -std::expm1(-2.0 * z) / (2.0 * z);
  if (z < 1e-3) {
    const double q = 0.25 * z * z;
    const double s = 1.0 + q / (nu + 1.0) + q * q / (2.0 * (nu + 1.0) * (nu + 2.0));
    return std::pow(2.0, -nu) / std::tgamma(nu + 1.0) * s * std::exp(-z);
  }
  if (z <= 600.0) return std::pow(z, -nu) * boost::math::cyl_bessel_i(nu, z) * std::exp(-z);
  // Hankel expansion of I_nu(z) e^-z
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    sum += term;
  }
  return std::pow(z, -nu) * sum / std::sqrt(2.0 * kPi * z);
}

HeatOperator::HeatOperator(GridPtr grid, int N, double t, const SemigroupConfig& cfg)
    : grid_(std::move(grid)), N_(N), t_(t) {
  if (!grid_) throw SpecError("semigroup: missing grid");
  if (N < 1) throw SpecError("semigroup: N must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw SpecError("semigroup: t must be > 0; evaluate the datum directly at t = 0");
  const double spacing = grid_->min_spacing();
  if (cfg.enforce_floor && t < spacing * spacing)
    throw NumericalError("semigroup: t below the grid floor (smallest spacing)^2");
  const Vec& x = grid_->nodes();
  const std::size_t n = x.size();
  const double sigma = std::sqrt(2.0 * t);
  const double band = cfg.band_sigmas * sigma;
  const double nu = 0.5 * N - 1.0;
  const double pref = std::pow(2.0 * t, -0.5 * N);
  const GaussRule& fine = gauss_legendre_rule(cfg.gauss_points);
  const GaussRule& coarse = gauss_legendre_rule(4);

  first_.resize(n);
  offset_.resize(n + 1);
  far_.resize(n);
  Vec row;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = x[i];
    const double lo = std::max(0.0, r - band), hi = r + band;
    std::size_t j0 = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), lo) - x.begin());
    j0 = j0 == 0 ? 0 : j0 - 1;
    std::size_t j1 = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), hi) - x.begin());
    j1 = std::min(j1, n - 1);
    row.assign(j1 - j0 + 1, 0.0);
    for (std::size_t j = j0; j < j1; ++j) {
      const double a = std::max(x[j], lo), b = std::min(x[j + 1], hi);
      if (!(b > a)) continue;
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / sigma)));
      const double width = (b - a) / pieces;
      // Intervals much narrower than the kernel see an almost polynomial integrand.
      const GaussRule& rule = width < 0.05 * sigma ? coarse : fine;
      for (int p = 0; p < pieces; ++p) {
        const double c = a + (p + 0.5) * width, h = 0.5 * width;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
          const double y = c + h * rule.x[q];
          const double d = r - y;
          const double k = pref * std::pow(y, N - 1) * scaled_bessel_i(nu, r * y / (2.0 * t)) * std::exp(-d * d / (4.0 * t));
          const double w = rule.w[q] * h * k;
          const double lam = (y - x[j]) / (x[j + 1] - x[j]);
          row[j - j0] += (1.0 - lam) * w;
          row[j + 1 - j0] += lam * w;
        }
      }
    }
    double s = 0.0;
    for (double w : row) s += w;
    // The node weights plus the far weight form a probability vector.
    if (s > 1.0) {
      for (double& w : row) w /= s;
      far_[i] = 0.0;
    } else {
      far_[i] = 1.0 - s;
    }
    first_[i] = j0;
    offset_[i] = weights_.size();
    weights_.insert(weights_.end(), row.begin(), row.end());
  }
  offset_[n] = weights_.size();
}

void HeatOperator::apply(const Vec& x, Vec& y) const {
  const std::size_t n = first_.size();
  if (x.size() != n + 1) throw SpecError("semigroup: vector size does not match the grid");
  y.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = far_[i] * x[n];
    const double* w = weights_.data() + offset_[i];
    const double* xi = x.data() + first_[i];
    const std::size_t len = offset_[i + 1] - offset_[i];
    for (std::size_t k = 0; k < len; ++k) s += w[k] * xi[k];
    y[i] = s;
  }
  y[n] = x[n];
}

GridFunction HeatOperator::apply(const GridFunction& phi) const {
  check_compatible(phi);
  if (phi.grid != grid_ && phi.grid->nodes() != grid_->nodes()) throw SpecError("semigroup: grid mismatch");
  if (phi.N != N_) throw SpecError("semigroup: dimension mismatch");
  Vec y;
  apply(unwrap(phi), y);
  return wrap(phi.grid, N_, y);
}

GridFunction apply_semigroup(const GridFunction& phi, double t, const SemigroupConfig& cfg) {
  check_compatible(phi);
  return HeatOperator(phi.grid, phi.N, t, cfg).apply(phi);
}

TimeGrid TimeGrid::graded(double T, int M, int K) {
  if (!(T > 0.0) || M < 1 || K < 0) throw SpecError("time grid: need T > 0, M >= 1, K >= 0");
  const double h = T / M;
  TimeGrid g;
  g.t.push_back(0.0);
  for (int j = K; j >= 0; --j) g.t.push_back(std::ldexp(h, -j));
  for (int m = 2; m <= M; ++m) g.t.push_back(h * m);
  return g;
}

std::vector<double> TimeGrid::steps() const {
  Vec d(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) d[k - 1] = t[k] - t[k - 1];
  return d;
}

namespace {

// One operator per distinct step; steps equal up to rounding share it.
struct StepOperators {
  std::vector<HeatOperator> ops;
  std::vector<std::size_t> index;  // per step
  Vec dt;

  StepOperators(const GridPtr& grid, int N, const TimeGrid& tg, const SemigroupConfig& cfg) : dt(tg.steps()) {
    Vec distinct;
    for (double d : dt) {
      std::size_t k = 0;
      while (k < distinct.size() && std::abs(distinct[k] - d) > 1e-12 * d) ++k;
      if (k == distinct.size()) {
        distinct.push_back(d);
        ops.emplace_back(grid, N, d, cfg);
      }
      index.push_back(k);
    }
  }
  const HeatOperator& at(std::size_t step) const { return ops[index[step]]; }
};

// D_k = int_0^{t_k} S(t_k - s) g(s) ds, right-endpoint rule on the first step and trapezoid after it.
void duhamel(const StepOperators& S, const std::vector<Vec>& g, std::vector<Vec>& D) {
  const std::size_t nt = g.size(), n = g[0].size();
  D.assign(nt, Vec(n, 0.0));
  Vec tmp(n);
  for (std::size_t k = 1; k < nt; ++k) {
    const double dt = S.dt[k - 1];
    if (k == 1) {
      for (std::size_t i = 0; i < n; ++i) D[1][i] = dt * g[1][i];
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = D[k - 1][i] + 0.5 * dt * g[k - 1][i];
    S.at(k - 1).apply(tmp, D[k]);
    for (std::size_t i = 0; i < n; ++i) D[k][i] += 0.5 * dt * g[k][i];
  }
}

std::vector<Vec> propagate(const StepOperators& S, const Vec& x0) {
  std::vector<Vec> out(S.dt.size() + 1);
  out[0] = x0;
  for (std::size_t k = 1; k < out.size(); ++k) S.at(k - 1).apply(out[k - 1], out[k]);
  return out;
}

}  // namespace

std::string to_string(SolverVerdict v) {
  switch (v) {
    case SolverVerdict::Converged: return "Converged";
    case SolverVerdict::DivergedInf: return "DivergedInf";
    case SolverVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

IterationTrace picard_iterate(const std::optional<Nonlinearity>& f, const GridFunction& u0, const PicardOptions& opt,
                              const SemigroupConfig& cfg) {
  check_compatible(u0);
  if (opt.max_n < 1) throw SpecError("picard: max_n must be >= 1");
  if (!(opt.tol > 0.0)) throw SpecError("picard: tol must be > 0");
  for (double v : u0.values)
    if (v < 0.0) throw SpecError("picard: datum must be nonnegative");
  const TimeGrid tg = TimeGrid::graded(opt.T, opt.steps, opt.grading);
  const StepOperators S(u0.grid, u0.N, tg, cfg);
  const std::vector<Vec> lin = propagate(S, unwrap(u0));
  const std::size_t nt = lin.size(), n = lin[0].size();

  IterationTrace trace;
  trace.times = tg.t;
  auto store = [&](const std::vector<Vec>& u) {
    trace.solution.clear();
    for (const Vec& x : u) trace.solution.push_back(wrap(u0.grid, u0.N, x));
  };
  auto ul_at_end = [&](const Vec& x) { return wrap(u0.grid, u0.N, x).ul_norm(opt.r_ul); };

  if (!f) {
    double s = 0.0;
    for (const Vec& x : lin) s = std::max(s, sup_of(x));
    trace.records.push_back({1, s, ul_at_end(lin.back()), true, 0.0});
    trace.verdict = SolverVerdict::Converged;
    store(lin);
    return trace;
  }

  std::vector<Vec> prev(nt, Vec(n, 0.0)), cur(nt, Vec(n)), g(nt, Vec(n)), D;
  for (int it = 1; it <= opt.max_n; ++it) {
    for (std::size_t k = 0; k < nt; ++k)
      for (std::size_t i = 0; i < n; ++i) g[k][i] = f->value(prev[k][i]);
    duhamel(S, g, D);
    IterationRecord rec;
    rec.n = it;
    bool overflow = false;
    for (std::size_t k = 0; k < nt && !overflow; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        cur[k][i] = lin[k][i] + D[k][i];
        if (!std::isfinite(cur[k][i]) || cur[k][i] > opt.guard) {
          overflow = true;
          trace.divergence_time = tg.t[k];
          break;
        }
      }
    }
    if (overflow) {
      rec.sup = std::numeric_limits<double>::infinity();
      rec.ul = std::numeric_limits<double>::infinity();
      rec.residual = std::numeric_limits<double>::infinity();
      trace.records.push_back(rec);
      trace.verdict = SolverVerdict::DivergedInf;
      trace.message = "overflow guard tripped at t = " + std::to_string(trace.divergence_time);
      store(prev);
      return trace;
    }
    for (std::size_t k = 0; k < nt; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double d = cur[k][i] - prev[k][i];
        rec.residual = std::max(rec.residual, std::abs(d));
        rec.sup = std::max(rec.sup, cur[k][i]);
        if (d < -opt.monotone_slack * (1.0 + std::abs(cur[k][i]))) rec.monotone = false;
      }
    }
    rec.ul = ul_at_end(cur.back());
    trace.records.push_back(rec);
    std::swap(prev, cur);
    if (!rec.monotone) {
      trace.aborted = true;
      trace.verdict = SolverVerdict::Inconclusive;
      trace.message = "non-monotone Picard step at n = " + std::to_string(it);
      break;
    }
    if (rec.residual <= opt.tol * std::max(1.0, rec.sup)) {
      trace.verdict = SolverVerdict::Converged;
      break;
    }
  }
  if (trace.verdict == SolverVerdict::Inconclusive && !trace.aborted)
    trace.message = "no convergence after " + std::to_string(opt.max_n) + " iterations";
  store(prev);
  return trace;
}

std::vector<std::pair<double, double>> monitor_ul_trace(const Monitor& J, const IterationTrace& trace) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < trace.solution.size(); ++k) {
    GridFunction g = trace.solution[k];
    for (double& v : g.values) v = J.value(v);
    g.far = J.value(g.far);
    out.emplace_back(trace.times[k], g.ball_integral(1.0, 1.0));
  }
  return out;
}

SupersolutionCheck verify_supersolution(const std::optional<Nonlinearity>& f, const Monitor& J, double sigma,
                                        const GridFunction& u0, const SupersolutionOptions& opt,
                                        const SemigroupConfig& cfg) {
  check_compatible(u0);
  if (!(sigma > 0.0)) throw SpecError("supersolution: sigma must be > 0");
  const TimeGrid tg = TimeGrid::graded(opt.T, opt.steps, opt.grading);
  const StepOperators S(u0.grid, u0.N, tg, cfg);
  const double floor = std::max({opt.C1, 1.0, opt.xi});
  Vec x0 = unwrap(u0), u1(x0.size()), Ju1(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    u1[i] = std::max(x0[i], floor);
    Ju1[i] = J.value(u1[i]);
  }
  const std::vector<Vec> Su0 = propagate(S, x0), SJ = propagate(S, Ju1), Su1 = propagate(S, u1);
  const std::size_t nt = Su0.size(), n = x0.size();
  const double j0 = J.at_zero();

  SupersolutionCheck out;
  std::vector<Vec> ubar(nt, Vec(n)), g(nt, Vec(n)), D;
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = (1.0 + sigma) * SJ[k][i];
      if (y < j0) throw NumericalError("supersolution: J^-1 argument below J(0)");
      ubar[k][i] = J.inverse(y);
      g[k][i] = f ? f->value(ubar[k][i]) : 0.0;
      out.jensen_violation = std::max(out.jensen_violation, J.value(Su1[k][i]) - SJ[k][i]);
    }
  }
  duhamel(S, g, D);
  out.min_margin = std::numeric_limits<double>::infinity();
  const Vec& r = u0.grid->nodes();
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double m = (ubar[k][i] - Su0[k][i] - D[k][i]) / std::max(1.0, ubar[k][i]);
      if (m < out.min_margin) {
        out.min_margin = m;
        out.t_at_min = tg.t[k];
        out.r_at_min = i < r.size() ? r[i] : std::numeric_limits<double>::infinity();
      }
    }
  }
  out.holds = out.min_margin >= -opt.tol;
  return out;
}

JensenCheck jensen_check(const Monitor& J, const GridFunction& phi, double t, const SemigroupConfig& cfg) {
  check_compatible(phi);
  const HeatOperator S(phi.grid, phi.N, t, cfg);
  Vec x = unwrap(phi), Jx(x.size()), Sx, SJx;
  for (std::size_t i = 0; i < x.size(); ++i) Jx[i] = J.value(x[i]);
  S.apply(x, Sx);
  S.apply(Jx, SJx);
  JensenCheck out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = J.value(Sx[i]) - SJx[i];
    out.max_violation = std::max(out.max_violation, v);
    out.scaled_violation = std::max(out.scaled_violation, v / std::max(1.0, std::abs(SJx[i])));
  }
  return out;
}

BlowupFunctional integrate_H(const BlowupOptions& opt) {
  if (opt.N < 1) throw SpecError("H functional: N must be >= 1");
  if (!(opt.beta > 0.0)) throw SpecError("H functional: beta must be > 0");
  if (!(opt.rho > 0.0 && opt.rho < 1.0)) throw SpecError("H functional: rho must lie in (0, 1)");
  if (!(opt.H0 > 0.0)) throw SpecError("H functional: H0 must be > 0");
  const int N = opt.N;
  const double b = opt.beta, C2 = opt.C2;
  const double tau0 = 2.0 * std::log(opt.rho), tau1 = std::log(opt.rho);
  if (!(C2 - tau1 > 0.0)) throw SpecError("H functional: log(1/t) + C2 must stay positive");

  BlowupFunctional out;
  out.beta = b;
  out.rho = opt.rho;
  out.C2 = C2;
  out.N = N;
  out.H0 = opt.H0;
  out.C3 = std::pow(2.0, -0.5 * N) * std::pow(0.5 * N, b);
  const double C3 = out.C3, p = 2.0 / N;

  auto A = [&](double tau) { return C3 / (b + 1.0) * std::pow(C2 - tau, b + 1.0); };
  const double budget = 0.5 * N * std::pow(opt.H0, -p);
  // Blow-up where A(tau0) - A(tau) exhausts (N/2) H0^(-2/N).
  const double A_end = A(tau0) - budget;
  if (A_end >= A(tau1)) out.blowup_time_exact = std::exp(C2 - std::pow(A_end * (b + 1.0) / C3, 1.0 / (b + 1.0)));

  using boost::numeric::odeint::controlled_step_result;
  auto rhs = [&](const double& H, double& dH, double tau) { dH = C3 * std::pow(C2 - tau, b) * std::pow(H, 1.0 + p); };
  auto stepper = boost::numeric::odeint::make_controlled<boost::numeric::odeint::runge_kutta_dopri5<double>>(0.0, opt.rtol);
  double H = opt.H0, tau = tau0, dt = (tau1 - tau0) * 1e-4;
  out.trajectory.emplace_back(std::exp(tau), H);
  int rejections = 0;
  while (tau < tau1) {
    dt = std::min(dt, tau1 - tau);
    const double H_prev = H, tau_prev = tau;
    if (stepper.try_step(rhs, H, tau, dt) == controlled_step_result::fail) {
      if (dt < 1e-15 * std::max(1.0, std::abs(tau)) || ++rejections > 10000) {
        out.blew_up = true;
        out.blowup_time = std::exp(tau);
        break;
      }
      continue;
    }
    if (!std::isfinite(H) || H > opt.guard) {
      // Overshoot: the last accepted state is the guard crossing.
      out.blew_up = true;
      out.blowup_time = std::exp(std::isfinite(H) ? tau : tau_prev);
      if (std::isfinite(H)) out.trajectory.emplace_back(std::exp(tau), H);
      break;
    }
    if (H < H_prev) out.nondecreasing = false;
    out.trajectory.emplace_back(std::exp(tau), H);
    const double lhs = -budget * std::expm1(-p * std::log(H / opt.H0));
    const double want = A(tau0) - A(tau);
    if (want > 0.0) out.identity_rel_error = std::max(out.identity_rel_error, std::abs(lhs - want) / want);
  }
  return out;
}

double default_H0(const GridFunction& u, double rho, double c_star) {
  return c_star * u.ball_integral(rho, 1.0) * std::pow(3.0, -0.5 * u.N) * std::pow(4.0 * kPi, -0.5 * u.N);
}

ContradictionSides contradiction_sides(double beta, double eps, int N, double rho, double C2) {
  if (!(rho > 0.0 && rho < 1.0)) throw SpecError("contradiction: rho must lie in (0, 1)");
  ContradictionSides s;
  const double L = std::log(1.0 / rho), e = beta + 1.0;
  s.rho = rho;
  s.ratio = std::pow(std::pow((2.0 * L + C2) / L, e) - std::pow((L + C2) / L, e), -0.5 * N);
  s.ratio_limit = std::pow(std::pow(2.0, e) - 1.0, -0.5 * N);
  s.log_side = std::pow(L, eps);
  s.separation = s.log_side / s.ratio;
  s.mass_bound = std::pow(std::pow(2.0 * L + C2, e) - std::pow(L + C2, e), -0.5 * N);
  s.mass_lower = std::pow(L, -0.5 * N * e + eps) / (0.5 * N * e - eps);
  return s;
}

SmoothingFit smoothing_exponent_probe(const GridFunction& phi, double r_from, double r_to, const std::vector<double>& t,
                                      const SemigroupConfig& cfg) {
  check_compatible(phi);
  if (!(r_from >= 1.0) || !(r_to >= r_from)) throw SpecError("smoothing probe: need 1 <= r_from <= r_to");
  if (t.size() < 2) throw SpecError("smoothing probe: need at least two times");
  if (!std::isinf(r_from) && !std::isfinite(phi.ul_norm(r_from))) throw SpecError("smoothing probe: datum not in the source class");
  SmoothingFit fit;
  Vec X, Y;
  for (double ti : t) {
    const double v = apply_semigroup(phi, ti, cfg).ul_norm(r_to);
    fit.samples.emplace_back(ti, v);
    X.push_back(std::log(ti));
    Y.push_back(std::log(v));
  }
  fit.slope = fit_slope(X, Y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i] / X.size();
    my += Y[i] / Y.size();
  }
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace heatlab
