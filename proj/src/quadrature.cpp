#include "heatlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980626417, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod21(const Integrand& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk, err};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw SpecError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw SpecError("max_subdivisions must be at least 1");
  if (!(fd_rel_step > 0.0)) throw SpecError("fd_rel_step must be positive");
}

QuadResult integrate(const Integrand& g, double a, double b, const QuadratureConfig& cfg) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Segment> heap;
  Segment first = kronrod21(g, a, b);
  out.evaluations = 21;
  double total = first.value;
  double total_err = first.error;
  double frozen_err = 0.0;
  heap.push(first);
  int intervals = 1;
  auto done = [&] { return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (!done() && !heap.empty() && intervals < cfg.max_subdivisions) {
    if (!std::isfinite(total)) break;
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b) || (s.b - s.a) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(s.a), std::abs(s.b))) {
      frozen_err += s.error;
      continue;
    }
    Segment left = kronrod21(g, s.a, mid);
    Segment right = kronrod21(g, mid, s.b);
    out.evaluations += 42;
    total += left.value + right.value - s.value;
    total_err += left.error + right.error - s.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  double sum = 0.0, err = frozen_err;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sign * sum;
  out.error = err;
  out.intervals = intervals;
  out.converged = std::isfinite(sum) && err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(sum)) * 1.0000001;
  return out;
}

const GaussRule& gauss_legendre_rule(int order) {
  static const GaussRule r4 = [] {
    constexpr std::array<double, 2> x = {0.3399810435848562648026658, 0.8611363115940525752239465};
    constexpr std::array<double, 2> w = {0.6521451548625461426269361, 0.3478548451374538573730639};
    return GaussRule{{-x[1], -x[0], x[0], x[1]}, {w[1], w[0], w[0], w[1]}};
  }();
  static const GaussRule r8 = [] {
    constexpr std::array<double, 4> x = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                         0.7966664774136267395915539, 0.9602898564975362316835609};
    constexpr std::array<double, 4> w = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                         0.2223810344533744705443560, 0.1012285362903762591525314};
    return GaussRule{{-x[3], -x[2], -x[1], -x[0], x[0], x[1], x[2], x[3]},
                     {w[3], w[2], w[1], w[0], w[0], w[1], w[2], w[3]}};
  }();
  if (order == 4) return r4;
  if (order == 8) return r8;
  throw SpecError("gauss_legendre order must be 4 or 8");
}

double gauss_legendre(const Integrand& g, double a, double b, int order) {
  const GaussRule& rule = gauss_legendre_rule(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * g(c + h * rule.x[i]);
  return s * h;
}

TailSeries integrate_to_infinity(const Integrand& g, double x0, const QuadratureConfig& cfg,
                                 const TailOptions& opt) {
  TailSeries out;
  double total = 0.0, err = 0.0;
  double prev = 0.0, prev_ratio = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  int nondecreasing = 0;
  const double w = opt.first_width;
  const double tol = cfg.rel_tol;
  bool stopped_early = false;

  for (int k = 0; k < opt.max_panels; ++k) {
    const double a = x0 + w * (std::ldexp(1.0, k) - 1.0);
    const double b = x0 + w * (std::ldexp(1.0, k + 1) - 1.0);
    if (!(b < opt.x_cap)) {
      stopped_early = true;
      break;
    }
    QuadResult r = integrate(g, a, b, cfg);
    if (!std::isfinite(r.value)) {
      stopped_early = true;
      break;
    }
    out.panels.emplace_back(b, r.value);
    total += r.value;
    err += r.error;
    if (k > 0) {
      prev_ratio = ratio;
      ratio = (prev != 0.0) ? r.value / prev : (r.value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      nondecreasing = (ratio >= 1.0 - 1e-7) ? nondecreasing + 1 : 0;
    }
    prev = r.value;
    if (r.value == 0.0 && k >= 1) {
      out.converged = true;
      break;
    }
    if (k < opt.min_panels) continue;
    if (nondecreasing >= 8) {
      out.divergent = true;
      break;
    }
    const double scale = std::max(std::abs(total), cfg.abs_tol);
    if (std::abs(r.value) <= tol * scale && ratio < 0.9) {
      out.converged = true;
      if (ratio > 0.0) {
        const double tail = r.value * ratio / (1.0 - ratio);
        total += tail;
      }
      break;
    }
    if (ratio > 0.0 && ratio < 1.0 && std::isfinite(prev_ratio)) {
      const double tail = r.value * ratio / (1.0 - ratio);
      const double tail_err = std::abs(tail) * std::abs(ratio - prev_ratio) / (1.0 - ratio) + std::abs(tail) * 1e-14;
      if (tail_err <= 0.1 * tol * scale) {
        total += tail;
        err += tail_err;
        out.extrapolated = true;
        out.converged = true;
        break;
      }
    }
  }
  if (stopped_early && !out.converged && !out.divergent) {
    // Integrand left the representable range: close with a geometric tail if the panels decay.
    if (ratio > 0.0 && ratio < 1.0) {
      const double tail = prev * ratio / (1.0 - ratio);
      const double tail_err = std::abs(tail) * (std::isfinite(prev_ratio) ? std::abs(ratio - prev_ratio) / (1.0 - ratio) : 1.0);
      total += tail;
      err += tail_err;
      out.extrapolated = true;
      out.converged = tail_err <= 1e3 * tol * std::max(std::abs(total), cfg.abs_tol);
    } else if (ratio == 0.0) {
      out.converged = true;
    } else if (ratio >= 1.0) {
      out.divergent = true;
    }
  }
  out.ratio = ratio;
  out.decay_exponent = (ratio > 0.0) ? 1.0 - std::log2(ratio) : std::numeric_limits<double>::infinity();
  out.value = out.divergent ? std::numeric_limits<double>::infinity() : total;
  out.error = err;
  return out;
}

}  // namespace heatlab
