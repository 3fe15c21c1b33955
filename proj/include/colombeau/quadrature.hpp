#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace colombeau {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;  // relative to the integral of |f|
  int max_panels = 4000;
  int min_panels_per_piece = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double abs_integral = 0.0;  // integral of |f|, GK21 estimate
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208299428746, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

struct Panel {
  double a, b, value, error, abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  std::array<double, 10> f1, f2;
  double kronrod = fc * kKronrodWeights[10];
  double gauss = 0.0;
  double absk = std::abs(fc) * kKronrodWeights[10];
  for (int i = 0; i < 10; ++i) {
    const double dx = h * kKronrodNodes[i];
    f1[i] = f(c - dx);
    f2[i] = f(c + dx);
    kronrod += kKronrodWeights[i] * (f1[i] + f2[i]);
    absk += kKronrodWeights[i] * (std::abs(f1[i]) + std::abs(f2[i]));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1[i] + f2[i]);
  }
  // QUADPACK error heuristic, floored at the round-off of the panel.
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (int i = 0; i < 10; ++i) asc += kKronrodWeights[i] * (std::abs(f1[i] - mean) + std::abs(f2[i] - mean));
  const double resabs = absk * std::abs(h);
  const double resasc = asc * std::abs(h);
  double err = std::abs((kronrod - gauss) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  err = std::max(eps * resabs, err);
  return {a, b, kronrod * h, err, resabs};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (21-point) integration over the pieces
/// delimited by the sorted breakpoint list. The panel with the largest error
/// estimate is bisected until the summed estimate meets the tolerance.
template <class F>
QuadratureResult integrate_pieces(F&& f, std::span<const double> breaks,
                                  const QuadratureOptions& opt = {}) {
  QuadratureResult res;
  if (breaks.size() < 2) return res;
  std::priority_queue<detail::Panel> heap;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  auto push = [&](const detail::Panel& p) {
    heap.push(p);
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
    res.evaluations += 21;
  };
  const int per = std::max(1, opt.min_panels_per_piece);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    for (int j = 0; j < per; ++j) {
      const double lo = a + (b - a) * j / per;
      const double hi = (j + 1 == per) ? b : a + (b - a) * (j + 1) / per;
      push(detail::gk21(f, lo, hi));
    }
  }
  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * total_abs); };
  while (!heap.empty() && total_err > tolerance()) {
    if (static_cast<int>(heap.size()) >= opt.max_panels) {
      res.converged = false;
      break;
    }
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      res.converged = false;
      break;
    }
    heap.pop();
    total -= worst.value;
    total_err -= worst.error;
    total_abs -= worst.abs_value;
    push(detail::gk21(f, worst.a, mid));
    push(detail::gk21(f, mid, worst.b));
  }
  // Re-sum from scratch; the running totals accumulate cancellation error.
  total = total_err = total_abs = 0.0;
  std::vector<detail::Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) {
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
  }
  res.value = total;
  res.error = total_err;
  res.abs_integral = total_abs;
  return res;
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  const std::array<double, 2> br{a, b};
  return integrate_pieces(f, br, opt);
}

/// Same as integrate_pieces but throws QuadratureError on non-convergence.
template <class F>
double integrate_or_throw(F&& f, std::span<const double> breaks, const QuadratureOptions& opt,
                          const char* what) {
  auto r = integrate_pieces(f, breaks, opt);
  if (!r.converged || !std::isfinite(r.value))
    throw QuadratureError(std::string("quadrature did not converge: ") + what);
  return r.value;
}

/// Brent's method on a sign-changing bracket [a, b].
template <class F>
double find_root(F&& f, double a, double b, double xtol = 0.0, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw std::invalid_argument("find_root: endpoints do not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

}  // namespace colombeau
