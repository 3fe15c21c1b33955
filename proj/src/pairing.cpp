#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "colombeau/genfunc.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

namespace {

constexpr int kSupSamples = 8;
constexpr int kSignSamples = 64;
constexpr int kMaxSignChanges = 10000;

struct Layout {
  std::vector<double> breaks;
  double sup = 0.0;
  double mass = 0.0;  // sum over pieces of sup|u| sup|w| length
};

// Integration pieces: supp(u) intersected with supp(w), cut at the tree's
// breakpoints. Empty breaks means the pairing is exactly zero.
Layout layout(const GenScalar& u, const TestForm& w, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive and finite");
  Layout l;
  const Interval dom = u.support(eps).intersect({w.lower(), w.upper()});
  if (dom.empty() || !(dom.hi > dom.lo)) return l;
  std::vector<double> bp;
  u.collect_breakpoints(eps, bp);
  if (u.has_embedded_nodes() && bp.empty())
    throw std::logic_error("embedded family reported no breakpoints: " + u.describe());
  l.breaks.push_back(dom.lo);
  for (double b : bp)
    if (b > dom.lo && b < dom.hi) l.breaks.push_back(b);
  l.breaks.push_back(dom.hi);
  std::sort(l.breaks.begin(), l.breaks.end());
  l.breaks.erase(std::unique(l.breaks.begin(), l.breaks.end()), l.breaks.end());
  for (std::size_t i = 0; i + 1 < l.breaks.size(); ++i) {
    double su = 0.0, sw = 0.0;
    for (int j = 0; j <= kSupSamples; ++j) {
      const double x = l.breaks[i] + (l.breaks[i + 1] - l.breaks[i]) * j / kSupSamples;
      su = std::max(su, u.magnitude(eps, x));
      sw = std::max(sw, std::abs(w(x)));
    }
    l.sup = std::max(l.sup, su);
    l.mass += su * sw * (l.breaks[i + 1] - l.breaks[i]);
  }
  return l;
}

template <class F>
PairResult integrate_layout(F&& f, const std::vector<double>& breaks, const Layout& l, const PairOptions& opt) {
  const double sup = l.sup;
  const double admissible = opt.sup_tol * (1.0 + sup);
  QuadratureOptions q{.abs_tol = std::max(1e-300, 4.0 * std::numeric_limits<double>::epsilon() * l.mass),
                      .rel_tol = opt.l1_rel_tol,
                      .max_panels = 4000,
                      .min_panels_per_piece = opt.min_panels};
  auto r = integrate_pieces(f, breaks, q);
  if (!std::isfinite(r.value) || (!r.converged && r.error > admissible)) {
    std::ostringstream os;
    os << "pairing quadrature did not converge (error estimate " << r.error << ", admissible " << admissible << ")";
    throw QuadratureError(os.str());
  }
  const double roundoff = std::numeric_limits<double>::epsilon() * l.mass;
  return {r.value, r.error, r.abs_integral, std::max(r.error, roundoff)};
}

}  // namespace

double pair(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt) {
  return pair_detailed(u, w, eps, opt).value;
}

double negative_part_pair(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt) {
  return negative_part_pair_detailed(u, w, eps, opt).value;
}

PairResult pair_detailed(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt) {
  const Layout l = layout(u, w, eps);
  if (l.breaks.size() < 2) return {};
  auto f = [&](double x) {
    const double wx = w(x);
    return wx == 0.0 ? 0.0 : u(eps, x) * wx;
  };
  return integrate_layout(f, l.breaks, l, opt);
}

PairResult negative_part_pair_detailed(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt) {
  if (w.derivative_order() != 0) throw std::invalid_argument("negative part needs a nonnegative test form");
  const Layout l = layout(u, w, eps);
  if (l.breaks.size() < 2) return {};
  auto g = [&](double x) { return u(eps, x); };
  std::vector<double> breaks;
  int changes = 0;
  for (std::size_t i = 0; i + 1 < l.breaks.size(); ++i) {
    const double a = l.breaks[i], b = l.breaks[i + 1];
    breaks.push_back(a);
    double xp = a, gp = g(a);
    for (int j = 1; j <= kSignSamples; ++j) {
      const double x = (j == kSignSamples) ? b : a + (b - a) * j / kSignSamples;
      const double gx = g(x);
      if ((gp < 0.0 && gx > 0.0) || (gp > 0.0 && gx < 0.0)) {
        if (++changes > kMaxSignChanges) throw std::runtime_error("too many sign changes in negative-part pairing");
        breaks.push_back(find_root(g, xp, x, 1e-15 * std::max(1.0, std::abs(x))));
      }
      xp = x;
      gp = gx;
    }
  }
  breaks.push_back(l.breaks.back());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto f = [&](double x) {
    const double wx = w(x);
    return wx == 0.0 ? 0.0 : std::min(u(eps, x), 0.0) * wx;
  };
  return integrate_layout(f, breaks, l, opt);
}

}  // namespace colombeau
