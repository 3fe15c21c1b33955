#include "colombeau/nec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "colombeau/fit.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

namespace {

constexpr int kJetOrder = 2;

void check_params(const WormholeParams& p) {
  p.validate();
  if (p.lambda != 0.0) throw std::invalid_argument("only Lambda = 0 is supported");
}

struct Shell {
  double m, a, alpha2, A, s;
  ThroatConstants c;
};

Shell shell(const WormholeParams& p) {
  check_params(p);
  const double A = 1.0 - 2.0 * p.mass / p.throat_radius;
  return {p.mass, p.throat_radius, p.alpha2, A, std::sqrt(A), throat_constants(p)};
}

// One monomial: coeff * (h+ H(eta) + h- H(-eta)) * product of delta orders,
// with h+- the one-sided jets of the smooth factors at the shell.
struct Monomial {
  double coeff = 1.0;
  Jet plus = Jet(1.0, kJetOrder);
  Jet minus = Jet(1.0, kJetOrder);
  std::vector<int> deltas;
};

Monomial times(const Monomial& x, const Monomial& y) {
  Monomial r;
  r.coeff = x.coeff * y.coeff;
  r.plus = x.plus * y.plus;
  r.minus = x.minus * y.minus;
  r.deltas = x.deltas;
  r.deltas.insert(r.deltas.end(), y.deltas.begin(), y.deltas.end());
  return r;
}

Jet side_jet(const SmoothSide& f) {
  return f.jet(0.0, std::min(kJetOrder, f.max_order()));
}

Monomial sided(Jet plus, Jet minus) {
  Monomial r;
  r.plus = std::move(plus);
  r.minus = std::move(minus);
  return r;
}

std::vector<Monomial> expand(const GenScalar& u) {
  return std::visit(
      [&](const auto& n) -> std::vector<Monomial> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          Monomial r;
          r.coeff = n.value;
          return {r};
        } else if constexpr (std::is_same_v<T, node::DeltaDeriv>) {
          Monomial r;
          r.deltas.push_back(n.order);
          return {r};
        } else if constexpr (std::is_same_v<T, node::Heaviside>) {
          const Jet one(1.0, kJetOrder), zero(0.0, kJetOrder);
          return {n.sign > 0 ? sided(one, zero) : sided(zero, one)};
        } else if constexpr (std::is_same_v<T, node::Smooth>) {
          const Jet j = side_jet(n.f);
          return {sided(j, j)};
        } else if constexpr (std::is_same_v<T, node::Piecewise>) {
          return {sided(side_jet(n.plus), side_jet(n.minus))};
        } else if constexpr (std::is_same_v<T, node::Convolution>) {
          if (n.rho_order != 0)
            throw std::invalid_argument("substitution engine: differentiated component " + n.label);
          const Jet zero(0.0, kJetOrder);
          return {sided(n.plus ? side_jet(*n.plus) : zero, n.minus ? side_jet(*n.minus) : zero)};
        } else if constexpr (std::is_same_v<T, node::Scale>) {
          auto r = expand(n.child);
          for (auto& x : r) x.coeff *= n.factor;
          return r;
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          std::vector<Monomial> r;
          for (const auto& t : n.terms) {
            auto e = expand(t);
            r.insert(r.end(), e.begin(), e.end());
          }
          return r;
        } else if constexpr (std::is_same_v<T, node::Product>) {
          std::vector<Monomial> r{Monomial{}};
          for (const auto& f : n.factors) {
            const auto e = expand(f);
            std::vector<Monomial> next;
            for (const auto& x : r)
              for (const auto& y : e) next.push_back(times(x, y));
            r = std::move(next);
          }
          return r;
        } else {
          throw std::invalid_argument("substitution engine cannot expand " + u.describe());
        }
      },
      u.node().payload);
}

double side_derivative(const Jet& j, int k, const char* which) {
  if (k > j.order()) {
    std::ostringstream os;
    os << "substitution engine: missing derivative " << k << " on the " << which << " side";
    throw std::invalid_argument(os.str());
  }
  return j.derivative(k);
}

}  // namespace

GenScalar to_genscalar(const DeltaPolynomial& d, const MollifierPtr& m) {
  const GenScalar d0 = embed_delta_deriv(m, 0);
  return sum({scale(d.c_delta, d0), scale(d.c_delta1, embed_delta_deriv(m, 1)),
              scale(d.c_delta2, embed_delta_deriv(m, 2)), scale(d.c_deltasq, d0 * d0)});
}

std::string to_string(Inequality i) { return i == Inequality::sigma ? "sigma" : "sigma_minus_nu"; }

double classical_coefficient(Inequality i, const WormholeParams& p) {
  const Shell sh = shell(p);
  if (i == Inequality::sigma) return -4.0 / sh.a * sh.A * sh.s;
  return (6.0 * sh.m - 2.0 * sh.a) * sh.s;
}

ShellComponents embed_shell_components(const WormholeParams& p, const MollifierPtr& m, double tolerance) {
  check_params(p);
  return {embedded_component(Component::g_tt, p, m, tolerance), embedded_component(Component::g_thth, p, m, tolerance),
          embedded_component(Component::gamma_tt_minus, p, m, tolerance) +
              embedded_component(Component::gamma_tt_plus, p, m, tolerance),
          embedded_component(Component::gamma_thth_minus, p, m, tolerance) +
              embedded_component(Component::gamma_thth_plus, p, m, tolerance)};
}

GenScalar assemble_sigma(const WormholeParams& p, const ShellComponents& c) {
  const Shell sh = shell(p);
  const MollifierPtr& m = c.g_tt.mollifier();
  const GenScalar d0 = embed_delta_deriv(m, 0);
  const GenScalar classical = scale(classical_coefficient(Inequality::sigma, p), d0);
  if (sh.alpha2 == 0.0) return classical;
  const double k = 2.0 * sh.alpha2 * sh.c.alpha;
  const GenScalar square = sh.c.alpha * sh.c.alpha * c.g_tt + constant(m, 2.0 * sh.c.alpha * sh.c.beta);
  return sum({classical, scale(-k, c.gamma_tt * embed_delta_deriv(m, 1)), scale(-k, c.g_tt * embed_delta_deriv(m, 2)),
              scale(-sh.alpha2, square * (d0 * d0))});
}

GenScalar assemble_sigma_minus_nu(const WormholeParams& p, const ShellComponents& c) {
  const Shell sh = shell(p);
  const MollifierPtr& m = c.g_tt.mollifier();
  const GenScalar d0 = embed_delta_deriv(m, 0);
  const GenScalar classical = scale(classical_coefficient(Inequality::sigma_minus_nu, p), d0);
  if (sh.alpha2 == 0.0) return classical;
  const double k = 2.0 * sh.alpha2 * sh.c.alpha;
  const GenScalar square = sh.c.beta * c.g_thth + sh.c.gamma * c.g_tt;
  const GenScalar cross = c.g_tt * c.gamma_thth - c.g_thth * c.gamma_tt;
  return sum({classical, scale(-k, square * (d0 * d0)), scale(k, cross * embed_delta_deriv(m, 1))});
}

GenScalar assemble(Inequality i, const WormholeParams& p, const ShellComponents& c) {
  return i == Inequality::sigma ? assemble_sigma(p, c) : assemble_sigma_minus_nu(p, c);
}

GenScalar assemble_sigma(const WormholeParams& p, const MollifierPtr& m, double tolerance) {
  return assemble_sigma(p, embed_shell_components(p, m, tolerance));
}

GenScalar assemble_sigma_minus_nu(const WormholeParams& p, const MollifierPtr& m, double tolerance) {
  return assemble_sigma_minus_nu(p, embed_shell_components(p, m, tolerance));
}

GenScalar assemble(Inequality i, const WormholeParams& p, const MollifierPtr& m, double tolerance) {
  return assemble(i, p, embed_shell_components(p, m, tolerance));
}

DeltaPolynomial simplified_sigma(const WormholeParams& p) {
  const Shell sh = shell(p);
  const double m = sh.m, a = sh.a, s = sh.s, A = sh.A, al2 = sh.alpha2;
  const double s3 = A * s;
  DeltaPolynomial d;
  d.c_delta = 4.0 / a * (6.0 * al2 * m / (a * a * a) * (m * m / (a * a) / s - 4.0 * s3) - s3);
  d.c_delta2 = 8.0 * al2 / a * s * (2.0 - 3.0 * m / a);
  d.c_deltasq = 16.0 * al2 / (a * a) * (m / a + 2.0 * A) * (5.0 * m / a + 2.0 * A);
  return d;
}

DeltaPolynomial simplified_sigma_minus_nu(const WormholeParams& p) {
  const Shell sh = shell(p);
  const double m = sh.m, a = sh.a, s = sh.s, A = sh.A;
  const double k = 2.0 * sh.alpha2 * sh.c.alpha;
  DeltaPolynomial d;
  d.c_delta = (6.0 * m - 2.0 * a) * s + k * (m * m / (a * a) - A * (1.0 + m / a));
  d.c_deltasq = k * (sh.c.gamma * A - sh.c.beta * a * a - 2.0 * a * A * s + 2.0 * m * s);
  return d;
}

DeltaPolynomial simplified(Inequality i, const WormholeParams& p) {
  return i == Inequality::sigma ? simplified_sigma(p) : simplified_sigma_minus_nu(p);
}

DeltaPolynomial substitution_engine(const GenScalar& u, const SubstitutionOptions& opt) {
  DeltaPolynomial d;
  double mixed = 0.0, mixed_scale = 0.0;  // d d' coefficient and its term sizes
  for (auto& t : expand(u)) {
    if (t.coeff == 0.0) continue;
    std::sort(t.deltas.begin(), t.deltas.end());
    const double c = t.coeff;
    auto f = [&](int side, int k) {
      return side > 0 ? side_derivative(t.plus, k, "plus") : side_derivative(t.minus, k, "minus");
    };
    if (t.deltas.empty()) throw std::invalid_argument("substitution engine: term without a delta factor");
    if (t.deltas.size() == 1) {
      const int k = t.deltas[0];
      const double fp = f(1, 0), fm = f(-1, 0);
      if (k == 0) {
        d.c_delta += c * 0.5 * (fp + fm);
      } else if (k == 1) {
        // f d' = f(0) d' - f'(0) d on each side.
        d.c_delta1 += c * 0.5 * (fp + fm);
        d.c_deltasq += -c * (fp - fm);
        d.c_delta += -c * 0.5 * (f(1, 1) + f(-1, 1));
      } else if (k == 2) {
        // f d'' = f(0) d'' - 2 f'(0) d' + f''(0) d on each side.
        d.c_delta2 += c * 0.5 * (fp + fm);
        mixed += c * (-3.0 * fp + 3.0 * fm);
        mixed_scale += std::abs(c) * 3.0 * (std::abs(fp) + std::abs(fm));
        const double dp = f(1, 1), dm = f(-1, 1);
        d.c_delta1 += -c * (dp + dm);
        d.c_deltasq += 2.0 * c * (dp - dm);
        d.c_delta += c * 0.5 * (f(1, 2) + f(-1, 2));
      } else {
        throw std::invalid_argument("substitution engine: delta order above 2");
      }
      continue;
    }
    if (t.deltas.size() == 2 && t.deltas[0] == 0 && t.deltas[1] == 0) {
      const double fp = f(1, 0), fm = f(-1, 0);
      if (std::abs(fp - fm) > opt.continuity_tol * (1.0 + std::abs(fp) + std::abs(fm)))
        throw std::invalid_argument("substitution engine: factor of d^2 is not continuous at the shell");
      d.c_deltasq += c * 0.5 * (fp + fm);
      continue;
    }
    std::ostringstream os;
    os << "substitution engine: unsupported delta product of orders";
    for (int k : t.deltas) os << ' ' << k;
    throw std::invalid_argument(os.str());
  }
  if (std::abs(mixed) > opt.continuity_tol * (1.0 + mixed_scale))
    throw std::invalid_argument("substitution engine: d d' terms do not cancel");
  return d;
}

Thresholds sign_analysis(const WormholeParams& p, Interval a_range) {
  check_params(p);
  const double m = p.mass;
  if (a_range.empty() || !(a_range.lo > 2.0 * m) || !std::isfinite(a_range.hi))
    throw std::invalid_argument("sign analysis needs a bounded range inside (2M, inf)");
  Thresholds t;
  t.mass = m;
  t.a1 = find_root([m](double a) { return 3.0 * m * m + m * a - a * a; }, 2.0 * m, 3.0 * m, 1e-15 * m);
  t.classical = find_root([m](double a) { return 6.0 * m - 2.0 * a; }, 2.0 * m, 4.0 * m, 1e-15 * m);
  t.admissible = Interval{2.0 * m, t.a1}.intersect(a_range);
  auto c = [&](double a) {
    WormholeParams q = p;
    q.throat_radius = a;
    return simplified_sigma(q).c_delta;
  };
  constexpr int n = 400;
  double xp = a_range.lo, cp = c(xp);
  for (int i = 1; i <= n; ++i) {
    const double x = a_range.lo + (a_range.hi - a_range.lo) * i / n;
    const double cx = c(x);
    if ((cp < 0.0) != (cx < 0.0)) {
      t.sigma_delta_root = find_root(c, xp, x, 1e-14 * x);
      break;
    }
    xp = x;
    cp = cx;
  }
  return t;
}

std::string nec_label(Verdict v) {
  switch (v) {
    case Verdict::pass: return "holds";
    case Verdict::fail: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

NecReport nec_verdict(const WormholeParams& p, const MollifierPtr& m, const std::vector<TestForm>& corpus,
                      const EpsSchedule& s, const VerdictOptions& opt) {
  NecReport r;
  r.params = p;
  const ShellComponents comps = embed_shell_components(p, m);
  for (Inequality i : {Inequality::sigma, Inequality::sigma_minus_nu}) {
    InequalityReport& ir = i == Inequality::sigma ? r.sigma : r.sigma_minus_nu;
    ir.inequality = i;
    ir.limits = is_nonnegative(assemble(i, p, comps), corpus, s, opt);
    ir.verdict = ir.limits.verdict;
    ir.simplified = simplified(i, p);
    ir.classical_coefficient = classical_coefficient(i, p);
  }
  const double a = p.throat_radius;
  r.thresholds = sign_analysis(p, {std::nextafter(2.0 * p.mass, a), std::max(a, 3.0 * p.mass)});

  r.deltasq_order = r.delta2_negative_order = std::numeric_limits<double>::quiet_NaN();
  const DeltaPolynomial& d = r.sigma.simplified;
  const TestForm* w = nullptr;
  for (const auto& f : corpus)
    if (f.contains(0.0)) {
      w = &f;
      break;
    }
  if (w == nullptr || d.c_delta2 == 0.0 || d.c_deltasq == 0.0) return r;
  r.obstruction_form = w->id();
  const GenScalar d0 = embed_delta_deriv(m, 0);
  const GenScalar square = scale(d.c_deltasq, d0 * d0);
  const GenScalar second = scale(d.c_delta2, embed_delta_deriv(m, 2));
  std::vector<double> lx, lsq, lneg;
  for (double e : s.grid()) {
    ObstructionSample o{e, pair(square, *w, e), -negative_part_pair(second, *w, e), 0.0};
    o.ratio = o.delta2_negative_mass > 0.0 ? o.deltasq_mass / o.delta2_negative_mass
                                           : std::numeric_limits<double>::infinity();
    r.obstruction.push_back(o);
  }
  const std::size_t n = r.obstruction.size();
  const std::size_t k = std::min<std::size_t>(n, std::max(opt.fit_points, 3));
  for (std::size_t j = n - k; j < n; ++j) {
    const auto& o = r.obstruction[j];
    if (!(o.deltasq_mass > 0.0 && o.delta2_negative_mass > 0.0)) continue;
    lx.push_back(-std::log(o.eps));
    lsq.push_back(std::log(o.deltasq_mass));
    lneg.push_back(std::log(o.delta2_negative_mass));
  }
  if (lx.size() >= 3) {
    r.deltasq_order = fit_line(lx, lsq).slope;
    r.delta2_negative_order = fit_line(lx, lneg).slope;
  }
  return r;
}

}  // namespace colombeau
