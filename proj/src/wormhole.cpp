#include "colombeau/wormhole.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "colombeau/quadrature.hpp"

namespace colombeau {

namespace {

// eta(r) - eta(a) >= 0 from the antiderivative, arranged to avoid
// cancellation for r close to a.
double distance_from_throat(double r, double a, double m) {
  if (r == a) return 0.0;
  const double d = r - a;
  const double sr = std::sqrt(r), sa = std::sqrt(a);
  const double tr = std::sqrt(r - 2.0 * m), ta = std::sqrt(a - 2.0 * m);
  const double root_part = d * (r + a - 2.0 * m) / (sr * tr + sa * ta);
  const double ratio_minus_one = (d / (sr + sa) + d / (tr + ta)) / (sa + ta);
  return root_part + 2.0 * m * std::log1p(ratio_minus_one);
}

int branch(double eta, int side) {
  if (eta > 0.0) return 1;
  if (eta < 0.0) return -1;
  return side >= 0 ? 1 : -1;
}

}  // namespace

void WormholeParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("wormhole mass must be positive");
  if (!(throat_radius > 2.0 * mass) || !std::isfinite(throat_radius)) {
    std::ostringstream os;
    os << "throat radius " << throat_radius << " must exceed 2M = " << 2.0 * mass;
    throw std::invalid_argument(os.str());
  }
}

ThroatConstants throat_constants(const WormholeParams& p) {
  p.validate();
  const double m = p.mass, a = p.throat_radius;
  const double s = lapse(a, m);
  return {4.0 * m / (a * a * s) + 8.0 * s / a, 2.0 * m * s / (a * a), 2.0 * a * s};
}

double proper_distance(double r, int side, const WormholeParams& p) {
  p.validate();
  if (side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
  const double a = p.throat_radius, m = p.mass;
  if (!(r >= a)) throw std::invalid_argument("proper_distance needs r >= a");
  if (r == a) return 0.0;
  auto f = [&](double u) {
    const double rr = a + u * u;
    return 2.0 * u / lapse(rr, m);
  };
  const std::array<double, 2> br{0.0, std::sqrt(r - a)};
  QuadratureOptions opt{.abs_tol = 1e-300, .rel_tol = 1e-15, .max_panels = 4000, .min_panels_per_piece = 4};
  return side * integrate_or_throw(f, br, opt, "proper distance");
}

double proper_distance_closed_form(double r, int side, const WormholeParams& p) {
  p.validate();
  if (side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
  if (!(r >= p.throat_radius)) throw std::invalid_argument("proper_distance needs r >= a");
  return side * distance_from_throat(r, p.throat_radius, p.mass);
}

double radius_from_distance(double eta, const WormholeParams& p) {
  const double a = p.throat_radius, m = p.mass;
  const double e = std::abs(eta);
  if (e == 0.0) return a;
  if (!std::isfinite(e)) throw std::invalid_argument("radius_from_distance needs a finite distance");
  // d eta/dr >= 1, so r lies in [a, a + e].
  double lo = a, hi = a + e;
  double r = std::min(hi, a + e * lapse(a, m));
  for (int it = 0; it < 200; ++it) {
    const double g = distance_from_throat(r, a, m) - e;
    if (g == 0.0) return r;
    if (g > 0.0)
      hi = r;
    else
      lo = r;
    double next = r - g * lapse(r, m);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 4e-16 * r) return next;
    r = next;
  }
  throw std::runtime_error("radius_from_distance failed to converge");
}

Jet radius_jet(double eta, int side, const WormholeParams& p, int order) {
  const double sigma = branch(eta, side);
  Jet r(radius_from_distance(eta, p), order);
  for (int k = 0; k < order; ++k) {
    const Jet f = lapse(r.truncated(k), p.mass);
    r.coeff_ref(k + 1) = sigma * f.coeff(k) / (k + 1);
  }
  return r;
}

SideMetric side_metric(double eta, const WormholeParams& p) {
  const double r = radius_from_distance(eta, p);
  return {metric_tt(r, p.mass), metric_thth(r, p.mass)};
}

SideChristoffel side_christoffel(double eta, int side, const WormholeParams& p) {
  if (side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
  const double r = radius_from_distance(eta, p);
  return {christoffel_tt(r, side, p.mass), christoffel_thth(r, side, p.mass)};
}

std::string to_string(Component c) {
  switch (c) {
    case Component::g_tt: return "g_tt";
    case Component::g_thth: return "g_thth";
    case Component::gamma_tt_plus: return "Gamma+_tt";
    case Component::gamma_tt_minus: return "Gamma-_tt";
    case Component::gamma_thth_plus: return "Gamma+_thth";
    case Component::gamma_thth_minus: return "Gamma-_thth";
  }
  return "unknown";
}

SmoothSide component_side(Component c, int side, const WormholeParams& p) {
  p.validate();
  if (side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
  const double m = p.mass;
  auto eval = [c, m](const auto& r) {
    using T = std::decay_t<decltype(r)>;
    switch (c) {
      case Component::g_tt: return metric_tt<T>(r, m);
      case Component::g_thth: return metric_thth<T>(r, m);
      case Component::gamma_tt_plus: return christoffel_tt<T>(r, 1, m);
      case Component::gamma_tt_minus: return christoffel_tt<T>(r, -1, m);
      case Component::gamma_thth_plus: return christoffel_thth<T>(r, 1, m);
      case Component::gamma_thth_minus: return christoffel_thth<T>(r, -1, m);
    }
    return T(r);
  };
  if ((c == Component::gamma_tt_plus || c == Component::gamma_thth_plus) && side < 0)
    throw std::invalid_argument(to_string(c) + " lives on the eta >= 0 side only");
  if ((c == Component::gamma_tt_minus || c == Component::gamma_thth_minus) && side > 0)
    throw std::invalid_argument(to_string(c) + " lives on the eta <= 0 side only");
  SmoothSide::JetFn jet = [p, side, eval](double x, int order) { return eval(radius_jet(x, side, p, order)); };
  SmoothSide::ValueFn value = [p, eval](double x) { return eval(radius_from_distance(x, p)); };
  return SmoothSide(std::move(jet), Jet::kMaxOrder, side > 0 ? SideDomain::nonnegative : SideDomain::nonpositive,
                    to_string(c) + (side > 0 ? "(+)" : "(-)"), std::move(value));
}

GenScalar embedded_component(Component c, const WormholeParams& p, MollifierPtr m, double tolerance) {
  std::optional<SmoothSide> plus, minus;
  if (c != Component::gamma_tt_minus && c != Component::gamma_thth_minus) plus = component_side(c, 1, p);
  if (c != Component::gamma_tt_plus && c != Component::gamma_thth_plus) minus = component_side(c, -1, p);
  return convolution_integral(std::move(m), to_string(c), std::move(plus), std::move(minus), tolerance);
}

}  // namespace colombeau
