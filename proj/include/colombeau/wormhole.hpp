#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "colombeau/genfunc.hpp"
#include "colombeau/jet.hpp"

namespace colombeau {

/// Equal-mass Schwarzschild-Schwarzschild thin shell at r = a.
struct WormholeParams {
  double mass = 1.0;
  double throat_radius = 2.5;
  double alpha2 = 0.0;
  double lambda = 0.0;
  static constexpr double kappa = 8.0 * std::numbers::pi;

  /// Throws std::invalid_argument unless mass > 0 and a > 2M.
  void validate() const;
};

struct ThroatConstants {
  double alpha, beta, gamma;
};

ThroatConstants throat_constants(const WormholeParams& p);

// Closed forms in the areal radius; T is double or Jet.
template <class T>
T lapse(const T& r, double mass) {
  using std::sqrt;
  return sqrt(1.0 - 2.0 * mass / r);
}

template <class T>
T metric_tt(const T& r, double mass) {
  return -(1.0 - 2.0 * mass / r);
}

template <class T>
T metric_thth(const T& r, double) {
  return r * r;
}

/// (Gamma^+-)^eta_tt = +-sqrt(1 - 2M/r) M / r^2
template <class T>
T christoffel_tt(const T& r, int side, double mass) {
  return static_cast<double>(side) * lapse(r, mass) * mass / (r * r);
}

/// (Gamma^+-)^eta_thth = -+ r sqrt(1 - 2M/r)
template <class T>
T christoffel_thth(const T& r, int side, double mass) {
  return -static_cast<double>(side) * r * lapse(r, mass);
}

/// eta(r) on the given side by adaptive quadrature of sqrt(B) from a to r
/// (substitution r = a + u^2 removes the endpoint behaviour).
double proper_distance(double r, int side, const WormholeParams& p);

/// The same distance from the antiderivative
///   sqrt(r(r-2M)) + 2M ln(sqrt(r) + sqrt(r-2M)).
double proper_distance_closed_form(double r, int side, const WormholeParams& p);

/// Inverse of the radial chart; even in eta.
double radius_from_distance(double eta, const WormholeParams& p);

/// Taylor jet of r(eta) around eta, generated from dr/deta = sign * sqrt(1-2M/r).
/// side selects the branch used at eta = 0 (+1: eta >= 0 branch).
Jet radius_jet(double eta, int side, const WormholeParams& p, int order);

struct SideMetric {
  double g_tt, g_thth;
};
struct SideChristoffel {
  double tt, thth;
};

SideMetric side_metric(double eta, const WormholeParams& p);
SideChristoffel side_christoffel(double eta, int side, const WormholeParams& p);

enum class Component { g_tt, g_thth, gamma_tt_plus, gamma_tt_minus, gamma_thth_plus, gamma_thth_minus };

std::string to_string(Component c);

/// The component as a smooth function of eta on one side (side = +1 on
/// eta >= 0, -1 on eta <= 0), with jets up to order 6.
SmoothSide component_side(Component c, int side, const WormholeParams& p);

/// Mollified component: the r-integral of the component against
/// rho_eps(eta - eta_+-(r)), rewritten in eta so that it is a convolution
/// over the mollifier support. Christoffel components carry one side only.
GenScalar embedded_component(Component c, const WormholeParams& p, MollifierPtr m, double tolerance = 1e-10);

}  // namespace colombeau
