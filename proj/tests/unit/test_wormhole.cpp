#include <gtest/gtest.h>

#include <cmath>

#include "colombeau/wormhole.hpp"
#include "common/oracles.hpp"

using namespace colombeau;

namespace {

const WormholeParams p{};  // M = 1, a = 2.5
const MollifierPtr m0 = build_mollifier(0);

double eta_oracle(double r) {
  return oracle::integrate([](double x) { return 1.0 / std::sqrt(1.0 - 2.0 / x); }, p.throat_radius, r, 20000);
}

}  // namespace

TEST(ProperDistance, Basics) {
  EXPECT_EQ(proper_distance(p.throat_radius, 1, p), 0.0);
  EXPECT_EQ(proper_distance(5.0, -1, p), -proper_distance(5.0, 1, p));
  EXPECT_NEAR(proper_distance(4.0, 1, p), eta_oracle(4.0), 1e-12);
  for (double r : {2.6, 3.0, 10.0}) EXPECT_NEAR(proper_distance_closed_form(r, 1, p), eta_oracle(r), 1e-11);
  EXPECT_THROW(proper_distance(2.0, 1, p), std::invalid_argument);
}

TEST(ProperDistance, RoundTrip) {
  EXPECT_EQ(radius_from_distance(0.0, p), p.throat_radius);
  for (double r : {2.6, 3.0, 5.0, 10.0, 100.0}) {
    const double eta = proper_distance(r, 1, p);
    EXPECT_NEAR(radius_from_distance(eta, p), r, 1e-10 * r);
    EXPECT_EQ(radius_from_distance(-eta, p), radius_from_distance(eta, p));
  }
}

TEST(ProperDistance, RadiusJet) {
  const Jet j = radius_jet(0.0, 1, p, 2);
  const double s = std::sqrt(1.0 - 2.0 / 2.5);
  EXPECT_NEAR(j.derivative(1), s, 1e-14);
  EXPECT_NEAR(j.derivative(2), 1.0 / (2.5 * 2.5), 1e-13);
  EXPECT_NEAR(radius_jet(0.0, -1, p, 1).derivative(1), -s, 1e-14);
}

TEST(Components, ShellValues) {
  const auto g = side_metric(0.0, p);
  EXPECT_NEAR(g.g_tt, -0.2, 1e-15);
  EXPECT_NEAR(g.g_thth, 6.25, 1e-14);
  const auto cp = side_christoffel(0.0, 1, p), cm = side_christoffel(0.0, -1, p);
  EXPECT_NEAR(cp.tt, std::sqrt(0.2) / 6.25, 1e-15);
  EXPECT_EQ(cp.tt, -cm.tt);
  EXPECT_NEAR(cp.thth, -2.5 * std::sqrt(0.2), 1e-15);
}

TEST(Components, ThroatConstants) {
  const auto c = throat_constants(p);
  const oracle::ClosedForm o{1.0, 2.5, 0.0};
  EXPECT_NEAR(c.alpha, 2.862167, 5e-7);
  EXPECT_NEAR(c.beta, 0.1431084, 5e-8);
  EXPECT_NEAR(c.gamma, 2.2360680, 5e-8);
  EXPECT_NEAR(c.alpha, o.alpha(), 1e-14);
  const double A = 0.2;
  EXPECT_GT(A * c.alpha * c.alpha - 2 * c.alpha * c.beta, 0.0);
  EXPECT_NEAR(A * c.alpha * c.alpha - 2 * c.alpha * c.beta, -2 * c.alpha * o.classical_sigma(), 1e-13);
  const auto far = throat_constants({1.0, 1e6, 0.0, 0.0});
  EXPECT_LT(far.alpha, 1e-5);
  EXPECT_LT(far.beta, 1e-11);
  EXPECT_NEAR(far.gamma / 2e6, 1.0, 1e-5);
}

TEST(Components, EmbeddedAwayFromShell) {
  const auto gtt = embedded_component(Component::g_tt, p, m0);
  const double eps = 1e-4;
  for (double x : {-0.3, 0.02, 1.0}) EXPECT_NEAR(gtt(eps, x), side_metric(x, p).g_tt, 1e-6);
  EXPECT_NEAR(std::abs(gtt(eps, 0.0)), 0.2, 1e-3);
  const auto gp = embedded_component(Component::gamma_tt_plus, p, m0);
  for (double e : {0.1, 0.01}) EXPECT_EQ(gp(e, -2.0 * e), 0.0);
}

TEST(Components, EmbeddedConvergesLinearly) {
  const auto gtt = embedded_component(Component::g_tt, p, m0);
  const double e1 = std::abs(gtt(0.02, 0.0) + 0.2), e2 = std::abs(gtt(0.01, 0.0) + 0.2);
  EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.1);
}

TEST(Components, Validation) {
  EXPECT_THROW(throat_constants({1.0, 2.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(throat_constants({-1.0, 2.5, 0.0, 0.0}), std::invalid_argument);
}
