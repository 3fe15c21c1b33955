#include <gtest/gtest.h>

#include <cmath>

#include "colombeau/mollifier.hpp"
#include "common/oracles.hpp"

using namespace colombeau;

namespace {

double psi_integral(const Mollifier& m, int k) {
  return oracle::integrate([&](double x) { return std::pow(x, k) * m(x); }, -1.0, 1.0);
}

}  // namespace

TEST(Mollifier, OrderZeroIsNonnegativeAndNormalized) {
  const auto m = build_mollifier(0);
  for (int i = -100; i <= 100; ++i) EXPECT_GE((*m)(i / 100.0), 0.0);
  EXPECT_NEAR(m->l1_norm(), 1.0, 1e-12);
  EXPECT_EQ(m->negative_mass(), 0.0);
  EXPECT_NEAR(psi_integral(*m, 0), 1.0, 1e-12);
}

TEST(Mollifier, OrderOneCoincidesWithOrderZero) {
  const auto m0 = build_mollifier(0), m1 = build_mollifier(1);
  for (double x : {-0.9, -0.3, 0.0, 0.4, 0.77}) EXPECT_NEAR((*m1)(x), (*m0)(x), 1e-13);
}

TEST(Mollifier, OrderTwoChangesSign) {
  const auto m = build_mollifier(2);
  const double l1 = oracle::integrate([&](double x) { return std::abs((*m)(x)); }, -1.0, 1.0, 20000);
  EXPECT_GT(m->l1_norm(), 1.0);
  EXPECT_NEAR(m->l1_norm(), l1, 1e-9);
  EXPECT_FALSE(m->sign_changes().empty());
  EXPECT_NEAR(m->negative_mass(), (m->l1_norm() - 1.0) / 2.0, 1e-10);
}

TEST(Mollifier, Moments) {
  for (int order : {0, 2, 4}) {
    const auto m = build_mollifier(order);
    EXPECT_NEAR(moment(*m, 0), 1.0, 1e-10);
    for (int k = 1; k <= order; ++k) EXPECT_NEAR(moment(*m, k), 0.0, 1e-10) << "order " << order << " k " << k;
    EXPECT_NEAR(moment(*m, order + 2), psi_integral(*m, order + 2), 1e-11);
  }
  EXPECT_NEAR(moment(*build_mollifier(0), 1), 0.0, 1e-12);
}

TEST(Mollifier, BsplineKindAlsoSatisfiesMoments) {
  const auto m = build_mollifier(2, ProfileKind::bspline_poly);
  EXPECT_NEAR(psi_integral(*m, 0), 1.0, 1e-10);
  EXPECT_NEAR(psi_integral(*m, 2), 0.0, 1e-10);
}

TEST(Mollifier, Derivatives) {
  const auto m = build_mollifier(2);
  const double h = 1e-5;
  for (double x : {-0.6, -0.1, 0.35, 0.8})
    for (int k = 1; k <= 3; ++k) {
      const double fd = (m->derivative(x + h, k - 1) - m->derivative(x - h, k - 1)) / (2 * h);
      EXPECT_NEAR(m->derivative(x, k), fd, 1e-5 * (1.0 + std::abs(fd))) << "x=" << x << " k=" << k;
    }
  EXPECT_EQ(m->derivative(1.0, 0), 0.0);
  EXPECT_EQ(m->derivative(-1.5, 2), 0.0);
}

TEST(Mollifier, Cumulative) {
  const auto m = build_mollifier(2);
  EXPECT_EQ(m->cumulative(-1.0), 0.0);
  EXPECT_EQ(m->cumulative(1.2), 1.0);
  for (double y : {-0.7, -0.2, 0.0, 0.31, 0.9})
    EXPECT_NEAR(m->cumulative(y), oracle::integrate([&](double x) { return (*m)(x); }, -1.0, y), 1e-12);
}

TEST(Mollifier, SupNormsInsideSupport) {
  const auto m = build_mollifier(0);
  const auto r = mollifier_report(*m);
  for (int k = 0; k < 5; ++k) {
    EXPECT_TRUE(std::isfinite(r.sup_norms[k]));
    EXPECT_GT(r.sup_locations[k], -1.0);
    EXPECT_LT(r.sup_locations[k], 1.0);
  }
  EXPECT_NEAR(r.sup_norms[0], (*m)(0.0), 1e-12);
  EXPECT_TRUE(r.support_ok);
}

TEST(Mollifier, RejectsBadOrder) {
  EXPECT_THROW(build_mollifier(-1), std::invalid_argument);
  EXPECT_THROW(build_mollifier(9), std::invalid_argument);
  EXPECT_EQ(parse_profile_kind("bspline_poly"), ProfileKind::bspline_poly);
  EXPECT_THROW(parse_profile_kind("gauss"), std::invalid_argument);
}
