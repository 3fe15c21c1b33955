#include <gtest/gtest.h>

#include <cmath>

#include "colombeau/nec.hpp"
#include "common/oracles.hpp"

using namespace colombeau;

namespace {

const MollifierPtr m0 = build_mollifier(0);

WormholeParams params(double a, double alpha2) {
  WormholeParams p;
  p.throat_radius = a;
  p.alpha2 = alpha2;
  return p;
}

}  // namespace

TEST(Nec, ClassicalCoefficients) {
  EXPECT_NEAR(classical_coefficient(Inequality::sigma, params(2.5, 0.0)), -0.1431084, 5e-8);
  EXPECT_NEAR(classical_coefficient(Inequality::sigma_minus_nu, params(2.5, 0.0)), std::sqrt(0.2), 1e-15);
  EXPECT_NEAR(classical_coefficient(Inequality::sigma_minus_nu, params(3.0, 0.0)), 0.0, 1e-15);
}

TEST(Nec, SimplifiedMatchesUnreducedForms) {
  for (double a : {2.05, 2.3, 2.7, 3.5})
    for (double al2 : {0.0, 0.3, 1.0}) {
      const oracle::ClosedForm o{1.0, a, al2};
      const auto s = simplified_sigma(params(a, al2));
      EXPECT_NEAR(s.c_delta, o.sigma_delta(), 1e-12);
      EXPECT_NEAR(s.c_delta2, o.sigma_delta2(), 1e-12);
      EXPECT_NEAR(s.c_deltasq, o.sigma_deltasq(), 1e-12);
      EXPECT_EQ(s.c_delta1, 0.0);
      if (al2 > 0) EXPECT_GT(s.c_deltasq, 0.0);
      const auto n = simplified_sigma_minus_nu(params(a, al2));
      EXPECT_NEAR(n.c_delta, o.sigma_minus_nu_delta(), 1e-12);
      EXPECT_NEAR(n.c_deltasq, 0.0, 1e-12);
      EXPECT_NEAR(o.sigma_minus_nu_deltasq(), 0.0, 1e-12);
    }
  const auto c = simplified_sigma(params(2.5, 0.0));
  EXPECT_EQ(c.c_delta2, 0.0);
  EXPECT_NEAR(c.c_delta, -0.1431084, 5e-8);
}

TEST(Nec, SubstitutionEngineElementaryInputs) {
  const SmoothSide id({[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }});
  const auto r = substitution_engine(smooth_function(m0, id) * embed_delta_deriv(m0, 1));
  EXPECT_NEAR(r.c_delta, -1.0, 1e-14);
  EXPECT_EQ(r.c_delta1, 0.0);
  EXPECT_EQ(r.c_delta2, 0.0);
  EXPECT_EQ(r.c_deltasq, 0.0);
  const auto d = embed_delta_deriv(m0, 0);
  EXPECT_EQ(substitution_engine(d * d).c_deltasq, 1.0);
  const auto h = embed_heaviside(m0, 1);
  const auto t = substitution_engine(h * embed_delta_deriv(m0, 1));
  EXPECT_NEAR(t.c_delta1, 0.5, 1e-15);
  EXPECT_NEAR(t.c_deltasq, -1.0, 1e-15);
  EXPECT_THROW(substitution_engine(h * d * d), std::invalid_argument);
  EXPECT_THROW(substitution_engine(constant(m0, 1.0)), std::invalid_argument);
}

TEST(Nec, SubstitutionEngineOnAssembledQuantities) {
  for (double a : {2.1, 2.5})
    for (double al2 : {0.0, 1.0}) {
      const oracle::ClosedForm o{1.0, a, al2};
      const auto s = substitution_engine(assemble_sigma(params(a, al2), m0));
      EXPECT_NEAR(s.c_delta, o.sigma_delta(), 1e-10);
      EXPECT_NEAR(s.c_delta1, 0.0, 1e-10);
      EXPECT_NEAR(s.c_delta2, o.sigma_delta2(), 1e-10);
      EXPECT_NEAR(s.c_deltasq, o.sigma_deltasq(), 1e-10);
      const auto n = substitution_engine(assemble_sigma_minus_nu(params(a, al2), m0));
      EXPECT_NEAR(n.c_delta, o.sigma_minus_nu_delta(), 1e-10);
      EXPECT_NEAR(n.c_deltasq, 0.0, 1e-10);
    }
}

TEST(Nec, AssemblyRejectsCosmologicalConstant) {
  auto p = params(2.5, 0.5);
  p.lambda = 0.1;
  EXPECT_THROW(assemble_sigma(p, m0), std::invalid_argument);
}

TEST(Nec, Thresholds) {
  for (double mass : {0.5, 1.0, 3.0}) {
    WormholeParams p;
    p.mass = mass;
    p.throat_radius = 2.5 * mass;
    const auto t = sign_analysis(p, {2.01 * mass, 4.0 * mass});
    EXPECT_NEAR(t.a1, (1.0 + std::sqrt(13.0)) / 2.0 * mass, 1e-9 * mass);
    EXPECT_EQ(t.classical, 3.0 * mass);
    EXPECT_LT(t.a1, t.classical);
    EXPECT_NEAR(t.admissible.hi, t.a1, 1e-12);
  }
  EXPECT_THROW(sign_analysis(params(2.5, 0.0), {1.5, 3.0}), std::invalid_argument);
}

TEST(Nec, ClassicalLimitsAndVerdicts) {
  const auto p = params(2.5, 0.0);
  const EpsSchedule s{};
  const TestForm w(0.0, 1.0);
  const auto ls = estimate_limit(assemble_sigma(p, m0), w, s);
  ASSERT_EQ(ls.kind, LimitKind::converged);
  EXPECT_NEAR(ls.value / w(0.0), -4.0 / 2.5 * std::pow(0.2, 1.5), 1e-4);
  const auto ln = estimate_limit(assemble_sigma_minus_nu(p, m0), w, s);
  ASSERT_EQ(ln.kind, LimitKind::converged);
  EXPECT_NEAR(ln.value / w(0.0), std::sqrt(0.2), 1e-4);

  const auto r = nec_verdict(p, m0, default_corpus(), s);
  EXPECT_EQ(nec_label(r.sigma.verdict), "violated");
  EXPECT_EQ(nec_label(r.sigma_minus_nu.verdict), "holds");

  const std::vector<TestForm> far{TestForm(3.0, 1.0)};
  const auto v = nec_verdict(p, m0, far, s);
  EXPECT_EQ(v.sigma.verdict, Verdict::pass);
  EXPECT_EQ(v.sigma_minus_nu.verdict, Verdict::pass);
  for (double eps : s.grid()) EXPECT_EQ(pair(assemble_sigma(p, m0), far[0], eps), 0.0);
}

TEST(Nec, ObstructionNearTheHorizon) {
  const auto p = params(2.1, 1.0);
  EpsSchedule s;
  s.count = 12;
  const auto r = nec_verdict(p, m0, {TestForm(0.0, 1.0)}, s);
  EXPECT_GT(r.sigma.simplified.c_deltasq, 0.0);
  EXPECT_FALSE(r.obstruction.empty());
  EXPECT_NEAR(r.deltasq_order, 1.0, 0.1);
  EXPECT_NEAR(r.delta2_negative_order, 2.0, 0.15);
}
