#pragma once

#include <string>
#include <vector>

#include "colombeau/association.hpp"

namespace colombeau {

struct RuleResult {
  std::string id;
  std::string description;
  int moment_order = 0;
  Verdict verdict = Verdict::pass;
  std::string detail;
  /// No corpus form meets the shell; the verdict carries no evidence.
  bool vacuous = false;
  /// Per-form sample tables (the quantity whose limit was judged).
  std::vector<FormResult> forms;
};

struct RuleSuiteOptions {
  std::vector<int> moment_orders{0, 2};
  ProfileKind kind = ProfileKind::bump_poly;
  EpsSchedule schedule;
  VerdictOptions verdict;
  std::vector<TestForm> corpus = default_corpus();
};

/// Association identities, smooth product rules, non-negativity checks, the
/// stability corollary and the two divergence-order measurements, for every
/// requested moment order.
std::vector<RuleResult> run_rule_suite(const RuleSuiteOptions& opt);

/// Same suite restricted to the listed rule ids (all when empty).
std::vector<RuleResult> run_rule_suite(const RuleSuiteOptions& opt, const std::vector<std::string>& only);

/// int psi^2 and int min(psi'', 0) by quadrature.
double psi_square_mass(const Mollifier& m);
double psi2_negative_mass(const Mollifier& m);

}  // namespace colombeau
