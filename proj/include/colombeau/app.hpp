#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "colombeau/config.hpp"
#include "colombeau/rules.hpp"

namespace colombeau {

/// Exit codes: 0 pass, 1 failure or error, 2 inconclusive.
int run_rules(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_geometry(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_mollifier_report(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Writes the CSV to cfg.output_csv, or to out when that is empty.
int run_nec_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err, int threads);

/// The sweep CSV as text; the bytes depend on cfg only.
std::string nec_sweep_csv(const RunConfig& cfg, int threads);

/// The rule-suite CSV (rule_id, moment_order, form_id, eps, value, verdict).
std::string rules_csv(const RunConfig& cfg, const std::vector<RuleResult>& results);

/// COLOMBEAU_THREADS when set to a positive integer, else the hardware count.
int threads_from_env();

}  // namespace colombeau
