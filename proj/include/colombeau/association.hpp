#pragma once

#include <string>
#include <utility>
#include <vector>

#include "colombeau/genfunc.hpp"

namespace colombeau {

/// Geometric grid eps_j = eps0 * ratio^j, j = 0..count-1.
struct EpsSchedule {
  double eps0 = 0.2;
  double ratio = 0.7;
  int count = 25;

  /// Throws std::invalid_argument on a malformed grid. Short grids are legal
  /// here; the classifier reports them as inconclusive.
  void validate() const;
  std::vector<double> grid() const;
};

struct VerdictOptions {
  double rel_tol = 1e-4;
  double min_decay_slope = 0.5;
  double max_fit_residual = 0.15;
  double min_divergence_order = 0.3;
  int fit_points = 12;
  int min_samples = 8;
};

enum class LimitKind { converged, diverges, inconclusive };

std::string to_string(LimitKind k);

struct LimitVerdict {
  LimitKind kind = LimitKind::inconclusive;
  double value = 0.0;             // limit, for converged
  double order = 0.0;             // divergence order p, or decay order of the differences
  double leading_constant = 0.0;  // I ~ C eps^-p, for diverges
  double fit_residual = 0.0;
  std::vector<std::pair<double, double>> samples;  // (eps, integral), schedule order
  std::string reason;

  bool converged_to_zero(double tol) const { return kind == LimitKind::converged && std::abs(value) <= tol; }
};

/// Classifies a sampled eps-sequence (eps decreasing). noise holds an
/// absolute error bound per sample; differences below it carry no signal.
LimitVerdict classify(std::vector<std::pair<double, double>> samples, const VerdictOptions& opt = {},
                      std::vector<double> noise = {});

LimitVerdict estimate_limit(const GenScalar& u, const TestForm& w, const EpsSchedule& s, const VerdictOptions& opt = {});
LimitVerdict estimate_negative_part_limit(const GenScalar& u, const TestForm& w, const EpsSchedule& s,
                                          const VerdictOptions& opt = {});

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);
/// Process exit code: 0 pass, 1 fail, 2 inconclusive.
int exit_code(Verdict v);
/// fail dominates inconclusive dominates pass.
Verdict combine(Verdict a, Verdict b);

struct FormResult {
  TestForm form;
  LimitVerdict limit;
};

struct CorpusResult {
  Verdict verdict = Verdict::pass;
  std::vector<FormResult> forms;
  std::string detail;
  /// Largest fitted order over the forms (decay order of the negative part
  /// for non-negativity checks, divergence order when one diverges).
  double worst_order = 0.0;
  bool vacuous = false;  // no corpus form meets the shell
};

/// u ~ v iff estimate_limit(u - v) converges to 0 on every form.
CorpusResult associated(const GenScalar& u, const GenScalar& v, const std::vector<TestForm>& corpus,
                        const EpsSchedule& s, const VerdictOptions& opt = {});

/// u >= 0 iff the negative part pairs to 0 in the limit on every form.
CorpusResult is_nonnegative(const GenScalar& u, const std::vector<TestForm>& corpus, const EpsSchedule& s,
                            const VerdictOptions& opt = {});

/// f * delta^(k) ~ sum_j (-1)^j C(k,j) f^(j)(0) delta^(k-j), with f smooth.
CorpusResult smooth_product_rule_check(const SmoothSide& f, int k, const MollifierPtr& m,
                                       const std::vector<TestForm>& corpus, const EpsSchedule& s,
                                       const VerdictOptions& opt = {});

/// True if the corpus form's support stays away from [-eps0, eps0].
bool away_from_shell(const TestForm& w, double eps0);

}  // namespace colombeau
