#pragma once

#include <optional>
#include <string>
#include <vector>

#include "colombeau/association.hpp"
#include "colombeau/wormhole.hpp"

namespace colombeau {

/// c_delta d + c_delta1 d' + c_delta2 d'' + c_deltasq d^2 at the shell.
struct DeltaPolynomial {
  double c_delta = 0.0;
  double c_delta1 = 0.0;
  double c_delta2 = 0.0;
  double c_deltasq = 0.0;
};

GenScalar to_genscalar(const DeltaPolynomial& d, const MollifierPtr& m);

enum class Inequality { sigma, sigma_minus_nu };

std::string to_string(Inequality i);

/// The embedded metric and Christoffel components entering both inequalities.
/// They depend on M and a only, so one set serves every alpha2 (their
/// per-eps shell fits are cached inside the nodes).
struct ShellComponents {
  GenScalar g_tt, g_thth;
  GenScalar gamma_tt;    // (Gamma-)_tt + (Gamma+)_tt
  GenScalar gamma_thth;  // (Gamma-)_thth + (Gamma+)_thth
};

ShellComponents embed_shell_components(const WormholeParams& p, const MollifierPtr& m, double tolerance = 1e-10);

// The quantities carry the factor kappa; Lambda must be 0.
GenScalar assemble_sigma(const WormholeParams& p, const ShellComponents& c);
GenScalar assemble_sigma_minus_nu(const WormholeParams& p, const ShellComponents& c);
GenScalar assemble(Inequality i, const WormholeParams& p, const ShellComponents& c);
GenScalar assemble_sigma(const WormholeParams& p, const MollifierPtr& m, double tolerance = 1e-10);
GenScalar assemble_sigma_minus_nu(const WormholeParams& p, const MollifierPtr& m, double tolerance = 1e-10);
GenScalar assemble(Inequality i, const WormholeParams& p, const MollifierPtr& m, double tolerance = 1e-10);

/// Shell coefficient of the alpha2 = 0 quantity.
double classical_coefficient(Inequality i, const WormholeParams& p);

/// Closed-form coefficients after the ansatz and the association identities.
DeltaPolynomial simplified_sigma(const WormholeParams& p);
DeltaPolynomial simplified_sigma_minus_nu(const WormholeParams& p);
DeltaPolynomial simplified(Inequality i, const WormholeParams& p);

struct SubstitutionOptions {
  /// Relative tolerance for the continuity required by f d^2 and for the
  /// cancellation of d d' terms.
  double continuity_tol = 1e-10;
};

/// Expands u into monomials, replaces smooth factors times d, d', d'' by
/// their one-sided values and derivatives multiplied with H(+-eta), then
/// applies
///   H+- d ~ d/2,  H+- d' ~ d'/2 -+ d^2,  H+- d'' ~ d''/2 -+ 3 d d'.
/// Throws std::invalid_argument on nodes it cannot expand, missing derivative
/// data, products above second order, a discontinuous factor of d^2 or a
/// d d' term that does not cancel.
DeltaPolynomial substitution_engine(const GenScalar& u, const SubstitutionOptions& opt = {});

struct Thresholds {
  double mass = 0.0;
  /// Upper end of 3M^2 + M a - a^2 >= 0 on a > 2M.
  double a1 = 0.0;
  /// Upper end of (6M - 2a) >= 0.
  double classical = 0.0;
  /// (2M, a1] clipped to the requested range; empty when they miss.
  Interval admissible;
  /// Sign change of the simplified sigma delta coefficient in the range, if any.
  std::optional<double> sigma_delta_root;
};

/// Throws std::invalid_argument unless the range lies in (2M, inf).
Thresholds sign_analysis(const WormholeParams& p, Interval a_range);

/// One eps sample of the d'' obstruction on a shell form: the positive mass of
/// the d^2 term against the negative-part mass of the d'' term.
struct ObstructionSample {
  double eps;
  double deltasq_mass;
  double delta2_negative_mass;
  double ratio;
};

struct InequalityReport {
  Inequality inequality = Inequality::sigma;
  /// pass: holds, fail: violated.
  Verdict verdict = Verdict::inconclusive;
  CorpusResult limits;
  DeltaPolynomial simplified;
  double classical_coefficient = 0.0;
};

struct NecReport {
  WormholeParams params;
  InequalityReport sigma;
  /// The phi inequality is the same up to sin^2(theta).
  InequalityReport sigma_minus_nu;
  Thresholds thresholds;
  std::string obstruction_form;
  std::vector<ObstructionSample> obstruction;
  /// Fitted eps-orders of the two masses; empty fits leave NaN.
  double deltasq_order = 0.0;
  double delta2_negative_order = 0.0;
};

NecReport nec_verdict(const WormholeParams& p, const MollifierPtr& m, const std::vector<TestForm>& corpus,
                      const EpsSchedule& s, const VerdictOptions& opt = {});

/// holds / violated / inconclusive.
std::string nec_label(Verdict v);

}  // namespace colombeau
