#include "colombeau/rules.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "colombeau/quadrature.hpp"

namespace colombeau {

namespace {

struct Env {
  MollifierPtr m;
  const RuleSuiteOptions& opt;
  GenScalar d0, d1, d2, hp, hm;
};

using RuleFn = std::function<RuleResult(const Env&)>;

struct RuleSpec {
  std::string id;
  std::string description;
  RuleFn run;
};

RuleResult from_corpus(CorpusResult r) {
  RuleResult out;
  out.verdict = r.verdict;
  out.detail = r.detail;
  out.vacuous = r.vacuous;
  if (r.vacuous) out.detail += "vacuous: every form is away from the shell; ";
  out.forms = std::move(r.forms);
  return out;
}

RuleFn association_rule(std::function<std::pair<GenScalar, GenScalar>(const Env&)> build) {
  return [build](const Env& e) {
    auto [u, v] = build(e);
    return from_corpus(associated(u, v, e.opt.corpus, e.opt.schedule, e.opt.verdict));
  };
}

RuleFn smooth_rule(std::function<SmoothSide()> f, int k) {
  return [f, k](const Env& e) {
    return from_corpus(smooth_product_rule_check(f(), k, e.m, e.opt.corpus, e.opt.schedule, e.opt.verdict));
  };
}

// expect_nonneg: the rule passes when the engine's answer matches.
RuleFn nonneg_rule(std::function<GenScalar(const Env&)> build, std::function<bool(const Env&)> expect_nonneg) {
  return [build, expect_nonneg](const Env& e) {
    CorpusResult c = is_nonnegative(build(e), e.opt.corpus, e.opt.schedule, e.opt.verdict);
    const bool expected = expect_nonneg(e);
    RuleResult r = from_corpus(c);
    if (c.verdict == Verdict::inconclusive) return r;
    if (c.vacuous) {
      // Nothing meets the shell, so there is no evidence either way.
      r.verdict = Verdict::pass;
      return r;
    }
    const bool judged = c.verdict == Verdict::pass;
    r.verdict = (judged == expected) ? Verdict::pass : Verdict::fail;
    std::ostringstream os;
    os << "judged " << (judged ? "nonnegative" : "not nonnegative") << ", expected "
       << (expected ? "nonnegative" : "not nonnegative") << "; worst order " << c.worst_order;
    r.detail = os.str() + (judged == expected ? "" : "; " + r.detail);
    return r;
  };
}

std::vector<TestForm> shell_forms(const Env& e) {
  std::vector<TestForm> f;
  for (const auto& w : e.opt.corpus)
    if (w.contains(0.0)) f.push_back(w);
  return f;
}

// Divergence-order measurement on the forms whose interior contains the shell.
RuleFn divergence_rule(std::function<GenScalar(const Env&)> build, bool negative_part, double order,
                       double order_tol, std::function<double(const Env&)> constant, double const_rel_tol) {
  return [=](const Env& e) {
    RuleResult r;
    const GenScalar u = build(e);
    const double c = constant(e);
    std::ostringstream os;
    const auto forms = shell_forms(e);
    if (forms.empty()) {
      r.vacuous = true;
      r.detail = "vacuous: no corpus form contains the shell";
      return r;
    }
    for (const auto& w : forms) {
      LimitVerdict l = negative_part ? estimate_negative_part_limit(u, w, e.opt.schedule, e.opt.verdict)
                                     : estimate_limit(u, w, e.opt.schedule, e.opt.verdict);
      Verdict v = Verdict::pass;
      const double expect = c * w(0.0);
      if (l.kind == LimitKind::inconclusive) {
        v = Verdict::inconclusive;
      } else if (l.kind != LimitKind::diverges || std::abs(l.order - order) > order_tol ||
                 std::abs(l.leading_constant - expect) > const_rel_tol * std::abs(expect)) {
        v = Verdict::fail;
      }
      os << w.id() << ": order " << l.order << ", constant " << l.leading_constant << " vs " << expect << "; ";
      r.verdict = combine(r.verdict, v);
      r.forms.push_back({w, std::move(l)});
    }
    r.detail = os.str();
    return r;
  };
}

SmoothSide poly_side(std::vector<double> c, std::string label) {
  // f = sum c_i x^i with its derivatives.
  auto fn = [c](double x, int order) {
    Jet xv = Jet::variable(x, order);
    Jet acc(0.0, order);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * xv + c[i];
    return acc;
  };
  return SmoothSide(fn, Jet::kMaxOrder, SideDomain::all, std::move(label));
}

SmoothSide exp_side() {
  return SmoothSide([](double x, int order) { return exp(Jet::variable(x, order)); }, Jet::kMaxOrder,
                    SideDomain::all, "exp");
}

std::vector<RuleSpec> catalogue() {
  std::vector<RuleSpec> rules;
  auto add = [&](std::string id, std::string desc, RuleFn fn) { rules.push_back({std::move(id), std::move(desc), std::move(fn)}); };

  add("theta_sq_plus", "H+^2 ~ H+", association_rule([](const Env& e) { return std::pair{e.hp * e.hp, e.hp}; }));
  add("theta_sq_minus", "H-^2 ~ H-", association_rule([](const Env& e) { return std::pair{e.hm * e.hm, e.hm}; }));
  add("delta_theta_plus", "d H+ ~ d/2",
      association_rule([](const Env& e) { return std::pair{e.d0 * e.hp, 0.5 * e.d0}; }));
  add("delta_theta_minus", "d H- ~ d/2",
      association_rule([](const Env& e) { return std::pair{e.d0 * e.hm, 0.5 * e.d0}; }));
  add("theta_delta1_plus", "H+ d' ~ d'/2 - d^2",
      association_rule([](const Env& e) { return std::pair{e.hp * e.d1, 0.5 * e.d1 - e.d0 * e.d0}; }));
  add("theta_delta1_minus", "H- d' ~ d'/2 + d^2",
      association_rule([](const Env& e) { return std::pair{e.hm * e.d1, 0.5 * e.d1 + e.d0 * e.d0}; }));
  add("theta_delta2_plus", "H+ d'' ~ d''/2 - 3 d d'",
      association_rule([](const Env& e) { return std::pair{e.hp * e.d2, 0.5 * e.d2 - 3.0 * (e.d0 * e.d1)}; }));
  add("theta_delta2_minus", "H- d'' ~ d''/2 + 3 d d'",
      association_rule([](const Env& e) { return std::pair{e.hm * e.d2, 0.5 * e.d2 + 3.0 * (e.d0 * e.d1)}; }));
  add("theta_sum_delta1", "H+ d' + H- d' ~ d'",
      association_rule([](const Env& e) { return std::pair{e.hp * e.d1 + e.hm * e.d1, e.d1}; }));
  add("theta_sum_delta2", "H+ d'' + H- d'' ~ d''",
      association_rule([](const Env& e) { return std::pair{e.hp * e.d2 + e.hm * e.d2, e.d2}; }));

  add("smooth_linear_delta1", "x d' ~ -d", smooth_rule([] { return poly_side({0.0, 1.0}, "x"); }, 1));
  add("smooth_square_delta2", "x^2 d'' ~ 2 d", smooth_rule([] { return poly_side({0.0, 0.0, 1.0}, "x^2"); }, 2));
  add("smooth_exp_delta1", "e^x d' ~ -d + d'", smooth_rule(exp_side, 1));
  add("smooth_exp_delta2", "e^x d'' ~ d - 2 d' + d''", smooth_rule(exp_side, 2));
  add("smooth_const_delta2", "1 d'' ~ d''", smooth_rule([] { return SmoothSide::constant(1.0); }, 2));

  add("nonneg_delta_sq", "d^2 >= 0",
      nonneg_rule([](const Env& e) { return e.d0 * e.d0; }, [](const Env&) { return true; }));
  add("nonneg_delta2", "d'' is not >= 0",
      nonneg_rule([](const Env& e) { return e.d2; }, [](const Env&) { return false; }));
  add("nonneg_heaviside", "H+ >= 0", nonneg_rule([](const Env& e) { return e.hp; }, [](const Env&) { return true; }));
  add("nonneg_delta", "d >= 0 iff the mollifier is nonnegative",
      nonneg_rule([](const Env& e) { return e.d0; }, [](const Env& e) { return e.m->negative_mass() == 0.0; }));

  add("stability", "u >= 0 and u ~ v imply v >= 0 on (d H+, d/2)", [](const Env& e) {
    const GenScalar u = e.d0 * e.hp, v = 0.5 * e.d0;
    const auto& o = e.opt;
    const CorpusResult pu = is_nonnegative(u, o.corpus, o.schedule, o.verdict);
    const CorpusResult uv = associated(u, v, o.corpus, o.schedule, o.verdict);
    const CorpusResult pv = is_nonnegative(v, o.corpus, o.schedule, o.verdict);
    RuleResult r;
    std::ostringstream os;
    os << "u>=0: " << to_string(pu.verdict) << ", u~v: " << to_string(uv.verdict) << ", v>=0: " << to_string(pv.verdict);
    if (pu.verdict == Verdict::inconclusive || uv.verdict == Verdict::inconclusive ||
        pv.verdict == Verdict::inconclusive)
      r.verdict = Verdict::inconclusive;
    else if (pu.verdict == Verdict::pass && uv.verdict == Verdict::pass && pv.verdict != Verdict::pass)
      r.verdict = Verdict::fail;
    else
      r.verdict = Verdict::pass;
    if (r.verdict == Verdict::pass && !(pu.verdict == Verdict::pass && uv.verdict == Verdict::pass))
      os << " (premise not met; implication holds vacuously)";
    r.detail = os.str();
    r.forms = pv.forms;
    return r;
  });

  add("diverge_delta_sq", "int d^2 w ~ w(0) int psi^2 / eps",
      divergence_rule([](const Env& e) { return e.d0 * e.d0; }, false, 1.0, 0.1,
                      [](const Env& e) { return psi_square_mass(*e.m); }, 0.05));
  add("diverge_delta2_negpart", "int (d'')_- w ~ w(0) int (psi'')_- / eps^2",
      divergence_rule([](const Env& e) { return e.d2; }, true, 2.0, 0.15,
                      [](const Env& e) { return psi2_negative_mass(*e.m); }, 0.10));
  return rules;
}

}  // namespace

double psi_square_mass(const Mollifier& m) {
  const std::array<double, 3> br{-1.0, 0.0, 1.0};
  return integrate_or_throw([&](double x) { return m(x) * m(x); }, br,
                            QuadratureOptions{.abs_tol = 1e-15, .rel_tol = 1e-14, .min_panels_per_piece = 4},
                            "int psi^2");
}

double psi2_negative_mass(const Mollifier& m) {
  auto f = [&](double x) { return m.derivative(x, 2); };
  std::vector<double> br{-1.0};
  constexpr int n = 4000;
  double xp = -1.0, fp = f(-1.0);
  for (int i = 1; i <= n; ++i) {
    const double x = -1.0 + 2.0 * i / n;
    const double fx = f(x);
    if ((fp < 0 && fx > 0) || (fp > 0 && fx < 0)) br.push_back(find_root(f, xp, x, 1e-15));
    xp = x;
    fp = fx;
  }
  br.push_back(1.0);
  return integrate_or_throw([&](double x) { return std::min(f(x), 0.0); }, br,
                            QuadratureOptions{.abs_tol = 1e-15, .rel_tol = 1e-14, .min_panels_per_piece = 2},
                            "int (psi'')_-");
}

std::vector<RuleResult> run_rule_suite(const RuleSuiteOptions& opt) { return run_rule_suite(opt, {}); }

std::vector<RuleResult> run_rule_suite(const RuleSuiteOptions& opt, const std::vector<std::string>& only) {
  opt.schedule.validate();
  const auto rules = catalogue();
  for (const auto& id : only)
    if (std::none_of(rules.begin(), rules.end(), [&](const RuleSpec& r) { return r.id == id; }))
      throw std::invalid_argument("unknown rule '" + id + "'");
  std::vector<RuleResult> out;
  for (int mo : opt.moment_orders) {
    MollifierPtr m = build_mollifier(mo, opt.kind);
    const Env env{m, opt, embed_delta_deriv(m, 0), embed_delta_deriv(m, 1), embed_delta_deriv(m, 2),
                  embed_heaviside(m, 1), embed_heaviside(m, -1)};
    for (const auto& spec : rules) {
      if (!only.empty() && std::find(only.begin(), only.end(), spec.id) == only.end()) continue;
      RuleResult r;
      try {
        r = spec.run(env);
      } catch (const std::exception& ex) {
        r.verdict = Verdict::fail;
        r.detail = std::string("error: ") + ex.what();
      }
      r.id = spec.id;
      r.description = spec.description;
      r.moment_order = mo;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace colombeau
