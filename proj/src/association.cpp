#include "colombeau/association.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "colombeau/fit.hpp"

namespace colombeau {

namespace {

constexpr double kNoiseRel = 1e-9;

std::string describe_form(const TestForm& w) { return "form " + w.id(); }

}  // namespace

void EpsSchedule::validate() const {
  if (!(eps0 > 0.0 && eps0 <= 1.0)) throw std::invalid_argument("schedule eps0 must lie in (0, 1]");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("schedule ratio must lie in (0, 1)");
  if (count < 1) throw std::invalid_argument("schedule count must be positive");
  if (eps0 * std::pow(ratio, count - 1) < 1e-6) throw std::invalid_argument("schedule floor below 1e-6");
}

std::vector<double> EpsSchedule::grid() const {
  validate();
  std::vector<double> g;
  for (int j = 0; j < count; ++j) g.push_back(eps0 * std::pow(ratio, j));
  return g;
}

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::converged: return "converged";
    case LimitKind::diverges: return "diverges";
    case LimitKind::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::inconclusive: return 2;
  }
  return 1;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

LimitVerdict classify(std::vector<std::pair<double, double>> samples, const VerdictOptions& opt,
                      std::vector<double> noise) {
  LimitVerdict v;
  v.samples = std::move(samples);
  const int n = static_cast<int>(v.samples.size());
  if (n < std::max(opt.min_samples, 3)) {
    std::ostringstream os;
    os << "too few samples (" << n << " < " << std::max(opt.min_samples, 3) << ")";
    v.reason = os.str();
    return v;
  }
  const int k = std::min(n, std::max(opt.fit_points, 3));
  if (!noise.empty() && static_cast<int>(noise.size()) != n) throw std::invalid_argument("noise size mismatch");
  std::vector<double> eps, val, err;
  for (int i = n - k; i < n; ++i) {
    eps.push_back(v.samples[i].first);
    val.push_back(v.samples[i].second);
    err.push_back(noise.empty() ? 0.0 : noise[i]);
  }
  for (double x : val)
    if (!std::isfinite(x)) {
      v.reason = "non-finite sample";
      return v;
    }
  if (std::all_of(val.begin(), val.end(), [](double x) { return x == 0.0; })) {
    v.kind = LimitKind::converged;
    v.reason = "identically zero";
    return v;
  }

  double scale = 0.0;
  for (double x : val) scale = std::max(scale, std::abs(x));

  // Divergence: |I| ~ C eps^-p with fixed sign.
  const bool all_pos = std::all_of(val.begin(), val.end(), [](double x) { return x > 0.0; });
  const bool all_neg = std::all_of(val.begin(), val.end(), [](double x) { return x < 0.0; });
  bool above_noise = true;
  for (int i = 0; i < k; ++i) above_noise = above_noise && std::abs(val[i]) > 2.0 * err[i];
  if ((all_pos || all_neg) && above_noise) {
    std::vector<double> lx, ly;
    for (int i = 0; i < k; ++i) {
      lx.push_back(-std::log(eps[i]));
      ly.push_back(std::log(std::abs(val[i])));
    }
    const LineFit f = fit_line(lx, ly);
    if (f.slope >= opt.min_divergence_order && f.residual <= opt.max_fit_residual) {
      v.kind = LimitKind::diverges;
      v.order = f.slope;
      v.leading_constant = (all_pos ? 1.0 : -1.0) * std::exp(f.intercept);
      v.fit_residual = f.residual;
      v.reason = "log-log growth";
      return v;
    }
  }

  // Convergence: differences decay like eps^q; sum the geometric tail.
  const double floor = kNoiseRel * (1.0 + scale);
  auto noise_at = [&](int i) { return std::max(floor, 2.0 * (err[i] + err[i - 1])); };
  std::vector<double> lx, ly;
  double last_d = 0.0, last_r = eps[k - 1] / eps[k - 2];
  const double last_noise = noise_at(k - 1);
  for (int i = 1; i < k; ++i) {
    const double d = val[i] - val[i - 1];
    if (std::abs(d) > noise_at(i)) {
      lx.push_back(std::log(eps[i]));
      ly.push_back(std::log(std::abs(d)));
    }
    if (i == k - 1) last_d = d;
  }
  const double last = val.back();
  if (lx.empty()) {
    if (last_noise > opt.rel_tol) {
      v.reason = "round-off exceeds the tolerance at the eps floor";
      return v;
    }
    v.kind = LimitKind::converged;
    v.value = last;
    v.reason = "differences at noise level";
    return v;
  }
  if (lx.size() < 3) {
    // A few isolated steps above noise, the rest flat.
    if (std::abs(last_d) <= last_noise) {
      v.kind = LimitKind::converged;
      v.value = last;
      v.reason = "differences reached noise level";
      return v;
    }
    v.reason = "too few significant differences to fit a decay order";
    return v;
  }
  const LineFit f = fit_line(lx, ly);
  v.order = f.slope;
  v.fit_residual = f.residual;
  if (f.slope < opt.min_decay_slope || f.residual > opt.max_fit_residual) {
    std::ostringstream os;
    os << "differences do not decay cleanly (slope " << f.slope << ", residual " << f.residual << ")";
    v.reason = os.str();
    return v;
  }
  double limit = last;
  if (std::abs(last_d) > last_noise) {
    const double rq = std::pow(last_r, f.slope);
    limit = last + last_d * rq / (1.0 - rq);
  }
  if (std::abs(last - limit) > opt.rel_tol * (1.0 + std::abs(limit))) {
    std::ostringstream os;
    os << "not within tolerance at the eps floor (last " << last << ", extrapolated " << limit << ")";
    v.reason = os.str();
    return v;
  }
  v.kind = LimitKind::converged;
  v.value = limit;
  v.reason = "decaying differences";
  return v;
}

LimitVerdict estimate_limit(const GenScalar& u, const TestForm& w, const EpsSchedule& s, const VerdictOptions& opt) {
  std::vector<std::pair<double, double>> samples;
  std::vector<double> noise;
  for (double e : s.grid()) {
    const PairResult r = pair_detailed(u, w, e);
    samples.emplace_back(e, r.value);
    noise.push_back(r.noise);
  }
  return classify(std::move(samples), opt, std::move(noise));
}

LimitVerdict estimate_negative_part_limit(const GenScalar& u, const TestForm& w, const EpsSchedule& s,
                                          const VerdictOptions& opt) {
  std::vector<std::pair<double, double>> samples;
  std::vector<double> noise;
  for (double e : s.grid()) {
    const PairResult r = negative_part_pair_detailed(u, w, e);
    samples.emplace_back(e, r.value);
    noise.push_back(r.noise);
  }
  return classify(std::move(samples), opt, std::move(noise));
}

bool away_from_shell(const TestForm& w, double eps0) { return w.upper() <= -eps0 || w.lower() >= eps0; }

namespace {

template <class Judge>
CorpusResult over_corpus(const std::vector<TestForm>& corpus, const EpsSchedule& s, Judge&& judge) {
  CorpusResult r;
  r.vacuous = !corpus.empty() && std::all_of(corpus.begin(), corpus.end(),
                                             [&](const TestForm& w) { return away_from_shell(w, s.eps0); });
  std::ostringstream detail;
  for (const auto& w : corpus) {
    auto [limit, verdict] = judge(w);
    r.worst_order = std::max(r.worst_order, limit.order);
    if (verdict != Verdict::pass) {
      detail << describe_form(w) << ": " << to_string(limit.kind);
      if (limit.kind == LimitKind::converged) detail << " to " << limit.value;
      if (limit.kind == LimitKind::diverges) detail << " with order " << limit.order;
      if (!limit.reason.empty()) detail << " (" << limit.reason << ")";
      detail << "; ";
    }
    r.verdict = combine(r.verdict, verdict);
    r.forms.push_back({w, std::move(limit)});
  }
  r.detail = detail.str();
  return r;
}

Verdict zero_verdict(const LimitVerdict& l, const VerdictOptions& opt) {
  if (l.kind == LimitKind::inconclusive) return Verdict::inconclusive;
  return l.converged_to_zero(opt.rel_tol) ? Verdict::pass : Verdict::fail;
}

}  // namespace

CorpusResult associated(const GenScalar& u, const GenScalar& v, const std::vector<TestForm>& corpus,
                        const EpsSchedule& s, const VerdictOptions& opt) {
  const GenScalar diff = u - v;
  return over_corpus(corpus, s, [&](const TestForm& w) {
    LimitVerdict l = estimate_limit(diff, w, s, opt);
    const Verdict verdict = zero_verdict(l, opt);
    return std::pair{std::move(l), verdict};
  });
}

CorpusResult is_nonnegative(const GenScalar& u, const std::vector<TestForm>& corpus, const EpsSchedule& s,
                            const VerdictOptions& opt) {
  for (const auto& w : corpus)
    if (w.derivative_order() != 0) throw std::invalid_argument("non-negativity needs nonnegative test forms");
  return over_corpus(corpus, s, [&](const TestForm& w) {
    LimitVerdict l = estimate_negative_part_limit(u, w, s, opt);
    const Verdict verdict = zero_verdict(l, opt);
    return std::pair{std::move(l), verdict};
  });
}

CorpusResult smooth_product_rule_check(const SmoothSide& f, int k, const MollifierPtr& m,
                                       const std::vector<TestForm>& corpus, const EpsSchedule& s,
                                       const VerdictOptions& opt) {
  if (k < 0 || k > 2) throw std::invalid_argument("smooth product rule needs k in [0, 2]");
  const Jet j = f.jet(0.0, k);
  const GenScalar lhs = smooth_function(m, f) * embed_delta_deriv(m, k);
  std::vector<GenScalar> rhs;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    const double sign = (i % 2) ? -1.0 : 1.0;
    rhs.push_back(scale(sign * binom * j.derivative(i), embed_delta_deriv(m, k - i)));
    binom = binom * (k - i) / (i + 1);
  }
  return associated(lhs, sum(std::move(rhs)), corpus, s, opt);
}

}  // namespace colombeau
