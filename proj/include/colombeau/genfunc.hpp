#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "colombeau/jet.hpp"
#include "colombeau/mollifier.hpp"

namespace colombeau {

struct MixedMollifierError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a family is evaluated where it is not defined (outside a
/// square-root window, or where the radicand has the wrong sign).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Closed interval with possibly infinite ends; lo > hi encodes the empty set.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval whole() { return {}; }
  static Interval none() { return {1.0, -1.0}; }
  bool empty() const { return !(lo <= hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  Interval intersect(const Interval& o) const {
    return {std::max(lo, o.lo), std::min(hi, o.hi)};
  }
  Interval hull(const Interval& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    return {std::min(lo, o.lo), std::max(hi, o.hi)};
  }
};

using Window = Interval;

enum class SideDomain { nonnegative, nonpositive, all };

/// A smooth function of the proper radial distance on one side of the shell
/// (or on the whole line), together with its analytic derivatives.
///
/// The derivative data is checked against central differences of the value
/// at construction.
class SmoothSide {
 public:
  using JetFn = std::function<Jet(double x, int order)>;
  using ValueFn = std::function<double(double x)>;

  /// value, d1, d2, ... as separate callables.
  explicit SmoothSide(std::vector<ValueFn> derivatives, SideDomain domain = SideDomain::all,
                      std::string label = {});
  /// Jet-producing callable valid up to max_order; value_fn is an optional
  /// fast path for plain evaluation.
  SmoothSide(JetFn fn, int max_order, SideDomain domain, std::string label = {}, ValueFn value_fn = {});

  static SmoothSide constant(double c, SideDomain domain = SideDomain::all);

  double operator()(double x) const;
  Jet jet(double x, int order) const;
  int max_order() const { return max_order_; }
  SideDomain domain() const { return domain_; }
  const std::string& label() const { return label_; }
  bool is_zero_constant() const { return zero_; }

  /// The derivative as a SmoothSide with one order less of stored data.
  SmoothSide derivative() const;

 private:
  SmoothSide() = default;
  void validate() const;

  JetFn fn_;
  ValueFn value_fn_;
  int max_order_ = 0;
  int shift_ = 0;
  SideDomain domain_ = SideDomain::all;
  std::string label_;
  bool zero_ = false;
  bool constant_ = false;
};

/// Bump test function exp(-1/(1-u^2)), u = (x - center)/half_width, or one of
/// its derivatives.
class TestForm {
 public:
  TestForm(double center, double half_width, int derivative_order = 0);

  double operator()(double x) const;
  TestForm derivative() const { return TestForm(center_, half_width_, order_ + 1); }

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double lower() const { return center_ - half_width_; }
  double upper() const { return center_ + half_width_; }
  double width() const { return 2.0 * half_width_; }
  int derivative_order() const { return order_; }
  bool contains(double x) const { return x > lower() && x < upper(); }
  /// sup |w| for the undifferentiated form (attained at the center).
  double sup_norm() const;
  /// int w dx for the undifferentiated form.
  double integral() const;
  std::string id() const;

 private:
  double center_, half_width_;
  int order_;
};

/// Cartesian product of centers and half-widths, in that nesting order.
std::vector<TestForm> make_corpus(std::span<const double> centers, std::span<const double> half_widths);

/// Centers {0, -2, 2} times half-widths {0.25, 1, 4}, in units of length_unit.
std::vector<TestForm> default_corpus(double length_unit = 1.0);

enum class NodeKind {
  heaviside,
  delta_deriv,
  piecewise,
  smooth,
  constant,
  sum,
  product,
  scale,
  derivative,
  sqrt_family,
  reciprocal,
  convolution
};

/// An eps-indexed family of smooth functions of the proper radial distance,
/// stored as an immutable expression tree that shares one mollifier.
class GenScalar {
 public:
  struct Node;

  GenScalar(std::shared_ptr<const Node> node, MollifierPtr mollifier);

  NodeKind kind() const;
  const Node& node() const { return *node_; }
  const MollifierPtr& mollifier() const { return mollifier_; }

  double operator()(double eps, double x) const;
  /// Derivatives in the radial variable up to `order`, by forward propagation
  /// through the tree (independent of the symbolic lie_derivative).
  Jet jet(double eps, double x, int order) const;
  /// Like operator() but sums absolute values of sum terms: the size of the
  /// quantities that cancel, used as the round-off scale.
  double magnitude(double eps, double x) const;

  Interval support(double eps) const;
  void collect_breakpoints(double eps, std::vector<double>& out) const;
  bool has_embedded_nodes() const;
  /// Growth order p with sup_K |u_eps| = O(eps^-p).
  double declared_order() const;
  std::string describe() const;

 private:
  std::shared_ptr<const Node> node_;
  MollifierPtr mollifier_;
};

/// Per-eps Chebyshev fits of an embedded smooth-by-sides function on the
/// shell window [-eps, eps], built on first use and shared by copies of the
/// node. Thread-safe.
class ShellCache;
std::shared_ptr<ShellCache> make_shell_cache();

namespace node {
struct Heaviside { int sign; };
struct DeltaDeriv { int order; };
struct Piecewise {
  SmoothSide plus, minus;
  double tolerance;
  std::shared_ptr<ShellCache> cache = make_shell_cache();
};
struct Smooth { SmoothSide f; };
struct Constant { double value; };
struct Sum { std::vector<GenScalar> terms; };
struct Product { std::vector<GenScalar> factors; };
struct Scale { double factor; GenScalar child; };
struct Derivative { GenScalar child; };
struct SqrtFamily { GenScalar child; int sign; Window window; double eps0; };
struct Reciprocal { GenScalar child; Window window; double inverse_order; };
/// int K(eta') rho_eps^(k)(x - eta') deta' over the sides present; K is the
/// radial-integral density already expressed in the distance variable.
struct Convolution {
  std::string label;
  std::optional<SmoothSide> plus, minus;
  int rho_order;
  double tolerance;
  std::shared_ptr<ShellCache> cache = make_shell_cache();
};
}  // namespace node

struct GenScalar::Node {
  std::variant<node::Heaviside, node::DeltaDeriv, node::Piecewise, node::Smooth, node::Constant, node::Sum,
               node::Product, node::Scale, node::Derivative, node::SqrtFamily, node::Reciprocal,
               node::Convolution>
      payload;
};

// Embeddings.
GenScalar embed_heaviside(MollifierPtr m, int sign);
/// k in [0, 2]; higher orders only arise internally from differentiation.
GenScalar embed_delta_deriv(MollifierPtr m, int k);
GenScalar embed_piecewise(MollifierPtr m, SmoothSide plus, SmoothSide minus, double tolerance = 1e-10);
GenScalar smooth_function(MollifierPtr m, SmoothSide f);
GenScalar constant(MollifierPtr m, double c);
GenScalar convolution_integral(MollifierPtr m, std::string label, std::optional<SmoothSide> plus,
                               std::optional<SmoothSide> minus, double tolerance = 1e-10);

// Algebra on representatives. Mixing nets throws MixedMollifierError.
GenScalar add(const GenScalar& u, const GenScalar& v);
GenScalar sum(std::vector<GenScalar> terms);
GenScalar scale(double c, const GenScalar& u);
GenScalar mul(const GenScalar& u, const GenScalar& v);
GenScalar product(std::vector<GenScalar> factors);

inline GenScalar operator+(const GenScalar& u, const GenScalar& v) { return add(u, v); }
inline GenScalar operator-(const GenScalar& u) { return scale(-1.0, u); }
inline GenScalar operator-(const GenScalar& u, const GenScalar& v) { return add(u, scale(-1.0, v)); }
inline GenScalar operator*(const GenScalar& u, const GenScalar& v) { return mul(u, v); }
inline GenScalar operator*(double c, const GenScalar& u) { return scale(c, u); }

/// Wraps u in an (unevaluated) derivative node.
GenScalar derivative(const GenScalar& u);
/// d/d eta of u, pushed down to the leaves.
GenScalar lie_derivative(const GenScalar& u);
/// Equivalent tree with every derivative node pushed down.
GenScalar normal_form(const GenScalar& u);

std::vector<double> default_eps_samples();

/// sqrt(sign * u) on the window. Requires sign * u > 0 there for all sampled
/// eps below a detected eps0 (recorded in the node); throws DomainError if
/// even the smallest sampled eps violates it.
GenScalar sqrt_family(const GenScalar& u, int sign, Window window,
                      std::span<const double> eps_samples = {});
GenScalar reciprocal(const GenScalar& u, Window window, std::span<const double> eps_samples = {});

struct GrowthDiagnostic {
  double declared;
  double measured;
  bool ok;
};

/// Log-log fit of sup over the window of |u_eps| against 1/eps.
GrowthDiagnostic measure_growth(const GenScalar& u, Window window, std::span<const double> eps);

struct PairOptions {
  double sup_tol = 1e-10;     // admissible error: sup_tol * (1 + sup|u|)
  double l1_rel_tol = 1e-13;  // working target relative to int |u w|
  int min_panels = 4;
};

struct PairResult {
  double value = 0.0;
  double error = 0.0;         // quadrature error estimate
  double abs_integral = 0.0;  // int |u w|
  /// Absolute resolution: the larger of the quadrature error estimate and the
  /// round-off scale of the cancelling terms.
  double noise = 0.0;
};

/// int u(eps, x) w(x) dx over supp(w), subdivided at the tree's breakpoints.
PairResult pair_detailed(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt = {});
double pair(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt = {});

/// int min(u(eps, x), 0) w(x) dx with sign changes of u bracketed first.
double negative_part_pair(const GenScalar& u, const TestForm& w, double eps, const PairOptions& opt = {});
PairResult negative_part_pair_detailed(const GenScalar& u, const TestForm& w, double eps,
                                       const PairOptions& opt = {});

}  // namespace colombeau
