#include "colombeau/genfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "colombeau/fit.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

GenScalar make(MollifierPtr m, auto payload) {
  auto n = std::make_shared<GenScalar::Node>();
  n->payload = std::move(payload);
  return GenScalar(std::move(n), std::move(m));
}

void require_same(const GenScalar& u, const GenScalar& v) {
  if (!u.mollifier()->same_net(*v.mollifier()))
    throw MixedMollifierError("generalized scalars built on different mollifier nets");
}

void require_mollifier(const MollifierPtr& m) {
  if (!m) throw std::invalid_argument("null mollifier");
}

// eps^-k int f(x - eps y) psi^(k)(y) dy with the plus side used where
// x - eps y > 0, i.e. y < x/eps.
double side_convolution(const Mollifier& m, const SmoothSide* plus, const SmoothSide* minus, double eps,
                        double x, int k, double tol) {
  if (k > Mollifier::kMaxDerivative) throw std::out_of_range("mollifier derivative order exceeds 5 in convolution");
  const double ystar = x / eps;
  QuadratureOptions opt{.abs_tol = 1e-300, .rel_tol = tol * 1e-2, .max_panels = 2000, .min_panels_per_piece = 2};
  double total = 0.0;
  auto run = [&](const SmoothSide& f, double lo, double hi) {
    if (!(hi > lo)) return;
    auto g = [&](double y) { return f(x - eps * y) * m.derivative(y, k); };
    const std::array<double, 2> br{lo, hi};
    auto r = integrate_pieces(g, br, opt);
    if (!r.converged && r.error > tol * (1.0 + r.abs_integral))
      throw QuadratureError("convolution quadrature did not converge");
    total += r.value;
  };
  if (plus && !plus->is_zero_constant()) run(*plus, -1.0, std::min(1.0, ystar));
  if (minus && !minus->is_zero_constant()) run(*minus, std::max(-1.0, ystar), 1.0);
  return total * std::pow(eps, -k);
}

// Chebyshev interpolant in t = x/eps on [-1, 1]; empty when the samples did
// not resolve to the requested tolerance.
struct ShellFit {
  std::vector<double> coeffs;
  bool usable = false;

  double operator()(double t) const {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coeffs.size() - 1; j >= 1; --j) {
      const double b0 = 2.0 * t * b1 - b2 + coeffs[j];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + coeffs[0];
  }
};

constexpr int kShellFitMin = 16;
constexpr int kShellFitMax = 256;

ShellFit build_shell_fit(const std::function<double(double)>& f, double tol) {
  ShellFit fit;
  std::map<int, double> by_index;                // index on the kShellFitMax grid
  auto sample = [&](int n, int k) {
    const int key = k * (kShellFitMax / n);
    auto it = by_index.find(key);
    if (it != by_index.end()) return it->second;
    const double v = f(std::cos(std::numbers::pi * key / kShellFitMax));
    by_index.emplace(key, v);
    return v;
  };
  for (int n = kShellFitMin; n <= kShellFitMax; n *= 2) {
    std::vector<double> v(n + 1);
    double scale = 0.0;
    for (int k = 0; k <= n; ++k) {
      v[k] = sample(n, k);
      if (!std::isfinite(v[k])) return fit;
      scale = std::max(scale, std::abs(v[k]));
    }
    std::vector<double> c(n + 1);
    for (int j = 0; j <= n; ++j) {
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) acc += ((k == 0 || k == n) ? 0.5 : 1.0) * v[k] * std::cos(std::numbers::pi * j * k / n);
      c[j] = acc * 2.0 / n * ((j == 0 || j == n) ? 0.5 : 1.0);
    }
    const double tail = std::max({std::abs(c[n]), std::abs(c[n - 1]), std::abs(c[n - 2])});
    if (tail > tol * scale) continue;
    fit.coeffs = std::move(c);
    bool ok = true;
    for (double t : {-0.8137, 0.1291, 0.6673}) ok = ok && std::abs(fit(t) - f(t)) <= 10.0 * tol * (scale + 1e-300);
    fit.usable = ok;
    return fit;
  }
  return fit;
}

int cost(const GenScalar& u);

int cost_of(const std::vector<GenScalar>& v) {
  int c = 0;
  for (const auto& t : v) c += cost(t);
  return c;
}

int cost(const GenScalar& u) {
  return std::visit(overloaded{
                        [](const node::Constant&) { return 0; },
                        [](const node::Heaviside&) { return 1; },
                        [](const node::DeltaDeriv&) { return 1; },
                        [](const node::Smooth&) { return 2; },
                        [](const node::Piecewise&) { return 50; },
                        [](const node::Convolution&) { return 50; },
                        [](const node::Sum& s) { return cost_of(s.terms); },
                        [](const node::Product& p) { return cost_of(p.factors); },
                        [](const node::Scale& s) { return cost(s.child); },
                        [](const node::Derivative& d) { return cost(d.child) + 1; },
                        [](const node::SqrtFamily& s) { return cost(s.child) + 1; },
                        [](const node::Reciprocal& r) { return cost(r.child) + 1; },
                    },
                    u.node().payload);
}

std::vector<double> window_samples(const Window& w, double eps) {
  std::vector<double> xs;
  constexpr int n = 33;
  for (int i = 0; i < n; ++i) xs.push_back(w.lo + (w.hi - w.lo) * i / (n - 1));
  for (int i = -4; i <= 4; ++i) {
    const double x = eps * i / 4.0;
    if (w.contains(x)) xs.push_back(x);
  }
  return xs;
}

std::vector<double> sorted_samples(std::span<const double> eps) {
  std::vector<double> e(eps.begin(), eps.end());
  if (e.empty()) e = default_eps_samples();
  std::sort(e.begin(), e.end());
  return e;
}

void check_window(const Window& w) {
  if (!(std::isfinite(w.lo) && std::isfinite(w.hi) && w.lo < w.hi))
    throw std::invalid_argument("window must be a finite nonempty interval");
}

}  // namespace

// ---------------------------------------------------------------- SmoothSide

SmoothSide::SmoothSide(std::vector<ValueFn> derivatives, SideDomain domain, std::string label)
    : domain_(domain), label_(std::move(label)) {
  if (derivatives.empty()) throw std::invalid_argument("SmoothSide needs at least the value");
  if (static_cast<int>(derivatives.size()) > Jet::kMaxOrder + 1)
    throw std::invalid_argument("SmoothSide holds at most 7 derivative callables");
  max_order_ = static_cast<int>(derivatives.size()) - 1;
  value_fn_ = derivatives.front();
  fn_ = [d = std::move(derivatives)](double x, int order) {
    std::array<double, Jet::kMaxOrder + 1> v{};
    for (int k = 0; k <= order; ++k) v[k] = d[k](x);
    return Jet::from_derivatives(std::span<const double>(v.data(), order + 1));
  };
  validate();
}

SmoothSide::SmoothSide(JetFn fn, int max_order, SideDomain domain, std::string label, ValueFn value_fn)
    : fn_(std::move(fn)), value_fn_(std::move(value_fn)), max_order_(max_order), domain_(domain),
      label_(std::move(label)) {
  if (max_order < 0 || max_order > Jet::kMaxOrder) throw std::invalid_argument("SmoothSide order out of range");
  validate();
}

SmoothSide SmoothSide::constant(double c, SideDomain domain) {
  SmoothSide s;
  s.fn_ = [c](double, int order) { return Jet(c, order); };
  s.value_fn_ = [c](double) { return c; };
  s.max_order_ = Jet::kMaxOrder;
  s.domain_ = domain;
  std::ostringstream os;
  os << c;
  s.label_ = os.str();
  s.zero_ = (c == 0.0);
  s.constant_ = true;
  return s;
}

double SmoothSide::operator()(double x) const {
  if (shift_ == 0 && value_fn_) return value_fn_(x);
  return jet(x, 0).value();
}

Jet SmoothSide::jet(double x, int order) const {
  if (order < 0 || order > max_order_)
    throw std::invalid_argument("SmoothSide '" + label_ + "' has no derivative data of that order");
  if (zero_) return Jet(0.0, order);
  Jet j = fn_(x, order + shift_);
  for (int i = 0; i < shift_; ++i) j = j.differentiated();
  return j;
}

SmoothSide SmoothSide::derivative() const {
  if (max_order_ == 0) throw std::invalid_argument("SmoothSide '" + label_ + "' cannot be differentiated further");
  if (constant_) return constant(0.0, domain_);
  SmoothSide d = *this;
  d.shift_ += 1;
  d.max_order_ -= 1;
  d.label_ = label_ + "'";
  return d;
}

void SmoothSide::validate() const {
  if (zero_ || max_order_ == 0) return;
  std::array<double, 4> xs{-0.8, -0.3, 0.2, 0.7};
  if (domain_ == SideDomain::nonnegative) xs = {0.05, 0.3, 0.9, 1.7};
  if (domain_ == SideDomain::nonpositive) xs = {-0.05, -0.3, -0.9, -1.7};
  for (double x : xs) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    const Jet c = fn_(x, max_order_);
    const Jet l = fn_(x - h, max_order_ - 1);
    const Jet r = fn_(x + h, max_order_ - 1);
    if (!c.is_finite()) throw std::invalid_argument("SmoothSide '" + label_ + "' is not finite on its domain");
    for (int k = 0; k < max_order_; ++k) {
      const double fd = (r.derivative(k) - l.derivative(k)) / (2.0 * h);
      const double an = c.derivative(k + 1);
      const double scale = 1.0 + std::abs(an) + std::abs(c.derivative(k));
      if (std::abs(fd - an) > 1e-6 * scale) {
        std::ostringstream os;
        os << "SmoothSide '" << label_ << "': derivative " << k + 1 << " at " << x << " is " << an
           << " but finite differences give " << fd;
        throw std::invalid_argument(os.str());
      }
    }
  }
}

// ---------------------------------------------------------------- TestForm

TestForm::TestForm(double center, double half_width, int derivative_order)
    : center_(center), half_width_(half_width), order_(derivative_order) {
  if (!(half_width > 0.0) || !std::isfinite(center) || !std::isfinite(half_width))
    throw std::invalid_argument("test form needs a finite center and positive half width");
  if (derivative_order < 0 || derivative_order > kMaxProfileDerivative)
    throw std::invalid_argument("test form derivative order must lie in [0, 5]");
}

double TestForm::operator()(double x) const {
  std::array<double, kMaxProfileDerivative + 1> d{};
  bump_derivatives((x - center_) / half_width_, order_, d);
  return d[order_] * std::pow(half_width_, -order_);
}

double TestForm::sup_norm() const {
  if (order_ == 0) return std::exp(-1.0);
  double best = 0.0;
  for (int i = 0; i <= 4000; ++i) best = std::max(best, std::abs((*this)(lower() + width() * i / 4000.0)));
  return best;
}

double TestForm::integral() const {
  if (order_ > 0) return 0.0;
  static const double unit = [] {
    std::array<double, 3> br{-1.0, 0.0, 1.0};
    auto f = [](double u) {
      std::array<double, 1> d{};
      bump_derivatives(u, 0, d);
      return d[0];
    };
    return integrate_or_throw(f, br, QuadratureOptions{.abs_tol = 1e-16, .rel_tol = 1e-15}, "bump mass");
  }();
  return unit * half_width_;
}

std::string TestForm::id() const {
  std::ostringstream os;
  os << "c=" << center_ << ";hw=" << half_width_;
  if (order_ > 0) os << ";d=" << order_;
  return os.str();
}

std::vector<TestForm> make_corpus(std::span<const double> centers, std::span<const double> half_widths) {
  std::vector<TestForm> out;
  for (double c : centers)
    for (double h : half_widths) out.emplace_back(c, h);
  return out;
}

std::vector<TestForm> default_corpus(double length_unit) {
  const std::array<double, 3> centers{0.0, -2.0 * length_unit, 2.0 * length_unit};
  const std::array<double, 3> widths{0.25 * length_unit, length_unit, 4.0 * length_unit};
  return make_corpus(centers, widths);
}

// ---------------------------------------------------------------- GenScalar

class ShellCache {
 public:
  /// Value at x in [-eps, eps], or nullopt when no usable fit exists.
  std::optional<double> value(double eps, double x, const std::function<double(double)>& direct, double tol) {
    std::shared_ptr<const ShellFit> fit;
    {
      std::lock_guard lock(mu_);
      auto it = fits_.find(eps);
      if (it != fits_.end()) fit = it->second;
    }
    if (!fit) {
      auto built = std::make_shared<const ShellFit>(build_shell_fit([&](double t) { return direct(eps * t); }, tol));
      std::lock_guard lock(mu_);
      fit = fits_.emplace(eps, std::move(built)).first->second;
    }
    if (!fit->usable) return std::nullopt;
    return (*fit)(std::clamp(x / eps, -1.0, 1.0));
  }

 private:
  std::mutex mu_;
  std::map<double, std::shared_ptr<const ShellFit>> fits_;
};

std::shared_ptr<ShellCache> make_shell_cache() { return std::make_shared<ShellCache>(); }

GenScalar::GenScalar(std::shared_ptr<const Node> node, MollifierPtr mollifier)
    : node_(std::move(node)), mollifier_(std::move(mollifier)) {
  require_mollifier(mollifier_);
}

NodeKind GenScalar::kind() const { return static_cast<NodeKind>(node_->payload.index()); }

double GenScalar::operator()(double eps, double x) const { return jet(eps, x, 0).value(); }

Jet GenScalar::jet(double eps, double x, int n) const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const Mollifier& m = *mollifier_;
  return std::visit(
      overloaded{
          [&](const node::Heaviside& h) {
            const double y = h.sign * x / eps;
            std::array<double, Jet::kMaxOrder + 1> d{};
            d[0] = m.cumulative(y);
            if (n > 0) {
              std::array<double, Mollifier::kMaxDerivative + 1> p{};
              m.derivatives(y, n - 1, p);
              double f = 1.0;
              for (int k = 1; k <= n; ++k) {
                f *= h.sign / eps;
                d[k] = f * p[k - 1];
              }
            }
            return Jet::from_derivatives(std::span<const double>(d.data(), n + 1));
          },
          [&](const node::DeltaDeriv& dd) {
            if (dd.order + n > Mollifier::kMaxDerivative)
              throw std::out_of_range("delta derivative order exceeds mollifier data");
            std::array<double, Mollifier::kMaxDerivative + 1> p{};
            m.derivatives(x / eps, dd.order + n, p);
            std::array<double, Jet::kMaxOrder + 1> d{};
            for (int j = 0; j <= n; ++j) d[j] = std::pow(eps, -(dd.order + 1 + j)) * p[dd.order + j];
            return Jet::from_derivatives(std::span<const double>(d.data(), n + 1));
          },
          [&](const node::Piecewise& pw) {
            if (n == 0 && std::abs(x) <= eps) {
              auto direct = [&](double z) { return side_convolution(m, &pw.plus, &pw.minus, eps, z, 0, pw.tolerance); };
              if (auto v = pw.cache->value(eps, x, direct, pw.tolerance * 1e-2)) return Jet(*v, 0);
            }
            std::array<double, Jet::kMaxOrder + 1> d{};
            for (int j = 0; j <= n; ++j) d[j] = side_convolution(m, &pw.plus, &pw.minus, eps, x, j, pw.tolerance);
            return Jet::from_derivatives(std::span<const double>(d.data(), n + 1));
          },
          [&](const node::Convolution& c) {
            std::array<double, Jet::kMaxOrder + 1> d{};
            const SmoothSide* p = c.plus ? &*c.plus : nullptr;
            const SmoothSide* q = c.minus ? &*c.minus : nullptr;
            if (n == 0 && std::abs(x) <= eps) {
              auto direct = [&](double z) { return side_convolution(m, p, q, eps, z, c.rho_order, c.tolerance); };
              if (auto v = c.cache->value(eps, x, direct, c.tolerance * 1e-2)) return Jet(*v, 0);
            }
            for (int j = 0; j <= n; ++j) d[j] = side_convolution(m, p, q, eps, x, c.rho_order + j, c.tolerance);
            return Jet::from_derivatives(std::span<const double>(d.data(), n + 1));
          },
          [&](const node::Smooth& s) { return s.f.jet(x, n); },
          [&](const node::Constant& c) { return Jet(c.value, n); },
          [&](const node::Sum& s) {
            Jet acc(0.0, n);
            for (const auto& t : s.terms) acc += t.jet(eps, x, n);
            return acc;
          },
          [&](const node::Product& p) {
            std::vector<Jet> js;
            js.reserve(p.factors.size());
            for (const auto& f : p.factors) {
              js.push_back(f.jet(eps, x, n));
              if (js.back().is_zero()) return Jet(0.0, n);
            }
            // Fixed multiplication order makes the result independent of how
            // the product was written.
            std::sort(js.begin(), js.end(), [](const Jet& a, const Jet& b) { return lexicographic_less(a, b); });
            Jet acc = js.front();
            for (std::size_t i = 1; i < js.size(); ++i) acc *= js[i];
            return acc;
          },
          [&](const node::Scale& s) {
            if (s.factor == 0.0) return Jet(0.0, n);
            return s.factor * s.child.jet(eps, x, n);
          },
          [&](const node::Derivative& d) {
            if (n + 1 > Jet::kMaxOrder) throw std::out_of_range("jet order exhausted by derivative node");
            return d.child.jet(eps, x, n + 1).differentiated();
          },
          [&](const node::SqrtFamily& s) {
            if (!s.window.contains(x)) throw DomainError("sqrt family evaluated outside its window");
            const Jet v = static_cast<double>(s.sign) * s.child.jet(eps, x, n);
            if (!(v.value() > 0.0)) {
              std::ostringstream os;
              os << "sqrt family: radicand " << v.value() << " not positive at x=" << x << ", eps=" << eps
                 << " (valid below eps0=" << s.eps0 << ")";
              throw DomainError(os.str());
            }
            return sqrt(v);
          },
          [&](const node::Reciprocal& r) {
            if (!r.window.contains(x)) throw DomainError("reciprocal evaluated outside its window");
            const Jet v = r.child.jet(eps, x, n);
            if (v.value() == 0.0) throw DomainError("reciprocal of a vanishing family");
            return 1.0 / v;
          },
      },
      node_->payload);
}

double GenScalar::magnitude(double eps, double x) const {
  return std::visit(overloaded{
                        [&](const node::Sum& s) {
                          double acc = 0.0;
                          for (const auto& t : s.terms) acc += t.magnitude(eps, x);
                          return acc;
                        },
                        [&](const node::Product& p) {
                          double acc = 1.0;
                          for (const auto& f : p.factors) {
                            acc *= f.magnitude(eps, x);
                            if (acc == 0.0) break;
                          }
                          return acc;
                        },
                        [&](const node::Scale& s) {
                          return s.factor == 0.0 ? 0.0 : std::abs(s.factor) * s.child.magnitude(eps, x);
                        },
                        [&](const auto&) { return std::abs((*this)(eps, x)); },
                    },
                    node_->payload);
}

Interval GenScalar::support(double eps) const {
  const double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [&](const node::Heaviside& h) {
            return h.sign > 0 ? Interval{-eps, inf} : Interval{-inf, eps};
          },
          [&](const node::DeltaDeriv&) { return Interval{-eps, eps}; },
          [&](const node::Piecewise& p) {
            if (p.plus.is_zero_constant() && p.minus.is_zero_constant()) return Interval::none();
            if (p.minus.is_zero_constant()) return Interval{-eps, inf};
            if (p.plus.is_zero_constant()) return Interval{-inf, eps};
            return Interval::whole();
          },
          [&](const node::Convolution& c) {
            const bool hp = c.plus && !c.plus->is_zero_constant();
            const bool hm = c.minus && !c.minus->is_zero_constant();
            if (hp && hm) return Interval::whole();
            if (hp) return Interval{-eps, inf};
            if (hm) return Interval{-inf, eps};
            return Interval::none();
          },
          [&](const node::Smooth& s) { return s.f.is_zero_constant() ? Interval::none() : Interval::whole(); },
          [&](const node::Constant& c) { return c.value == 0.0 ? Interval::none() : Interval::whole(); },
          [&](const node::Sum& s) {
            Interval r = Interval::none();
            for (const auto& t : s.terms) r = r.hull(t.support(eps));
            return r;
          },
          [&](const node::Product& p) {
            Interval r = Interval::whole();
            for (const auto& f : p.factors) r = r.intersect(f.support(eps));
            return r.empty() ? Interval::none() : r;
          },
          [&](const node::Scale& s) { return s.factor == 0.0 ? Interval::none() : s.child.support(eps); },
          [&](const node::Derivative& d) { return d.child.support(eps); },
          [&](const node::SqrtFamily& s) { return s.window; },
          [&](const node::Reciprocal& r) { return r.window; },
      },
      node_->payload);
}

void GenScalar::collect_breakpoints(double eps, std::vector<double>& out) const {
  auto shell = [&] {
    out.push_back(-eps);
    out.push_back(0.0);
    out.push_back(eps);
  };
  auto window = [&](const Window& w) {
    if (std::isfinite(w.lo)) out.push_back(w.lo);
    if (std::isfinite(w.hi)) out.push_back(w.hi);
  };
  std::visit(overloaded{
                 [&](const node::Heaviside&) { shell(); },
                 [&](const node::DeltaDeriv&) { shell(); },
                 [&](const node::Piecewise&) { shell(); },
                 [&](const node::Convolution&) { shell(); },
                 [&](const node::Smooth&) {},
                 [&](const node::Constant&) {},
                 [&](const node::Sum& s) {
                   for (const auto& t : s.terms) t.collect_breakpoints(eps, out);
                 },
                 [&](const node::Product& p) {
                   for (const auto& f : p.factors) f.collect_breakpoints(eps, out);
                 },
                 [&](const node::Scale& s) { s.child.collect_breakpoints(eps, out); },
                 [&](const node::Derivative& d) { d.child.collect_breakpoints(eps, out); },
                 [&](const node::SqrtFamily& s) {
                   window(s.window);
                   s.child.collect_breakpoints(eps, out);
                 },
                 [&](const node::Reciprocal& r) {
                   window(r.window);
                   r.child.collect_breakpoints(eps, out);
                 },
             },
             node_->payload);
}

bool GenScalar::has_embedded_nodes() const {
  auto any = [](const std::vector<GenScalar>& v) {
    return std::any_of(v.begin(), v.end(), [](const GenScalar& g) { return g.has_embedded_nodes(); });
  };
  return std::visit(overloaded{
                        [](const node::Heaviside&) { return true; },
                        [](const node::DeltaDeriv&) { return true; },
                        [](const node::Piecewise&) { return true; },
                        [](const node::Convolution&) { return true; },
                        [](const node::Smooth&) { return false; },
                        [](const node::Constant&) { return false; },
                        [&](const node::Sum& s) { return any(s.terms); },
                        [&](const node::Product& p) { return any(p.factors); },
                        [](const node::Scale& s) { return s.child.has_embedded_nodes(); },
                        [](const node::Derivative& d) { return d.child.has_embedded_nodes(); },
                        [](const node::SqrtFamily& s) { return s.child.has_embedded_nodes(); },
                        [](const node::Reciprocal& r) { return r.child.has_embedded_nodes(); },
                    },
                    node_->payload);
}

double GenScalar::declared_order() const {
  return std::visit(overloaded{
                        [](const node::Heaviside&) { return 0.0; },
                        [](const node::DeltaDeriv& d) { return d.order + 1.0; },
                        [](const node::Piecewise&) { return 0.0; },
                        [](const node::Convolution& c) { return static_cast<double>(c.rho_order); },
                        [](const node::Smooth&) { return 0.0; },
                        [](const node::Constant&) { return 0.0; },
                        [](const node::Sum& s) {
                          double p = 0.0;
                          for (const auto& t : s.terms) p = std::max(p, t.declared_order());
                          return p;
                        },
                        [](const node::Product& p) {
                          double q = 0.0;
                          for (const auto& f : p.factors) q += f.declared_order();
                          return q;
                        },
                        [](const node::Scale& s) { return s.child.declared_order(); },
                        [](const node::Derivative& d) { return d.child.declared_order() + 1.0; },
                        [](const node::SqrtFamily& s) { return 0.5 * s.child.declared_order(); },
                        [](const node::Reciprocal& r) { return r.inverse_order; },
                    },
                    node_->payload);
}

std::string GenScalar::describe() const {
  auto join = [](const std::vector<GenScalar>& v, const char* sep) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i].describe();
    return s + ")";
  };
  return std::visit(overloaded{
                        [](const node::Heaviside& h) { return std::string(h.sign > 0 ? "H+" : "H-"); },
                        [](const node::DeltaDeriv& d) { return "d" + std::string(d.order, '\''); },
                        [](const node::Piecewise& p) { return "pw[" + p.plus.label() + "|" + p.minus.label() + "]"; },
                        [](const node::Convolution& c) {
                          return "conv[" + c.label + "]" + std::string(c.rho_order, '\'');
                        },
                        [](const node::Smooth& s) { return "f[" + s.f.label() + "]"; },
                        [](const node::Constant& c) {
                          std::ostringstream os;
                          os << c.value;
                          return os.str();
                        },
                        [&](const node::Sum& s) { return join(s.terms, " + "); },
                        [&](const node::Product& p) { return join(p.factors, " * "); },
                        [](const node::Scale& s) {
                          std::ostringstream os;
                          os << s.factor << "*" << s.child.describe();
                          return os.str();
                        },
                        [](const node::Derivative& d) { return "D" + d.child.describe(); },
                        [](const node::SqrtFamily& s) {
                          return std::string(s.sign > 0 ? "sqrt(" : "sqrt(-") + s.child.describe() + ")";
                        },
                        [](const node::Reciprocal& r) { return "1/" + r.child.describe(); },
                    },
                    node_->payload);
}

// ---------------------------------------------------------------- builders

GenScalar embed_heaviside(MollifierPtr m, int sign) {
  require_mollifier(m);
  if (sign != 1 && sign != -1) throw std::invalid_argument("Heaviside sign must be +1 or -1");
  return make(std::move(m), node::Heaviside{sign});
}

GenScalar embed_delta_deriv(MollifierPtr m, int k) {
  require_mollifier(m);
  if (k < 0 || k > 2) throw std::invalid_argument("embedded delta derivative order must lie in [0, 2]");
  return make(std::move(m), node::DeltaDeriv{k});
}

GenScalar embed_piecewise(MollifierPtr m, SmoothSide plus, SmoothSide minus, double tolerance) {
  require_mollifier(m);
  if (plus.domain() == SideDomain::nonpositive || minus.domain() == SideDomain::nonnegative)
    throw std::invalid_argument("piecewise sides defined on the wrong half line");
  return make(std::move(m), node::Piecewise{std::move(plus), std::move(minus), tolerance});
}

GenScalar smooth_function(MollifierPtr m, SmoothSide f) {
  require_mollifier(m);
  if (f.domain() != SideDomain::all) throw std::invalid_argument("smooth functions must be defined on the whole line");
  return make(std::move(m), node::Smooth{std::move(f)});
}

GenScalar constant(MollifierPtr m, double c) {
  require_mollifier(m);
  return make(std::move(m), node::Constant{c});
}

GenScalar convolution_integral(MollifierPtr m, std::string label, std::optional<SmoothSide> plus,
                               std::optional<SmoothSide> minus, double tolerance) {
  require_mollifier(m);
  if (!plus && !minus) throw std::invalid_argument("convolution integral needs at least one side");
  return make(std::move(m), node::Convolution{std::move(label), std::move(plus), std::move(minus), 0, tolerance});
}

GenScalar add(const GenScalar& u, const GenScalar& v) { return sum({u, v}); }

GenScalar sum(std::vector<GenScalar> terms) {
  if (terms.empty()) throw std::invalid_argument("empty sum");
  std::vector<GenScalar> flat;
  for (auto& t : terms) {
    require_same(terms.front(), t);
    if (const auto* s = std::get_if<node::Sum>(&t.node().payload))
      flat.insert(flat.end(), s->terms.begin(), s->terms.end());
    else
      flat.push_back(t);
  }
  if (flat.size() == 1) return flat.front();
  MollifierPtr m = flat.front().mollifier();
  return make(std::move(m), node::Sum{std::move(flat)});
}

GenScalar scale(double c, const GenScalar& u) {
  if (const auto* s = std::get_if<node::Scale>(&u.node().payload))
    return make(u.mollifier(), node::Scale{c * s->factor, s->child});
  return make(u.mollifier(), node::Scale{c, u});
}

GenScalar mul(const GenScalar& u, const GenScalar& v) { return product({u, v}); }

GenScalar product(std::vector<GenScalar> factors) {
  if (factors.empty()) throw std::invalid_argument("empty product");
  std::vector<GenScalar> flat;
  for (auto& f : factors) {
    require_same(factors.front(), f);
    if (const auto* p = std::get_if<node::Product>(&f.node().payload))
      flat.insert(flat.end(), p->factors.begin(), p->factors.end());
    else
      flat.push_back(f);
  }
  if (flat.size() == 1) return flat.front();
  std::stable_sort(flat.begin(), flat.end(), [](const GenScalar& a, const GenScalar& b) { return cost(a) < cost(b); });
  MollifierPtr m = flat.front().mollifier();
  return make(std::move(m), node::Product{std::move(flat)});
}

GenScalar derivative(const GenScalar& u) { return make(u.mollifier(), node::Derivative{u}); }

GenScalar lie_derivative(const GenScalar& u) {
  const MollifierPtr& m = u.mollifier();
  return std::visit(
      overloaded{
          // The profile is even, so d/dx Psi(-x/eps) = -rho_eps(x).
          [&](const node::Heaviside& h) { return scale(h.sign, make(m, node::DeltaDeriv{0})); },
          [&](const node::DeltaDeriv& d) {
            if (d.order + 1 > Mollifier::kMaxDerivative) throw std::out_of_range("delta derivative order exceeds 5");
            return make(m, node::DeltaDeriv{d.order + 1});
          },
          [&](const node::Piecewise& p) {
            GenScalar smooth_part = make(m, node::Piecewise{p.plus.derivative(), p.minus.derivative(), p.tolerance});
            const double jump = p.plus(0.0) - p.minus(0.0);
            if (jump == 0.0) return smooth_part;
            return add(smooth_part, scale(jump, make(m, node::DeltaDeriv{0})));
          },
          [&](const node::Convolution& c) {
            node::Convolution d = c;
            d.rho_order += 1;
            d.cache = make_shell_cache();
            return make(m, std::move(d));
          },
          [&](const node::Smooth& s) { return make(m, node::Smooth{s.f.derivative()}); },
          [&](const node::Constant&) { return constant(m, 0.0); },
          [&](const node::Sum& s) {
            std::vector<GenScalar> t;
            for (const auto& x : s.terms) t.push_back(lie_derivative(x));
            return sum(std::move(t));
          },
          [&](const node::Product& p) {
            std::vector<GenScalar> t;
            for (std::size_t i = 0; i < p.factors.size(); ++i) {
              std::vector<GenScalar> f = p.factors;
              f[i] = lie_derivative(f[i]);
              t.push_back(product(std::move(f)));
            }
            return sum(std::move(t));
          },
          [&](const node::Scale& s) { return scale(s.factor, lie_derivative(s.child)); },
          [&](const node::Derivative& d) { return lie_derivative(lie_derivative(normal_form(d.child))); },
          [&](const node::SqrtFamily& s) {
            const GenScalar inv = make(m, node::Reciprocal{u, s.window, 0.0});
            return scale(0.5 * s.sign, product({lie_derivative(s.child), inv}));
          },
          [&](const node::Reciprocal& r) {
            return scale(-1.0, product({lie_derivative(r.child), u, u}));
          },
      },
      u.node().payload);
}

GenScalar normal_form(const GenScalar& u) {
  const MollifierPtr& m = u.mollifier();
  return std::visit(
      overloaded{
          [&](const node::Derivative& d) { return lie_derivative(normal_form(d.child)); },
          [&](const node::Sum& s) {
            std::vector<GenScalar> t;
            for (const auto& x : s.terms) t.push_back(normal_form(x));
            return sum(std::move(t));
          },
          [&](const node::Product& p) {
            std::vector<GenScalar> t;
            for (const auto& x : p.factors) t.push_back(normal_form(x));
            return product(std::move(t));
          },
          [&](const node::Scale& s) { return scale(s.factor, normal_form(s.child)); },
          [&](const node::SqrtFamily& s) {
            return make(m, node::SqrtFamily{normal_form(s.child), s.sign, s.window, s.eps0});
          },
          [&](const node::Reciprocal& r) {
            return make(m, node::Reciprocal{normal_form(r.child), r.window, r.inverse_order});
          },
          [&](const auto&) { return u; },
      },
      u.node().payload);
}

std::vector<double> default_eps_samples() {
  std::vector<double> e;
  for (int j = 0; j < 25; ++j) e.push_back(0.2 * std::pow(0.7, j));
  return e;
}

GenScalar sqrt_family(const GenScalar& u, int sign, Window window, std::span<const double> eps_samples) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sqrt family sign must be +1 or -1");
  check_window(window);
  const auto eps = sorted_samples(eps_samples);
  double eps0 = 0.0;
  for (double e : eps) {
    bool ok = true;
    for (double x : window_samples(window, e))
      if (!(sign * u(e, x) > 0.0)) {
        ok = false;
        break;
      }
    if (!ok) break;
    eps0 = e;
  }
  if (eps0 == 0.0) {
    std::ostringstream os;
    os << "radicand of sqrt family changes sign inside the window even at eps=" << eps.front();
    throw DomainError(os.str());
  }
  return make(u.mollifier(), node::SqrtFamily{u, sign, window, eps0});
}

GenScalar reciprocal(const GenScalar& u, Window window, std::span<const double> eps_samples) {
  check_window(window);
  const auto eps = sorted_samples(eps_samples);
  std::vector<double> lx, ly;
  for (double e : eps) {
    double lo = std::numeric_limits<double>::infinity();
    for (double x : window_samples(window, e)) lo = std::min(lo, std::abs(u(e, x)));
    if (!(lo > 0.0)) throw DomainError("reciprocal of a family vanishing inside the window");
    lx.push_back(std::log(1.0 / e));
    ly.push_back(-std::log(lo));
  }
  const double q = lx.size() >= 2 ? std::max(0.0, fit_line(lx, ly).slope) : 0.0;
  return make(u.mollifier(), node::Reciprocal{u, window, q});
}

GrowthDiagnostic measure_growth(const GenScalar& u, Window window, std::span<const double> eps) {
  check_window(window);
  std::vector<double> lx, ly;
  for (double e : eps) {
    double sup = 0.0;
    for (double x : window_samples(window, e)) sup = std::max(sup, std::abs(u(e, x)));
    for (int i = -40; i <= 40; ++i) {
      const double x = e * i / 40.0;
      if (window.contains(x)) sup = std::max(sup, std::abs(u(e, x)));
    }
    if (sup > 0.0) {
      lx.push_back(std::log(1.0 / e));
      ly.push_back(std::log(sup));
    }
  }
  GrowthDiagnostic g{u.declared_order(), 0.0, true};
  if (lx.size() >= 2) g.measured = fit_line(lx, ly).slope;
  g.ok = g.measured <= g.declared + 0.25;
  return g;
}

}  // namespace colombeau
