#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace colombeau {

/// Truncated Taylor expansion of a scalar function of one variable around a
/// fixed point. Coefficients are stored as f^(k)(x0)/k!, so products and
/// compositions follow the usual power-series recurrences.
///
/// Binary operations truncate to the lower of the two orders; plain doubles
/// act as exact constants.
class Jet {
 public:
  static constexpr int kMaxOrder = 6;

  Jet() = default;
  Jet(double value, int order) : order_(checked(order)) { c_[0] = value; }

  static Jet variable(double x, int order) {
    Jet j(x, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  /// Builds a jet from plain derivatives f, f', f'', ...
  static Jet from_derivatives(std::span<const double> d) {
    Jet j(0.0, static_cast<int>(d.size()) - 1);
    double fact = 1.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      j.c_[k] = d[k] / fact;
    }
    return j;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double coeff(int k) const { return k <= order_ ? c_[k] : 0.0; }
  double& coeff_ref(int k) { return c_[k]; }

  double derivative(int k) const {
    if (k > order_) throw std::out_of_range("jet derivative beyond stored order");
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact;
  }

  /// The jet of f' at the same point (one order lower).
  Jet differentiated() const {
    if (order_ == 0) throw std::out_of_range("cannot differentiate an order-0 jet");
    Jet r(0.0, order_ - 1);
    for (int k = 0; k < order_; ++k) r.c_[k] = (k + 1) * c_[k + 1];
    return r;
  }

  Jet truncated(int order) const {
    Jet r = *this;
    r.order_ = std::min(order_, checked(order));
    for (int k = r.order_ + 1; k <= kMaxOrder; ++k) r.c_[k] = 0.0;
    return r;
  }

  bool is_zero() const {
    for (int k = 0; k <= order_; ++k)
      if (c_[k] != 0.0) return false;
    return true;
  }

  bool is_finite() const {
    for (int k = 0; k <= order_; ++k)
      if (!std::isfinite(c_[k])) return false;
    return true;
  }

  Jet operator-() const {
    Jet r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    clear_tail();
    return *this;
  }
  Jet& operator-=(const Jet& o) { return *this += -o; }
  Jet& operator+=(double s) { c_[0] += s; return *this; }
  Jet& operator-=(double s) { c_[0] -= s; return *this; }
  Jet& operator*=(double s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator/=(double s) {
    for (int k = 0; k <= order_; ++k) c_[k] /= s;
    return *this;
  }

  Jet& operator*=(const Jet& o) {
    const int n = std::min(order_, o.order_);
    std::array<double, kMaxOrder + 1> r{};
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= k; ++i) r[k] += c_[i] * o.c_[k - i];
    c_ = r;
    order_ = n;
    return *this;
  }

  Jet& operator/=(const Jet& o) {
    const int n = std::min(order_, o.order_);
    std::array<double, kMaxOrder + 1> q{};
    for (int k = 0; k <= n; ++k) {
      double s = c_[k];
      for (int i = 1; i <= k; ++i) s -= o.c_[i] * q[k - i];
      q[k] = s / o.c_[0];
    }
    c_ = q;
    order_ = n;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a) { return Jet(s, a.order_) / a; }

  friend Jet sqrt(const Jet& a) {
    Jet r(std::sqrt(a.c_[0]), a.order_);
    for (int k = 1; k <= a.order_; ++k) {
      double s = a.c_[k];
      for (int i = 1; i < k; ++i) s -= r.c_[i] * r.c_[k - i];
      r.c_[k] = s / (2.0 * r.c_[0]);
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    Jet r(std::exp(a.c_[0]), a.order_);
    for (int k = 1; k <= a.order_; ++k) {
      double s = 0.0;
      for (int i = 1; i <= k; ++i) s += i * a.c_[i] * r.c_[k - i];
      r.c_[k] = s / k;
    }
    return r;
  }

  friend Jet log(const Jet& a) {
    Jet r(std::log(a.c_[0]), a.order_);
    for (int k = 1; k <= a.order_; ++k) {
      double s = a.c_[k];
      for (int i = 1; i < k; ++i) s -= (static_cast<double>(i) / k) * r.c_[i] * a.c_[k - i];
      r.c_[k] = s / a.c_[0];
    }
    return r;
  }

  /// a^p for real p; requires a.value() > 0 unless p is a nonnegative integer.
  friend Jet pow(const Jet& a, double p) {
    Jet r(std::pow(a.c_[0], p), a.order_);
    for (int k = 1; k <= a.order_; ++k) {
      double s = 0.0;
      for (int i = 1; i <= k; ++i) s += ((p + 1.0) * i - k) * a.c_[i] * r.c_[k - i];
      r.c_[k] = s / (k * a.c_[0]);
    }
    return r;
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    if (a.order_ != b.order_) return false;
    for (int k = 0; k <= a.order_; ++k)
      if (a.c_[k] != b.c_[k]) return false;
    return true;
  }

  /// Lexicographic order on (value, coefficients...), used to make products
  /// independent of operand order.
  friend bool lexicographic_less(const Jet& a, const Jet& b) {
    const int n = std::min(a.order_, b.order_);
    for (int k = 0; k <= n; ++k) {
      if (a.c_[k] < b.c_[k]) return true;
      if (b.c_[k] < a.c_[k]) return false;
    }
    return a.order_ < b.order_;
  }

 private:
  static int checked(int order) {
    if (order < 0 || order > kMaxOrder) throw std::out_of_range("jet order out of range");
    return order;
  }
  void clear_tail() {
    for (int k = order_ + 1; k <= kMaxOrder; ++k) c_[k] = 0.0;
  }

  std::array<double, kMaxOrder + 1> c_{};
  int order_ = 0;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace colombeau
