#pragma once

#include <array>
#include <cmath>
#include <span>

namespace colombeau {

inline constexpr int kMaxProfileDerivative = 5;

/// Derivatives of b(x) = exp(-1/(1-x^2)) on (-1,1), zero elsewhere.
///
/// Uses b' = phi' b with phi = -1/(1-x^2) = -(1/(1-x) + 1/(1+x))/2, whose
/// derivatives have the closed form
///   phi^(j) = -j!/2 ((1-x)^-(j+1) + (-1)^j (1+x)^-(j+1)).
inline void bump_derivatives(double x, int n, std::span<double> out) {
  for (int k = 0; k <= n; ++k) out[k] = 0.0;
  if (!(x > -1.0 && x < 1.0)) return;
  const double b = std::exp(-1.0 / ((1.0 - x) * (1.0 + x)));
  if (b == 0.0) return;
  out[0] = b;
  if (n == 0) return;
  std::array<double, kMaxProfileDerivative + 2> phi{};  // phi^(j), j >= 1
  const double um = 1.0 / (1.0 - x), up = 1.0 / (1.0 + x);
  double pm = um, pp = up, fact = 1.0, sign = 1.0;
  for (int j = 1; j <= n; ++j) {
    pm *= um;
    pp *= up;
    fact *= j;
    sign = -sign;
    phi[j] = -0.5 * fact * (pm + sign * pp);
  }
  // b^(m+1) = sum_j C(m,j) phi^(j+1) b^(m-j)
  for (int m = 0; m < n; ++m) {
    double s = 0.0, binom = 1.0;
    for (int j = 0; j <= m; ++j) {
      s += binom * phi[j + 1] * out[m - j];
      binom = binom * (m - j) / (j + 1);
    }
    out[m + 1] = s;
  }
}

/// Derivatives of the degree-5 cardinal B-spline rescaled from [0,6] to [-1,1].
/// The profile is C^4; the fifth derivative is piecewise constant.
inline void bspline5_derivatives(double x, int n, std::span<double> out) {
  for (int k = 0; k <= n; ++k) out[k] = 0.0;
  if (!(x > -1.0 && x < 1.0)) return;
  double t = 3.0 * (x + 1.0);
  double reflect = 1.0;
  if (t > 3.0) {  // N(t) = N(6 - t); keeps the truncated-power sum small
    t = 6.0 - t;
    reflect = -1.0;
  }
  constexpr std::array<double, 7> binom6 = {1, 6, 15, 20, 15, 6, 1};
  double scale = 1.0, rsign = 1.0;
  for (int d = 0; d <= n && d <= 5; ++d) {
    // N^(d)(t) = 1/(5-d)! sum_k (-1)^k C(6,k) (t-k)_+^(5-d)
    double inv_fact = 1.0;
    for (int i = 2; i <= 5 - d; ++i) inv_fact /= i;
    double s = 0.0;
    for (int k = 0; k <= 3; ++k) {
      const double u = t - k;
      if (u <= 0.0) break;
      s += ((k % 2) ? -1.0 : 1.0) * binom6[k] * std::pow(u, 5 - d);
    }
    out[d] = rsign * scale * s * inv_fact;
    scale *= 3.0;
    rsign *= reflect;
  }
}

}  // namespace colombeau
