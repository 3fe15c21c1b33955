#pragma once

#include <cmath>
#include <functional>

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature.
namespace oracle {

// Composite 8-point Gauss-Legendre on n equal panels.
inline double integrate(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  static constexpr double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                  -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                  0.7966664774136267,  0.9602898564975363};
  static constexpr double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = a + (i + 0.5) * h;
    for (int j = 0; j < 8; ++j) s += w[j] * f(c + 0.5 * h * x[j]);
  }
  return 0.5 * h * s;
}

inline double bump_form(double center, double hw, double x) {
  const double u = (x - center) / hw;
  return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
}

// Throat constants and shell coefficients in closed form, written out by hand.
struct ClosedForm {
  double M, a, alpha2;
  double A() const { return 1.0 - 2.0 * M / a; }
  double s() const { return std::sqrt(A()); }
  double alpha() const { return std::sqrt(a / (a - 2.0 * M)) * 4.0 * M / (a * a) + 8.0 / a * s(); }
  double beta() const { return s() * 2.0 * M / (a * a); }
  double gamma() const { return 2.0 * a * s(); }

  double classical_sigma() const { return -4.0 / a * std::pow(A(), 1.5); }
  double classical_sigma_minus_nu() const { return (6.0 * M - 2.0 * a) * s(); }

  // kappa sigma after the ansatz, before inserting alpha and beta.
  double sigma_delta() const {
    return classical_sigma() + 2.0 * alpha2 * alpha() * (3.0 * M * M / std::pow(a, 4) - 6.0 * M / std::pow(a, 3) * A());
  }
  double sigma_delta2() const { return 2.0 * alpha2 * alpha() * A(); }
  double sigma_deltasq() const {
    return (A() * alpha() * alpha() - 2.0 * alpha() * beta() + 2.0 * alpha() * 10.0 * M / (a * a) * s()) * alpha2;
  }
  double sigma_minus_nu_delta() const {
    return classical_sigma_minus_nu() + 2.0 * alpha2 * alpha() * (M * M / (a * a) - A() * (1.0 + M / a));
  }
  double sigma_minus_nu_deltasq() const {
    return 2.0 * alpha2 * alpha() * (gamma() * A() - beta() * a * a - 2.0 * a * std::pow(A(), 1.5) + 2.0 * M * s());
  }
};

}  // namespace oracle
