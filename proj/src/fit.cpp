#include "colombeau/fit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace colombeau {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs at least two points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = x[i];
    a(i, 1) = 1.0;
    b(i) = y[i];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  LineFit f;
  f.slope = c(0);
  f.intercept = c(1);
  f.residual = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
  f.points = static_cast<int>(n);
  return f;
}

}  // namespace colombeau
