#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "colombeau/bump.hpp"

namespace colombeau {

enum class ProfileKind { bump_poly, bspline_poly };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view name);

struct MollifierError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compactly supported profile psi = p * b on [-1,1], where b is the base
/// bump and p the polynomial of degree <= moment_order fixed by
///   int x^k p(x) b(x) dx = delta_k0,  k = 0..moment_order.
///
/// Immutable after construction. Two mollifiers built from the same
/// (kind, moment_order) are interchangeable.
class Mollifier {
 public:
  static constexpr int kMaxMomentOrder = 8;
  static constexpr int kMaxDerivative = kMaxProfileDerivative;

  Mollifier(ProfileKind kind, int moment_order);

  ProfileKind kind() const { return kind_; }
  int moment_order() const { return moment_order_; }
  double support_radius() const { return 1.0; }
  const std::vector<double>& polynomial() const { return poly_; }

  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int k) const;
  /// psi, psi', ..., psi^(n) at x.
  void derivatives(double x, int n, std::span<double> out) const;

  /// Psi(y) = int_{-1}^{y} psi; exactly 0 below -1 and 1 above 1.
  double cumulative(double y) const;

  double l1_norm() const { return l1_norm_; }
  double negative_mass() const { return negative_mass_; }
  /// sup |psi^(k)| for k = 0..4.
  const std::array<double, 5>& sup_norms() const { return sup_norms_; }
  /// Points where psi changes sign inside (-1,1), ascending.
  const std::vector<double>& sign_changes() const { return roots_; }

  bool same_net(const Mollifier& other) const {
    return kind_ == other.kind_ && moment_order_ == other.moment_order_;
  }

 private:
  void base_derivatives(double x, int n, std::span<double> out) const;
  void build_cumulative_table();
  void measure_norms();

  ProfileKind kind_;
  int moment_order_;
  std::vector<double> poly_;
  std::vector<double> table_x_, table_psi_cum_;
  std::array<double, 5> sup_norms_{};
  std::vector<double> roots_;
  double l1_norm_ = 1.0;
  double negative_mass_ = 0.0;
};

using MollifierPtr = std::shared_ptr<const Mollifier>;

/// Throws std::invalid_argument outside [0, 8], MollifierError if the moment
/// system is singular.
MollifierPtr build_mollifier(int moment_order, ProfileKind kind = ProfileKind::bump_poly);

/// int_{-1}^{1} x^k psi(x) dx, adaptive quadrature to 1e-12 absolute.
double moment(const Mollifier& m, int k);

/// rho_eps^(k)(x) = eps^-(k+1) psi^(k)(x/eps).
class DeltaNet {
 public:
  DeltaNet(MollifierPtr base, int k);
  double operator()(double eps, double x) const;
  int order() const { return k_; }
  const Mollifier& base() const { return *base_; }

 private:
  MollifierPtr base_;
  int k_;
};

struct MollifierReport {
  ProfileKind kind;
  int moment_order;
  double l1_norm;
  double negative_mass;
  std::array<double, 5> sup_norms;
  std::array<double, 5> sup_locations;
  std::vector<double> moments;  // k = 0..moment_order + 2
  bool support_ok;
  std::vector<std::string> notes;
};

MollifierReport mollifier_report(const Mollifier& m);

}  // namespace colombeau
