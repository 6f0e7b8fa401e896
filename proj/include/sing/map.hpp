#pragma once

#include <set>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sing/basis.hpp"

namespace sing {

/// Exponents above this value raise FitDivergence instead of saturating.
inline constexpr double kExponentClamp = 700.0;
inline constexpr int kDefaultQuadratureOrder = 32;

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(int order);

/// Inactive pairs (j, k), j < k, of a lower-triangular map, in map coordinates,
/// together with the variable ordering in force: order[position] = original label.
struct SparsityPattern {
  int dimension = 0;
  std::set<std::pair<int, int>> inactive;
  std::vector<int> order;

  /// Dense lower-triangular pattern under the identity ordering.
  static SparsityPattern dense(int p);
  /// Diagonal pattern (every pair inactive) under the identity ordering.
  static SparsityPattern diagonal(int p);

  /// Sorted active inputs of component k, always ending with k.
  std::vector<int> active_inputs(int k) const;
  /// position_of()[label] = position of that label in the map ordering.
  std::vector<int> position_of() const;
  void validate() const;
};

/// Derivatives of one component at a point, in local (active-input) coordinates.
/// Coefficient derivatives are filled only on request; coefficient order is
/// [c coefficients, h coefficients].
struct ComponentJet {
  double value = 0.0;
  double h = 0.0;
  Eigen::VectorXd grad;     // d S / d x_a
  Eigen::MatrixXd hess;     // d^2 S / d x_a d x_b
  Eigen::VectorXd h_grad;   // d h / d x_a at the point
  Eigen::MatrixXd h_hess;   // d^2 h / d x_a d x_b at the point

  bool has_coefficient_derivatives = false;
  Eigen::VectorXd value_theta;  // d S / d theta
  Eigen::MatrixXd grad_theta;   // column a: d (dS/dx_a) / d theta
  Eigen::MatrixXd hess_theta;   // column a*d+b: d (d^2 S / dx_a dx_b) / d theta
  Eigen::MatrixXd h_hess_theta; // column a*d+b: d (d^2 h / dx_a dx_b) / d theta
};

/// One component S^k(x) = c(x_{active \ k}) + int_0^{x_k} exp(h(x_{active \ k}, t)) dt.
/// c uses probabilists' Hermite polynomials of total degree <= beta; h uses the
/// constant-extended Hermite functions of total degree <= beta - 1, so beta = 1
/// gives an affine component.
class MapComponent {
 public:
  MapComponent(int index, std::vector<int> active_inputs, int max_degree,
               int quadrature_order = kDefaultQuadratureOrder);

  int index() const { return index_; }
  const std::vector<int>& active_inputs() const { return active_; }
  int local_dimension() const { return static_cast<int>(active_.size()); }
  int max_degree() const { return max_degree_; }
  int quadrature_order() const { return static_cast<int>(rule_.nodes.size()); }

  const Basis& c_basis() const { return c_basis_; }
  const Basis& h_basis() const { return h_basis_; }
  int num_c() const { return c_basis_.size(); }
  int num_h() const { return h_basis_.size(); }
  int num_coefficients() const { return num_c() + num_h(); }

  const Eigen::VectorXd& c_coeffs() const { return c_; }
  const Eigen::VectorXd& h_coeffs() const { return h_; }
  Eigen::VectorXd coefficients() const;
  void set_coefficients(const Eigen::VectorXd& c, const Eigen::VectorXd& h);
  void set_coefficients(const Eigen::VectorXd& packed);

  const QuadratureRule& quadrature() const { return rule_; }

  /// Gather the active coordinates of a full-length point.
  void gather(std::span<const double> x, std::span<double> local) const;

  /// S^k(x); x is a full-length point in map coordinates.
  double evaluate(std::span<const double> x) const;
  /// d S^k / d x_k = exp(h_k(x)).
  double diag_deriv(std::span<const double> x) const;
  /// h_k(x).
  double h_value(std::span<const double> x) const;

  /// First and second derivatives in x, and optionally in the coefficients.
  void jet(std::span<const double> x, ComponentJet& out, bool coefficient_derivatives) const;

 private:
  int index_;
  std::vector<int> active_;
  int max_degree_;
  Basis c_basis_;
  Basis h_basis_;
  Eigen::VectorXd c_;
  Eigen::VectorXd h_;
  QuadratureRule rule_;
};

/// Monotone lower-triangular map in the ordering given by its pattern. All
/// point arguments are in map coordinates (already permuted by pattern.order).
class TriangularMap {
 public:
  /// Zero coefficients (the identity map) with the given pattern.
  TriangularMap(SparsityPattern pattern, int max_degree, int quadrature_order = kDefaultQuadratureOrder);
  TriangularMap(SparsityPattern pattern, std::vector<MapComponent> components);

  int dimension() const { return pattern_.dimension; }
  int max_degree() const { return max_degree_; }
  const SparsityPattern& pattern() const { return pattern_; }
  const std::vector<MapComponent>& components() const { return components_; }
  const MapComponent& component(int k) const { return components_.at(k); }
  MapComponent& component(int k) { return components_.at(k); }

  /// Offset of component k's coefficients in the concatenated coefficient vector.
  int coefficient_offset(int k) const { return offsets_.at(k); }
  int num_coefficients() const { return offsets_.back(); }

 private:
  void build_offsets();

  SparsityPattern pattern_;
  int max_degree_;
  std::vector<MapComponent> components_;
  std::vector<int> offsets_;
};

Eigen::VectorXd eval_map(const TriangularMap& map, std::span<const double> x);

/// Sequential 1-D root finds; throws NumericalError when a root cannot be
/// bracketed within |x_k| <= 1e6.
Eigen::VectorXd invert_map(const TriangularMap& map, std::span<const double> y);

/// log of the pullback of N(0, I) through the map at x.
double pullback_logdensity(const TriangularMap& map, std::span<const double> x);

/// d^2/dx_j dx_k of the pullback log-density; j == k is allowed.
double mixed_partial_logpullback(const TriangularMap& map, std::span<const double> x, int j, int k);

/// The full p x p Hessian of the pullback log-density at x.
Eigen::MatrixXd logpullback_hessian(const TriangularMap& map, std::span<const double> x);

}  // namespace sing
