#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace sing {

/// Probabilists' Hermite polynomial He_n(x).
double hermite_poly(int degree, double x);
double hermite_poly_deriv(int degree, double x);
double hermite_poly_deriv2(int degree, double x);

/// Normalized Hermite function psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2),
/// with H_n the physicists' polynomial.
double hermite_func(int degree, double x);
double hermite_func_deriv(int degree, double x);
double hermite_func_deriv2(int degree, double x);

using MultiIndex = std::vector<int>;

/// All multi-indices of length `dimension` with total degree <= max_degree, in
/// graded order: by total degree, then with larger leading entries first.
/// dimension == 0 yields the single empty index.
std::vector<MultiIndex> multiindex_set(int dimension, int max_degree);

enum class BasisFamily {
  Polynomial,            ///< He_m in every coordinate.
  FunctionWithConstant,  ///< 1 for m = 0, psi_{m-1} for m >= 1.
};

struct BasisSpec {
  int dimension = 0;
  int max_degree = 1;
  BasisFamily family = BasisFamily::Polynomial;
};

/// Tensor-product basis over a total-order index set. Holds the index set so
/// repeated evaluations do not rebuild it.
class Basis {
 public:
  Basis() = default;
  explicit Basis(BasisSpec spec);

  const BasisSpec& spec() const { return spec_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int dimension() const { return spec_.dimension; }

  /// Values at `point` (length == dimension).
  void values(std::span<const double> point, Eigen::Ref<Eigen::VectorXd> out) const;

  /// Values, gradient (size x dimension) and, when `hessian` is non-null, the
  /// second derivatives packed as hessian->col(a * dimension + b).
  void evaluate(std::span<const double> point, Eigen::Ref<Eigen::VectorXd> values,
                Eigen::MatrixXd* gradient, Eigen::MatrixXd* hessian) const;

 private:
  void univariate(std::span<const double> point, int order) const;

  BasisSpec spec_;
  std::vector<MultiIndex> indices_;
  std::vector<std::vector<int>> support_;  // nonzero coordinates of each index
  // Scratch tables, (max_degree + 1) x dimension, per derivative order.
  mutable Eigen::MatrixXd table_[3];
};

/// Convenience wrappers matching the plain-function interface.
Eigen::VectorXd eval_basis(const BasisSpec& spec, std::span<const double> point);
Eigen::VectorXd eval_basis_partial(const BasisSpec& spec, std::span<const double> point, int coord);
Eigen::VectorXd eval_basis_mixed(const BasisSpec& spec, std::span<const double> point, int coord_a,
                                 int coord_b);

}  // namespace sing
