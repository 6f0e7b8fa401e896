#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sing/map.hpp"
#include "sing/samples.hpp"

namespace sing {

struct FitOptions {
  double gradient_tolerance = 1e-6;
  int max_iterations = 200;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
};

/// Per-sample negative log-likelihood of one component (up to a constant):
/// J(theta) = mean_i [ S(x_i)^2 / 2 - h(x_i) ], with analytic derivatives.
struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Basis tables for one component over a fixed sample matrix. Everything that
/// does not depend on the coefficients is computed once here.
class ComponentDesign {
 public:
  ComponentDesign(const MapComponent& component, const SampleMatrix& samples);

  int rows() const { return n_; }
  int num_coefficients() const { return nc_ + nh_; }

  /// Throws FitDivergence on exponent overflow.
  double value(const Eigen::VectorXd& theta) const;
  ObjectiveValue evaluate(const Eigen::VectorXd& theta) const;

 private:
  Eigen::VectorXd integrals(const Eigen::VectorXd& h, Eigen::MatrixXd* weighted) const;

  int n_, nq_, nc_, nh_;
  Eigen::MatrixXd c_values_;      // n x nc
  Eigen::MatrixXd h_at_points_;   // n x nh
  Eigen::MatrixXd h_at_nodes_;    // (n * nq) x nh, sample-major
  Eigen::VectorXd node_weights_;  // n * nq, includes the x_k / 2 scaling
};

/// `samples` are in map coordinates.
ObjectiveValue component_objective(const MapComponent& component, const SampleMatrix& samples);

struct ComponentDiagnostics {
  bool converged = false;
  double objective = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};

struct ComponentFit {
  MapComponent component;
  ComponentDiagnostics diagnostics;
  Eigen::MatrixXd information;  // observed information (Hessian of J) at the fit
};

/// Damped Newton with Armijo backtracking from the given coefficients (zero by
/// default, i.e. the identity map).
ComponentFit fit_component(const MapComponent& spec, const SampleMatrix& samples, const FitOptions& options = {},
                           const std::optional<Eigen::VectorXd>& start = std::nullopt);

/// Hessian of J at the component's coefficients. Throws NumericalError when
/// it is not positive semi-definite.
Eigen::MatrixXd observed_information(const MapComponent& component, const SampleMatrix& samples);

struct FitResult {
  TriangularMap map;
  std::vector<ComponentDiagnostics> diagnostics;
  std::vector<Eigen::MatrixXd> information;  // block k belongs to component k
  int n = 0;
  std::optional<Standardization> standardization;  // of the samples the map was fit to
};

/// Fits every component of a map with the given pattern. `samples` are in the
/// original variable labels; the pattern's ordering is applied internally.
FitResult fit_map(const SampleSet& samples, const SparsityPattern& pattern, int max_degree,
                  int quadrature_order = kDefaultQuadratureOrder, const FitOptions& options = {});

}  // namespace sing
