#include "sing/estimate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sing/error.hpp"
#include "sing/parallel.hpp"

namespace sing {

ComponentDesign::ComponentDesign(const MapComponent& component, const SampleMatrix& samples)
    : n_(static_cast<int>(samples.rows())),
      nq_(component.quadrature_order()),
      nc_(component.num_c()),
      nh_(component.num_h()) {
  const int d = component.local_dimension();
  const auto& rule = component.quadrature();
  c_values_.resize(n_, nc_);
  h_at_points_.resize(n_, nh_);
  h_at_nodes_.resize(static_cast<Eigen::Index>(n_) * nq_, nh_);
  node_weights_.resize(static_cast<Eigen::Index>(n_) * nq_);

  std::vector<double> local(d);
  Eigen::VectorXd cv(nc_), hv(nh_);
  const std::span<const double> c_point(local.data(), d - 1);
  for (int i = 0; i < n_; ++i) {
    component.gather(std::span<const double>(samples.row(i).data(), samples.cols()), local);
    component.c_basis().values(c_point, cv);
    c_values_.row(i) = cv.transpose();
    component.h_basis().values(local, hv);
    h_at_points_.row(i) = hv.transpose();
    const double xk = local[d - 1];
    for (int q = 0; q < nq_; ++q) {
      local[d - 1] = 0.5 * xk * (1.0 + rule.nodes[q]);
      component.h_basis().values(local, hv);
      h_at_nodes_.row(static_cast<Eigen::Index>(i) * nq_ + q) = hv.transpose();
      node_weights_[static_cast<Eigen::Index>(i) * nq_ + q] = 0.5 * xk * rule.weights[q];
    }
  }
}

Eigen::VectorXd ComponentDesign::integrals(const Eigen::VectorXd& h, Eigen::MatrixXd* weighted) const {
  Eigen::VectorXd exponent = h_at_nodes_ * h;
  if (!(exponent.maxCoeff() <= kExponentClamp))
    throw FitDivergence("map exponent exceeded clamp threshold (fit diverged)");
  Eigen::VectorXd we = node_weights_.array() * exponent.array().exp();
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) out[i] = we.segment(static_cast<Eigen::Index>(i) * nq_, nq_).sum();
  if (weighted) *weighted = std::move(we);
  return out;
}

double ComponentDesign::value(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd s = c_values_ * theta.head(nc_) + integrals(theta.tail(nh_), nullptr);
  const Eigen::VectorXd hx = h_at_points_ * theta.tail(nh_);
  return (0.5 * s.squaredNorm() - hx.sum()) / n_;
}

ObjectiveValue ComponentDesign::evaluate(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd a = theta.head(nc_);
  const Eigen::VectorXd b = theta.tail(nh_);
  Eigen::MatrixXd we;
  const Eigen::VectorXd s = c_values_ * a + integrals(b, &we);
  const Eigen::VectorXd hx = h_at_points_ * b;

  // D(i, :) = d S_i / d b = sum_q we_iq psi_iq
  Eigen::MatrixXd D(n_, nh_);
  for (int i = 0; i < n_; ++i) {
    const auto rows = h_at_nodes_.middleRows(static_cast<Eigen::Index>(i) * nq_, nq_);
    D.row(i).noalias() = we.col(0).segment(static_cast<Eigen::Index>(i) * nq_, nq_).transpose() * rows;
  }

  ObjectiveValue out;
  const double inv_n = 1.0 / n_;
  out.value = (0.5 * s.squaredNorm() - hx.sum()) * inv_n;
  out.gradient.resize(nc_ + nh_);
  out.gradient.head(nc_).noalias() = c_values_.transpose() * s * inv_n;
  out.gradient.tail(nh_).noalias() = (D.transpose() * s - h_at_points_.colwise().sum().transpose()) * inv_n;

  Eigen::MatrixXd G(n_, nc_ + nh_);
  G << c_values_, D;
  out.hessian.noalias() = G.transpose() * G * inv_n;
  // S_i * d^2 S_i / d b^2 = S_i * sum_q we_iq psi_iq psi_iq^T
  Eigen::VectorXd scaled(we.size());
  for (int i = 0; i < n_; ++i)
    scaled.segment(static_cast<Eigen::Index>(i) * nq_, nq_) = s[i] * we.col(0).segment(static_cast<Eigen::Index>(i) * nq_, nq_);
  out.hessian.bottomRightCorner(nh_, nh_).noalias() +=
      h_at_nodes_.transpose() * scaled.asDiagonal() * h_at_nodes_ * inv_n;
  return out;
}

ObjectiveValue component_objective(const MapComponent& component, const SampleMatrix& samples) {
  return ComponentDesign(component, samples).evaluate(component.coefficients());
}

namespace {

void check_psd(const Eigen::MatrixXd& information) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(information, Eigen::EigenvaluesOnly);
  const double top = std::max(1.0, std::abs(eig.eigenvalues().maxCoeff()));
  if (eig.eigenvalues().minCoeff() < -1e-8 * top)
    throw NumericalError("observed information is not positive semi-definite (fit did not converge)");
}

Eigen::VectorXd newton_direction(const ObjectiveValue& f) {
  const Eigen::Index m = f.gradient.size();
  Eigen::LLT<Eigen::MatrixXd> llt(f.hessian);
  if (llt.info() == Eigen::Success) return llt.solve(-f.gradient);
  for (double lambda = 1e-8; lambda <= 1e-2 * (1 + 1e-12); lambda *= 10.0) {
    llt.compute(f.hessian + lambda * Eigen::MatrixXd::Identity(m, m));
    if (llt.info() == Eigen::Success) return llt.solve(-f.gradient);
  }
  throw SingularHessian("Newton system stayed singular after Levenberg damping up to 1e-2");
}

}  // namespace

ComponentFit fit_component(const MapComponent& spec, const SampleMatrix& samples, const FitOptions& options,
                           const std::optional<Eigen::VectorXd>& start) {
  const int nt = spec.num_coefficients();
  if (samples.rows() < nt) {
    throw InsufficientSamples("component " + std::to_string(spec.index()) + " has " + std::to_string(nt) +
                              " coefficients but only " + std::to_string(samples.rows()) + " samples");
  }
  const ComponentDesign design(spec, samples);
  Eigen::VectorXd theta = start.value_or(Eigen::VectorXd::Zero(nt));
  if (theta.size() != nt) throw InvalidArgument("starting coefficients have wrong length");

  ComponentFit fit{spec, {}, {}};
  ObjectiveValue f = design.evaluate(theta);
  int iter = 0;
  for (;; ++iter) {
    const double gnorm = f.gradient.lpNorm<Eigen::Infinity>();
    fit.diagnostics.gradient_norm = gnorm;
    if (gnorm < options.gradient_tolerance) {
      fit.diagnostics.converged = true;
      break;
    }
    if (iter >= options.max_iterations) {
      throw NonConvergence("component " + std::to_string(spec.index()) + " did not converge in " +
                               std::to_string(options.max_iterations) + " iterations (gradient norm " +
                               std::to_string(gnorm) + ")",
                           gnorm);
    }
    const Eigen::VectorXd step = newton_direction(f);
    const double slope = f.gradient.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= options.backtrack) {
      double trial;
      try {
        trial = design.value(theta + t * step);
      } catch (const FitDivergence&) {
        continue;
      }
      if (trial <= f.value + options.armijo_c * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no representable decrease left; reported through `converged`
    theta += t * step;
    f = design.evaluate(theta);
  }
  fit.diagnostics.iterations = iter;
  fit.diagnostics.objective = f.value;
  fit.component.set_coefficients(theta);
  check_psd(f.hessian);
  fit.information = f.hessian;
  return fit;
}

Eigen::MatrixXd observed_information(const MapComponent& component, const SampleMatrix& samples) {
  Eigen::MatrixXd info = component_objective(component, samples).hessian;
  check_psd(info);
  return info;
}

FitResult fit_map(const SampleSet& samples, const SparsityPattern& pattern, int max_degree, int quadrature_order,
                  const FitOptions& options) {
  pattern.validate();
  if (pattern.dimension != samples.cols()) throw InvalidArgument("pattern dimension does not match sample columns");
  const SampleSet ordered = samples.permuted(pattern.order);
  const int p = pattern.dimension;

  TriangularMap map(pattern, max_degree, quadrature_order);
  std::vector<std::optional<ComponentFit>> fits(p);
  std::vector<std::exception_ptr> errors(p);
  parallel_for(p, [&](int k) {
    try {
      fits[k] = fit_component(map.component(k), ordered.data(), options);
    } catch (const NumericalError&) {
      errors[k] = std::current_exception();
    }
  });
  for (int k = 0; k < p; ++k)
    if (errors[k]) {
      try {
        std::rethrow_exception(errors[k]);
      } catch (const NumericalError&) {
        rethrow_with_context("component " + std::to_string(k) + ": ");
      }
    }

  FitResult result{map, {}, {}, samples.rows(), samples.standardization()};
  for (int k = 0; k < p; ++k) {
    result.map.component(k) = fits[k]->component;
    result.diagnostics.push_back(fits[k]->diagnostics);
    result.information.push_back(std::move(fits[k]->information));
  }
  return result;
}

}  // namespace sing
