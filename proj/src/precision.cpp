#include "sing/precision.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sing/error.hpp"

namespace sing {

namespace {

// local_of[m][v] = local coordinate of map variable v in component m, or -1.
std::vector<std::vector<int>> local_indices(const TriangularMap& map) {
  const int p = map.dimension();
  std::vector<std::vector<int>> out(p, std::vector<int>(p, -1));
  for (int m = 0; m < p; ++m) {
    const auto& act = map.component(m).active_inputs();
    for (std::size_t a = 0; a < act.size(); ++a) out[m][act[a]] = static_cast<int>(a);
  }
  return out;
}

struct Accumulation {
  Eigen::MatrixXd omega;               // map coordinates
  std::vector<Eigen::VectorXd> grads;  // one per requested pair
};

// One pass over the samples (map coordinates). Sums run in sample order.
Accumulation accumulate(const TriangularMap& map, const SampleMatrix& samples,
                        const std::vector<std::pair<int, int>>& pairs, bool want_grad) {
  const int p = map.dimension();
  const auto n = samples.rows();
  const auto local_of = local_indices(map);
  Accumulation acc;
  acc.omega = Eigen::MatrixXd::Zero(p, p);
  if (want_grad) acc.grads.assign(pairs.size(), Eigen::VectorXd::Zero(map.num_coefficients()));

  std::vector<ComponentJet> jets(p);
  Eigen::MatrixXd H(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::span<const double> x(samples.row(i).data(), p);
    H.setZero();
    for (int m = 0; m < p; ++m) {
      const MapComponent& comp = map.component(m);
      ComponentJet& jet = jets[m];
      comp.jet(x, jet, want_grad);
      const auto& act = comp.active_inputs();
      const int d = comp.local_dimension();
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          H(act[a], act[b]) += -(jet.grad[a] * jet.grad[b] + jet.value * jet.hess(a, b)) + jet.h_hess(a, b);
    }
    acc.omega += H.cwiseAbs();
    if (!want_grad) continue;
    for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
      const auto [j, k] = pairs[idx];
      const double g = H(j, k);
      if (g == 0.0) continue;
      const double sign = g > 0.0 ? 1.0 : -1.0;
      for (int m = std::max(j, k); m < p; ++m) {
        const int a = local_of[m][j];
        const int b = local_of[m][k];
        if (a < 0 || b < 0) continue;
        const ComponentJet& jet = jets[m];
        const int d = map.component(m).local_dimension();
        auto seg = acc.grads[idx].segment(map.coefficient_offset(m), map.component(m).num_coefficients());
        seg.noalias() -= sign * (jet.grad[b] * jet.grad_theta.col(a) + jet.grad[a] * jet.grad_theta.col(b) +
                                 jet.hess(a, b) * jet.value_theta + jet.value * jet.hess_theta.col(a * d + b));
        seg.noalias() += sign * jet.h_hess_theta.col(a * d + b);
      }
    }
  }
  acc.omega /= static_cast<double>(n);
  for (auto& g : acc.grads) g /= static_cast<double>(n);
  return acc;
}

std::vector<std::pair<int, int>> all_pairs(int p) {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) out.emplace_back(j, k);
  return out;
}

void check_dimensions(const TriangularMap& map, const SampleSet& samples) {
  if (map.dimension() != samples.cols()) throw InvalidArgument("map dimension does not match sample columns");
}

Eigen::MatrixXd rho_from(const TriangularMap& map, const Accumulation& acc,
                         const std::vector<std::pair<int, int>>& pairs, const std::vector<Eigen::MatrixXd>& inverses,
                         Eigen::Index n) {
  const int p = map.dimension();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    double var = 0.0;
    for (int m = 0; m < p; ++m) {
      const auto v = acc.grads[idx].segment(map.coefficient_offset(m), map.component(m).num_coefficients());
      if (v.isZero(0.0)) continue;
      var += v.dot(inverses[m] * v);
    }
    const auto [j, k] = pairs[idx];
    out(j, k) = out(k, j) = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd omega_hat(const TriangularMap& map, const SampleSet& samples) {
  check_dimensions(map, samples);
  const Ordering ordering{map.pattern().order};
  const SampleSet ordered = samples.permuted(ordering.order);
  const Accumulation acc = accumulate(map, ordered.data(), {}, false);
  return unpermute(acc.omega, ordering);
}

Eigen::VectorXd grad_alpha_omega(const TriangularMap& map, const SampleSet& samples, int j, int k) {
  check_dimensions(map, samples);
  if (j == k || j < 0 || k < 0 || j >= map.dimension() || k >= map.dimension())
    throw InvalidArgument("grad_alpha_omega needs two distinct variables");
  const Ordering ordering{map.pattern().order};
  const auto pos = ordering.position_of();
  const SampleSet ordered = samples.permuted(ordering.order);
  const Accumulation acc = accumulate(map, ordered.data(), {{pos[j], pos[k]}}, true);
  return acc.grads.front();
}

std::vector<Eigen::MatrixXd> information_inverses(const std::vector<Eigen::MatrixXd>& information,
                                                  bool& pseudo_inverse_used) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(information.size());
  for (const auto& block : information) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
    Eigen::VectorXd inv(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (lambda[i] > cutoff) {
        inv[i] = 1.0 / lambda[i];
      } else {
        inv[i] = 0.0;
        pseudo_inverse_used = true;
      }
    }
    out.push_back(eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose());
  }
  return out;
}

Eigen::MatrixXd rho(const TriangularMap& map, const SampleSet& samples, const std::vector<Eigen::MatrixXd>& information,
                    bool* pseudo_inverse_used) {
  check_dimensions(map, samples);
  if (static_cast<int>(information.size()) != map.dimension())
    throw InvalidArgument("one information block per component is required");
  bool flag = false;
  const auto inverses = information_inverses(information, flag);
  if (pseudo_inverse_used) *pseudo_inverse_used = flag;
  const Ordering ordering{map.pattern().order};
  const SampleSet ordered = samples.permuted(ordering.order);
  const auto pairs = all_pairs(map.dimension());
  const Accumulation acc = accumulate(map, ordered.data(), pairs, true);
  return unpermute(rho_from(map, acc, pairs, inverses, samples.rows()), ordering);
}

PrecisionEstimate estimate_precision(const FitResult& fit, const SampleSet& samples) {
  const TriangularMap& map = fit.map;
  check_dimensions(map, samples);
  PrecisionEstimate out;
  out.n = samples.rows();
  out.standardization = samples.standardization();
  const auto inverses = information_inverses(fit.information, out.pseudo_inverse_used);
  const Ordering ordering{map.pattern().order};
  const SampleSet ordered = samples.permuted(ordering.order);
  const auto pairs = all_pairs(map.dimension());
  const Accumulation acc = accumulate(map, ordered.data(), pairs, true);
  out.omega = unpermute(acc.omega, ordering);
  out.rho = unpermute(rho_from(map, acc, pairs, inverses, samples.rows()), ordering);
  return out;
}

Graph threshold(const PrecisionEstimate& estimate, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("threshold multiplier delta must be positive");
  const int p = static_cast<int>(estimate.omega.rows());
  Graph g(p);
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k)
      if (estimate.omega(j, k) > delta * estimate.rho(j, k)) g.add_edge(j, k);
  return g;
}

}  // namespace sing
