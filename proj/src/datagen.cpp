#include "sing/datagen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "sing/error.hpp"

namespace sing {

double Rng::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Dataset gen_modified_rademacher(int r, int n, std::uint64_t seed) {
  if (r < 1) throw InvalidArgument("modified Rademacher needs r >= 1");
  if (n < 2) throw InvalidArgument("need at least two samples");
  Rng rng(seed);
  SampleMatrix data(n, 2 * r);
  for (int i = 0; i < n; ++i) {
    for (int pair = 0; pair < r; ++pair) {
      const double x = rng.normal();
      const double w = rng.normal();
      data(i, 2 * pair) = x;
      data(i, 2 * pair + 1) = w * x;
    }
  }
  std::vector<std::string> names;
  Graph truth(2 * r);
  for (int pair = 0; pair < r; ++pair) {
    names.push_back("X" + std::to_string(pair + 1));
    names.push_back("Y" + std::to_string(pair + 1));
    truth.add_edge(2 * pair, 2 * pair + 1);
  }
  return {SampleSet(std::move(data), std::move(names)), std::move(truth)};
}

Graph stochastic_volatility_graph(int T) {
  // Factors p(Z0 | mu, phi) and p(Z_{t+1} | Z_t, mu, phi) each form a clique;
  // marginalizing the unobserved Z0 only adds edges among {mu, phi, Z1}.
  Graph g(T + 2);
  g.add_edge(0, 1);
  for (int t = 0; t < T; ++t) {
    g.add_edge(0, 2 + t);
    g.add_edge(1, 2 + t);
    if (t + 1 < T) g.add_edge(2 + t, 3 + t);
  }
  return g;
}

Dataset gen_stochastic_volatility(int T, int n, std::uint64_t seed, bool zero_phi) {
  if (T < 2) throw InvalidArgument("stochastic volatility needs T >= 2");
  if (n < 2) throw InvalidArgument("need at least two samples");
  Rng rng(seed);
  SampleMatrix data(n, T + 2);
  for (int i = 0; i < n; ++i) {
    const double mu = rng.normal();
    const double phi_star = rng.normal(3.0, 1.0);
    double phi = 2.0 * std::exp(phi_star) / (1.0 + std::exp(phi_star)) - 1.0;
    if (zero_phi) phi = 0.0;
    if (!(phi * phi < 1.0)) throw NumericalError("stochastic volatility: |phi| reached 1");
    double z = rng.normal(mu, std::sqrt(1.0 / (1.0 - phi * phi)));
    data(i, 0) = mu;
    data(i, 1) = zero_phi ? phi_star : phi;
    for (int t = 0; t < T; ++t) {
      z = mu + phi * (z - mu) + rng.normal();
      data(i, 2 + t) = z;
    }
  }
  std::vector<std::string> names{"mu", "phi"};
  for (int t = 1; t <= T; ++t) names.push_back("Z" + std::to_string(t));
  Graph truth = stochastic_volatility_graph(T);
  if (zero_phi) {
    truth = Graph(T + 2);
    for (int t = 0; t < T; ++t) truth.add_edge(0, 2 + t);
  }
  return {SampleSet(std::move(data), std::move(names)), std::move(truth)};
}

Dataset gen_gaussian(const Eigen::MatrixXd& precision, int n, std::uint64_t seed) {
  const auto p = precision.rows();
  if (precision.cols() != p || p < 1) throw InvalidArgument("precision must be square");
  if (!precision.isApprox(precision.transpose(), 0.0)) throw InvalidArgument("precision must be symmetric");
  if (n < 2) throw InvalidArgument("need at least two samples");
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) throw InvalidArgument("precision must be positive definite");
  // precision = L L^T, so x = L^{-T} z has covariance precision^{-1}.
  const Eigen::MatrixXd U = llt.matrixU();
  Rng rng(seed);
  SampleMatrix data(n, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.normal();
    data.row(i) = U.triangularView<Eigen::Upper>().solve(z).transpose();
  }
  Graph truth(static_cast<int>(p));
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = j + 1; k < p; ++k)
      if (precision(j, k) != 0.0) truth.add_edge(static_cast<int>(j), static_cast<int>(k));
  return {SampleSet(std::move(data)), std::move(truth)};
}

Eigen::MatrixXd grid_precision(int side, double gamma) {
  if (side < 2) throw InvalidArgument("grid side must be >= 2");
  if (!(gamma > 0.0)) throw InvalidArgument("grid coupling must be positive");
  const int p = side * side;
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(p, p);
  auto link = [&](int a, int b) {
    laplacian(a, b) -= 1.0;
    laplacian(b, a) -= 1.0;
    laplacian(a, a) += 1.0;
    laplacian(b, b) += 1.0;
  };
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int v = r * side + c;
      if (c + 1 < side) link(v, v + 1);
      if (r + 1 < side) link(v, v + side);
    }
  }
  return Eigen::MatrixXd::Identity(p, p) + gamma * laplacian;
}

Dataset shuffle_columns(const Dataset& data, std::uint64_t seed) {
  const int p = data.samples.cols();
  Ordering ordering = Ordering::identity(p);
  Rng rng(seed);
  // Fisher-Yates with the library's own uniform draws.
  for (int i = p - 1; i > 0; --i) {
    const int j = std::min(i, static_cast<int>(rng.uniform() * (i + 1)));
    std::swap(ordering.order[i], ordering.order[j]);
  }
  return {data.samples.permuted(ordering.order), permute(data.truth, ordering)};
}

}  // namespace sing
