#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "doctest.h"
#include "helpers.hpp"
#include "sing/datagen.hpp"
#include "sing/error.hpp"
#include "sing/estimate.hpp"

using namespace sing;
using testing::rel_err;

namespace {

SampleMatrix normals(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  SampleMatrix m(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("component objective") {
  SUBCASE("identity on standard normal data") {
    const int n = 20000;
    const auto x = normals(n, 1, 1);
    MapComponent comp(0, {0}, 2);
    const auto obj = component_objective(comp, x);
    CHECK(std::abs(obj.value - 0.5) < 3.0 / std::sqrt(2.0 * n));
  }
  SUBCASE("gradient and Hessian against finite differences") {
    std::mt19937_64 rng(2);
    const auto x = normals(300, 3, 2);
    for (int beta = 1; beta <= 3; ++beta) {
      MapComponent comp(2, {0, 1, 2}, beta);
      std::uniform_real_distribution<double> u(-0.3, 0.3);
      Eigen::VectorXd theta(comp.num_coefficients());
      for (auto& t : theta) t = u(rng);
      comp.set_coefficients(theta);
      ComponentDesign design(comp, x);
      const auto obj = design.evaluate(theta);
      CHECK(obj.value == doctest::Approx(component_objective(comp, x).value).epsilon(1e-12));
      const double eps = 1e-5;
      for (int t = 0; t < theta.size(); ++t) {
        Eigen::VectorXd up = theta, down = theta;
        up[t] += eps;
        down[t] -= eps;
        CHECK(rel_err(obj.gradient[t], (design.value(up) - design.value(down)) / (2 * eps)) < 1e-6);
        const Eigen::VectorXd gfd = (design.evaluate(up).gradient - design.evaluate(down).gradient) / (2 * eps);
        for (int s = 0; s < theta.size(); ++s) CHECK(rel_err(obj.hessian(s, t), gfd[s]) < 1e-6);
      }
    }
  }
}

TEST_CASE("fit_component") {
  SUBCASE("standard normal data stays at the identity") {
    const int n = 5000;
    const auto x = normals(n, 1, 3);
    auto fit = fit_component(MapComponent(0, {0}, 1), x);
    CHECK(fit.diagnostics.converged);
    CHECK(fit.diagnostics.gradient_norm < 1e-6);
    CHECK(fit.component.coefficients().cwiseAbs().maxCoeff() < 5.0 / std::sqrt(n));
  }
  SUBCASE("2-D Gaussian recovers the inverse Cholesky factor") {
    const int n = 4000;
    Eigen::Matrix2d sigma;
    sigma << 1.0, 0.5, 0.5, 1.0;
    const auto data = gen_gaussian(sigma.inverse(), n, 4).samples.data();
    // MLE of a linear triangular map: L^{-1}(x - mean) with L L^T the 1/n sample covariance
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    const Eigen::MatrixXd cov = centered.transpose() * centered / n;
    const Eigen::MatrixXd Linv = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL().solve(Eigen::MatrixXd::Identity(2, 2));

    auto f0 = fit_component(MapComponent(0, {0}, 1), data);
    auto f1 = fit_component(MapComponent(1, {0, 1}, 1), data);
    CHECK(f0.diagnostics.converged);
    CHECK(f1.diagnostics.converged);
    // component 1: S = c0 + c1 x0 + exp(h0) x1, so the slopes are the last row of L^{-1}
    const auto& c = f1.component.c_coeffs();
    const auto& h = f1.component.h_coeffs();
    CHECK(std::exp(h[0]) == doctest::Approx(Linv(1, 1)).epsilon(1e-6));
    CHECK(c[1] == doctest::Approx(Linv(1, 0)).epsilon(1e-6));
    CHECK(std::exp(f0.component.h_coeffs()[0]) == doctest::Approx(Linv(0, 0)).epsilon(1e-6));
    // and within 5/sqrt(n) of the population factor
    const Eigen::MatrixXd Kinv = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL().solve(Eigen::MatrixXd::Identity(2, 2));
    CHECK(std::abs(std::exp(h[0]) - Kinv(1, 1)) < 5.0 / std::sqrt(n));
    CHECK(std::abs(c[1] - Kinv(1, 0)) < 5.0 / std::sqrt(n));
  }
  SUBCASE("random restarts reach the same optimum") {
    const auto x = normals(800, 2, 5);
    SampleMatrix y = x;
    for (int i = 0; i < y.rows(); ++i) y(i, 1) = x(i, 0) * x(i, 0) * 0.5 + 0.5 * x(i, 1);
    MapComponent spec(1, {0, 1}, 2);
    const auto ref = fit_component(spec, y);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::VectorXd start(spec.num_coefficients());
      for (auto& t : start) t = u(rng);
      const auto other = fit_component(spec, y, {}, start);
      CHECK((other.component.coefficients() - ref.component.coefficients()).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
  SUBCASE("errors") {
    const auto x = normals(5, 3, 7);
    CHECK_THROWS_AS(fit_component(MapComponent(2, {0, 1, 2}, 2), x), InsufficientSamples);
    const auto y = normals(200, 2, 8);
    FitOptions opts;
    opts.max_iterations = 1;
    opts.gradient_tolerance = 1e-300;
    SampleMatrix z = y;
    for (int i = 0; i < z.rows(); ++i) z(i, 1) = 3.0 * y(i, 1) + y(i, 0);
    try {
      fit_component(MapComponent(1, {0, 1}, 2), z, opts);
      FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
      CHECK(e.gradient_norm() > 0.0);
    }
  }
}

TEST_CASE("observed information") {
  SUBCASE("k=1, beta=1 at the identity is diag(1, 2)") {
    // J = E[(c + x e^h)^2 / 2 - h]: d2/dc2 = 1, d2/dh2 = E[2 x^2] = 2, cross = E[x] = 0
    const int n = 40000;
    const auto x = normals(n, 1, 9);
    MapComponent comp(0, {0}, 1);
    const auto info = observed_information(comp, x);
    REQUIRE(info.rows() == 2);
    CHECK(std::abs(info(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(info(1, 1) - 2.0) < 5.0 * std::sqrt(8.0 / n));
    CHECK(std::abs(info(0, 1)) < 5.0 / std::sqrt(n));
  }
  SUBCASE("equals the finite-difference Hessian at the fit") {
    const auto x = normals(500, 2, 10);
    auto fit = fit_component(MapComponent(1, {0, 1}, 2), x);
    ComponentDesign design(fit.component, x);
    const Eigen::VectorXd theta = fit.component.coefficients();
    const double eps = 1e-5;
    for (int t = 0; t < theta.size(); ++t) {
      Eigen::VectorXd up = theta, down = theta;
      up[t] += eps;
      down[t] -= eps;
      const Eigen::VectorXd col = (design.evaluate(up).gradient - design.evaluate(down).gradient) / (2 * eps);
      for (int s = 0; s < theta.size(); ++s) CHECK(std::abs(fit.information(s, t) - col[s]) < 1e-5);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.information);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("fit_map") {
  SUBCASE("independent normals give a near-identity map") {
    const int n = 3000;
    SampleSet samples(normals(n, 3, 11));
    SparsityPattern pattern = SparsityPattern::dense(3);
    pattern.inactive = {{0, 2}};
    const auto fit = fit_map(samples, pattern, 1);
    for (int k = 0; k < 3; ++k) {
      CHECK(fit.diagnostics[k].converged);
      CHECK(fit.map.component(k).coefficients().cwiseAbs().maxCoeff() < 5.0 / std::sqrt(n));
    }
  }
  SUBCASE("separable: equals per-component fits, and follows the ordering") {
    const auto data = normals(400, 3, 12);
    SampleMatrix y = data;
    for (int i = 0; i < y.rows(); ++i) y(i, 2) = data(i, 0) * data(i, 1) + 0.3 * data(i, 2);
    SparsityPattern pattern = SparsityPattern::dense(3);
    pattern.order = {2, 0, 1};
    const auto fit = fit_map(SampleSet(y), pattern, 2);
    const SampleSet permuted = SampleSet(y).permuted(pattern.order);
    for (int k = 0; k < 3; ++k) {
      const auto single = fit_component(MapComponent(k, pattern.active_inputs(k), 2), permuted.data());
      CHECK((single.component.coefficients() - fit.map.component(k).coefficients()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((single.information - fit.information[k]).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("component index is attached to errors") {
    SampleSet small(normals(4, 3, 13));
    try {
      fit_map(small, SparsityPattern::dense(3), 2);
      FAIL("expected InsufficientSamples");
    } catch (const InsufficientSamples& e) {
      CHECK(std::string(e.what()).find("component 1") != std::string::npos);
    }
  }
}

TEST_CASE("coefficient spread matches the delta-method prediction") {
  // bootstrap replicates of a 2-D non-Gaussian fit
  const int n = 1500, reps = 50;
  Rng rng(14);
  SampleMatrix base(n, 2);
  for (int i = 0; i < n; ++i) {
    const double a = rng.normal();
    base(i, 0) = a;
    base(i, 1) = 0.5 * a * a + rng.normal();
  }
  MapComponent spec(1, {0, 1}, 2);
  const auto ref = fit_component(spec, base);
  const Eigen::VectorXd predicted = (ref.information.inverse() / n).diagonal().cwiseSqrt();
  std::vector<Eigen::VectorXd> draws;
  for (int r = 0; r < reps; ++r) {
    SampleMatrix boot(n, 2);
    for (int i = 0; i < n; ++i) boot.row(i) = base.row(static_cast<int>(rng.uniform() * n) % n);
    draws.push_back(fit_component(spec, boot).component.coefficients());
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.num_coefficients());
  for (const auto& d : draws) mean += d / reps;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(spec.num_coefficients());
  for (const auto& d : draws) var += (d - mean).cwiseAbs2() / (reps - 1);
  for (int t = 0; t < spec.num_coefficients(); ++t) {
    const double ratio = std::sqrt(var[t]) / predicted[t];
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
}
