#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "sing/map.hpp"

namespace testing {

inline double rel_err(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Central difference of f at x along coordinate i.
inline double fd1(const std::function<double(std::vector<double>&)>& f, std::vector<double> x, int i,
                  double h = 1e-5) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2 * h);
}

/// Second-order central difference for d^2 f / dx_i dx_j (i may equal j).
inline double fd2(const std::function<double(std::vector<double>&)>& f, std::vector<double> x, int i, int j,
                  double h = 1e-4) {
  if (i == j) {
    const double x0 = x[i];
    const double mid = f(x);
    x[i] = x0 + h;
    const double up = f(x);
    x[i] = x0 - h;
    const double down = f(x);
    return (up - 2 * mid + down) / (h * h);
  }
  auto shifted = [&](double si, double sj) {
    auto y = x;
    y[i] += si * h;
    y[j] += sj * h;
    return f(y);
  };
  return (shifted(1, 1) - shifted(1, -1) - shifted(-1, 1) + shifted(-1, -1)) / (4 * h * h);
}

/// Map with random coefficients in [-scale, scale]; the h constant is kept
/// small so the integrand stays moderate.
inline sing::TriangularMap random_map(const sing::SparsityPattern& pattern, int beta, std::mt19937_64& rng,
                                      double scale = 0.3) {
  sing::TriangularMap map(pattern, beta);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int k = 0; k < map.dimension(); ++k) {
    auto& comp = map.component(k);
    Eigen::VectorXd theta(comp.num_coefficients());
    for (auto& t : theta) t = u(rng);
    comp.set_coefficients(theta);
  }
  return map;
}

inline std::vector<double> random_point(int p, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> x(p);
  for (auto& v : x) v = z(rng);
  return x;
}

}  // namespace testing
