#pragma once

#include <utility>

#include <Eigen/Core>

#include "sing/estimate.hpp"
#include "sing/samples.hpp"

namespace sing {

/// P(|Z| <= delta) for a standard normal Z (correctly detected existing edge).
double phi_two_sided(double delta);
/// Half-normal CDF, P(|Z| <= delta) for the zero-mean folded normal (absent edge).
double phi_half_normal(double delta);
/// Inverses on (0, 1), by bracketed bisection with Newton polishing on erfc.
double inverse_phi_two_sided(double z);
double inverse_phi_half_normal(double z);

/// Threshold multiplier that bounds the union probability of any wrong edge by
/// m: max of both inverses at z = 1 - 2m / (p (p - 1)).
double delta_star(int p, double m);

struct NStarReport {
  double delta_star = 0.0;
  Eigen::MatrixXd pairwise;  // n*_jk, original labels; diagonal zero
  double n_star = 0.0;
  long long n_star_ceil = 0;
  std::pair<int, int> argmax{0, 1};
  bool pseudo_inverse_used = false;
};

/// n*_jk = grad_jk^T I^{-1} grad_jk (delta* / kappa)^2 and n* = max over pairs.
/// The estimate refers to one pass of the algorithm with the given map.
NStarReport n_star(const FitResult& fit, const SampleSet& samples, double kappa, double m);

/// Same, from an already computed rho (rho_jk^2 = grad^T I^{-1} grad / n).
NStarReport n_star_from_rho(const Eigen::MatrixXd& rho, int n, double kappa, double m);

}  // namespace sing
