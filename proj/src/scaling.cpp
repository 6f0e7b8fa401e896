#include "sing/scaling.hpp"

#include <cmath>
#include <numbers>

#include "sing/error.hpp"
#include "sing/precision.hpp"

namespace sing {

double phi_two_sided(double delta) { return delta <= 0.0 ? 0.0 : std::erf(delta / std::numbers::sqrt2); }

double phi_half_normal(double delta) { return delta <= 0.0 ? 0.0 : std::erf(delta / std::numbers::sqrt2); }

namespace {

// Solves erfc(delta / sqrt 2) = 1 - z. Working with the complement keeps the
// tail accurate when z is close to 1.
double invert_folded(double z) {
  if (!(z > 0.0 && z < 1.0)) throw InvalidArgument("probability must lie in (0, 1)");
  const double target = 1.0 - z;
  auto tail = [](double d) { return std::erfc(d / std::numbers::sqrt2); };
  double lo = 0.0, hi = 1.0;
  while (tail(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 64.0) throw InvalidArgument("probability too close to 1 for double precision");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > target ? lo : hi) = mid;
  }
  double d = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    // d/dd erfc(d / sqrt 2) = -sqrt(2 / pi) exp(-d^2 / 2)
    const double slope = -std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * d * d);
    const double next = d - (tail(d) - target) / slope;
    if (next > lo && next < hi) d = next;
  }
  return d;
}

}  // namespace

double inverse_phi_two_sided(double z) { return invert_folded(z); }

double inverse_phi_half_normal(double z) { return invert_folded(z); }

double delta_star(int p, double m) {
  if (p < 2) throw InvalidArgument("delta_star needs p >= 2");
  if (!(m > 0.0)) throw InvalidArgument("failure probability m must be positive");
  const double pairs = 0.5 * p * (p - 1.0);
  const double excess = m / pairs;
  if (excess >= 1.0) throw InvalidArgument("2m / (p (p - 1)) >= 1: delta* would be infinite");
  const double z = 1.0 - excess;
  return std::max(inverse_phi_two_sided(z), inverse_phi_half_normal(z));
}

NStarReport n_star_from_rho(const Eigen::MatrixXd& rho, int n, double kappa, double m) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(m > 0.0 && m < 1.0)) throw InvalidArgument("m must lie in (0, 1)");
  const int p = static_cast<int>(rho.rows());
  NStarReport report;
  report.delta_star = delta_star(p, m);
  const double factor = (report.delta_star / kappa) * (report.delta_star / kappa);
  report.pairwise = Eigen::MatrixXd::Zero(p, p);
  report.n_star = -1.0;
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      const double quad = static_cast<double>(n) * rho(j, k) * rho(j, k);
      const double v = quad * factor;
      report.pairwise(j, k) = report.pairwise(k, j) = v;
      if (v > report.n_star) {
        report.n_star = v;
        report.argmax = {j, k};
      }
    }
  }
  report.n_star_ceil = static_cast<long long>(std::ceil(report.n_star));
  return report;
}

NStarReport n_star(const FitResult& fit, const SampleSet& samples, double kappa, double m) {
  bool flag = false;
  const Eigen::MatrixXd r = rho(fit.map, samples, fit.information, &flag);
  NStarReport report = n_star_from_rho(r, samples.rows(), kappa, m);
  report.pseudo_inverse_used = flag;
  return report;
}

}  // namespace sing
