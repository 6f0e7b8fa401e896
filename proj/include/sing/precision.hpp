#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sing/estimate.hpp"
#include "sing/graph.hpp"
#include "sing/map.hpp"
#include "sing/samples.hpp"

namespace sing {

/// Generalized precision estimate and its delta-method standard deviations,
/// both in original variable labels. Values refer to the standardized scale
/// when `standardization` is set.
struct PrecisionEstimate {
  Eigen::MatrixXd omega;
  Eigen::MatrixXd rho;
  int n = 0;
  bool pseudo_inverse_used = false;
  std::optional<Standardization> standardization;
};

/// omega_jk = mean_i |d^2/dx_j dx_k log pullback(x_i)|. Samples are in original
/// labels; the diagonal holds the same average of |d^2/dx_j^2| for reporting.
Eigen::MatrixXd omega_hat(const TriangularMap& map, const SampleSet& samples);

/// Gradient of omega_jk with respect to all map coefficients (concatenated
/// in component order, see TriangularMap::coefficient_offset). j, k are
/// original labels. sign(0) is taken as 0.
Eigen::VectorXd grad_alpha_omega(const TriangularMap& map, const SampleSet& samples, int j, int k);

/// Inverses of the information blocks; singular blocks use a pseudo-inverse
/// and set `pseudo_inverse_used`.
std::vector<Eigen::MatrixXd> information_inverses(const std::vector<Eigen::MatrixXd>& information,
                                                  bool& pseudo_inverse_used);

/// rho_jk = sqrt(sum_m v_m^T (I_m^{-1} / n) v_m) for every pair.
Eigen::MatrixXd rho(const TriangularMap& map, const SampleSet& samples,
                    const std::vector<Eigen::MatrixXd>& information, bool* pseudo_inverse_used = nullptr);

/// omega and rho from a single pass over the samples.
PrecisionEstimate estimate_precision(const FitResult& fit, const SampleSet& samples);

/// Edge (j, k) is kept iff omega_jk > delta * rho_jk.
Graph threshold(const PrecisionEstimate& estimate, double delta);

}  // namespace sing
