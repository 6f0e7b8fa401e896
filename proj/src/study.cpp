#include "sing/study.hpp"

#include <Eigen/Core>

#include "sing/datagen.hpp"
#include "sing/estimate.hpp"
#include "sing/error.hpp"
#include "sing/precision.hpp"

namespace sing {

std::vector<std::pair<std::string, SparsityPattern>> study_patterns(const Graph& truth) {
  const Ordering ordering = order_reverse_cholesky(truth);
  return {{"dense", SparsityPattern::dense(truth.p)},
          {"exact", sparsity_pattern(induced_graph(truth, ordering), ordering)},
          {"diagonal", SparsityPattern::diagonal(truth.p)}};
}

std::vector<VarianceRow> variance_study(const VarianceStudyConfig& config) {
  if (config.replicates < 2) throw InvalidArgument("variance study needs at least two replicates");
  const Eigen::MatrixXd theta = grid_precision(config.side, config.gamma);
  const int p = static_cast<int>(theta.rows());
  const Eigen::MatrixXd target = theta.cwiseAbs();

  Graph truth(p);
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k)
      if (theta(j, k) != 0.0) truth.add_edge(j, k);
  const auto patterns = study_patterns(truth);

  std::vector<VarianceRow> rows;
  for (const auto& [name, pattern] : patterns) {
    for (int n : config.sample_sizes) {
      std::vector<Eigen::MatrixXd> omegas;
      int coefficients = 0;
      for (int r = 0; r < config.replicates; ++r) {
        const std::uint64_t stream = config.seed * 1000003ULL + static_cast<std::uint64_t>(n) * 1009ULL + r;
        // Raw draws: standardizing would pin the diagonal fit and leave it no variance.
        const SampleSet samples = gen_gaussian(theta, n, stream).samples;
        const FitResult fit = fit_map(samples, pattern, config.max_degree);
        coefficients = fit.map.num_coefficients();
        omegas.push_back(omega_hat(fit.map, samples));
      }
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(p, p);
      for (const auto& o : omegas) mean += o / config.replicates;
      double variance = 0.0;
      for (const auto& o : omegas) variance += (o - mean).squaredNorm() / (config.replicates - 1);
      rows.push_back({name, n, config.replicates, coefficients, variance, (mean - target).norm()});
    }
  }
  return rows;
}

}  // namespace sing
