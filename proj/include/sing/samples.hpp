#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sing {

/// Samples are stored one per row so a row is a contiguous point.
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-column affine record: standardized = (raw - mean) / scale.
struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

/// n samples of p variables. Entries are finite, n >= 2, and every column has
/// positive sample variance.
class SampleSet {
 public:
  explicit SampleSet(SampleMatrix data, std::vector<std::string> names = {},
                     std::optional<Standardization> standardization = std::nullopt);

  int rows() const { return static_cast<int>(data_.rows()); }
  int cols() const { return static_cast<int>(data_.cols()); }
  const SampleMatrix& data() const { return data_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::optional<Standardization>& standardization() const { return standardization_; }

  /// Centered, unit-variance copy (sample variance with n - 1) carrying the record.
  SampleSet standardized() const;
  /// Apply an existing record, e.g. the one stored with a fitted map.
  SampleSet standardized_with(const Standardization& record) const;
  /// Column `pos` of the result is column `order[pos]` of this set.
  SampleSet permuted(const std::vector<int>& order) const;

 private:
  SampleMatrix data_;
  std::vector<std::string> names_;
  std::optional<Standardization> standardization_;
};

}  // namespace sing
