#include "sing/samples.hpp"

#include <cmath>

#include "sing/error.hpp"

namespace sing {

SampleSet::SampleSet(SampleMatrix data, std::vector<std::string> names, std::optional<Standardization> standardization)
    : data_(std::move(data)), names_(std::move(names)), standardization_(std::move(standardization)) {
  if (data_.rows() < 2) throw InvalidArgument("a sample set needs at least two rows");
  if (data_.cols() < 1) throw InvalidArgument("a sample set needs at least one column");
  if (!data_.allFinite()) throw InvalidArgument("sample entries must be finite");
  if (names_.empty()) {
    for (Eigen::Index j = 0; j < data_.cols(); ++j) names_.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names_.size()) != data_.cols())
    throw InvalidArgument("number of column names does not match number of columns");
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    const double mean = data_.col(j).mean();
    if ((data_.col(j).array() - mean).abs().maxCoeff() == 0.0)
      throw InvalidArgument("column '" + names_[j] + "' is constant");
  }
}

SampleSet SampleSet::standardized() const {
  const auto n = data_.rows();
  Standardization record;
  record.mean = data_.colwise().mean().transpose();
  record.scale.resize(data_.cols());
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    const double ss = (data_.col(j).array() - record.mean[j]).square().sum();
    record.scale[j] = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return standardized_with(record);
}

SampleSet SampleSet::standardized_with(const Standardization& record) const {
  if (record.mean.size() != data_.cols() || record.scale.size() != data_.cols())
    throw InvalidArgument("standardization record has wrong length");
  SampleMatrix out = data_;
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    if (!(record.scale[j] > 0.0)) throw InvalidArgument("standardization scale must be positive");
    out.col(j) = (out.col(j).array() - record.mean[j]) / record.scale[j];
  }
  return SampleSet(std::move(out), names_, record);
}

SampleSet SampleSet::permuted(const std::vector<int>& order) const {
  if (static_cast<Eigen::Index>(order.size()) != data_.cols()) throw InvalidArgument("ordering has wrong length");
  std::vector<char> seen(order.size(), 0);
  for (int v : order) {
    if (v < 0 || v >= static_cast<int>(order.size()) || seen[v]) throw InvalidArgument("ordering is not a permutation");
    seen[v] = 1;
  }
  SampleMatrix out(data_.rows(), data_.cols());
  std::vector<std::string> names(order.size());
  std::optional<Standardization> record;
  if (standardization_) record = Standardization{Eigen::VectorXd(order.size()), Eigen::VectorXd(order.size())};
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    out.col(pos) = data_.col(order[pos]);
    names[pos] = names_[order[pos]];
    if (record) {
      record->mean[pos] = standardization_->mean[order[pos]];
      record->scale[pos] = standardization_->scale[order[pos]];
    }
  }
  return SampleSet(std::move(out), std::move(names), std::move(record));
}

}  // namespace sing
