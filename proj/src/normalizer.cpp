#include "sirenelm/normalizer.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sirenelm/errors.hpp"

namespace sirenelm {

Normalizer Normalizer::fit(const Eigen::MatrixXd& train_rows) {
  if (train_rows.rows() < 2) {
    fail(Errc::insufficient_data, "normalizer needs at least two rows, got " +
                                      std::to_string(train_rows.rows()));
  }
  const double n = static_cast<double>(train_rows.rows());
  Normalizer norm;
  norm.mean_ = train_rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = train_rows.rowwise() - norm.mean_.transpose();
  norm.std_ = (centered.array().square().colwise().sum() / n).sqrt().transpose();
  for (Eigen::Index c = 0; c < norm.std_.size(); ++c) {
    if (norm.std_(c) == 0.0) norm.std_(c) = 1.0;
  }
  norm.fitted_ = true;
  return norm;
}

Normalizer Normalizer::from_stats(Eigen::VectorXd mean, Eigen::VectorXd stddev) {
  if (mean.size() != stddev.size()) {
    fail(Errc::dimension, "mean and stddev lengths differ");
  }
  for (Eigen::Index c = 0; c < stddev.size(); ++c) {
    if (!(stddev(c) > 0.0) || !std::isfinite(stddev(c))) {
      fail(Errc::domain, "stddev entries must be positive and finite");
    }
  }
  Normalizer norm;
  norm.mean_ = std::move(mean);
  norm.std_ = std::move(stddev);
  norm.fitted_ = true;
  return norm;
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& rows) const {
  if (!fitted_) fail(Errc::state, "normalizer used before fitting");
  if (rows.cols() != mean_.size()) {
    fail(Errc::dimension, "row width " + std::to_string(rows.cols()) +
                              " does not match the fitted dimension " +
                              std::to_string(mean_.size()));
  }
  return (rows.rowwise() - mean_.transpose()).array().rowwise() /
         std_.transpose().array();
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& row) const {
  if (!fitted_) fail(Errc::state, "normalizer used before fitting");
  if (row.size() != mean_.size()) {
    fail(Errc::dimension, "vector length " + std::to_string(row.size()) +
                              " does not match the fitted dimension " +
                              std::to_string(mean_.size()));
  }
  return (row - mean_).cwiseQuotient(std_);
}

}  // namespace sirenelm
