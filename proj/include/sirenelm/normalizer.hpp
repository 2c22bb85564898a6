#pragma once

#include <Eigen/Dense>

namespace sirenelm {

// Per-dimension z-score transform fitted on training rows only. Dimensions
// with zero variance keep their std stored as 1 so they pass through centered.
class Normalizer {
 public:
  Normalizer() = default;

  static Normalizer fit(const Eigen::MatrixXd& train_rows);  // needs >= 2 rows
  static Normalizer from_stats(Eigen::VectorXd mean, Eigen::VectorXd stddev);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& row) const;

  bool fitted() const { return fitted_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& stddev() const { return std_; }
  Eigen::Index dim() const { return mean_.size(); }

 private:
  bool fitted_ = false;
  Eigen::VectorXd mean_;
  Eigen::VectorXd std_;
};

}  // namespace sirenelm
