#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sirenelm {

// Lazy k-nearest-neighbors classifier over a plain linear scan. A few hundred
// training rows do not justify an index, and the scan keeps timing
// comparisons transparent.
class KnnModel {
 public:
  KnnModel() = default;

  static KnnModel fit(Eigen::MatrixXd features, std::vector<int> labels, int k = 5);

  // Majority vote among the k Euclidean-nearest rows. Distance ties resolve
  // toward the lower training-row index, vote ties toward the lower class.
  int predict(const Eigen::VectorXd& features) const;
  std::vector<int> predict(const Eigen::MatrixXd& features) const;

  int k() const { return k_; }
  Eigen::Index rows() const { return features_.rows(); }

 private:
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  int k_ = 0;
  int n_classes_ = 0;
};

}  // namespace sirenelm
