#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace sirenelm {

struct SmoteConfig {
  int k_neighbors = 5;
  Eigen::Index target_count = 0;  // desired minority row count after synthesis
  std::uint64_t seed = 0;
};

// Interpolation endpoint used for every synthetic sample: x + u * (nn - x).
Eigen::VectorXd smote_interpolate(const Eigen::VectorXd& x, const Eigen::VectorXd& neighbor,
                                  double u);

// k nearest same-set neighbors per row (Euclidean, self excluded). Distance
// ties resolve toward the lower row index.
std::vector<std::vector<Eigen::Index>> k_nearest_neighbors(const Eigen::MatrixXd& rows, int k);

// Returns target_count - rows synthetic rows. Base rows are cycled
// round-robin; per synthetic row the RNG draws, in order, a neighbor choice in
// [0, k) and an interpolation factor u in [0, 1). Fully determined by the seed.
Eigen::MatrixXd smote(const Eigen::MatrixXd& minority_rows, const SmoteConfig& cfg);

// Oversamples the minority class of a two-class training set to the majority
// count. Original rows come first in their input order; synthetic rows are
// appended carrying the minority label. Balanced input passes through.
std::pair<Eigen::MatrixXd, std::vector<int>> balance_training_set(
    const Eigen::MatrixXd& train_features, const std::vector<int>& train_labels,
    int k_neighbors, std::uint64_t seed);

}  // namespace sirenelm
