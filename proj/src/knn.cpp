#include "sirenelm/knn.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "sirenelm/errors.hpp"

namespace sirenelm {

KnnModel KnnModel::fit(Eigen::MatrixXd features, std::vector<int> labels, int k) {
  if (features.rows() == 0) fail(Errc::empty_input, "no training rows");
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    fail(Errc::dimension, "labels length does not match the feature rows");
  }
  if (k <= 0) fail(Errc::config, "k must be positive");
  if (k > features.rows()) {
    fail(Errc::config, "k = " + std::to_string(k) + " exceeds the training size " +
                           std::to_string(features.rows()));
  }
  int max_label = 0;
  for (const int label : labels) {
    if (label < 0) fail(Errc::domain, "labels must be non-negative");
    max_label = std::max(max_label, label);
  }
  KnnModel model;
  model.features_ = std::move(features);
  model.labels_ = std::move(labels);
  model.k_ = k;
  model.n_classes_ = max_label + 1;
  return model;
}

int KnnModel::predict(const Eigen::VectorXd& features) const {
  if (k_ == 0) fail(Errc::state, "model is not fitted");
  if (features.size() != features_.cols()) {
    fail(Errc::dimension, "query width does not match the training features");
  }
  // Keep the k best (distance, index) pairs; on equal distance the earlier
  // training row wins, which partial_sort preserves through the index member.
  std::vector<std::pair<double, Eigen::Index>> dist(
      static_cast<std::size_t>(features_.rows()));
  for (Eigen::Index r = 0; r < features_.rows(); ++r) {
    dist[static_cast<std::size_t>(r)] = {(features_.row(r).transpose() - features).squaredNorm(),
                                         r};
  }
  std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
  std::vector<int> votes(static_cast<std::size_t>(n_classes_), 0);
  for (int i = 0; i < k_; ++i) {
    ++votes[static_cast<std::size_t>(labels_[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)])];
  }
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<int> KnnModel::predict(const Eigen::MatrixXd& features) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    out.push_back(predict(features.row(r).transpose().eval()));
  }
  return out;
}

}  // namespace sirenelm
