#include "sirenelm/smote.hpp"

#include <algorithm>
#include <string>

#include "sirenelm/errors.hpp"
#include "sirenelm/rng.hpp"

namespace sirenelm {

Eigen::VectorXd smote_interpolate(const Eigen::VectorXd& x, const Eigen::VectorXd& neighbor,
                                  double u) {
  if (x.size() != neighbor.size()) fail(Errc::dimension, "interpolation endpoints differ in size");
  if (u < 0.0 || u >= 1.0) fail(Errc::domain, "interpolation factor must lie in [0, 1)");
  return x + u * (neighbor - x);
}

std::vector<std::vector<Eigen::Index>> k_nearest_neighbors(const Eigen::MatrixXd& rows, int k) {
  const Eigen::Index n = rows.rows();
  if (k <= 0) fail(Errc::config, "neighbor count must be positive");
  if (n <= k) {
    fail(Errc::insufficient_data, "need more than k = " + std::to_string(k) +
                                      " rows, got " + std::to_string(n));
  }
  std::vector<std::vector<Eigen::Index>> result(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back((rows.row(j) - rows.row(i)).squaredNorm(), j);
    }
    // pair ordering makes equal distances resolve to the lower row index
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    auto& out = result[static_cast<std::size_t>(i)];
    out.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) out.push_back(dist[static_cast<std::size_t>(t)].second);
  }
  return result;
}

Eigen::MatrixXd smote(const Eigen::MatrixXd& minority_rows, const SmoteConfig& cfg) {
  const Eigen::Index n = minority_rows.rows();
  if (n == 0) fail(Errc::empty_input, "no minority rows to oversample");
  const Eigen::Index wanted = cfg.target_count - n;
  if (wanted <= 0) return Eigen::MatrixXd(0, minority_rows.cols());

  const auto neighbors = k_nearest_neighbors(minority_rows, cfg.k_neighbors);
  Rng rng(cfg.seed);
  Eigen::MatrixXd synth(wanted, minority_rows.cols());
  for (Eigen::Index s = 0; s < wanted; ++s) {
    const Eigen::Index base = s % n;
    const auto& cand = neighbors[static_cast<std::size_t>(base)];
    const auto pick = uniform_index(rng, cand.size());
    const double u = uniform_unit(rng);
    synth.row(s) = minority_rows.row(base) +
                   u * (minority_rows.row(cand[pick]) - minority_rows.row(base));
  }
  return synth;
}

std::pair<Eigen::MatrixXd, std::vector<int>> balance_training_set(
    const Eigen::MatrixXd& train_features, const std::vector<int>& train_labels,
    int k_neighbors, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(train_features.rows());
  if (train_labels.size() != n) {
    fail(Errc::dimension, "labels length does not match the feature rows");
  }
  Eigen::Index count[2] = {0, 0};
  for (const int label : train_labels) {
    if (label != 0 && label != 1) fail(Errc::domain, "labels must be 0 or 1");
    ++count[label];
  }
  if (count[0] == 0 || count[1] == 0) {
    fail(Errc::degenerate_data, "both classes must be present before balancing");
  }
  if (count[0] == count[1]) return {train_features, train_labels};

  const int minority = count[1] < count[0] ? 1 : 0;
  Eigen::MatrixXd minority_rows(count[minority], train_features.cols());
  Eigen::Index w = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (train_labels[i] == minority) {
      minority_rows.row(w++) = train_features.row(static_cast<Eigen::Index>(i));
    }
  }

  SmoteConfig cfg;
  cfg.k_neighbors = k_neighbors;
  cfg.target_count = count[1 - minority];
  cfg.seed = seed;
  const Eigen::MatrixXd synth = smote(minority_rows, cfg);

  Eigen::MatrixXd out(train_features.rows() + synth.rows(), train_features.cols());
  out.topRows(train_features.rows()) = train_features;
  out.bottomRows(synth.rows()) = synth;
  std::vector<int> labels = train_labels;
  labels.insert(labels.end(), static_cast<std::size_t>(synth.rows()), minority);
  return {out, labels};
}

}  // namespace sirenelm
