#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sirenelm/normalizer.hpp"

namespace sirenelm {

enum class Activation { sigmoid, tanh, hardlimit };

const char* activation_name(Activation a);
Activation activation_from_name(std::string_view name);

struct ElmConfig {
  int hidden_nodes = 10;
  Activation activation = Activation::sigmoid;
  // Optional ridge weight lambda from the objective |beta| + lambda |H beta - T|.
  // Absent means the pure pseudoinverse solution beta = pinv(H) T.
  std::optional<double> ridge;
  std::uint64_t seed = 0;
};

struct RandomLayer {
  Eigen::MatrixXd weights;  // hidden_nodes x input_dim
  Eigen::VectorXd biases;   // hidden_nodes
};

// Weights and biases i.i.d. uniform on [-1, 1), drawn row-major weights first,
// then biases; identical output for identical (input_dim, hidden, seed).
RandomLayer init_random_layer(int input_dim, int hidden_nodes, std::uint64_t seed);

// H[n][i] = g(a_i . x_n + b_i) for each sample row x_n.
Eigen::MatrixXd hidden_output(const Eigen::MatrixXd& samples, const RandomLayer& layer,
                              Activation activation);

// Minimum-norm least squares via SVD: singular values at or below
// max(rows, cols) * sigma_max * machine-epsilon are treated as zero.
Eigen::MatrixXd pinv_least_squares(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs);

// Without ridge: beta = pinv(H) T. With ridge lambda:
// beta = (H^T H + (1/lambda) I)^-1 H^T T, the minimizer of
// |H beta - T|^2 + (1/lambda) |beta|^2 (lambda = 0 collapses to beta = 0).
Eigen::MatrixXd solve_output_weights(const Eigen::MatrixXd& hidden, const Eigen::MatrixXd& targets,
                                     std::optional<double> ridge);

// Single-hidden-layer network with random fixed hidden weights and output
// weights solved in closed form. Immutable once trained; safe to share across
// prediction threads.
class ElmModel {
 public:
  ElmModel() = default;

  // `features` must already be normalized with `normalizer`, labels in
  // 0..n_classes-1 with at least two classes present.
  static ElmModel train(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                        const ElmConfig& cfg, Normalizer normalizer,
                        std::vector<std::string> classes);

  // Raw feature vector in, stored normalizer applied internally.
  // Ties in the score argmax break toward the lowest class index.
  std::pair<int, Eigen::VectorXd> predict(const Eigen::VectorXd& raw_features) const;

  // Fast paths over already-normalized rows (the evaluation harness
  // normalizes fold-wise up front).
  Eigen::MatrixXd scores_normalized(const Eigen::MatrixXd& normalized) const;
  std::vector<int> predict_normalized(const Eigen::MatrixXd& normalized) const;

  void save(const std::filesystem::path& path) const;
  static ElmModel load(const std::filesystem::path& path);

  int input_dim() const { return static_cast<int>(layer_.weights.cols()); }
  int hidden_nodes() const { return static_cast<int>(layer_.weights.rows()); }
  int n_classes() const { return static_cast<int>(beta_.cols()); }
  const RandomLayer& layer() const { return layer_; }
  const Eigen::MatrixXd& output_weights() const { return beta_; }
  Activation activation() const { return activation_; }
  const Normalizer& normalizer() const { return normalizer_; }
  const std::vector<std::string>& classes() const { return classes_; }
  std::uint64_t seed() const { return seed_; }
  std::optional<double> ridge() const { return ridge_; }

 private:
  RandomLayer layer_;
  Eigen::MatrixXd beta_;  // hidden_nodes x n_classes
  Activation activation_ = Activation::sigmoid;
  Normalizer normalizer_;
  std::vector<std::string> classes_;
  std::uint64_t seed_ = 0;
  std::optional<double> ridge_;
};

}  // namespace sirenelm
