#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sirenelm/dataset.hpp"
#include "sirenelm/elm.hpp"
#include "sirenelm/timing.hpp"

namespace sirenelm {

enum class ModelKind { elm, knn };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(std::string_view name);

struct PipelineParams {
  ModelKind model = ModelKind::elm;
  int hidden_nodes = 10;
  Activation activation = Activation::sigmoid;
  std::optional<double> ridge;
  int knn_k = 5;
  bool smote_enabled = true;
  int smote_k = 5;
  TimingProtocol timing{};
};

struct FoldSplit {
  int test_fold = 0;  // 1..5
  std::vector<Eigen::Index> train_idx;
  std::vector<Eigen::Index> test_idx;
};

// One split per fold id, test rows exactly those carrying that fold.
std::vector<FoldSplit> make_folds(const std::vector<int>& folds);

using Confusion = std::array<std::array<std::int64_t, 2>, 2>;  // [true][predicted]

struct FoldEval {
  int test_fold = 0;
  std::uint64_t seed = 0;
  double accuracy_pct = 0.0;
  Confusion confusion{};
  std::vector<int> predictions;  // one per test row, in split order
  TimingResult timing;
};

// Per held-out fold: fit normalizer on raw train features, normalize both
// sides, SMOTE-balance the training rows, then train + classify. The timed
// region covers exactly train + classify-test, after balancing.
FoldEval run_fold(const FeatureTable& table, const FoldSplit& split,
                  const PipelineParams& params, std::uint64_t seed);

struct EvalReport {
  PipelineParams params;
  std::vector<std::uint64_t> seeds;
  std::vector<FoldEval> runs;               // one per (seed, fold)
  std::array<double, kNumFolds> fold_accuracy_pct{};  // mean over seeds
  std::array<double, kNumFolds> fold_time_ms{};       // mean over seeds of medians
  Confusion total_confusion{};
  double overall_accuracy_pct = 0.0;        // micro average over every run
  double seed_accuracy_min_pct = 0.0;       // spread of per-seed overall accuracy
  double seed_accuracy_max_pct = 0.0;
};

// Runs all folds for each seed. KNN is deterministic, so it evaluates with
// the first seed only (the seed still drives SMOTE).
EvalReport crossval(const FeatureTable& table, const PipelineParams& params,
                    const std::vector<std::uint64_t>& seeds);

struct SweepEntry {
  int hidden_nodes = 0;
  EvalReport report;
};

// crossval per hidden-layer width; mirrors the accuracy/run-time table layout.
std::vector<SweepEntry> sweep_neurons(const FeatureTable& table, const std::vector<int>& widths,
                                      const PipelineParams& params,
                                      const std::vector<std::uint64_t>& seeds);

struct FeatureSummary {
  std::vector<int> class_ids;
  Eigen::MatrixXd mean;    // class x kFeatureDim
  Eigen::MatrixXd stddev;  // class x kFeatureDim (population)
};

FeatureSummary feature_summary(const FeatureTable& table);
void write_feature_summary_csv(const std::filesystem::path& path, const FeatureSummary& summary);

// Report emission. The JSON echo carries every tunable so a run can be
// reconstructed from its output directory alone.
void write_report_text(std::ostream& os, const EvalReport& report);
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);
std::string report_config_json(const EvalReport& report, const FeaturePipelineConfig& features);
std::string report_json(const EvalReport& report);

void write_sweep_text(std::ostream& os, const std::vector<SweepEntry>& entries);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepEntry>& entries);
std::string sweep_json(const std::vector<SweepEntry>& entries);

}  // namespace sirenelm
