#include "sirenelm/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

#include "sirenelm/errors.hpp"
#include "sirenelm/knn.hpp"
#include "sirenelm/rng.hpp"
#include "sirenelm/smote.hpp"

namespace sirenelm {

const char* model_kind_name(ModelKind kind) {
  return kind == ModelKind::elm ? "elm" : "knn";
}

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "elm") return ModelKind::elm;
  if (name == "knn") return ModelKind::knn;
  fail(Errc::config, "unknown model '" + std::string(name) + "' (expected elm or knn)");
}

std::vector<FoldSplit> make_folds(const std::vector<int>& folds) {
  if (folds.empty()) fail(Errc::empty_input, "no fold assignments");
  for (const int fold : folds) {
    if (fold < 1 || fold > kNumFolds) {
      fail(Errc::manifest, "fold id " + std::to_string(fold) + " outside 1.." +
                               std::to_string(kNumFolds));
    }
  }
  std::set<int> ids(folds.begin(), folds.end());
  std::vector<FoldSplit> splits;
  splits.reserve(ids.size());
  for (const int id : ids) {
    FoldSplit split;
    split.test_fold = id;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      if (folds[i] == id) {
        split.test_idx.push_back(static_cast<Eigen::Index>(i));
      } else {
        split.train_idx.push_back(static_cast<Eigen::Index>(i));
      }
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  }
  return out;
}

std::vector<int> take_labels(const std::vector<int>& labels,
                             const std::vector<Eigen::Index>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(labels[static_cast<std::size_t>(i)]);
  return out;
}

void check_table(const FeatureTable& table) {
  const auto n = static_cast<std::size_t>(table.features.rows());
  if (n == 0) fail(Errc::empty_input, "feature table has no rows");
  if (table.labels.size() != n || table.folds.size() != n) {
    fail(Errc::dimension, "labels/folds length does not match the feature rows");
  }
  for (const int fold : table.folds) {
    if (fold < 1 || fold > kNumFolds) {
      fail(Errc::manifest, "fold id " + std::to_string(fold) + " outside 1.." +
                               std::to_string(kNumFolds));
    }
  }
}

}  // namespace

FoldEval run_fold(const FeatureTable& table, const FoldSplit& split,
                  const PipelineParams& params, std::uint64_t seed) {
  check_table(table);
  if (split.train_idx.empty() || split.test_idx.empty()) {
    fail(Errc::insufficient_data, "fold split leaves one side empty");
  }

  const Eigen::MatrixXd train_raw = take_rows(table.features, split.train_idx);
  const Eigen::MatrixXd test_raw = take_rows(table.features, split.test_idx);
  const std::vector<int> train_labels = take_labels(table.labels, split.train_idx);
  const std::vector<int> test_labels = take_labels(table.labels, split.test_idx);

  // Everything fitted sees training rows only; the test side is transformed
  // with the training statistics.
  const Normalizer norm = Normalizer::fit(train_raw);
  const Eigen::MatrixXd train_z = norm.apply(train_raw);
  const Eigen::MatrixXd test_z = norm.apply(test_raw);

  // Stage seeds derive from the run seed through the mixer, one chain per
  // (seed, fold) so folds draw independent streams.
  const std::uint64_t fold_seed =
      mix_seed(mix_seed(seed) + static_cast<std::uint64_t>(split.test_fold));
  const std::uint64_t smote_seed = mix_seed(fold_seed + 1);
  const std::uint64_t model_seed = mix_seed(fold_seed + 2);

  Eigen::MatrixXd train_x = train_z;
  std::vector<int> train_y = train_labels;
  if (params.smote_enabled) {
    auto balanced = balance_training_set(train_z, train_labels, params.smote_k, smote_seed);
    train_x = std::move(balanced.first);
    train_y = std::move(balanced.second);
  }

  FoldEval eval;
  eval.test_fold = split.test_fold;
  eval.seed = seed;

  // The timed region is exactly train-plus-classify; balancing and
  // normalization stay outside it.
  std::vector<int> predictions;
  if (params.model == ModelKind::elm) {
    ElmConfig cfg;
    cfg.hidden_nodes = params.hidden_nodes;
    cfg.activation = params.activation;
    cfg.ridge = params.ridge;
    cfg.seed = model_seed;
    eval.timing = time_region(
        [&] {
          const ElmModel model = ElmModel::train(train_x, train_y, cfg, norm, class_names());
          predictions = model.predict_normalized(test_z);
        },
        params.timing);
  } else {
    eval.timing = time_region(
        [&] {
          const KnnModel model = KnnModel::fit(train_x, train_y, params.knn_k);
          predictions = model.predict(test_z);
        },
        params.timing);
  }

  eval.predictions = std::move(predictions);
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < eval.predictions.size(); ++i) {
    const int truth = test_labels[i];
    const int guess = eval.predictions[i];
    if (truth == guess) ++correct;
    if (truth >= 0 && truth < 2 && guess >= 0 && guess < 2) {
      ++eval.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(guess)];
    }
  }
  eval.accuracy_pct = 100.0 * static_cast<double>(correct) /
                      static_cast<double>(eval.predictions.size());
  return eval;
}

EvalReport crossval(const FeatureTable& table, const PipelineParams& params,
                    const std::vector<std::uint64_t>& seeds) {
  check_table(table);
  if (seeds.empty()) fail(Errc::config, "at least one seed is required");

  EvalReport report;
  report.params = params;
  report.seeds = params.model == ModelKind::knn
                     ? std::vector<std::uint64_t>{seeds.front()}
                     : seeds;

  const auto splits = make_folds(table.folds);
  std::array<int, kNumFolds> fold_runs{};
  std::map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> per_seed;  // correct, total

  for (const std::uint64_t seed : report.seeds) {
    for (const auto& split : splits) {
      FoldEval eval = run_fold(table, split, params, seed);
      const auto fold_index = static_cast<std::size_t>(eval.test_fold - 1);
      report.fold_accuracy_pct[fold_index] += eval.accuracy_pct;
      report.fold_time_ms[fold_index] += eval.timing.median_ms;
      ++fold_runs[fold_index];

      std::int64_t correct = 0;
      std::int64_t total = 0;
      for (std::size_t t = 0; t < 2; ++t) {
        for (std::size_t g = 0; g < 2; ++g) {
          report.total_confusion[t][g] += eval.confusion[t][g];
          total += eval.confusion[t][g];
          if (t == g) correct += eval.confusion[t][g];
        }
      }
      per_seed[seed].first += correct;
      per_seed[seed].second += total;
      report.runs.push_back(std::move(eval));
    }
  }

  for (std::size_t f = 0; f < kNumFolds; ++f) {
    if (fold_runs[f] > 0) {
      report.fold_accuracy_pct[f] /= fold_runs[f];
      report.fold_time_ms[f] /= fold_runs[f];
    }
  }

  std::int64_t correct = 0;
  std::int64_t total = 0;
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t g = 0; g < 2; ++g) {
      total += report.total_confusion[t][g];
      if (t == g) correct += report.total_confusion[t][g];
    }
  }
  report.overall_accuracy_pct =
      total > 0 ? 100.0 * static_cast<double>(correct) / static_cast<double>(total) : 0.0;

  report.seed_accuracy_min_pct = 100.0;
  report.seed_accuracy_max_pct = 0.0;
  for (const auto& [seed, counts] : per_seed) {
    const double acc =
        counts.second > 0
            ? 100.0 * static_cast<double>(counts.first) / static_cast<double>(counts.second)
            : 0.0;
    report.seed_accuracy_min_pct = std::min(report.seed_accuracy_min_pct, acc);
    report.seed_accuracy_max_pct = std::max(report.seed_accuracy_max_pct, acc);
  }
  return report;
}

std::vector<SweepEntry> sweep_neurons(const FeatureTable& table, const std::vector<int>& widths,
                                      const PipelineParams& params,
                                      const std::vector<std::uint64_t>& seeds) {
  if (widths.empty()) fail(Errc::config, "no widths to sweep");
  std::vector<SweepEntry> entries;
  entries.reserve(widths.size());
  for (const int width : widths) {
    PipelineParams p = params;
    p.model = ModelKind::elm;
    p.hidden_nodes = width;
    SweepEntry entry;
    entry.hidden_nodes = width;
    entry.report = crossval(table, p, seeds);
    entries.push_back(std::move(entry));
  }
  return entries;
}

FeatureSummary feature_summary(const FeatureTable& table) {
  check_table(table);
  std::set<int> ids(table.labels.begin(), table.labels.end());
  FeatureSummary summary;
  summary.class_ids.assign(ids.begin(), ids.end());
  const auto n_classes = static_cast<Eigen::Index>(summary.class_ids.size());
  summary.mean = Eigen::MatrixXd::Zero(n_classes, table.features.cols());
  summary.stddev = Eigen::MatrixXd::Zero(n_classes, table.features.cols());

  for (Eigen::Index ci = 0; ci < n_classes; ++ci) {
    const int id = summary.class_ids[static_cast<std::size_t>(ci)];
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < table.labels.size(); ++i) {
      if (table.labels[i] == id) rows.push_back(static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXd sub = take_rows(table.features, rows);
    const Eigen::RowVectorXd mean = sub.colwise().mean();
    summary.mean.row(ci) = mean;
    summary.stddev.row(ci) =
        ((sub.rowwise() - mean).array().square().colwise().sum() /
         static_cast<double>(sub.rows()))
            .sqrt();
  }
  return summary;
}

void write_feature_summary_csv(const std::filesystem::path& path,
                               const FeatureSummary& summary) {
  std::ofstream os(path);
  if (!os) fail(Errc::io, "cannot create " + path.string());
  os << "class,feature,mean,stddev\n";
  os.precision(17);
  const auto& names = feature_names();
  for (std::size_t ci = 0; ci < summary.class_ids.size(); ++ci) {
    const int id = summary.class_ids[ci];
    const std::string class_name =
        id >= 0 && id < static_cast<int>(class_names().size())
            ? class_names()[static_cast<std::size_t>(id)]
            : std::to_string(id);
    for (Eigen::Index c = 0; c < summary.mean.cols(); ++c) {
      const std::string feature =
          c < static_cast<Eigen::Index>(names.size()) ? names[static_cast<std::size_t>(c)]
                                                      : "f" + std::to_string(c);
      os << class_name << ',' << feature << ',' << summary.mean(static_cast<Eigen::Index>(ci), c)
         << ',' << summary.stddev(static_cast<Eigen::Index>(ci), c) << "\n";
    }
  }
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

namespace {

nlohmann::json confusion_json(const Confusion& confusion) {
  return nlohmann::json{{"true_urban_pred_urban", confusion[0][0]},
                        {"true_urban_pred_siren", confusion[0][1]},
                        {"true_siren_pred_urban", confusion[1][0]},
                        {"true_siren_pred_siren", confusion[1][1]}};
}

nlohmann::json params_json(const PipelineParams& params) {
  nlohmann::json smote{{"enabled", params.smote_enabled}, {"k", params.smote_k}};
  nlohmann::json j{
      {"model", model_kind_name(params.model)},
      {"hidden_nodes", params.hidden_nodes},
      {"activation", activation_name(params.activation)},
      {"knn_k", params.knn_k},
      {"smote", smote},
      {"timing", {{"warmup", params.timing.warmup}, {"repeats", params.timing.repeats}}},
  };
  if (params.ridge.has_value()) {
    j["ridge"] = *params.ridge;
  } else {
    j["ridge"] = nullptr;
  }
  return j;
}

std::string seed_list(const std::vector<std::uint64_t>& seeds) {
  std::string out = "{";
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seeds[i]);
  }
  out += '}';
  return out;
}

std::string run_id_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02dT%02d%02d%02dZ", utc.tm_year + 1900,
                utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
  return buf;
}

nlohmann::json folds_json(const EvalReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (int f = 0; f < kNumFolds; ++f) {
    folds.push_back({{"fold", f + 1},
                     {"accuracy_pct", report.fold_accuracy_pct[static_cast<std::size_t>(f)]},
                     {"time_ms", report.fold_time_ms[static_cast<std::size_t>(f)]}});
  }
  return folds;
}

}  // namespace

void write_report_text(std::ostream& os, const EvalReport& report) {
  const auto& p = report.params;
  os << "model " << model_kind_name(p.model);
  if (p.model == ModelKind::elm) {
    os << "  hidden " << p.hidden_nodes << "  activation " << activation_name(p.activation);
    if (p.ridge.has_value()) os << "  ridge " << *p.ridge;
  } else {
    os << "  k " << p.knn_k;
  }
  os << "  smote " << (p.smote_enabled ? "on" : "off") << "  seeds " << seed_list(report.seeds)
     << "\n";
  os << "fold  accuracy_pct  time_ms\n";
  char line[96];
  for (int f = 0; f < kNumFolds; ++f) {
    std::snprintf(line, sizeof(line), "%-4d  %12.2f  %10.3f\n", f + 1,
                  report.fold_accuracy_pct[static_cast<std::size_t>(f)],
                  report.fold_time_ms[static_cast<std::size_t>(f)]);
    os << line;
  }
  double mean_time = 0.0;
  for (const double t : report.fold_time_ms) mean_time += t;
  mean_time /= kNumFolds;
  std::snprintf(line, sizeof(line), "%-4s  %12.2f  %10.3f\n", "all",
                report.overall_accuracy_pct, mean_time);
  os << line;
  os << "overall accuracy " << report.overall_accuracy_pct << "% over " << report.runs.size()
     << " fold runs";
  if (report.seeds.size() > 1) {
    os << " (per-seed spread " << report.seed_accuracy_min_pct << ".."
       << report.seed_accuracy_max_pct << "%)";
  }
  os << "\n";
}

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream os(path);
  if (!os) fail(Errc::io, "cannot create " + path.string());
  os.precision(17);
  os << "fold,accuracy_pct,time_ms\n";
  for (int f = 0; f < kNumFolds; ++f) {
    os << (f + 1) << ',' << report.fold_accuracy_pct[static_cast<std::size_t>(f)] << ','
       << report.fold_time_ms[static_cast<std::size_t>(f)] << "\n";
  }
  double mean_time = 0.0;
  for (const double t : report.fold_time_ms) mean_time += t;
  mean_time /= kNumFolds;
  os << "overall," << report.overall_accuracy_pct << ',' << mean_time << "\n";
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j = params_json(report.params);
  j["seeds"] = report.seeds;
  j["folds"] = folds_json(report);
  j["overall"] = {{"accuracy_pct", report.overall_accuracy_pct},
                  {"confusion", confusion_json(report.total_confusion)},
                  {"seed_accuracy_min_pct", report.seed_accuracy_min_pct},
                  {"seed_accuracy_max_pct", report.seed_accuracy_max_pct}};
  return j.dump(2);
}

std::string report_config_json(const EvalReport& report, const FeaturePipelineConfig& features) {
  nlohmann::json j;
  j["features"] = {
      {"sample_rate", features.sample_rate},
      {"frame_len", features.frame.frame_len},
      {"hop", features.frame.hop},
      {"window", features.frame.window == WindowKind::hamming ? "hamming" : "rectangular"},
      {"n_mel_filters", features.n_mel_filters},
      {"n_coeffs", features.n_coeffs},
      {"log_floor", features.log_floor},
      {"f_min", features.f_min},
      {"f_max", features.f_max},
  };
  nlohmann::json model = params_json(report.params);
  model["kind"] = model.at("model");
  model.erase("model");
  j["model"] = model;
  j["seeds"] = report.seeds;
  j["run_id"] = run_id_now();
  return j.dump(2);
}

void write_sweep_text(std::ostream& os, const std::vector<SweepEntry>& entries) {
  if (!entries.empty()) os << "seeds " << seed_list(entries.front().report.seeds) << "\n";
  os << "hidden  accuracy_pct  time_ms\n";
  char line[96];
  for (const auto& entry : entries) {
    double mean_time = 0.0;
    for (const double t : entry.report.fold_time_ms) mean_time += t;
    mean_time /= kNumFolds;
    std::snprintf(line, sizeof(line), "%-6d  %12.2f  %10.3f\n", entry.hidden_nodes,
                  entry.report.overall_accuracy_pct, mean_time);
    os << line;
  }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepEntry>& entries) {
  std::ofstream os(path);
  if (!os) fail(Errc::io, "cannot create " + path.string());
  os.precision(17);
  os << "hidden_nodes,accuracy_pct,time_ms\n";
  for (const auto& entry : entries) {
    double mean_time = 0.0;
    for (const double t : entry.report.fold_time_ms) mean_time += t;
    mean_time /= kNumFolds;
    os << entry.hidden_nodes << ',' << entry.report.overall_accuracy_pct << ',' << mean_time
       << "\n";
  }
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

std::string sweep_json(const std::vector<SweepEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& entry : entries) {
    double mean_time = 0.0;
    for (const double t : entry.report.fold_time_ms) mean_time += t;
    mean_time /= kNumFolds;
    arr.push_back({{"hidden_nodes", entry.hidden_nodes},
                   {"overall", {{"accuracy_pct", entry.report.overall_accuracy_pct}}},
                   {"time_ms", mean_time},
                   {"seeds", entry.report.seeds},
                   {"folds", folds_json(entry.report)}});
  }
  return arr.dump(2);
}

}  // namespace sirenelm
