#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sirenelm/dataset.hpp"
#include "sirenelm/errors.hpp"
#include "sirenelm/eval.hpp"
#include "sirenelm/feature_io.hpp"
#include "sirenelm/rng.hpp"
#include "sirenelm/smote.hpp"
#include "sirenelm/synth.hpp"
#include "sirenelm/wav.hpp"

namespace fs = std::filesystem;
using namespace sirenelm;

namespace {

void refuse_existing(const fs::path& path, bool force) {
  if (!force && fs::exists(path)) {
    fail(Errc::io, path.string() + " exists (pass --force to overwrite)");
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) fail(Errc::io, "cannot create " + path.string());
  os << text << "\n";
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

struct SynthOpts {
  std::string out;
  std::uint64_t seed = 1;
  int sirens = 40;
  int noises = 640;
  bool force = false;
};

int run_synth(const SynthOpts& opt) {
  const auto plan = synthetic_plan(opt.seed, opt.sirens, opt.noises);
  refuse_existing(fs::path(opt.out) / "manifest.csv", opt.force);
  const auto manifest = write_synthetic_dataset(opt.out, plan);
  std::cout << "wrote " << plan.size() << " clips (" << opt.sirens << " siren, " << opt.noises
            << " urban) under " << opt.out << " with seed " << opt.seed << "\n"
            << "manifest: " << manifest.string() << "\n";
  return 0;
}

struct PrepareOpts {
  std::string manifest;
  std::string audio_dir;
  std::string out;
  int threads = 0;
  bool force = false;
};

int run_prepare(const PrepareOpts& opt) {
  refuse_existing(opt.out, opt.force);
  FeatureExtractor extractor;
  LoadStats stats;
  const FeatureTable table =
      extract_dataset_features(opt.manifest, opt.audio_dir, extractor, opt.threads, &stats);
  write_features(opt.out, table);
  std::cout << "extracted " << table.features.rows() << " rows (" << stats.n_siren << " siren, "
            << stats.n_urban << " urban, " << stats.n_excluded << " excluded), "
            << stats.total_seconds << " s of audio\n"
            << "features: " << opt.out << "\n";
  return 0;
}

struct EvalOpts {
  std::string features;
  std::string model = "elm";
  int hidden = 10;
  std::string activation = "sigmoid";
  std::optional<double> ridge;
  int knn_k = 5;
  bool no_smote = false;
  int smote_k = 5;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int warmup = 3;
  int repeats = 10;
  std::string out;
  bool json = false;
};

PipelineParams make_params(const EvalOpts& opt) {
  PipelineParams params;
  params.model = model_kind_from_name(opt.model);
  params.hidden_nodes = opt.hidden;
  params.activation = activation_from_name(opt.activation);
  params.ridge = opt.ridge;
  params.knn_k = opt.knn_k;
  params.smote_enabled = !opt.no_smote;
  params.smote_k = opt.smote_k;
  params.timing.warmup = opt.warmup;
  params.timing.repeats = opt.repeats;
  return params;
}

int run_crossval(const EvalOpts& opt) {
  const FeatureTable table = read_features(opt.features);
  const PipelineParams params = make_params(opt);
  const EvalReport report = crossval(table, params, opt.seeds);
  if (opt.json) {
    std::cout << report_json(report) << "\n";
  } else {
    write_report_text(std::cout, report);
  }
  if (!opt.out.empty()) {
    fs::create_directories(opt.out);
    write_report_csv(fs::path(opt.out) / "report.csv", report);
    write_text_file(fs::path(opt.out) / "report.json", report_json(report));
    write_text_file(fs::path(opt.out) / "config.json",
                    report_config_json(report, FeaturePipelineConfig{}));
    std::cout << "reports under " << opt.out << "\n";
  }
  return 0;
}

struct SweepOpts {
  EvalOpts eval;
  std::vector<int> widths{10, 100, 1000, 10000};
};

int run_sweep(const SweepOpts& opt) {
  const FeatureTable table = read_features(opt.eval.features);
  PipelineParams params = make_params(opt.eval);
  params.model = ModelKind::elm;
  const auto entries = sweep_neurons(table, opt.widths, params, opt.eval.seeds);
  if (opt.eval.json) {
    std::cout << sweep_json(entries) << "\n";
  } else {
    write_sweep_text(std::cout, entries);
  }
  if (!opt.eval.out.empty()) {
    fs::create_directories(opt.eval.out);
    write_sweep_csv(fs::path(opt.eval.out) / "sweep.csv", entries);
    write_text_file(fs::path(opt.eval.out) / "sweep.json", sweep_json(entries));
    std::cout << "reports under " << opt.eval.out << "\n";
  }
  return 0;
}

struct TrainOpts {
  std::string features;
  std::string out;
  int hidden = 10;
  std::string activation = "sigmoid";
  std::optional<double> ridge;
  std::uint64_t seed = 1;
  bool no_smote = false;
  int smote_k = 5;
  bool force = false;
};

int run_train(const TrainOpts& opt) {
  refuse_existing(opt.out, opt.force);
  const FeatureTable table = read_features(opt.features);
  const Normalizer norm = Normalizer::fit(table.features);
  Eigen::MatrixXd x = norm.apply(table.features);
  std::vector<int> y = table.labels;
  if (!opt.no_smote) {
    auto balanced = balance_training_set(x, y, opt.smote_k, mix_seed(opt.seed));
    x = std::move(balanced.first);
    y = std::move(balanced.second);
  }
  ElmConfig cfg;
  cfg.hidden_nodes = opt.hidden;
  cfg.activation = activation_from_name(opt.activation);
  cfg.ridge = opt.ridge;
  cfg.seed = opt.seed;
  const ElmModel model = ElmModel::train(x, y, cfg, norm, class_names());
  model.save(opt.out);
  std::cout << "trained " << cfg.hidden_nodes << "-node elm on " << table.features.rows()
            << " rows (" << x.rows() << " after balancing) with seed " << opt.seed
            << "\nmodel: " << opt.out << "\n";
  return 0;
}

struct PredictOpts {
  std::string model;
  std::string wav;
  std::string features;
  bool json = false;
};

nlohmann::json scores_json(const ElmModel& model, const Eigen::VectorXd& scores) {
  nlohmann::json j = nlohmann::json::object();
  for (int c = 0; c < model.n_classes(); ++c) {
    j[model.classes()[static_cast<std::size_t>(c)]] = scores(c);
  }
  return j;
}

int run_predict(const PredictOpts& opt) {
  const ElmModel model = ElmModel::load(opt.model);
  if (opt.wav.empty() == opt.features.empty()) {
    fail(Errc::config, "pass exactly one of --wav or --features");
  }

  if (!opt.wav.empty()) {
    const WavData wav = decode_wav(opt.wav);
    if (wav.sample_rate != kRequiredSampleRate) {
      fail(Errc::rate_mismatch, opt.wav + ": expected " +
                                    std::to_string(kRequiredSampleRate) + " Hz, got " +
                                    std::to_string(wav.sample_rate));
    }
    const std::vector<double> samples = fix_length(to_mono(wav.channels), wav.sample_rate);
    FeatureExtractor extractor;
    const auto [label, scores] = model.predict(extractor.extract(samples));
    const std::string& name = model.classes()[static_cast<std::size_t>(label)];
    if (opt.json) {
      nlohmann::json j{{"file", opt.wav}, {"label", label}, {"class", name},
                       {"scores", scores_json(model, scores)}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << opt.wav << ": " << name << "  scores";
      for (int c = 0; c < model.n_classes(); ++c) {
        std::cout << ' ' << model.classes()[static_cast<std::size_t>(c)] << '=' << scores(c);
      }
      std::cout << "\n";
    }
    return 0;
  }

  const FeatureTable table = read_features(opt.features);
  Confusion confusion{};
  std::int64_t correct = 0;
  for (Eigen::Index i = 0; i < table.features.rows(); ++i) {
    const auto [label, scores] = model.predict(table.features.row(i).transpose());
    const int truth = table.labels[static_cast<std::size_t>(i)];
    if (label == truth) ++correct;
    if (truth >= 0 && truth < 2 && label >= 0 && label < 2) {
      ++confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(label)];
    }
  }
  const auto total = table.features.rows();
  const double accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  if (opt.json) {
    nlohmann::json j{{"rows", total},
                     {"accuracy_pct", accuracy},
                     {"confusion",
                      {{"true_urban_pred_urban", confusion[0][0]},
                       {"true_urban_pred_siren", confusion[0][1]},
                       {"true_siren_pred_urban", confusion[1][0]},
                       {"true_siren_pred_siren", confusion[1][1]}}}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << total << " rows, accuracy " << accuracy << "%\n"
              << "confusion [true][predicted]: urban/urban " << confusion[0][0]
              << ", urban/siren " << confusion[0][1] << ", siren/urban " << confusion[1][0]
              << ", siren/siren " << confusion[1][1] << "\n";
  }
  return 0;
}

struct SummaryOpts {
  std::string features;
  std::string out;
};

int run_summary(const SummaryOpts& opt) {
  const FeatureTable table = read_features(opt.features);
  const FeatureSummary summary = feature_summary(table);
  const auto& names = feature_names();
  std::cout << "feature";
  for (const int id : summary.class_ids) {
    const auto& cls = class_names()[static_cast<std::size_t>(id)];
    std::cout << "  " << cls << "_mean  " << cls << "_std";
  }
  std::cout << "\n";
  for (Eigen::Index c = 0; c < summary.mean.cols(); ++c) {
    std::cout << names[static_cast<std::size_t>(c)];
    for (Eigen::Index ci = 0; ci < summary.mean.rows(); ++ci) {
      std::cout << "  " << summary.mean(ci, c) << "  " << summary.stddev(ci, c);
    }
    std::cout << "\n";
  }
  if (!opt.out.empty()) {
    write_feature_summary_csv(opt.out, summary);
    std::cout << "summary csv: " << opt.out << "\n";
  }
  return 0;
}

void add_eval_options(CLI::App* cmd, EvalOpts& opt, bool with_model) {
  cmd->add_option("--features", opt.features, "feature table (.csv or .selm)")->required();
  if (with_model) {
    cmd->add_option("--model", opt.model, "elm or knn")->check(CLI::IsMember({"elm", "knn"}));
    cmd->add_option("--hidden", opt.hidden, "hidden nodes (elm)");
    cmd->add_option("--k", opt.knn_k, "neighbors (knn)");
  }
  cmd->add_option("--activation", opt.activation, "sigmoid, tanh or hardlimit");
  cmd->add_option("--ridge", opt.ridge, "ridge weight lambda (omit for pure pseudoinverse)");
  cmd->add_flag("--no-smote", opt.no_smote, "skip minority oversampling");
  cmd->add_option("--smote-k", opt.smote_k, "neighbors used by the oversampler");
  cmd->add_option("--seeds", opt.seeds, "run seeds")->delimiter(',');
  cmd->add_option("--warmup", opt.warmup, "untimed repetitions per fold");
  cmd->add_option("--repeats", opt.repeats, "timed repetitions per fold");
  cmd->add_option("--out", opt.out, "directory for csv/json reports");
  cmd->add_flag("--json", opt.json, "print json instead of text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"siren-vs-urban audio event detector"};
  app.set_version_flag("--version", "sirenelm 0.1.0");
  app.require_subcommand(1);

  SynthOpts synth_opt;
  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic wav corpus plus manifest");
  synth_cmd->add_option("--out", synth_opt.out, "output directory")->required();
  synth_cmd->add_option("--seed", synth_opt.seed, "master seed");
  synth_cmd->add_option("--sirens", synth_opt.sirens, "siren clip count");
  synth_cmd->add_option("--noises", synth_opt.noises, "urban clip count");
  synth_cmd->add_flag("--force", synth_opt.force, "overwrite an existing manifest");

  PrepareOpts prepare_opt;
  auto* prepare_cmd =
      app.add_subcommand("prepare", "extract the feature table from a manifest + audio dir");
  prepare_cmd->add_option("--manifest", prepare_opt.manifest, "csv manifest")->required();
  prepare_cmd->add_option("--audio-dir", prepare_opt.audio_dir, "directory with the wav files")
      ->required();
  prepare_cmd->add_option("--out", prepare_opt.out, "feature table (.csv or .selm)")->required();
  prepare_cmd->add_option("--threads", prepare_opt.threads, "worker threads (0 = auto)");
  prepare_cmd->add_flag("--force", prepare_opt.force, "overwrite an existing table");

  EvalOpts cv_opt;
  auto* cv_cmd = app.add_subcommand("crossval", "5-fold cross validation on a feature table");
  add_eval_options(cv_cmd, cv_opt, true);

  SweepOpts sweep_opt;
  sweep_opt.eval.seeds = {1};
  sweep_opt.eval.warmup = 1;
  sweep_opt.eval.repeats = 3;
  auto* sweep_cmd = app.add_subcommand("sweep", "accuracy/run-time across hidden-layer widths");
  add_eval_options(sweep_cmd, sweep_opt.eval, false);
  sweep_cmd->add_option("--widths", sweep_opt.widths, "hidden-layer widths")->delimiter(',');

  TrainOpts train_opt;
  auto* train_cmd = app.add_subcommand("train", "train on every row and save the model");
  train_cmd->add_option("--features", train_opt.features, "feature table")->required();
  train_cmd->add_option("--out", train_opt.out, "model file")->required();
  train_cmd->add_option("--hidden", train_opt.hidden, "hidden nodes");
  train_cmd->add_option("--activation", train_opt.activation, "sigmoid, tanh or hardlimit");
  train_cmd->add_option("--ridge", train_opt.ridge, "ridge weight lambda");
  train_cmd->add_option("--seed", train_opt.seed, "seed for the random layer and oversampling");
  train_cmd->add_flag("--no-smote", train_opt.no_smote, "skip minority oversampling");
  train_cmd->add_option("--smote-k", train_opt.smote_k, "neighbors used by the oversampler");
  train_cmd->add_flag("--force", train_opt.force, "overwrite an existing model");

  PredictOpts predict_opt;
  auto* predict_cmd = app.add_subcommand("predict", "classify a wav file or a feature table");
  predict_cmd->add_option("--model", predict_opt.model, "model file")->required();
  predict_cmd->add_option("--wav", predict_opt.wav, "single 44.1 kHz wav file");
  predict_cmd->add_option("--features", predict_opt.features, "feature table");
  predict_cmd->add_flag("--json", predict_opt.json, "print json instead of text");

  SummaryOpts summary_opt;
  auto* summary_cmd = app.add_subcommand("summary", "per-class feature means and deviations");
  summary_cmd->add_option("--features", summary_opt.features, "feature table")->required();
  summary_cmd->add_option("--out", summary_opt.out, "optional csv destination");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_opt);
    if (prepare_cmd->parsed()) return run_prepare(prepare_opt);
    if (cv_cmd->parsed()) return run_crossval(cv_opt);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opt);
    if (train_cmd->parsed()) return run_train(train_opt);
    if (predict_cmd->parsed()) return run_predict(predict_opt);
    if (summary_cmd->parsed()) return run_summary(summary_opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
