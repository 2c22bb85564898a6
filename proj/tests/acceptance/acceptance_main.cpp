// End-to-end acceptance checks, one verdict line per criterion.
//
// Criteria 1-3 need the real 680-clip corpus (ESC-50). Point --esc50 or the
// SIRENELM_ESC50_DIR environment variable at a checkout holding
// meta/esc50.csv and audio/; without it those criteria report SKIP.
// Criteria 4 and 5 are self-contained and always run.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sirenelm/dataset.hpp"
#include "sirenelm/dsp.hpp"
#include "sirenelm/elm.hpp"
#include "sirenelm/errors.hpp"
#include "sirenelm/eval.hpp"
#include "sirenelm/features.hpp"
#include "sirenelm/knn.hpp"
#include "sirenelm/mel.hpp"
#include "sirenelm/rng.hpp"
#include "sirenelm/smote.hpp"
#include "sirenelm/synth.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace sirenelm;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << ' ' << (ok ? "PASS" : "FAIL") << ": " << detail << "\n";
  if (!ok) ++g_failures;
}

void skip(int id, const std::string& detail) {
  std::cout << "criterion " << id << " SKIP: " << detail << "\n";
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v);
  return buf;
}

std::string ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f ms", v);
  return buf;
}

double mean_fold_time(const EvalReport& report) {
  double acc = 0.0;
  for (const double t : report.fold_time_ms) acc += t;
  return acc / kNumFolds;
}

// ---------------------------------------------------------------------------
// criteria 1-3: the real corpus

std::optional<FeatureTable> load_esc50(const fs::path& dir, double* extract_seconds) {
  const fs::path manifest = dir / "meta" / "esc50.csv";
  const fs::path audio = dir / "audio";
  if (!fs::exists(manifest) || !fs::exists(audio)) {
    std::cout << "note: " << dir.string() << " lacks meta/esc50.csv or audio/\n";
    return std::nullopt;
  }
  const auto t0 = Clock::now();
  FeatureExtractor extractor;
  LoadStats stats;
  FeatureTable table = extract_dataset_features(manifest, audio, extractor, 0, &stats);
  *extract_seconds = seconds_since(t0);
  std::cout << "note: extracted " << table.features.rows() << " rows (" << stats.n_siren
            << " siren, " << stats.n_urban << " urban) in " << *extract_seconds << " s\n";
  return table;
}

void criterion_1(const FeatureTable& table, double extract_seconds) {
  const auto t0 = Clock::now();
  PipelineParams params;  // elm, 10 hidden nodes, sigmoid, smote on
  const EvalReport report = crossval(table, params, {1, 2, 3, 4, 5});
  const double total = extract_seconds + seconds_since(t0);
  const bool ok = report.overall_accuracy_pct >= 89.0 && total < 300.0;
  verdict(1, ok,
          "overall " + pct(report.overall_accuracy_pct) + " (need >= 89%), " +
              std::to_string(total) + " s including extraction (need < 300 s), seed spread " +
              pct(report.seed_accuracy_min_pct) + ".." + pct(report.seed_accuracy_max_pct));
}

void criterion_2(const FeatureTable& table) {
  PipelineParams params;
  params.timing.warmup = 1;
  params.timing.repeats = 3;
  const std::vector<int> widths{10, 100, 1000, 10000};
  const auto entries = sweep_neurons(table, widths, params, {1});

  std::vector<double> acc;
  std::vector<double> time;
  for (const auto& entry : entries) {
    acc.push_back(entry.report.overall_accuracy_pct);
    time.push_back(mean_fold_time(entry.report));
  }
  const bool acc_ok = acc[3] >= acc[0] - 1.0;
  bool time_monotone = true;
  for (std::size_t i = 1; i < time.size(); ++i) time_monotone &= time[i] > time[i - 1];
  const bool min_at_10 =
      time[0] < time[1] && time[0] < time[2] && time[0] < time[3];

  std::string detail = "accuracy";
  for (std::size_t i = 0; i < widths.size(); ++i) {
    detail += " L=" + std::to_string(widths[i]) + " " + pct(acc[i]);
  }
  detail += "; time";
  for (std::size_t i = 0; i < widths.size(); ++i) detail += " " + ms(time[i]);
  verdict(2, acc_ok && time_monotone && min_at_10, detail);
}

void criterion_3(const FeatureTable& table) {
  PipelineParams elm_params;
  const EvalReport elm = crossval(table, elm_params, {1});

  PipelineParams knn_params;
  knn_params.model = ModelKind::knn;
  knn_params.knn_k = 5;
  const EvalReport knn = crossval(table, knn_params, {1});

  bool ratio_ok = true;
  bool guard_ok = true;
  double worst_ratio = 1e300;
  for (std::size_t f = 0; f < kNumFolds; ++f) {
    const double r = knn.fold_time_ms[f] / elm.fold_time_ms[f];
    worst_ratio = std::min(worst_ratio, r);
    ratio_ok &= r >= 2.0;
    guard_ok &= elm.fold_time_ms[f] < 50.0;
  }
  verdict(3, ratio_ok && guard_ok,
          "elm " + ms(mean_fold_time(elm)) + " vs knn " + ms(mean_fold_time(knn)) +
              " per fold, worst fold ratio " + std::to_string(worst_ratio) +
              "x (need >= 2x and elm < 50 ms every fold)");
}

// ---------------------------------------------------------------------------
// criterion 4: dataset-free property suite

bool check(bool ok, const std::string& name, std::string* failures) {
  if (!ok) {
    if (!failures->empty()) *failures += ", ";
    *failures += name;
  }
  return ok;
}

bool prop_dft(std::string* failures) {
  bool ok = true;
  Rng rng(41);
  for (int n = 2; n <= 256; n *= 2) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = uniform_pm1(rng);
    const auto ref = oracle::dft(x);
    Fft fft(n);
    std::vector<std::complex<double>> got;
    fft.forward(x, got);
    double ref_norm = 0.0;
    double err = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      ref_norm = std::max(ref_norm, std::abs(ref[k]));
      err = std::max(err, std::abs(ref[k] - got[k]));
    }
    ok &= err <= 1e-6 * std::max(ref_norm, 1.0);
  }
  return check(ok, "dft-vs-direct-sum", failures);
}

bool prop_mfcc(std::string* failures) {
  Rng rng(42);
  std::vector<double> frame(2048);
  for (double& v : frame) v = uniform_pm1(rng);
  const auto ref = oracle::mfcc_frame(frame, 44100.0, 26, 13, 1e-10, 0.0, 22050.0);
  FeatureExtractor fx;
  const Eigen::MatrixXd got = fx.mfcc_frames(frame);
  bool ok = got.rows() == 1 && got.cols() == 13;
  for (int c = 0; ok && c < 13; ++c) {
    ok &= std::abs(got(0, c) - ref[static_cast<std::size_t>(c)]) <= 1e-6;
  }
  return check(ok, "mfcc-desk-oracle", failures);
}

bool prop_zcr(std::string* failures) {
  const double levels[3] = {-0.75, 0.0, 0.31};
  bool ok = true;
  for (int n = 2; n <= 10; ++n) {
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    std::vector<double> frame(static_cast<std::size_t>(n));
    for (std::size_t word = 0; word < total; ++word) {
      std::size_t w = word;
      for (int i = 0; i < n; ++i) {
        frame[static_cast<std::size_t>(i)] = levels[w % 3];
        w /= 3;
      }
      ok &= zcr(frame) == oracle::zcr(frame);
    }
  }
  return check(ok, "zcr-exhaustive", failures);
}

bool prop_mel_roundtrip(std::string* failures) {
  bool ok = true;
  for (int hz = 0; hz <= 22050; ++hz) {
    const double back = mel_to_hz(hz_to_mel(hz));
    ok &= std::abs(back - hz) <= 1e-9 * std::max(1.0, static_cast<double>(hz));
  }
  return check(ok, "mel-round-trip", failures);
}

bool prop_pinv(std::string* failures) {
  Rng rng(43);
  bool ok = true;

  // Overdetermined full-rank system against the normal equations.
  Eigen::MatrixXd a(40, 8);
  Eigen::MatrixXd b(40, 1);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = uniform_pm1(rng);
    b(r, 0) = uniform_pm1(rng);
  }
  std::vector<std::vector<double>> av(40, std::vector<double>(8));
  std::vector<double> bv(40);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 8; ++c) av[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = a(r, c);
    bv[static_cast<std::size_t>(r)] = b(r, 0);
  }
  const auto ref = oracle::normal_equations_lstsq(av, bv);
  const Eigen::MatrixXd got = pinv_least_squares(a, b);
  for (int c = 0; c < 8; ++c) {
    ok &= std::abs(got(c, 0) - ref[static_cast<std::size_t>(c)]) <=
          1e-6 * std::max(1.0, std::abs(ref[static_cast<std::size_t>(c)]));
  }

  // Underdetermined full-row-rank system interpolates exactly.
  Eigen::MatrixXd wide(5, 10);
  Eigen::MatrixXd target(5, 1);
  for (Eigen::Index r = 0; r < wide.rows(); ++r) {
    for (Eigen::Index c = 0; c < wide.cols(); ++c) wide(r, c) = uniform_pm1(rng);
    target(r, 0) = uniform_pm1(rng);
  }
  const Eigen::MatrixXd x = pinv_least_squares(wide, target);
  ok &= (wide * x - target).norm() <= 1e-8;

  return check(ok, "pinv-oracles", failures);
}

bool prop_smote(std::string* failures) {
  Rng rng(44);
  Eigen::MatrixXd minority(8, 4);
  for (Eigen::Index r = 0; r < minority.rows(); ++r) {
    for (Eigen::Index c = 0; c < minority.cols(); ++c) minority(r, c) = uniform_pm1(rng);
  }
  SmoteConfig cfg;
  cfg.k_neighbors = 3;
  cfg.target_count = 40;
  cfg.seed = 7;
  const Eigen::MatrixXd synth_a = smote(minority, cfg);
  const Eigen::MatrixXd synth_b = smote(minority, cfg);
  bool ok = synth_a.rows() == 32 && synth_a == synth_b;

  // Every synthetic row lies on a segment from its base row to one of the
  // base row's k neighbors.
  const auto nn = k_nearest_neighbors(minority, cfg.k_neighbors);
  for (Eigen::Index s = 0; ok && s < synth_a.rows(); ++s) {
    const Eigen::Index base = s % minority.rows();
    bool on_some_segment = false;
    for (const Eigen::Index cand : nn[static_cast<std::size_t>(base)]) {
      const Eigen::VectorXd dir = minority.row(cand) - minority.row(base);
      const Eigen::VectorXd off = synth_a.row(s) - minority.row(base);
      double u = -1.0;
      bool consistent = true;
      for (Eigen::Index c = 0; c < dir.size(); ++c) {
        if (std::abs(dir(c)) < 1e-12) {
          consistent &= std::abs(off(c)) < 1e-9;
          continue;
        }
        const double ratio = off(c) / dir(c);
        if (u < 0.0) {
          u = ratio;
        } else {
          consistent &= std::abs(ratio - u) < 1e-9;
        }
      }
      on_some_segment |= consistent && u >= 0.0 && u < 1.0;
    }
    ok &= on_some_segment;
  }
  return check(ok, "smote-convexity-determinism", failures);
}

FeatureTable blob_table(int per_fold_minority, int per_fold_majority) {
  Rng rng(45);
  const int n = kNumFolds * (per_fold_minority + per_fold_majority);
  FeatureTable table;
  table.features.resize(n, kFeatureDim);
  table.labels.resize(static_cast<std::size_t>(n));
  table.folds.resize(static_cast<std::size_t>(n));
  int row = 0;
  for (int fold = 1; fold <= kNumFolds; ++fold) {
    for (int i = 0; i < per_fold_minority + per_fold_majority; ++i, ++row) {
      const int label = i < per_fold_minority ? 1 : 0;
      const double center = label == 1 ? 3.0 : -3.0;
      for (int c = 0; c < kFeatureDim; ++c) {
        table.features(row, c) = center + 0.5 * uniform_pm1(rng);
      }
      table.labels[static_cast<std::size_t>(row)] = label;
      table.folds[static_cast<std::size_t>(row)] = fold;
    }
  }
  return table;
}

bool prop_no_leakage(std::string* failures) {
  FeatureTable table = blob_table(8, 24);
  PipelineParams params;
  params.timing.warmup = 0;
  params.timing.repeats = 1;
  const auto splits = make_folds(table.folds);
  const FoldEval before = run_fold(table, splits[0], params, 11);

  // Corrupting one held-out row must not move any other prediction.
  FeatureTable perturbed = table;
  perturbed.features(splits[0].test_idx[2], 5) += 1e4;
  const FoldEval after = run_fold(perturbed, splits[0], params, 11);
  bool ok = before.predictions.size() == after.predictions.size();
  for (std::size_t i = 0; ok && i < before.predictions.size(); ++i) {
    if (i == 2) continue;
    ok &= before.predictions[i] == after.predictions[i];
  }
  return check(ok, "no-test-leakage", failures);
}

bool prop_determinism(std::string* failures) {
  const FeatureTable table = blob_table(6, 18);
  const Normalizer norm = Normalizer::fit(table.features);
  const Eigen::MatrixXd z = norm.apply(table.features);

  ElmConfig cfg;
  cfg.seed = 9;
  const ElmModel m1 = ElmModel::train(z, table.labels, cfg, norm, class_names());
  const ElmModel m2 = ElmModel::train(z, table.labels, cfg, norm, class_names());
  bool ok = m1.output_weights() == m2.output_weights();
  ok &= m1.predict_normalized(z) == m2.predict_normalized(z);

  // predict agrees with the argmax of the reported scores.
  const Eigen::MatrixXd scores = m1.scores_normalized(z);
  const auto labels = m1.predict_normalized(z);
  for (Eigen::Index r = 0; ok && r < scores.rows(); ++r) {
    int best = 0;
    for (int c = 1; c < scores.cols(); ++c) {
      if (scores(r, c) > scores(r, best)) best = c;
    }
    ok &= labels[static_cast<std::size_t>(r)] == best;
  }

  const KnnModel k1 = KnnModel::fit(z, table.labels, 5);
  const KnnModel k2 = KnnModel::fit(z, table.labels, 5);
  ok &= k1.predict(z) == k2.predict(z);
  const auto batch = k1.predict(z);
  for (Eigen::Index r = 0; ok && r < z.rows(); ++r) {
    ok &= batch[static_cast<std::size_t>(r)] == k1.predict(Eigen::VectorXd(z.row(r).transpose()));
  }
  return check(ok, "elm-knn-determinism-argmax", failures);
}

bool prop_save_load(std::string* failures) {
  const FeatureTable table = blob_table(6, 18);
  const Normalizer norm = Normalizer::fit(table.features);
  const Eigen::MatrixXd z = norm.apply(table.features);
  ElmConfig cfg;
  cfg.seed = 13;
  cfg.ridge = 50.0;
  const ElmModel model = ElmModel::train(z, table.labels, cfg, norm, class_names());

  const fs::path path =
      fs::temp_directory_path() / ("sirenelm-acceptance-" + std::to_string(::getpid()) + ".elmm");
  model.save(path);
  const ElmModel back = ElmModel::load(path);
  fs::remove(path);

  bool ok = back.layer().weights == model.layer().weights;
  ok &= back.layer().biases == model.layer().biases;
  ok &= back.output_weights() == model.output_weights();
  ok &= back.normalizer().mean() == model.normalizer().mean();
  ok &= back.normalizer().stddev() == model.normalizer().stddev();
  ok &= back.classes() == model.classes();
  ok &= back.seed() == model.seed();
  ok &= back.ridge() == model.ridge();
  return check(ok, "model-save-load", failures);
}

void criterion_4() {
  const auto t0 = Clock::now();
  std::string failures;
  bool ok = true;
  ok &= prop_dft(&failures);
  ok &= prop_mfcc(&failures);
  ok &= prop_zcr(&failures);
  ok &= prop_mel_roundtrip(&failures);
  ok &= prop_pinv(&failures);
  ok &= prop_smote(&failures);
  ok &= prop_no_leakage(&failures);
  ok &= prop_determinism(&failures);
  ok &= prop_save_load(&failures);
  const double elapsed = seconds_since(t0);
  ok &= elapsed < 60.0;
  verdict(4, ok,
          ok ? "9 property checks in " + std::to_string(elapsed) + " s (need < 60 s)"
             : "failed: " + failures + " (" + std::to_string(elapsed) + " s)");
}

// ---------------------------------------------------------------------------
// criterion 5: synthetic end-to-end

double linear_probe_accuracy(const FeatureTable& table) {
  std::int64_t correct = 0;
  std::int64_t total = 0;
  for (const auto& split : make_folds(table.folds)) {
    Eigen::MatrixXd train(static_cast<Eigen::Index>(split.train_idx.size()), kFeatureDim + 1);
    Eigen::MatrixXd targets(train.rows(), 2);
    targets.setZero();
    for (std::size_t i = 0; i < split.train_idx.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      train.row(r).head(kFeatureDim) = table.features.row(split.train_idx[i]);
      train(r, kFeatureDim) = 1.0;
      targets(r, table.labels[static_cast<std::size_t>(split.train_idx[i])]) = 1.0;
    }
    const Eigen::MatrixXd w = pinv_least_squares(train, targets);
    for (const auto idx : split.test_idx) {
      Eigen::RowVectorXd x(kFeatureDim + 1);
      x.head(kFeatureDim) = table.features.row(idx);
      x(kFeatureDim) = 1.0;
      const Eigen::RowVectorXd score = x * w;
      const int guess = score(1) > score(0) ? 1 : 0;
      if (guess == table.labels[static_cast<std::size_t>(idx)]) ++correct;
      ++total;
    }
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

void criterion_5() {
  const auto plan = synthetic_plan(1);
  FeatureExtractor extractor;
  const FeatureTable table = synthetic_features(plan, extractor);

  // The brute-force check first: a plain linear map on the 28 features has to
  // separate the fixture before the network is allowed to claim anything.
  const double probe = linear_probe_accuracy(table);
  if (probe < 99.0) {
    verdict(5, false, "linear probe only reaches " + pct(probe) + ", fixture not separable");
    return;
  }

  PipelineParams params;
  params.timing.warmup = 0;
  params.timing.repeats = 1;
  const EvalReport report = crossval(table, params, {1, 2, 3, 4, 5});
  const bool ok = report.overall_accuracy_pct >= 99.0;
  verdict(5, ok,
          "linear probe " + pct(probe) + ", elm L=10 overall " +
              pct(report.overall_accuracy_pct) + " (both need >= 99%)");
}

}  // namespace

int main(int argc, char** argv) {
  std::string esc50_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--esc50" && i + 1 < argc) {
      esc50_dir = argv[++i];
    } else if (arg.rfind("--esc50=", 0) == 0) {
      esc50_dir = arg.substr(8);
    } else if (arg == "--help" || arg == "-h") {
      std::cout << "usage: acceptance [--esc50 DIR]\n";
      return 0;
    } else {
      std::cerr << "unknown argument: " << arg << "\n";
      return 2;
    }
  }
  if (esc50_dir.empty()) {
    if (const char* env = std::getenv("SIRENELM_ESC50_DIR")) esc50_dir = env;
  }

  try {
    if (esc50_dir.empty()) {
      const std::string why =
          "real corpus not provided (pass --esc50 DIR or set SIRENELM_ESC50_DIR)";
      skip(1, why);
      skip(2, why);
      skip(3, why);
    } else {
      double extract_seconds = 0.0;
      const auto table = load_esc50(esc50_dir, &extract_seconds);
      if (!table) {
        const std::string why = esc50_dir + " does not look like an ESC-50 checkout";
        skip(1, why);
        skip(2, why);
        skip(3, why);
      } else {
        criterion_1(*table, extract_seconds);
        criterion_2(*table);
        criterion_3(*table);
      }
    }
    criterion_4();
    criterion_5();
  } catch (const Error& e) {
    std::cerr << "acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  return g_failures == 0 ? 0 : 1;
}
