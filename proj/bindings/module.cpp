#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sirenelm/dataset.hpp"
#include "sirenelm/errors.hpp"
#include "sirenelm/eval.hpp"
#include "sirenelm/feature_io.hpp"
#include "sirenelm/knn.hpp"
#include "sirenelm/rng.hpp"
#include "sirenelm/smote.hpp"
#include "sirenelm/synth.hpp"
#include "sirenelm/wav.hpp"

namespace py = pybind11;
using namespace sirenelm;

namespace {

std::vector<double> load_audio(const std::filesystem::path& path) {
  const WavData wav = decode_wav(path);
  if (wav.sample_rate != kRequiredSampleRate) {
    fail(Errc::rate_mismatch, path.string() + ": expected " +
                                  std::to_string(kRequiredSampleRate) + " Hz, got " +
                                  std::to_string(wav.sample_rate));
  }
  return fix_length(to_mono(wav.channels), wav.sample_rate, kClipSeconds);
}

PipelineParams build_params(const std::string& model, int hidden, const std::string& activation,
                            std::optional<double> ridge, int knn_k, bool smote, int smote_k,
                            int warmup, int repeats) {
  PipelineParams params;
  params.model = model_kind_from_name(model);
  params.hidden_nodes = hidden;
  params.activation = activation_from_name(activation);
  params.ridge = ridge;
  params.knn_k = knn_k;
  params.smote_enabled = smote;
  params.smote_k = smote_k;
  params.timing.warmup = warmup;
  params.timing.repeats = repeats;
  return params;
}

ElmModel train_elm(const Eigen::MatrixXd& features, const std::vector<int>& labels, int hidden,
                   const std::string& activation, std::optional<double> ridge,
                   std::uint64_t seed, bool smote, int smote_k) {
  const Normalizer norm = Normalizer::fit(features);
  Eigen::MatrixXd x = norm.apply(features);
  std::vector<int> y = labels;
  if (smote) {
    auto balanced = balance_training_set(x, y, smote_k, mix_seed(seed));
    x = std::move(balanced.first);
    y = std::move(balanced.second);
  }
  ElmConfig cfg;
  cfg.hidden_nodes = hidden;
  cfg.activation = activation_from_name(activation);
  cfg.ridge = ridge;
  cfg.seed = seed;
  return ElmModel::train(x, y, cfg, norm, class_names());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "siren-vs-urban audio event detection core";

  py::class_<FeatureTable>(m, "FeatureTable")
      .def(py::init<>())
      .def_readwrite("features", &FeatureTable::features)
      .def_readwrite("labels", &FeatureTable::labels)
      .def_readwrite("folds", &FeatureTable::folds);

  py::class_<FeatureExtractor>(m, "FeatureExtractor")
      .def(py::init<>())
      .def("extract",
           [](const FeatureExtractor& fx, const Eigen::VectorXd& samples) {
             return fx.extract(std::span<const double>(samples.data(),
                                                       static_cast<std::size_t>(samples.size())));
           },
           py::arg("samples"))
      .def("mfcc_frames",
           [](const FeatureExtractor& fx, const Eigen::VectorXd& samples) {
             return fx.mfcc_frames(std::span<const double>(
                 samples.data(), static_cast<std::size_t>(samples.size())));
           },
           py::arg("samples"))
      .def("zcr_frames", [](const FeatureExtractor& fx, const Eigen::VectorXd& samples) {
        return fx.zcr_frames(
            std::span<const double>(samples.data(), static_cast<std::size_t>(samples.size())));
      });

  py::class_<ElmModel>(m, "ElmModel")
      .def("predict",
           [](const ElmModel& model, const Eigen::VectorXd& raw) { return model.predict(raw); },
           py::arg("features"),
           "(label, scores) for one raw feature vector")
      .def("predict_batch",
           [](const ElmModel& model, const Eigen::MatrixXd& raw) {
             std::vector<int> out;
             out.reserve(static_cast<std::size_t>(raw.rows()));
             for (Eigen::Index i = 0; i < raw.rows(); ++i) {
               out.push_back(model.predict(raw.row(i).transpose()).first);
             }
             return out;
           },
           py::arg("features"))
      .def("save", &ElmModel::save, py::arg("path"))
      .def_static("load", &ElmModel::load, py::arg("path"))
      .def_property_readonly("hidden_nodes", &ElmModel::hidden_nodes)
      .def_property_readonly("input_dim", &ElmModel::input_dim)
      .def_property_readonly("classes", &ElmModel::classes)
      .def_property_readonly("seed", &ElmModel::seed)
      .def_property_readonly("activation",
                             [](const ElmModel& model) {
                               return std::string(activation_name(model.activation()));
                             })
      .def_property_readonly("ridge", &ElmModel::ridge);

  py::class_<KnnModel>(m, "KnnModel")
      .def_static("fit", &KnnModel::fit, py::arg("features"), py::arg("labels"),
                  py::arg("k") = 5)
      .def("predict",
           [](const KnnModel& model, const Eigen::MatrixXd& features) {
             return model.predict(features);
           },
           py::arg("features"))
      .def("predict_one",
           [](const KnnModel& model, const Eigen::VectorXd& features) {
             return model.predict(features);
           },
           py::arg("features"))
      .def_property_readonly("k", &KnnModel::k);

  m.def("feature_names", [] { return feature_names(); });
  m.def("class_names", [] { return class_names(); });
  m.def("load_audio", &load_audio, py::arg("path"),
        "decode a 44.1 kHz wav to 5 s of mono samples");

  m.def("make_siren_clip",
        [](std::uint64_t seed) { return make_siren_clip(SirenSynthParams{}, seed); },
        py::arg("seed"));
  m.def("make_noise_clip",
        [](std::uint64_t seed) { return make_noise_clip(NoiseSynthParams{}, seed); },
        py::arg("seed"));
  m.def("synthetic_features",
        [](std::uint64_t seed, int n_sirens, int n_noises, int threads) {
          const auto plan = synthetic_plan(seed, n_sirens, n_noises);
          return synthetic_features(plan, FeatureExtractor{}, threads);
        },
        py::arg("seed") = 1, py::arg("n_sirens") = 40, py::arg("n_noises") = 640,
        py::arg("threads") = 0);
  m.def("write_synthetic_dataset",
        [](const std::filesystem::path& dir, std::uint64_t seed, int n_sirens, int n_noises) {
          return write_synthetic_dataset(dir, synthetic_plan(seed, n_sirens, n_noises));
        },
        py::arg("dir"), py::arg("seed") = 1, py::arg("n_sirens") = 40, py::arg("n_noises") = 640);

  m.def("extract_dataset_features",
        [](const std::filesystem::path& manifest, const std::filesystem::path& audio_dir,
           int threads) {
          return extract_dataset_features(manifest, audio_dir, FeatureExtractor{}, threads);
        },
        py::arg("manifest"), py::arg("audio_dir"), py::arg("threads") = 0);

  m.def("read_features", &read_features, py::arg("path"));
  m.def("write_features", &write_features, py::arg("path"), py::arg("table"));

  m.def("train_elm", &train_elm, py::arg("features"), py::arg("labels"), py::arg("hidden") = 10,
        py::arg("activation") = "sigmoid", py::arg("ridge") = std::nullopt,
        py::arg("seed") = 1, py::arg("smote") = true, py::arg("smote_k") = 5);

  m.def("crossval_json",
        [](const FeatureTable& table, const std::string& model, int hidden,
           const std::string& activation, std::optional<double> ridge, int knn_k, bool smote,
           int smote_k, const std::vector<std::uint64_t>& seeds, int warmup, int repeats) {
          const auto params = build_params(model, hidden, activation, ridge, knn_k, smote,
                                           smote_k, warmup, repeats);
          return report_json(crossval(table, params, seeds));
        },
        py::arg("table"), py::arg("model") = "elm", py::arg("hidden") = 10,
        py::arg("activation") = "sigmoid", py::arg("ridge") = std::nullopt,
        py::arg("knn_k") = 5, py::arg("smote") = true, py::arg("smote_k") = 5,
        py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5}, py::arg("warmup") = 3,
        py::arg("repeats") = 10);

  m.def("sweep_json",
        [](const FeatureTable& table, const std::vector<int>& widths, int hidden,
           const std::string& activation, std::optional<double> ridge, bool smote, int smote_k,
           const std::vector<std::uint64_t>& seeds, int warmup, int repeats) {
          auto params = build_params("elm", hidden, activation, ridge, 5, smote, smote_k,
                                     warmup, repeats);
          return sweep_json(sweep_neurons(table, widths, params, seeds));
        },
        py::arg("table"), py::arg("widths") = std::vector<int>{10, 100, 1000, 10000},
        py::arg("hidden") = 10, py::arg("activation") = "sigmoid",
        py::arg("ridge") = std::nullopt, py::arg("smote") = true, py::arg("smote_k") = 5,
        py::arg("seeds") = std::vector<std::uint64_t>{1}, py::arg("warmup") = 1,
        py::arg("repeats") = 3);
}
