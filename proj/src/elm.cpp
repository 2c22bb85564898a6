#include "sirenelm/elm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>

#include "sirenelm/errors.hpp"
#include "sirenelm/rng.hpp"

namespace sirenelm {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::hardlimit: return "hardlimit";
  }
  return "sigmoid";
}

Activation activation_from_name(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "hardlimit") return Activation::hardlimit;
  fail(Errc::config, "unknown activation '" + std::string(name) + "'");
}

RandomLayer init_random_layer(int input_dim, int hidden_nodes, std::uint64_t seed) {
  if (input_dim <= 0) fail(Errc::config, "input dimension must be positive");
  if (hidden_nodes <= 0) fail(Errc::config, "hidden node count must be positive");
  Rng rng(seed);
  RandomLayer layer;
  layer.weights.resize(hidden_nodes, input_dim);
  for (int i = 0; i < hidden_nodes; ++i) {
    for (int j = 0; j < input_dim; ++j) layer.weights(i, j) = uniform_pm1(rng);
  }
  layer.biases.resize(hidden_nodes);
  for (int i = 0; i < hidden_nodes; ++i) layer.biases(i) = uniform_pm1(rng);
  return layer;
}

Eigen::MatrixXd hidden_output(const Eigen::MatrixXd& samples, const RandomLayer& layer,
                              Activation activation) {
  if (samples.cols() != layer.weights.cols()) {
    fail(Errc::dimension, "sample width " + std::to_string(samples.cols()) +
                              " does not match the layer input dimension " +
                              std::to_string(layer.weights.cols()));
  }
  Eigen::MatrixXd z = samples * layer.weights.transpose();
  z.rowwise() += layer.biases.transpose();
  switch (activation) {
    case Activation::sigmoid:
      return ((-z.array()).exp() + 1.0).inverse().matrix();
    case Activation::tanh:
      return z.array().tanh().matrix();
    case Activation::hardlimit:
      return (z.array() >= 0.0).cast<double>().matrix();
  }
  fail(Errc::config, "unhandled activation");
}

namespace {

// Scales rows of `projected` by the reciprocal singular values, zeroing the
// directions at or below the cutoff, in place.
void apply_reciprocal_singular_values(const Eigen::VectorXd& sv, double cutoff,
                                      Eigen::MatrixXd& projected) {
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      projected.row(i) /= sv(i);
    } else {
      projected.row(i).setZero();
    }
  }
}

}  // namespace

Eigen::MatrixXd pinv_least_squares(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs) {
  if (lhs.rows() == 0 || lhs.cols() == 0) fail(Errc::empty_input, "empty system");
  if (lhs.rows() != rhs.rows()) {
    fail(Errc::dimension, "left and right sides disagree on the row count");
  }
  const Eigen::Index n = lhs.rows();
  const Eigen::Index l = lhs.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  const double dim_factor = static_cast<double>(std::max(n, l));

  // A direct SVD of a tall-or-wide matrix is much slower than reducing to the
  // small triangular factor first; the singular values are identical, so the
  // cutoff semantics are preserved.
  if (n >= l) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(lhs);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(l).template triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = dim_factor * sv(0) * eps;
    const Eigen::MatrixXd qtb = qr.householderQ().transpose() * rhs;
    Eigen::MatrixXd projected = svd.matrixU().transpose() * qtb.topRows(l);
    apply_reciprocal_singular_values(sv, cutoff, projected);
    return svd.matrixV() * projected;
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(lhs.transpose());
  const Eigen::MatrixXd rt = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(rt.transpose().eval(),
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = dim_factor * sv(0) * eps;
  Eigen::MatrixXd projected = svd.matrixU().transpose() * rhs;
  apply_reciprocal_singular_values(sv, cutoff, projected);
  Eigen::MatrixXd lifted(l, rhs.cols());
  lifted.topRows(n) = svd.matrixV() * projected;
  lifted.bottomRows(l - n).setZero();
  return qr.householderQ() * lifted;
}

Eigen::MatrixXd solve_output_weights(const Eigen::MatrixXd& hidden,
                                     const Eigen::MatrixXd& targets,
                                     std::optional<double> ridge) {
  if (!ridge.has_value()) return pinv_least_squares(hidden, targets);
  const double lambda = *ridge;
  if (lambda < 0.0) fail(Errc::config, "ridge weight must be non-negative");
  if (hidden.rows() != targets.rows()) {
    fail(Errc::dimension, "hidden outputs and targets disagree on the row count");
  }
  if (lambda == 0.0) {
    // The objective |beta| + lambda |H beta - T| degenerates to pure norm
    // minimization, whose unique optimum is zero.
    return Eigen::MatrixXd::Zero(hidden.cols(), targets.cols());
  }
  const Eigen::Index n = hidden.rows();
  const Eigen::Index l = hidden.cols();
  if (n >= l) {
    Eigen::MatrixXd gram = hidden.transpose() * hidden;
    gram.diagonal().array() += 1.0 / lambda;
    return gram.ldlt().solve(hidden.transpose() * targets);
  }
  // Fewer samples than nodes: the dual form keeps the solve at n x n.
  Eigen::MatrixXd gram = hidden * hidden.transpose();
  gram.diagonal().array() += 1.0 / lambda;
  return hidden.transpose() * gram.ldlt().solve(targets);
}

ElmModel ElmModel::train(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                         const ElmConfig& cfg, Normalizer normalizer,
                         std::vector<std::string> classes) {
  if (cfg.hidden_nodes <= 0) fail(Errc::config, "hidden node count must be positive");
  if (features.rows() == 0) fail(Errc::empty_input, "no training rows");
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    fail(Errc::dimension, "labels length does not match the feature rows");
  }
  if (classes.size() < 2) fail(Errc::config, "at least two class names are required");
  if (!normalizer.fitted() || normalizer.dim() != features.cols()) {
    fail(Errc::state, "normalizer must be fitted to the training feature width");
  }
  if (!features.allFinite()) fail(Errc::numeric, "training features contain non-finite values");

  const auto n_classes = static_cast<int>(classes.size());
  std::set<int> seen;
  for (const int label : labels) {
    if (label < 0 || label >= n_classes) {
      fail(Errc::domain, "label " + std::to_string(label) + " outside 0.." +
                             std::to_string(n_classes - 1));
    }
    seen.insert(label);
  }
  if (seen.size() < 2) {
    fail(Errc::degenerate_data, "training set holds a single class");
  }

  ElmModel model;
  model.layer_ = init_random_layer(static_cast<int>(features.cols()), cfg.hidden_nodes,
                                   cfg.seed);
  model.activation_ = cfg.activation;
  model.normalizer_ = std::move(normalizer);
  model.classes_ = std::move(classes);
  model.seed_ = cfg.seed;
  model.ridge_ = cfg.ridge;

  const Eigen::MatrixXd h = hidden_output(features, model.layer_, cfg.activation);
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(features.rows(), n_classes);
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    targets(r, labels[static_cast<std::size_t>(r)]) = 1.0;
  }
  model.beta_ = solve_output_weights(h, targets, cfg.ridge);
  return model;
}

Eigen::MatrixXd ElmModel::scores_normalized(const Eigen::MatrixXd& normalized) const {
  if (beta_.size() == 0) fail(Errc::state, "model is not trained");
  return hidden_output(normalized, layer_, activation_) * beta_;
}

std::vector<int> ElmModel::predict_normalized(const Eigen::MatrixXd& normalized) const {
  const Eigen::MatrixXd scores = scores_normalized(normalized);
  std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    int best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(r, c) > scores(r, best)) best = static_cast<int>(c);
    }
    labels[static_cast<std::size_t>(r)] = best;
  }
  return labels;
}

std::pair<int, Eigen::VectorXd> ElmModel::predict(const Eigen::VectorXd& raw_features) const {
  if (beta_.size() == 0) fail(Errc::state, "model is not trained");
  const Eigen::VectorXd normalized = normalizer_.apply(raw_features);
  const Eigen::MatrixXd scores = scores_normalized(normalized.transpose());
  int best = 0;
  for (Eigen::Index c = 1; c < scores.cols(); ++c) {
    if (scores(0, c) > scores(0, best)) best = static_cast<int>(c);
  }
  return {best, scores.row(0).transpose()};
}

namespace {

constexpr char kModelMagic[4] = {'E', 'L', 'M', 'M'};
constexpr std::uint16_t kModelVersion = 1;

void put_u16(std::ofstream& os, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

void put_u32(std::ofstream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

void put_u64(std::ofstream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

void put_f64(std::ofstream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(os, bits);
}

void put_matrix(std::ofstream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(os, m(r, c));
  }
}

struct ModelReader {
  std::ifstream is;
  std::string name;

  void need(void* out, std::size_t n, const char* what) {
    is.read(static_cast<char*>(out), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) {
      fail(Errc::format, name + ": truncated while reading " + std::string(what));
    }
  }
  std::uint16_t u16(const char* what) {
    std::uint8_t b[2];
    need(b, 2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32(const char* what) {
    std::uint8_t b[4];
    need(b, 4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* what) {
    std::uint8_t b[8];
    need(b, 8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64(const char* what) {
    const std::uint64_t bits = u64(what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, const char* what) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = f64(what);
    }
    return m;
  }
};

}  // namespace

void ElmModel::save(const std::filesystem::path& path) const {
  if (beta_.size() == 0) fail(Errc::state, "model is not trained");
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io, "cannot create " + path.string());

  os.write(kModelMagic, 4);
  put_u16(os, kModelVersion);
  put_u16(os, static_cast<std::uint16_t>(activation_));
  put_u32(os, static_cast<std::uint32_t>(hidden_nodes()));
  put_u32(os, static_cast<std::uint32_t>(input_dim()));
  put_u32(os, static_cast<std::uint32_t>(n_classes()));
  put_u64(os, seed_);
  os.put(ridge_.has_value() ? '\1' : '\0');
  put_f64(os, ridge_.value_or(0.0));
  put_matrix(os, layer_.weights);
  put_matrix(os, layer_.biases);
  put_matrix(os, beta_);
  put_matrix(os, normalizer_.mean());
  put_matrix(os, normalizer_.stddev());
  for (const auto& name : classes_) {
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

ElmModel ElmModel::load(const std::filesystem::path& path) {
  ModelReader r;
  r.is.open(path, std::ios::binary);
  r.name = path.string();
  if (!r.is) fail(Errc::io, "cannot open " + r.name);

  char magic[4];
  r.need(magic, 4, "magic");
  if (std::memcmp(magic, kModelMagic, 4) != 0) {
    fail(Errc::format, r.name + ": not a model file");
  }
  const std::uint16_t version = r.u16("version");
  if (version != kModelVersion) {
    fail(Errc::unsupported, r.name + ": model version " + std::to_string(version) +
                                " is newer than this build");
  }
  const std::uint16_t activation = r.u16("activation");
  if (activation > static_cast<std::uint16_t>(Activation::hardlimit)) {
    fail(Errc::format, r.name + ": unknown activation id");
  }
  const std::uint32_t hidden = r.u32("hidden nodes");
  const std::uint32_t dim = r.u32("input dimension");
  const std::uint32_t classes = r.u32("class count");
  if (hidden == 0 || dim == 0 || classes < 2) {
    fail(Errc::format, r.name + ": implausible model shape");
  }
  const std::uint64_t seed = r.u64("seed");
  char has_ridge;
  r.need(&has_ridge, 1, "ridge flag");
  const double ridge = r.f64("ridge value");

  ElmModel model;
  model.activation_ = static_cast<Activation>(activation);
  model.seed_ = seed;
  if (has_ridge != '\0') model.ridge_ = ridge;
  model.layer_.weights = r.matrix(hidden, dim, "input weights");
  model.layer_.biases = r.matrix(hidden, 1, "biases");
  model.beta_ = r.matrix(hidden, classes, "output weights");
  const Eigen::MatrixXd mean = r.matrix(dim, 1, "normalizer mean");
  const Eigen::MatrixXd stddev = r.matrix(dim, 1, "normalizer stddev");
  model.normalizer_ = Normalizer::from_stats(mean.col(0), stddev.col(0));
  model.classes_.reserve(classes);
  for (std::uint32_t i = 0; i < classes; ++i) {
    const std::uint32_t len = r.u32("class-name length");
    if (len > 4096) fail(Errc::format, r.name + ": implausible class-name length");
    std::string name(len, '\0');
    if (len > 0) r.need(name.data(), len, "class name");
    model.classes_.push_back(std::move(name));
  }
  return model;
}

}  // namespace sirenelm
