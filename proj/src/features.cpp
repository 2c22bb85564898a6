#include "sirenelm/features.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sirenelm/errors.hpp"

namespace sirenelm {

namespace {

char digit(int v) { return static_cast<char>('0' + v); }

std::vector<std::string> build_feature_names() {
  std::vector<std::string> names;
  for (int k = 0; k < kMfccCoeffs; ++k) {
    names.push_back(std::string("mfcc_mean_") + digit(k / 10) + digit(k % 10));
  }
  for (int k = 0; k < kMfccCoeffs; ++k) {
    names.push_back(std::string("mfcc_std_") + digit(k / 10) + digit(k % 10));
  }
  names.push_back("zcr_mean");
  names.push_back("zcr_std");
  return names;
}

void validate_config(const FeaturePipelineConfig& cfg) {
  if (cfg.n_coeffs <= 0 || cfg.n_coeffs > cfg.n_mel_filters) {
    fail(Errc::config, "coefficient count must lie in [1, n_mel_filters]");
  }
  if (cfg.log_floor <= 0.0) fail(Errc::config, "log floor must be positive");
  if (cfg.sample_rate <= 0) fail(Errc::config, "sample rate must be positive");
}

}  // namespace

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = build_feature_names();
  return names;
}

Eigen::MatrixXd dct_ii_orthonormal_matrix(int n_out, int n_in) {
  if (n_in <= 0 || n_out <= 0 || n_out > n_in) {
    fail(Errc::config, "dct shape must satisfy 0 < n_out <= n_in");
  }
  Eigen::MatrixXd d(n_out, n_in);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n_in));
  const double sk = std::sqrt(2.0 / static_cast<double>(n_in));
  for (int k = 0; k < n_out; ++k) {
    for (int n = 0; n < n_in; ++n) {
      d(k, n) = (k == 0 ? s0 : sk) *
                std::cos(std::numbers::pi * (n + 0.5) * k / static_cast<double>(n_in));
    }
  }
  return d;
}

Eigen::MatrixXd mfcc(std::span<const double> samples, const FrameConfig& frame_cfg,
                     const MelFilterbank& bank, int n_coeffs, double log_floor) {
  if (n_coeffs <= 0 || n_coeffs > bank.n_filters) {
    fail(Errc::config, "coefficient count must lie in [1, n_filters]");
  }
  if (log_floor <= 0.0) fail(Errc::config, "log floor must be positive");
  if (bank.fft_bins != frame_cfg.frame_len / 2 + 1) {
    fail(Errc::dimension, "filterbank bins do not match the frame length");
  }

  const auto frames = frame_signal(samples, frame_cfg);
  const auto window = make_window(frame_cfg.window, frame_cfg.frame_len);
  const Fft fft(frame_cfg.frame_len);
  const Eigen::MatrixXd dct = dct_ii_orthonormal_matrix(n_coeffs, bank.n_filters);

  Eigen::MatrixXd out(static_cast<Eigen::Index>(frames.size()), n_coeffs);
  std::vector<double> tapered(static_cast<std::size_t>(frame_cfg.frame_len));
  std::vector<std::complex<double>> spectrum;
  Eigen::VectorXd power(bank.fft_bins);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t i = 0; i < tapered.size(); ++i) tapered[i] = frames[f][i] * window[i];
    fft.forward(tapered, spectrum);
    for (int k = 0; k < bank.fft_bins; ++k) {
      power(k) = std::norm(spectrum[static_cast<std::size_t>(k)]);
    }
    Eigen::VectorXd energies = bank.weights * power;
    for (int m = 0; m < bank.n_filters; ++m) {
      energies(m) = std::log(std::max(energies(m), log_floor));
    }
    out.row(static_cast<Eigen::Index>(f)) = (dct * energies).transpose();
  }
  return out;
}

FeatureExtractor::FeatureExtractor(FeaturePipelineConfig cfg)
    : cfg_(cfg),
      bank_(MelFilterbank::make(cfg.n_mel_filters, cfg.frame.frame_len,
                                static_cast<double>(cfg.sample_rate), cfg.f_min, cfg.f_max)),
      fft_(cfg.frame.frame_len),
      window_(make_window(cfg.frame.window, cfg.frame.frame_len)),
      dct_(dct_ii_orthonormal_matrix(cfg.n_coeffs, cfg.n_mel_filters)) {
  validate_config(cfg_);
}

Eigen::MatrixXd FeatureExtractor::mfcc_frames(std::span<const double> samples) const {
  const auto frames = frame_signal(samples, cfg_.frame);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(frames.size()), cfg_.n_coeffs);
  std::vector<double> tapered(static_cast<std::size_t>(cfg_.frame.frame_len));
  std::vector<std::complex<double>> spectrum;
  Eigen::VectorXd power(bank_.fft_bins);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t i = 0; i < tapered.size(); ++i) tapered[i] = frames[f][i] * window_[i];
    fft_.forward(tapered, spectrum);
    for (int k = 0; k < bank_.fft_bins; ++k) {
      power(k) = std::norm(spectrum[static_cast<std::size_t>(k)]);
    }
    Eigen::VectorXd energies = bank_.weights * power;
    for (int m = 0; m < bank_.n_filters; ++m) {
      energies(m) = std::log(std::max(energies(m), cfg_.log_floor));
    }
    out.row(static_cast<Eigen::Index>(f)) = (dct_ * energies).transpose();
  }
  return out;
}

std::vector<double> FeatureExtractor::zcr_frames(std::span<const double> samples) const {
  const auto frames = frame_signal(samples, cfg_.frame);
  std::vector<double> out;
  out.reserve(frames.size());
  for (const auto& frame : frames) out.push_back(zcr(frame));
  return out;
}

Eigen::VectorXd FeatureExtractor::extract(std::span<const double> samples) const {
  const Eigen::MatrixXd cepstra = mfcc_frames(samples);
  const auto crossings = zcr_frames(samples);
  const double n = static_cast<double>(cepstra.rows());

  Eigen::VectorXd features(2 * cfg_.n_coeffs + 2);  // 28 under the default config
  const Eigen::RowVectorXd mean = cepstra.colwise().mean();
  const Eigen::RowVectorXd var =
      (cepstra.rowwise() - mean).array().square().colwise().sum() / n;
  for (int k = 0; k < cfg_.n_coeffs; ++k) {
    features(k) = mean(k);
    features(cfg_.n_coeffs + k) = std::sqrt(var(k));
  }

  double zm = 0.0;
  for (double z : crossings) zm += z;
  zm /= static_cast<double>(crossings.size());
  double zv = 0.0;
  for (double z : crossings) zv += (z - zm) * (z - zm);
  zv /= static_cast<double>(crossings.size());
  features(2 * cfg_.n_coeffs) = zm;
  features(2 * cfg_.n_coeffs + 1) = std::sqrt(zv);
  return features;
}

}  // namespace sirenelm
