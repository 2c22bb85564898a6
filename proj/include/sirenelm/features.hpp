#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sirenelm/dsp.hpp"
#include "sirenelm/mel.hpp"

namespace sirenelm {

inline constexpr int kMfccCoeffs = 13;
// 13 MFCC means + 13 MFCC stds + ZCR mean + ZCR std.
inline constexpr int kFeatureDim = 28;

struct FeaturePipelineConfig {
  FrameConfig frame{};
  int sample_rate = 44100;
  int n_mel_filters = 26;
  int n_coeffs = kMfccCoeffs;
  double log_floor = 1e-10;  // filterbank energies are clamped here before log
  double f_min = 0.0;
  double f_max = 22050.0;
};

// Human-readable names of the 28 feature dimensions, in storage order.
const std::vector<std::string>& feature_names();

// Orthonormal DCT-II matrix (n_out x n_in): row k is
// s_k * cos(pi k (2n + 1) / (2 n_in)), s_0 = sqrt(1/n_in), s_k = sqrt(2/n_in).
Eigen::MatrixXd dct_ii_orthonormal_matrix(int n_out, int n_in);

// Per-frame MFCCs (n_frames x n_coeffs): power spectrum -> filterbank energies
// -> log with floor -> orthonormal DCT-II, lowest n_coeffs coefficients.
Eigen::MatrixXd mfcc(std::span<const double> samples, const FrameConfig& frame_cfg,
                     const MelFilterbank& bank, int n_coeffs, double log_floor);

// Caches the FFT plan, window, filterbank and DCT rows for repeated extraction.
// Immutable after construction; copy one per worker thread for parallel runs.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(FeaturePipelineConfig cfg = {});

  // 28 values in the order [mfcc_mean 0..12, mfcc_std 0..12, zcr_mean, zcr_std].
  // Standard deviations use the population convention (divide by n_frames).
  Eigen::VectorXd extract(std::span<const double> samples) const;

  Eigen::MatrixXd mfcc_frames(std::span<const double> samples) const;
  std::vector<double> zcr_frames(std::span<const double> samples) const;

  const FeaturePipelineConfig& config() const { return cfg_; }
  const MelFilterbank& filterbank() const { return bank_; }

 private:
  FeaturePipelineConfig cfg_;
  MelFilterbank bank_;
  Fft fft_;
  std::vector<double> window_;
  Eigen::MatrixXd dct_;  // n_coeffs x n_mel_filters
};

}  // namespace sirenelm
