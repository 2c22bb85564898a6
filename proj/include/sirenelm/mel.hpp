#pragma once

#include <Eigen/Dense>

namespace sirenelm {

// Mel warping: 2595 * log10(1 + f / 700). Strictly increasing on f >= 0.
double hz_to_mel(double hz);

// Exact inverse: 700 * (10^(m / 2595) - 1).
double mel_to_hz(double mel);

// Triangular filters with unit peak, centers uniformly spaced in mel.
// weights is n_filters x fft_bins where fft_bins = frame_len / 2 + 1.
struct MelFilterbank {
  int n_filters = 0;
  int fft_bins = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  Eigen::MatrixXd weights;

  static MelFilterbank make(int n_filters, int frame_len, double sample_rate,
                            double f_min, double f_max);
};

}  // namespace sirenelm
