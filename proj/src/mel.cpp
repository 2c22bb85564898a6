#include "sirenelm/mel.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sirenelm/errors.hpp"

namespace sirenelm {

double hz_to_mel(double hz) {
  if (hz < 0.0) fail(Errc::domain, "frequency must be non-negative, got " + std::to_string(hz));
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
  if (mel < 0.0) fail(Errc::domain, "mel value must be non-negative, got " + std::to_string(mel));
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank MelFilterbank::make(int n_filters, int frame_len, double sample_rate,
                                  double f_min, double f_max) {
  if (n_filters <= 0) fail(Errc::config, "filter count must be positive");
  if (frame_len < 2 || (frame_len & (frame_len - 1)) != 0) {
    fail(Errc::config, "frame length must be a power of two >= 2");
  }
  if (f_min < 0.0) fail(Errc::domain, "f_min must be non-negative");
  if (f_max <= f_min) fail(Errc::domain, "f_max must exceed f_min");
  if (f_max > sample_rate / 2.0) {
    fail(Errc::domain, "f_max " + std::to_string(f_max) + " exceeds the Nyquist frequency " +
                           std::to_string(sample_rate / 2.0));
  }

  MelFilterbank bank;
  bank.n_filters = n_filters;
  bank.fft_bins = frame_len / 2 + 1;
  bank.f_min = f_min;
  bank.f_max = f_max;

  // n_filters + 2 edge frequencies uniformly spaced in mel; filter m spans
  // (edge[m], edge[m+2]) with its apex at edge[m+1].
  std::vector<double> edges(static_cast<std::size_t>(n_filters) + 2);
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_filters + 1);
    edges[i] = mel_to_hz(mel);
  }

  bank.weights = Eigen::MatrixXd::Zero(n_filters, bank.fft_bins);
  for (int m = 0; m < n_filters; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    for (int k = 0; k < bank.fft_bins; ++k) {
      const double hz = sample_rate * static_cast<double>(k) / static_cast<double>(frame_len);
      double w = 0.0;
      if (hz == mid) {
        w = 1.0;
      } else if (hz > lo && hz < mid) {
        w = (hz - lo) / (mid - lo);
      } else if (hz > mid && hz < hi) {
        w = (hi - hz) / (hi - mid);
      }
      bank.weights(m, k) = w;
    }
  }
  return bank;
}

}  // namespace sirenelm
