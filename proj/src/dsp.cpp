#include "sirenelm/dsp.hpp"

#include <cmath>
#include <numbers>

#include "sirenelm/errors.hpp"

namespace sirenelm {

std::vector<double> make_window(WindowKind kind, int n) {
  if (n <= 0) fail(Errc::domain, "window length must be positive, got " + std::to_string(n));
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (kind == WindowKind::hamming && n > 1) {
    for (int i = 0; i < n; ++i) {
      w[static_cast<std::size_t>(i)] =
          0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
    }
  }
  return w;
}

std::size_t frame_count(std::size_t n_samples, int frame_len, int hop) {
  if (frame_len <= 0 || hop <= 0) fail(Errc::domain, "frame_len and hop must be positive");
  const auto flen = static_cast<std::size_t>(frame_len);
  if (n_samples < flen) return 0;
  return 1 + (n_samples - flen) / static_cast<std::size_t>(hop);
}

std::vector<std::span<const double>> frame_signal(std::span<const double> samples,
                                                  const FrameConfig& cfg) {
  const std::size_t count = frame_count(samples.size(), cfg.frame_len, cfg.hop);
  if (count == 0) {
    fail(Errc::too_short, "signal of " + std::to_string(samples.size()) +
                              " samples holds no full frame of " +
                              std::to_string(cfg.frame_len));
  }
  std::vector<std::span<const double>> frames;
  frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    frames.push_back(samples.subspan(f * static_cast<std::size_t>(cfg.hop),
                                     static_cast<std::size_t>(cfg.frame_len)));
  }
  return frames;
}

Fft::Fft(int n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    fail(Errc::config, "fft size must be a power of two >= 2, got " + std::to_string(n));
  }
  const auto un = static_cast<std::size_t>(n);
  bitrev_.resize(un);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < un) ++log2n;
  for (std::size_t i = 0; i < un; ++i) {
    std::size_t rev = 0;
    for (std::size_t b = 0; b < log2n; ++b) {
      if (i & (std::size_t{1} << b)) rev |= std::size_t{1} << (log2n - 1 - b);
    }
    bitrev_[i] = rev;
  }
  twiddle_.resize(un / 2);
  for (std::size_t k = 0; k < un / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(ang), std::sin(ang)};
  }
}

void Fft::forward(std::span<const double> in, std::vector<std::complex<double>>& out) const {
  if (in.size() != static_cast<std::size_t>(n_)) {
    fail(Errc::dimension, "fft input length " + std::to_string(in.size()) +
                              " does not match plan size " + std::to_string(n_));
  }
  const auto un = static_cast<std::size_t>(n_);
  out.resize(un);
  for (std::size_t i = 0; i < un; ++i) out[bitrev_[i]] = in[i];
  for (std::size_t len = 2; len <= un; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = un / len;
    for (std::size_t start = 0; start < un; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = twiddle_[k * stride];
        const std::complex<double> even = out[start + k];
        const std::complex<double> odd = out[start + k + half] * w;
        out[start + k] = even + odd;
        out[start + k + half] = even - odd;
      }
    }
  }
}

std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::span<const double> window) {
  if (frame.size() != window.size()) {
    fail(Errc::dimension, "window length does not match the frame");
  }
  Fft fft(static_cast<int>(frame.size()));
  std::vector<double> tapered(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) tapered[i] = frame[i] * window[i];
  std::vector<std::complex<double>> spectrum;
  fft.forward(tapered, spectrum);
  std::vector<double> power(frame.size() / 2 + 1);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spectrum[k]);
  return power;
}

double zcr(std::span<const double> frame) {
  if (frame.size() < 2) {
    fail(Errc::too_short, "zero-crossing rate needs at least two samples");
  }
  auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  double acc = 0.0;
  int prev = sgn(frame[0]);
  for (std::size_t i = 1; i < frame.size(); ++i) {
    const int cur = sgn(frame[i]);
    acc += std::abs(cur - prev) / 2.0;
    prev = cur;
  }
  return acc;
}

}  // namespace sirenelm
