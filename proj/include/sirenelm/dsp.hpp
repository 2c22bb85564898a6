#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sirenelm {

enum class WindowKind { rectangular, hamming };

struct FrameConfig {
  int frame_len = 2048;  // samples per analysis frame (~46 ms at 44.1 kHz)
  int hop = 512;
  WindowKind window = WindowKind::hamming;
};

// Taper coefficients; hamming is 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> make_window(WindowKind kind, int n);

std::size_t frame_count(std::size_t n_samples, int frame_len, int hop);

// Views into `samples`, one per full frame; frame i starts at i * hop.
// Throws too_short when the signal holds less than one frame.
std::vector<std::span<const double>> frame_signal(std::span<const double> samples,
                                                  const FrameConfig& cfg);

// Iterative radix-2 FFT with tables precomputed at construction.
class Fft {
 public:
  explicit Fft(int n);  // n must be a power of two >= 2

  int size() const { return n_; }

  // Unnormalized forward DFT of a real frame: X_k = sum_n x_n e^{-2 pi i k n / N}.
  void forward(std::span<const double> in, std::vector<std::complex<double>>& out) const;

 private:
  int n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
};

// One-sided squared-magnitude spectrum of a tapered frame: bins 0..N/2 inclusive.
// `window` must match the frame length; pass make_window output to reuse it.
std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::span<const double> window);

// Zero crossings in a frame: sum over consecutive pairs of |sgn(x_i) - sgn(x_{i-1})| / 2
// with sgn(0) = 0. Fractional counts arise from touches of the zero line.
double zcr(std::span<const double> frame);

}  // namespace sirenelm
