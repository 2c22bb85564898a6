#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sirenelm/dataset.hpp"

namespace sirenelm {

// Synthetic stand-ins for the two classes, used by the demo workflow and the
// self-contained evaluation path. Both emit 5 s mono at 44.1 kHz.

struct SirenSynthParams {
  double f_low = 600.0;       // Hz, sweep floor
  double f_high = 1500.0;     // Hz, sweep ceiling
  double sweep_period = 0.5;  // seconds per up-or-down leg
  double amplitude = 0.6;
  double noise_level = 0.02;  // additive uniform noise on top of the tone
};

// Two-tone alternating sweep (phase-continuous) plus a touch of noise.
std::vector<double> make_siren_clip(const SirenSynthParams& params, std::uint64_t seed);

struct NoiseSynthParams {
  double amplitude = 0.4;
  int smoothing = 8;  // moving-average width; > 1 tilts the spectrum low
};

// Band-tilted uniform noise with a slowly wandering envelope.
std::vector<double> make_noise_clip(const NoiseSynthParams& params, std::uint64_t seed);

struct SyntheticClipSpec {
  int label = 0;  // 1 = siren-like, 0 = noise
  int fold = 0;   // 1..5
  std::uint64_t seed = 0;
  std::string name;  // stable filename stem
};

// Layout of the default synthetic corpus: n_sirens + n_noises clips spread
// round-robin over the 5 folds, per-clip seeds derived from `seed`. The
// 40/640 default mirrors the class ratio of the real corpus.
std::vector<SyntheticClipSpec> synthetic_plan(std::uint64_t seed, int n_sirens = 40,
                                              int n_noises = 640);

AudioClip render_clip(const SyntheticClipSpec& spec);

// Streams render -> extract one clip at a time across worker threads, so the
// full corpus never sits in memory at once. Row order follows the plan.
FeatureTable synthetic_features(const std::vector<SyntheticClipSpec>& plan,
                                const FeatureExtractor& extractor, int threads = 0);

// Renders the plan to WAV files plus a manifest CSV so the file-based
// workflow can run without external audio. Returns the manifest path.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir,
                                              const std::vector<SyntheticClipSpec>& plan);

}  // namespace sirenelm
