#include "sirenelm/synth.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <thread>

#include "sirenelm/errors.hpp"
#include "sirenelm/rng.hpp"
#include "sirenelm/wav.hpp"

namespace sirenelm {

namespace {

constexpr int kSynthRate = 44100;

std::size_t clip_samples() {
  return static_cast<std::size_t>(std::llround(kSynthRate * kClipSeconds));
}

}  // namespace

std::vector<double> make_siren_clip(const SirenSynthParams& params, std::uint64_t seed) {
  if (params.f_low <= 0.0 || params.f_high <= params.f_low ||
      params.f_high >= kSynthRate / 2.0) {
    fail(Errc::config, "sweep band must satisfy 0 < f_low < f_high < Nyquist");
  }
  if (params.sweep_period <= 0.0) fail(Errc::config, "sweep_period must be positive");
  if (params.amplitude <= 0.0 || params.amplitude + params.noise_level > 1.0) {
    fail(Errc::config, "amplitude plus noise_level must stay within (0, 1]");
  }
  if (params.noise_level < 0.0) fail(Errc::config, "noise_level must be non-negative");

  Rng rng(seed);
  const std::size_t n = clip_samples();
  std::vector<double> out(n);

  // Triangle-wave instantaneous frequency between the two tones; integrating
  // it keeps the phase continuous across leg changes.
  const double leg = params.sweep_period;
  double phase = 2.0 * std::numbers::pi * uniform_unit(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSynthRate;
    const double pos = std::fmod(t, 2.0 * leg);
    const double frac = pos < leg ? pos / leg : 2.0 - pos / leg;
    const double freq = params.f_low + (params.f_high - params.f_low) * frac;
    out[i] = params.amplitude * std::sin(phase) + params.noise_level * uniform_pm1(rng);
    phase += 2.0 * std::numbers::pi * freq / kSynthRate;
  }
  return out;
}

std::vector<double> make_noise_clip(const NoiseSynthParams& params, std::uint64_t seed) {
  if (params.amplitude <= 0.0 || params.amplitude > 1.0) {
    fail(Errc::config, "amplitude must lie in (0, 1]");
  }
  if (params.smoothing < 1) fail(Errc::config, "smoothing must be at least 1");

  Rng rng(seed);
  const std::size_t n = clip_samples();
  const auto width = static_cast<std::size_t>(params.smoothing);

  std::vector<double> raw(n + width - 1);
  for (double& v : raw) v = uniform_pm1(rng);

  // Slowly wandering amplitude so clips are not statistically flat.
  const double env_freq = 0.2 + 0.6 * uniform_unit(rng);  // Hz
  const double env_phase = 2.0 * std::numbers::pi * uniform_unit(rng);

  std::vector<double> out(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < width; ++i) acc += raw[i];
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSynthRate;
    const double env =
        0.3 + 0.7 * 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * env_freq * t + env_phase));
    out[i] = params.amplitude * env * acc / static_cast<double>(width);
    if (i + width < raw.size()) acc += raw[i + width] - raw[i];
  }
  return out;
}

std::vector<SyntheticClipSpec> synthetic_plan(std::uint64_t seed, int n_sirens, int n_noises) {
  if (n_sirens < 0 || n_noises < 0 || n_sirens + n_noises == 0) {
    fail(Errc::config, "plan needs a non-negative clip count and at least one clip");
  }
  const std::uint64_t base = mix_seed(seed);
  std::vector<SyntheticClipSpec> plan;
  plan.reserve(static_cast<std::size_t>(n_sirens + n_noises));
  char name[32];
  for (int i = 0; i < n_sirens; ++i) {
    SyntheticClipSpec spec;
    spec.label = kSirenLabel;
    spec.fold = i % kNumFolds + 1;
    spec.seed = mix_seed(base + static_cast<std::uint64_t>(plan.size()));
    std::snprintf(name, sizeof(name), "siren_%03d", i);
    spec.name = name;
    plan.push_back(std::move(spec));
  }
  for (int i = 0; i < n_noises; ++i) {
    SyntheticClipSpec spec;
    spec.label = kUrbanLabel;
    spec.fold = i % kNumFolds + 1;
    spec.seed = mix_seed(base + static_cast<std::uint64_t>(plan.size()));
    std::snprintf(name, sizeof(name), "urban_%03d", i);
    spec.name = name;
    plan.push_back(std::move(spec));
  }
  return plan;
}

AudioClip render_clip(const SyntheticClipSpec& spec) {
  AudioClip clip;
  clip.sample_rate = kSynthRate;
  clip.samples = spec.label == kSirenLabel ? make_siren_clip({}, spec.seed)
                                           : make_noise_clip({}, spec.seed);
  clip.label = spec.label;
  clip.fold = spec.fold;
  clip.source = spec.name;
  return clip;
}

FeatureTable synthetic_features(const std::vector<SyntheticClipSpec>& plan,
                                const FeatureExtractor& extractor, int threads) {
  if (plan.empty()) fail(Errc::empty_input, "empty synthesis plan");

  FeatureTable table;
  table.features.resize(static_cast<Eigen::Index>(plan.size()),
                        2 * extractor.config().n_coeffs + 2);
  table.labels.resize(plan.size());
  table.folds.resize(plan.size());

  const int workers =
      std::min<int>(resolve_thread_count(threads), static_cast<int>(plan.size()));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;

  auto run = [&](const FeatureExtractor& fx) {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) break;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error) break;
      }
      try {
        const AudioClip clip = render_clip(plan[i]);
        const Eigen::VectorXd feats = fx.extract(clip.samples);
        table.features.row(static_cast<Eigen::Index>(i)) = feats.transpose();
        table.labels[i] = plan[i].label;
        table.folds[i] = plan[i].fold;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
  };

  if (workers <= 1) {
    run(extractor);
  } else {
    std::vector<std::thread> pool;
    std::vector<FeatureExtractor> extractors(static_cast<std::size_t>(workers), extractor);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { run(extractors[static_cast<std::size_t>(w)]); });
    }
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return table;
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir,
                                              const std::vector<SyntheticClipSpec>& plan) {
  if (plan.empty()) fail(Errc::empty_input, "empty synthesis plan");
  const auto audio_dir = dir / "audio";
  std::filesystem::create_directories(audio_dir);

  const auto manifest_path = dir / "manifest.csv";
  std::ofstream manifest(manifest_path);
  if (!manifest) fail(Errc::io, "cannot create " + manifest_path.string());
  manifest << "filename,fold,category\n";
  for (const auto& spec : plan) {
    const AudioClip clip = render_clip(spec);
    const std::string filename = spec.name + ".wav";
    write_wav_pcm16(audio_dir / filename, clip.samples, clip.sample_rate);
    manifest << filename << ',' << spec.fold << ','
             << (spec.label == kSirenLabel ? "siren" : "wind") << "\n";
  }
  manifest.close();
  if (!manifest) fail(Errc::io, "failed writing " + manifest_path.string());
  return manifest_path;
}

}  // namespace sirenelm
