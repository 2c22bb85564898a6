#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sirenelm/features.hpp"

namespace sirenelm {

inline constexpr double kClipSeconds = 5.0;
inline constexpr int kRequiredSampleRate = 44100;
inline constexpr int kNumFolds = 5;

// Class indices are fixed across the project: 0 = urban, 1 = siren.
inline constexpr int kUrbanLabel = 0;
inline constexpr int kSirenLabel = 1;
const std::vector<std::string>& class_names();

struct AudioClip {
  std::vector<double> samples;  // exactly sample_rate * kClipSeconds after loading
  int sample_rate = 0;
  int label = -1;  // 1 = siren, 0 = urban
  int fold = 0;    // 1..5
  std::string source;
};

struct ManifestEntry {
  std::string filename;
  int fold = 0;
  std::string category;
};

// The sixteen urban categories admitted next to "siren"; everything else in
// the manifest is excluded.
const std::vector<std::string>& urban_categories();

// 1 for siren, 0 for an urban category, -1 for excluded. Matching is
// case-insensitive after trimming, with spaces treated as underscores.
int category_to_label(std::string_view category);

// Reads a CSV manifest with at least the columns filename, fold, category
// (extra columns such as ESC-50's target/esc10/src_file/take are ignored).
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

// decode -> mono -> fixed 5 s length; enforces the 44.1 kHz requirement.
AudioClip load_clip(const std::filesystem::path& audio_dir, const ManifestEntry& entry,
                    int label);

struct LoadStats {
  int n_siren = 0;
  int n_urban = 0;
  int n_excluded = 0;
  double total_seconds = 0.0;  // decoded duration before length standardization
};

// Loads every siren/urban row of the manifest. Keep in mind a full ESC-50
// subset is ~1.2 GB of decoded audio; prefer extract_dataset_features for the
// feature path, which streams clips one at a time.
std::vector<AudioClip> load_dataset(const std::filesystem::path& manifest_path,
                                    const std::filesystem::path& audio_dir,
                                    LoadStats* stats = nullptr);

struct FeatureTable {
  Eigen::MatrixXd features;  // n x kFeatureDim
  std::vector<int> labels;   // 0 = urban, 1 = siren
  std::vector<int> folds;    // 1..5
};

// Streaming decode+extract over all admitted manifest rows. `threads` <= 0
// picks a default from the hardware, capped by the SIREN_ELM_THREADS
// environment variable. Row order matches the manifest order of admitted rows.
FeatureTable extract_dataset_features(const std::filesystem::path& manifest_path,
                                      const std::filesystem::path& audio_dir,
                                      const FeatureExtractor& extractor, int threads = 0,
                                      LoadStats* stats = nullptr);

// Worker-thread count after applying the SIREN_ELM_THREADS cap.
int resolve_thread_count(int requested);

}  // namespace sirenelm
