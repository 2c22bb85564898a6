#include "sirenelm/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sirenelm/errors.hpp"
#include "sirenelm/wav.hpp"

namespace sirenelm {

namespace {

std::string canonical_category(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (c == ' ') c = '_';
    s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  const auto first = s.find_first_not_of("_\t\r\n");
  const auto last = s.find_last_not_of("_\t\r\n");
  if (first == std::string::npos) return "";
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  const auto last = s.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  return s.substr(first, last - first + 1);
}

}  // namespace

const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names{"urban", "siren"};
  return names;
}

const std::vector<std::string>& urban_categories() {
  static const std::vector<std::string> cats{
      "car_horn", "engine",      "train",    "helicopter", "chainsaw", "airplane",
      "fireworks", "hand_saw",   "crying_baby", "sneezing", "clapping", "coughing",
      "footsteps", "laughing",   "rain",     "wind",
  };
  return cats;
}

int category_to_label(std::string_view category) {
  const std::string canon = canonical_category(category);
  if (canon == "siren") return kSirenLabel;
  const auto& cats = urban_categories();
  if (std::find(cats.begin(), cats.end(), canon) != cats.end()) return kUrbanLabel;
  return -1;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::io, "cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(is, line)) fail(Errc::manifest, path.string() + ": empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  int col_filename = -1;
  int col_fold = -1;
  int col_category = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    if (name == "filename") col_filename = static_cast<int>(i);
    if (name == "fold") col_fold = static_cast<int>(i);
    if (name == "category") col_category = static_cast<int>(i);
  }
  if (col_filename < 0 || col_fold < 0 || col_category < 0) {
    fail(Errc::manifest, path.string() + ": header must name filename, fold and category");
  }

  std::vector<ManifestEntry> entries;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    const auto need = static_cast<std::size_t>(std::max({col_filename, col_fold, col_category}));
    if (cells.size() <= need) {
      fail(Errc::manifest, path.string() + ":" + std::to_string(lineno) + ": too few columns");
    }
    ManifestEntry entry;
    entry.filename = trim(cells[static_cast<std::size_t>(col_filename)]);
    entry.category = trim(cells[static_cast<std::size_t>(col_category)]);
    const std::string fold_text = trim(cells[static_cast<std::size_t>(col_fold)]);
    try {
      entry.fold = std::stoi(fold_text);
    } catch (const std::exception&) {
      fail(Errc::manifest,
           path.string() + ":" + std::to_string(lineno) + ": fold is not a number");
    }
    if (entry.fold < 1 || entry.fold > kNumFolds) {
      fail(Errc::manifest, path.string() + ":" + std::to_string(lineno) + ": fold " +
                               fold_text + " outside 1.." + std::to_string(kNumFolds));
    }
    if (entry.filename.empty()) {
      fail(Errc::manifest, path.string() + ":" + std::to_string(lineno) + ": empty filename");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

AudioClip load_clip(const std::filesystem::path& audio_dir, const ManifestEntry& entry,
                    int label) {
  WavData wav;
  try {
    wav = decode_wav(audio_dir / entry.filename);
  } catch (const Error& e) {
    if (e.code() == Errc::io) {
      fail(Errc::ingestion, entry.filename + ": " + e.what());
    }
    throw;
  }
  if (wav.sample_rate != kRequiredSampleRate) {
    fail(Errc::rate_mismatch, entry.filename + ": expected " +
                                  std::to_string(kRequiredSampleRate) + " Hz, got " +
                                  std::to_string(wav.sample_rate));
  }
  AudioClip clip;
  clip.sample_rate = wav.sample_rate;
  clip.samples = fix_length(to_mono(wav.channels), wav.sample_rate, kClipSeconds);
  clip.label = label;
  clip.fold = entry.fold;
  clip.source = entry.filename;
  return clip;
}

namespace {

// Manifest rows that survive the category filter, with resolved labels.
struct AdmittedRow {
  ManifestEntry entry;
  int label = 0;
};

std::pair<std::vector<AdmittedRow>, int> admit_rows(const std::filesystem::path& manifest_path) {
  std::vector<AdmittedRow> rows;
  int excluded = 0;
  for (auto& entry : read_manifest(manifest_path)) {
    const int label = category_to_label(entry.category);
    if (label < 0) {
      ++excluded;
      continue;
    }
    rows.push_back({std::move(entry), label});
  }
  return {std::move(rows), excluded};
}

}  // namespace

std::vector<AudioClip> load_dataset(const std::filesystem::path& manifest_path,
                                    const std::filesystem::path& audio_dir, LoadStats* stats) {
  auto [rows, excluded] = admit_rows(manifest_path);
  LoadStats local;
  local.n_excluded = excluded;
  std::vector<AudioClip> clips;
  clips.reserve(rows.size());
  for (const auto& row : rows) {
    WavData wav;
    try {
      wav = decode_wav(audio_dir / row.entry.filename);
    } catch (const Error& e) {
      if (e.code() == Errc::io) fail(Errc::ingestion, row.entry.filename + ": " + e.what());
      throw;
    }
    if (wav.sample_rate != kRequiredSampleRate) {
      fail(Errc::rate_mismatch, row.entry.filename + ": expected " +
                                    std::to_string(kRequiredSampleRate) + " Hz, got " +
                                    std::to_string(wav.sample_rate));
    }
    local.total_seconds +=
        static_cast<double>(wav.channels[0].size()) / wav.sample_rate;
    AudioClip clip;
    clip.sample_rate = wav.sample_rate;
    clip.samples = fix_length(to_mono(wav.channels), wav.sample_rate, kClipSeconds);
    clip.label = row.label;
    clip.fold = row.entry.fold;
    clip.source = row.entry.filename;
    if (row.label == kSirenLabel) {
      ++local.n_siren;
    } else {
      ++local.n_urban;
    }
    clips.push_back(std::move(clip));
  }
  if (stats) *stats = local;
  return clips;
}

int resolve_thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (const char* env = std::getenv("SIREN_ELM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::exception&) {
      // unparsable values leave the request untouched
    }
  }
  return std::max(n, 1);
}

FeatureTable extract_dataset_features(const std::filesystem::path& manifest_path,
                                      const std::filesystem::path& audio_dir,
                                      const FeatureExtractor& extractor, int threads,
                                      LoadStats* stats) {
  auto [rows, excluded] = admit_rows(manifest_path);
  const auto n = static_cast<Eigen::Index>(rows.size());

  FeatureTable table;
  table.features.resize(n, 2 * extractor.config().n_coeffs + 2);
  table.labels.resize(rows.size());
  table.folds.resize(rows.size());

  LoadStats local;
  local.n_excluded = excluded;

  const int workers = std::min<int>(resolve_thread_count(threads), std::max<int>(1, n));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  double total_seconds = 0.0;

  auto run = [&](const FeatureExtractor& fx) {
    double seconds = 0.0;
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) break;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error) break;
      }
      try {
        const AudioClip clip = load_clip(audio_dir, rows[i].entry, rows[i].label);
        seconds += static_cast<double>(clip.samples.size()) / clip.sample_rate;
        const Eigen::VectorXd feats = fx.extract(clip.samples);
        table.features.row(static_cast<Eigen::Index>(i)) = feats.transpose();
        table.labels[i] = rows[i].label;
        table.folds[i] = rows[i].entry.fold;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    total_seconds += seconds;
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

  for (const auto& row : rows) {
    if (row.label == kSirenLabel) {
      ++local.n_siren;
    } else {
      ++local.n_urban;
    }
  }
  // Decoded length before padding is not observable here; report the
  // standardized duration instead.
  local.total_seconds = total_seconds;
  if (stats) *stats = local;
  return table;
}

}  // namespace sirenelm
