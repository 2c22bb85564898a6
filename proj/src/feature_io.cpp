#include "sirenelm/feature_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sirenelm/errors.hpp"

namespace sirenelm {

namespace {

constexpr char kMagic[4] = {'S', 'E', 'L', 'M'};
constexpr std::uint16_t kVersion = 1;

void check_table(const FeatureTable& table) {
  const auto n = static_cast<std::size_t>(table.features.rows());
  if (table.labels.size() != n || table.folds.size() != n) {
    fail(Errc::dimension, "labels/folds length does not match the feature rows");
  }
  if (n == 0) fail(Errc::empty_input, "feature table has no rows");
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(std::numeric_limits<double>::max_digits10);
  ss << v;
  return ss.str();
}

double parse_double(const std::string& cell, const std::filesystem::path& path,
                    std::size_t lineno) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    fail(Errc::format, path.string() + ":" + std::to_string(lineno) + ": bad number '" +
                           cell + "'");
  }
  return v;
}

void validate_row_meta(int label, int fold, const std::filesystem::path& path,
                       std::size_t lineno) {
  if (label != 0 && label != 1) {
    fail(Errc::format,
         path.string() + ":" + std::to_string(lineno) + ": label must be 0 or 1");
  }
  if (fold < 1 || fold > kNumFolds) {
    fail(Errc::format, path.string() + ":" + std::to_string(lineno) + ": fold outside 1.." +
                           std::to_string(kNumFolds));
  }
}

}  // namespace

void write_features_csv(const std::filesystem::path& path, const FeatureTable& table) {
  check_table(table);
  std::ofstream os(path);
  if (!os) fail(Errc::io, "cannot create " + path.string());
  os << "label,fold";
  for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
    os << ",f" << (c < 10 ? "0" : "") << c;
  }
  os << "\n";
  for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
    os << table.labels[static_cast<std::size_t>(r)] << ','
       << table.folds[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
      os << ',' << format_double(table.features(r, c));
    }
    os << "\n";
  }
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

FeatureTable read_features_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) fail(Errc::format, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("label,fold", 0) != 0) {
    fail(Errc::format, path.string() + ": header must start with label,fold");
  }
  std::size_t n_features = 0;
  for (char c : line) {
    if (c == ',') ++n_features;
  }
  if (n_features < 2) fail(Errc::format, path.string() + ": no feature columns");
  n_features -= 1;  // label column has no leading comma

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<int> folds;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != n_features + 2) {
      fail(Errc::format, path.string() + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(n_features + 2) + " cells, got " +
                             std::to_string(cells.size()));
    }
    const int label = static_cast<int>(parse_double(cells[0], path, lineno));
    const int fold = static_cast<int>(parse_double(cells[1], path, lineno));
    validate_row_meta(label, fold, path, lineno);
    labels.push_back(label);
    folds.push_back(fold);
    for (std::size_t c = 2; c < cells.size(); ++c) {
      values.push_back(parse_double(cells[c], path, lineno));
    }
  }
  if (labels.empty()) fail(Errc::format, path.string() + ": no data rows");

  FeatureTable table;
  table.features.resize(static_cast<Eigen::Index>(labels.size()),
                        static_cast<Eigen::Index>(n_features));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    for (std::size_t c = 0; c < n_features; ++c) {
      table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          values[r * n_features + c];
    }
  }
  table.labels = std::move(labels);
  table.folds = std::move(folds);
  return table;
}

void write_features_binary(const std::filesystem::path& path, const FeatureTable& table) {
  check_table(table);
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io, "cannot create " + path.string());

  auto put_u16 = [&os](std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    os.write(b, 2);
  };
  auto put_u32 = [&os](std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
  };
  auto put_f64 = [&os](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(b, 8);
  };

  os.write(kMagic, 4);
  put_u16(kVersion);
  put_u32(static_cast<std::uint32_t>(table.features.rows()));
  put_u32(static_cast<std::uint32_t>(table.features.cols() + 2));
  for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
    put_f64(static_cast<double>(table.labels[static_cast<std::size_t>(r)]));
    put_f64(static_cast<double>(table.folds[static_cast<std::size_t>(r)]));
    for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
      put_f64(table.features(r, c));
    }
  }
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

FeatureTable read_features_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::io, "cannot open " + path.string());

  auto need = [&is, &path](void* out, std::size_t n, const char* what) {
    is.read(static_cast<char*>(out), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) {
      fail(Errc::format, path.string() + ": truncated while reading " + std::string(what));
    }
  };
  auto get_u16 = [&need](const char* what) {
    std::uint8_t b[2];
    need(b, 2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  };
  auto get_u32 = [&need](const char* what) {
    std::uint8_t b[4];
    need(b, 4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };
  auto get_f64 = [&need](const char* what) {
    std::uint8_t b[8];
    need(b, 8, what);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };

  char magic[4];
  need(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    fail(Errc::format, path.string() + ": not a feature table file");
  }
  const std::uint16_t version = get_u16("version");
  if (version != kVersion) {
    fail(Errc::unsupported, path.string() + ": feature file version " +
                                std::to_string(version) + " is newer than this build");
  }
  const std::uint32_t rows = get_u32("row count");
  const std::uint32_t cols = get_u32("column count");
  if (rows == 0 || cols < 3) {
    fail(Errc::format, path.string() + ": implausible table shape");
  }

  FeatureTable table;
  table.features.resize(rows, cols - 2);
  table.labels.reserve(rows);
  table.folds.reserve(rows);
  for (std::uint32_t r = 0; r < rows; ++r) {
    const double label = get_f64("label");
    const double fold = get_f64("fold");
    validate_row_meta(static_cast<int>(label), static_cast<int>(fold), path, r + 1);
    table.labels.push_back(static_cast<int>(label));
    table.folds.push_back(static_cast<int>(fold));
    for (std::uint32_t c = 0; c + 2 < cols; ++c) {
      table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_f64("feature value");
    }
  }
  return table;
}

void write_features(const std::filesystem::path& path, const FeatureTable& table) {
  if (path.extension() == ".csv") {
    write_features_csv(path, table);
  } else {
    write_features_binary(path, table);
  }
}

FeatureTable read_features(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::io, "cannot open " + path.string());
  char magic[4] = {0, 0, 0, 0};
  is.read(magic, 4);
  is.close();
  if (std::memcmp(magic, kMagic, 4) == 0) return read_features_binary(path);
  return read_features_csv(path);
}

}  // namespace sirenelm
