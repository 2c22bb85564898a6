#include "sirenelm/feature_io.hpp"

#include <fstream>
#include <random>
#include <string>

#include <doctest.h>

#include "sirenelm/errors.hpp"
#include "support/tmpdir.hpp"

using namespace sirenelm;

namespace {

FeatureTable sample_table(int rows, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  FeatureTable table;
  table.features.resize(rows, kFeatureDim);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < kFeatureDim; ++c) table.features(r, c) = dist(gen);
    table.labels.push_back(r % 2);
    table.folds.push_back(1 + r % 5);
  }
  // Exercise values that stress text round-tripping.
  table.features(0, 0) = 0.1;  // not exactly representable
  table.features(0, 1) = -117.40926320884496;
  table.features(0, 2) = 1e-300;
  table.features(0, 3) = 0.0;
  return table;
}

void check_equal(const FeatureTable& a, const FeatureTable& b) {
  REQUIRE(a.features.rows() == b.features.rows());
  REQUIRE(a.features.cols() == b.features.cols());
  CHECK(a.labels == b.labels);
  CHECK(a.folds == b.folds);
  for (Eigen::Index r = 0; r < a.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.features.cols(); ++c) {
      CHECK(a.features(r, c) == b.features(r, c));  // bit-exact
    }
  }
}

}  // namespace

TEST_CASE("csv round-trip preserves every bit") {
  testutil::TempDir tmp("fio");
  const FeatureTable table = sample_table(7, 42);
  const auto path = tmp.file("features.csv");
  write_features_csv(path, table);
  check_equal(table, read_features_csv(path));
}

TEST_CASE("csv header names the layout") {
  testutil::TempDir tmp("fio");
  write_features_csv(tmp.file("features.csv"), sample_table(2, 1));
  std::ifstream is(tmp.file("features.csv"));
  std::string header;
  std::getline(is, header);
  CHECK(header.substr(0, 11) == "label,fold,");
  CHECK(header.find("f00") != std::string::npos);
  CHECK(header.find("f27") != std::string::npos);
  CHECK(header.find("f28") == std::string::npos);
}

TEST_CASE("binary round-trip preserves every bit") {
  testutil::TempDir tmp("fio");
  const FeatureTable table = sample_table(9, 77);
  const auto path = tmp.file("features.bin");
  write_features_binary(path, table);
  check_equal(table, read_features_binary(path));
}

TEST_CASE("binary files open with the format magic") {
  testutil::TempDir tmp("fio");
  const auto path = tmp.file("features.bin");
  write_features_binary(path, sample_table(1, 5));
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::string(magic, 4) == "SELM");
}

TEST_CASE("write_features dispatches on the extension") {
  testutil::TempDir tmp("fio");
  const FeatureTable table = sample_table(3, 9);
  write_features(tmp.file("a.csv"), table);
  write_features(tmp.file("b.selm"), table);
  {
    std::ifstream is(tmp.file("a.csv"));
    std::string first;
    std::getline(is, first);
    CHECK(first.substr(0, 5) == "label");
  }
  {
    std::ifstream is(tmp.file("b.selm"), std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    CHECK(std::string(magic, 4) == "SELM");
  }
}

TEST_CASE("read_features sniffs the content rather than the name") {
  testutil::TempDir tmp("fio");
  const FeatureTable table = sample_table(4, 12);
  // Binary payload behind a .csv name and vice versa.
  write_features_binary(tmp.file("masked.csv"), table);
  write_features_csv(tmp.file("masked.selm"), table);
  check_equal(table, read_features(tmp.file("masked.csv")));
  check_equal(table, read_features(tmp.file("masked.selm")));
}

TEST_CASE("readers reject damaged input") {
  testutil::TempDir tmp("fio");

  Errc code = Errc::config;
  try {
    read_features(tmp.file("absent.csv"));
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::io);

  const auto bad = tmp.file("bad.selm");
  {
    std::ofstream os(bad, std::ios::binary);
    os << "MELS????";
  }
  code = Errc::config;
  try {
    read_features_binary(bad);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::format);

  const auto short_csv = tmp.file("short.csv");
  {
    std::ofstream os(short_csv);
    os << "label,fold,f00\n1,1\n";  // row narrower than the header
  }
  CHECK_THROWS_AS(read_features_csv(short_csv), Error);

  const auto truncated = tmp.file("trunc.selm");
  write_features_binary(truncated, sample_table(5, 3));
  const auto size = std::filesystem::file_size(truncated);
  std::filesystem::resize_file(truncated, size - 16);
  CHECK_THROWS_AS(read_features_binary(truncated), Error);
}

TEST_CASE("csv readers validate label and fold ranges") {
  testutil::TempDir tmp("fio");
  const auto bad_label = tmp.file("badlabel.csv");
  {
    std::ofstream os(bad_label);
    os << "label,fold,f00\n3,1,0.5\n";
  }
  CHECK_THROWS_AS(read_features_csv(bad_label), Error);
  const auto bad_fold = tmp.file("badfold.csv");
  {
    std::ofstream os(bad_fold);
    os << "label,fold,f00\n1,0,0.5\n";
  }
  CHECK_THROWS_AS(read_features_csv(bad_fold), Error);
}
