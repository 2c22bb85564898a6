#pragma once

#include <filesystem>

#include "sirenelm/dataset.hpp"

namespace sirenelm {

// Text format: header `label,fold,f00..f27`, one row per clip, full precision.
void write_features_csv(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_features_csv(const std::filesystem::path& path);

// Binary format: magic "SELM", u16 version, u32 rows, u32 cols (little endian),
// then row-major IEEE-754 doubles. Column 0 is the label, column 1 the fold,
// columns 2.. the feature values.
void write_features_binary(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_features_binary(const std::filesystem::path& path);

// Extension dispatch: ".csv" is text, anything else binary.
void write_features(const std::filesystem::path& path, const FeatureTable& table);

// Sniffs the magic bytes, so either format loads regardless of extension.
FeatureTable read_features(const std::filesystem::path& path);

}  // namespace sirenelm
