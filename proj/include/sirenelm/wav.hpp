#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace sirenelm {

struct WavData {
  std::vector<std::vector<double>> channels;  // amplitudes in [-1, 1]
  int sample_rate = 0;
};

// RIFF/WAVE reader for PCM 16-bit and IEEE-float 32-bit (plain or extensible
// fmt). 16-bit integers are scaled by 1/32768; float samples are clamped to
// [-1, 1]. Other codecs raise `unsupported`, malformed files raise `format`.
WavData decode_wav(const std::filesystem::path& path);

// Element-wise mean across channels. Empty channel list raises `empty_input`.
std::vector<double> to_mono(const std::vector<std::vector<double>>& channels);

// Pads with trailing zeros or truncates at the end so that the result holds
// exactly round(sample_rate * seconds) samples.
std::vector<double> fix_length(std::vector<double> samples, int sample_rate,
                               double seconds = 5.0);

// 16-bit PCM writer used by the synthetic-dataset generator and tooling.
void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     int sample_rate);

}  // namespace sirenelm
