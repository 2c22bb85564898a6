#include "sirenelm/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "sirenelm/errors.hpp"

namespace sirenelm {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

struct Reader {
  std::ifstream is;
  std::string name;

  explicit Reader(const std::filesystem::path& path)
      : is(path, std::ios::binary), name(path.string()) {
    if (!is) fail(Errc::io, "cannot open " + name);
  }

  void bytes(void* out, std::size_t n, const char* what) {
    is.read(static_cast<char*>(out), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) {
      fail(Errc::format, name + ": truncated while reading " + what);
    }
  }

  std::uint16_t u16(const char* what) {
    std::uint8_t b[2];
    bytes(b, 2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }

  std::uint32_t u32(const char* what) {
    std::uint8_t b[4];
    bytes(b, 4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }

  std::string tag() {
    char t[4];
    bytes(t, 4, "chunk tag");
    return std::string(t, 4);
  }

  void skip(std::uint32_t n) {
    is.seekg(n, std::ios::cur);
    if (!is) fail(Errc::format, name + ": truncated chunk body");
  }
};

}  // namespace

WavData decode_wav(const std::filesystem::path& path) {
  Reader r(path);
  if (r.tag() != "RIFF") fail(Errc::format, r.name + ": missing RIFF header");
  r.u32("riff size");
  if (r.tag() != "WAVE") fail(Errc::format, r.name + ": not a WAVE container");

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  std::vector<char> payload;

  while (true) {
    char tagbuf[4];
    r.is.read(tagbuf, 4);
    if (r.is.gcount() == 0) break;  // clean end of file
    if (r.is.gcount() != 4) fail(Errc::format, r.name + ": truncated chunk tag");
    const std::string tag(tagbuf, 4);
    const std::uint32_t size = r.u32("chunk size");

    if (tag == "fmt ") {
      if (size < 16) fail(Errc::format, r.name + ": fmt chunk too small");
      format = r.u16("format tag");
      channels = r.u16("channel count");
      rate = r.u32("sample rate");
      r.u32("byte rate");
      r.u16("block align");
      bits = r.u16("bits per sample");
      std::uint32_t consumed = 16;
      if (format == kFormatExtensible) {
        if (size < 18 + 22) fail(Errc::format, r.name + ": extensible fmt chunk too small");
        r.u16("extension size");
        r.u16("valid bits");
        r.u32("channel mask");
        format = r.u16("sub-format tag");  // first GUID bytes carry the codec
        consumed = 16 + 2 + 2 + 4 + 2;
      }
      if (size > consumed) r.skip(size - consumed);
      have_fmt = true;
    } else if (tag == "data") {
      payload.resize(size);
      if (size > 0) r.bytes(payload.data(), size, "sample data");
      break;
    } else {
      // LIST, fact, cue and friends: skip, honoring RIFF word alignment.
      r.skip(size + (size & 1));
    }
  }

  if (!have_fmt) fail(Errc::format, r.name + ": no fmt chunk before data");
  if (channels == 0) fail(Errc::format, r.name + ": zero channels");
  if (rate == 0) fail(Errc::format, r.name + ": zero sample rate");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    fail(Errc::unsupported, r.name + ": only PCM16 and float32 are readable (format " +
                                std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t stride = bytes_per_sample * channels;
  if (stride == 0 || payload.size() % stride != 0) {
    fail(Errc::format, r.name + ": data size is not a whole number of sample frames");
  }
  const std::size_t n_frames = payload.size() / stride;

  WavData wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.channels.assign(channels, std::vector<double>(n_frames));
  const char* p = payload.data();
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      if (pcm16) {
        std::uint16_t raw = static_cast<std::uint8_t>(p[0]) |
                            (static_cast<std::uint16_t>(static_cast<std::uint8_t>(p[1])) << 8);
        std::int16_t s;
        std::memcpy(&s, &raw, 2);
        wav.channels[c][f] = static_cast<double>(s) / 32768.0;
      } else {
        std::uint32_t raw = 0;
        for (int b = 0; b < 4; ++b) {
          raw |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[b])) << (8 * b);
        }
        float s;
        std::memcpy(&s, &raw, 4);
        wav.channels[c][f] = std::clamp(static_cast<double>(s), -1.0, 1.0);
      }
      p += bytes_per_sample;
    }
  }
  return wav;
}

std::vector<double> to_mono(const std::vector<std::vector<double>>& channels) {
  if (channels.empty()) fail(Errc::empty_input, "no channels to mix down");
  if (channels.size() == 1) return channels[0];
  const std::size_t n = channels[0].size();
  for (const auto& ch : channels) {
    if (ch.size() != n) fail(Errc::dimension, "channel lengths differ");
  }
  std::vector<double> mono(n, 0.0);
  for (const auto& ch : channels) {
    for (std::size_t i = 0; i < n; ++i) mono[i] += ch[i];
  }
  const double scale = 1.0 / static_cast<double>(channels.size());
  for (double& v : mono) v *= scale;
  return mono;
}

std::vector<double> fix_length(std::vector<double> samples, int sample_rate, double seconds) {
  if (sample_rate <= 0) fail(Errc::domain, "sample rate must be positive");
  if (seconds <= 0.0) fail(Errc::domain, "target duration must be positive");
  const auto target = static_cast<std::size_t>(std::llround(sample_rate * seconds));
  samples.resize(target, 0.0);
  return samples;
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     int sample_rate) {
  if (sample_rate <= 0) fail(Errc::domain, "sample rate must be positive");
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

  const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * 2);
  os.write("RIFF", 4);
  put_u32(36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);
  put_u32(static_cast<std::uint32_t>(sample_rate));
  put_u32(static_cast<std::uint32_t>(sample_rate) * 2);
  put_u16(2);
  put_u16(16);
  os.write("data", 4);
  put_u32(data_size);
  for (const double v : samples) {
    const double clamped = std::clamp(v, -1.0, 1.0);
    const auto q = static_cast<std::int32_t>(std::lrint(clamped * 32768.0));
    const auto s = static_cast<std::int16_t>(std::clamp(q, -32768, 32767));
    put_u16(static_cast<std::uint16_t>(s));
  }
  if (!os) fail(Errc::io, "failed writing " + path.string());
}

}  // namespace sirenelm
