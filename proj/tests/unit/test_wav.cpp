#include "sirenelm/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "sirenelm/errors.hpp"
#include "support/tmpdir.hpp"

using namespace sirenelm;

namespace {

void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Hand-assembled RIFF container, built byte by byte so the reader is tested
// against the file format rather than against the project's own writer.
std::string wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                      std::uint16_t bits, const std::string& payload) {
  std::string data;
  const std::uint32_t byte_rate = rate * channels * bits / 8;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  std::string fmt;
  put_u16(fmt, format);
  put_u16(fmt, channels);
  put_u32(fmt, rate);
  put_u32(fmt, byte_rate);
  put_u16(fmt, block_align);
  put_u16(fmt, bits);
  data += "RIFF";
  put_u32(data, static_cast<std::uint32_t>(4 + 8 + fmt.size() + 8 + payload.size()));
  data += "WAVE";
  data += "fmt ";
  put_u32(data, static_cast<std::uint32_t>(fmt.size()));
  data += fmt;
  data += "data";
  put_u32(data, static_cast<std::uint32_t>(payload.size()));
  data += payload;
  return data;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string pcm16_payload(const std::vector<std::int16_t>& samples) {
  std::string payload;
  for (std::int16_t s : samples) put_u16(payload, static_cast<std::uint16_t>(s));
  return payload;
}

std::string float32_payload(const std::vector<float>& samples) {
  std::string payload;
  for (float s : samples) {
    std::uint32_t bits;
    std::memcpy(&bits, &s, 4);
    put_u32(payload, bits);
  }
  return payload;
}

}  // namespace

TEST_CASE("decode_wav scales 16-bit PCM by 1/32768") {
  testutil::TempDir tmp("wav");
  const auto path = tmp.file("mono16.wav");
  write_file(path, wav_bytes(1, 1, 44100, 16, pcm16_payload({32767, -32768, 0, 16384})));
  const WavData wav = decode_wav(path);
  CHECK(wav.sample_rate == 44100);
  REQUIRE(wav.channels.size() == 1);
  REQUIRE(wav.channels[0].size() == 4);
  CHECK(wav.channels[0][0] == 0.999969482421875);  // 32767/32768 exactly
  CHECK(wav.channels[0][1] == -1.0);
  CHECK(wav.channels[0][2] == 0.0);
  CHECK(wav.channels[0][3] == 0.5);
}

TEST_CASE("decode_wav deinterleaves stereo PCM") {
  testutil::TempDir tmp("wav");
  const auto path = tmp.file("stereo16.wav");
  write_file(path, wav_bytes(1, 2, 22050, 16, pcm16_payload({100, -100, 200, -200, 300, -300})));
  const WavData wav = decode_wav(path);
  CHECK(wav.sample_rate == 22050);
  REQUIRE(wav.channels.size() == 2);
  REQUIRE(wav.channels[0].size() == 3);
  CHECK(wav.channels[0][0] == 100.0 / 32768.0);
  CHECK(wav.channels[1][0] == -100.0 / 32768.0);
  CHECK(wav.channels[0][2] == 300.0 / 32768.0);
  CHECK(wav.channels[1][2] == -300.0 / 32768.0);
}

TEST_CASE("decode_wav reads 32-bit float payloads and clamps overshoot") {
  testutil::TempDir tmp("wav");
  const auto path = tmp.file("float32.wav");
  write_file(path, wav_bytes(3, 1, 44100, 32, float32_payload({0.25f, -0.5f, 1.5f, -2.0f})));
  const WavData wav = decode_wav(path);
  REQUIRE(wav.channels.size() == 1);
  CHECK(wav.channels[0][0] == 0.25);
  CHECK(wav.channels[0][1] == -0.5);
  CHECK(wav.channels[0][2] == 1.0);   // clamped
  CHECK(wav.channels[0][3] == -1.0);  // clamped
}

TEST_CASE("decode_wav accepts the extensible fmt variant") {
  testutil::TempDir tmp("wav");
  const auto path = tmp.file("ext.wav");
  // fmt chunk of 40 bytes: format 0xFFFE + cbSize 22 + valid bits + mask + GUID
  // whose first two bytes carry the real format (1 = PCM).
  std::string fmt;
  put_u16(fmt, 0xfffe);
  put_u16(fmt, 1);
  put_u32(fmt, 44100);
  put_u32(fmt, 44100 * 2);
  put_u16(fmt, 2);
  put_u16(fmt, 16);
  put_u16(fmt, 22);      // cbSize
  put_u16(fmt, 16);      // valid bits
  put_u32(fmt, 0x4);     // channel mask
  put_u16(fmt, 1);       // sub-format tag: PCM
  fmt += std::string(14, '\0');
  const std::string payload = pcm16_payload({1000, -1000});
  std::string data = "RIFF";
  put_u32(data, static_cast<std::uint32_t>(4 + 8 + fmt.size() + 8 + payload.size()));
  data += "WAVE";
  data += "fmt ";
  put_u32(data, static_cast<std::uint32_t>(fmt.size()));
  data += fmt;
  data += "data";
  put_u32(data, static_cast<std::uint32_t>(payload.size()));
  data += payload;
  write_file(path, data);
  const WavData wav = decode_wav(path);
  REQUIRE(wav.channels.size() == 1);
  CHECK(wav.channels[0][0] == 1000.0 / 32768.0);
}

TEST_CASE("decode_wav skips unknown chunks before data") {
  testutil::TempDir tmp("wav");
  const auto path = tmp.file("listed.wav");
  std::string fmt;
  put_u16(fmt, 1);
  put_u16(fmt, 1);
  put_u32(fmt, 44100);
  put_u32(fmt, 44100 * 2);
  put_u16(fmt, 2);
  put_u16(fmt, 16);
  const std::string payload = pcm16_payload({123});
  std::string data = "RIFF";
  const std::string list = "LIST";
  const std::string listbody = "INFOsoft";
  put_u32(data, static_cast<std::uint32_t>(4 + 8 + fmt.size() + 8 + listbody.size() + 8 +
                                           payload.size()));
  data += "WAVE";
  data += "fmt ";
  put_u32(data, static_cast<std::uint32_t>(fmt.size()));
  data += fmt;
  data += list;
  put_u32(data, static_cast<std::uint32_t>(listbody.size()));
  data += listbody;
  data += "data";
  put_u32(data, static_cast<std::uint32_t>(payload.size()));
  data += payload;
  write_file(path, data);
  const WavData wav = decode_wav(path);
  REQUIRE(wav.channels.size() == 1);
  CHECK(wav.channels[0][0] == 123.0 / 32768.0);
}

TEST_CASE("decode_wav classifies failures") {
  testutil::TempDir tmp("wav");

  Errc code = Errc::config;
  try {
    decode_wav(tmp.file("absent.wav"));
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::io);

  const auto bad_magic = tmp.file("bad.wav");
  write_file(bad_magic, "OGGSxxxxxxxxxxxxxxxxxxx");
  code = Errc::config;
  try {
    decode_wav(bad_magic);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::format);

  const auto alaw = tmp.file("alaw.wav");
  write_file(alaw, wav_bytes(6, 1, 8000, 8, std::string(8, 'x')));
  code = Errc::config;
  try {
    decode_wav(alaw);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::unsupported);

  const auto pcm24 = tmp.file("pcm24.wav");
  write_file(pcm24, wav_bytes(1, 1, 44100, 24, std::string(6, 'x')));
  code = Errc::config;
  try {
    decode_wav(pcm24);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::unsupported);

  const auto truncated = tmp.file("short.wav");
  const std::string whole = wav_bytes(1, 1, 44100, 16, pcm16_payload({1, 2, 3, 4}));
  write_file(truncated, whole.substr(0, whole.size() - 5));
  code = Errc::config;
  try {
    decode_wav(truncated);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == Errc::format);
}

TEST_CASE("to_mono averages channels elementwise") {
  const std::vector<std::vector<double>> stereo{{0.2, 0.4, -0.6}, {0.4, 0.0, -0.2}};
  const auto mono = to_mono(stereo);
  REQUIRE(mono.size() == 3);
  CHECK(mono[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(mono[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(mono[2] == doctest::Approx(-0.4).epsilon(1e-15));

  const std::vector<std::vector<double>> single{{0.5, -0.5}};
  const auto same = to_mono(single);
  CHECK(same == single[0]);

  CHECK_THROWS_AS(to_mono({}), Error);
}

TEST_CASE("fix_length pads with zeros or truncates the tail") {
  std::vector<double> shorter{1.0, 2.0, 3.0};
  const auto padded = fix_length(shorter, 4, 1.5);  // wants 6 samples
  REQUIRE(padded.size() == 6);
  CHECK(padded[2] == 3.0);
  CHECK(padded[3] == 0.0);
  CHECK(padded[5] == 0.0);

  std::vector<double> longer{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  const auto cut = fix_length(longer, 4, 1.0);
  REQUIRE(cut.size() == 4);
  CHECK(cut[0] == 1.0);
  CHECK(cut[3] == 4.0);

  std::vector<double> exact{1.0, 2.0};
  CHECK(fix_length(exact, 2, 1.0) == exact);
}

TEST_CASE("pcm16 writer round-trips through the decoder") {
  testutil::TempDir tmp("wav");
  const auto path = tmp.file("roundtrip.wav");
  std::vector<double> samples{0.0, 0.25, -0.25, 0.999969482421875, -1.0, 0.5};
  write_wav_pcm16(path, samples, 44100);
  const WavData wav = decode_wav(path);
  CHECK(wav.sample_rate == 44100);
  REQUIRE(wav.channels.size() == 1);
  REQUIRE(wav.channels[0].size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(wav.channels[0][i] == doctest::Approx(samples[i]).epsilon(1e-4));
  }
  // Values already on the 16-bit grid survive exactly.
  CHECK(wav.channels[0][0] == 0.0);
  CHECK(wav.channels[0][3] == 0.999969482421875);
  CHECK(wav.channels[0][4] == -1.0);
}
