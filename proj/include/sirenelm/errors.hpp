#pragma once

#include <stdexcept>
#include <string>

namespace sirenelm {

// Error categories surfaced to callers; the CLI maps them onto exit codes.
enum class Errc {
  format,             // malformed container or header bytes
  unsupported,        // recognized but unsupported encoding or file version
  ingestion,          // a referenced input could not be loaded
  rate_mismatch,      // sample rate differs from the expected 44.1 kHz
  manifest,           // manifest missing required columns or values
  empty_input,
  too_short,
  domain,             // argument outside the mathematical domain
  config,
  dimension,
  state,              // operation called before its prerequisites
  insufficient_data,
  degenerate_data,    // e.g. a single-class training set
  numeric,            // non-finite values where finite ones are required
  io,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::format: return "format error";
    case Errc::unsupported: return "unsupported";
    case Errc::ingestion: return "ingestion error";
    case Errc::rate_mismatch: return "sample-rate mismatch";
    case Errc::manifest: return "manifest error";
    case Errc::empty_input: return "empty input";
    case Errc::too_short: return "input too short";
    case Errc::domain: return "domain error";
    case Errc::config: return "config error";
    case Errc::dimension: return "dimension mismatch";
    case Errc::state: return "invalid state";
    case Errc::insufficient_data: return "insufficient data";
    case Errc::degenerate_data: return "degenerate data";
    case Errc::numeric: return "numeric error";
    case Errc::io: return "i/o error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sirenelm
