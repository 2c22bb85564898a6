#include "sirenelm/timing.hpp"

#include <algorithm>
#include <chrono>

#include "sirenelm/errors.hpp"

namespace sirenelm {

double median(std::vector<double> values) {
  if (values.empty()) fail(Errc::empty_input, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

TimingResult time_region(const std::function<void()>& fn, const TimingProtocol& protocol) {
  if (protocol.warmup < 0) fail(Errc::config, "warmup count must be non-negative");
  if (protocol.repeats < 1) fail(Errc::config, "at least one timed repetition is required");

  for (int i = 0; i < protocol.warmup; ++i) fn();

  TimingResult result;
  result.warmup = protocol.warmup;
  result.repeats = protocol.repeats;
  result.durations_ms.reserve(static_cast<std::size_t>(protocol.repeats));
  for (int i = 0; i < protocol.repeats; ++i) {
    const auto begin = std::chrono::steady_clock::now();
    fn();
    const auto end = std::chrono::steady_clock::now();
    result.durations_ms.push_back(
        std::chrono::duration<double, std::milli>(end - begin).count());
  }
  result.median_ms = median(result.durations_ms);
  return result;
}

}  // namespace sirenelm
