#pragma once

#include <functional>
#include <vector>

namespace sirenelm {

struct TimingProtocol {
  int warmup = 3;    // untimed repetitions before measuring
  int repeats = 10;  // timed repetitions; the median is the reported statistic
};

struct TimingResult {
  int warmup = 0;
  int repeats = 0;
  std::vector<double> durations_ms;
  double median_ms = 0.0;
};

double median(std::vector<double> values);

// Runs `fn` warmup + repeats times on a steady clock and reports the median.
TimingResult time_region(const std::function<void()>& fn, const TimingProtocol& protocol);

}  // namespace sirenelm
