#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace misinfo {

/// Empirical mean and (population, 1/n) standard deviation.
struct SampleStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;

  /// Standard error of the mean.
  double std_error() const {
    return count == 0 ? 0.0 : std / std::sqrt(static_cast<double>(count));
  }
};

inline SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

}  // namespace misinfo
