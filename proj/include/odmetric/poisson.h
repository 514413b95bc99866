#pragma once

#include <cstdint>

namespace odmetric {

struct RateInterval {
  double lower_per_h = 0.0;
  double upper_per_h = 0.0;
};

// Exact (Garwood) two-sided interval for a Poisson rate observed as `count`
// events over `hours` of exposure. The lower bound is 0 for a zero count.
RateInterval FpRateInterval(std::uint64_t count, double hours, double confidence);

}  // namespace odmetric
