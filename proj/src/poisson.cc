#include "odmetric/poisson.h"

#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace odmetric {

RateInterval FpRateInterval(std::uint64_t count, double hours, double confidence) {
  if (!(hours > 0.0)) throw std::invalid_argument("exposure hours must be > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must be in (0,1)");
  }
  const double tail = (1.0 - confidence) / 2.0;
  const double k = static_cast<double>(count);
  RateInterval interval;
  // Chi-square bounds expressed through the regularized gamma inverse:
  // chi2(q; 2k) / 2 == gamma_p_inv(k, q).
  interval.lower_per_h = count == 0 ? 0.0 : boost::math::gamma_p_inv(k, tail) / hours;
  interval.upper_per_h = boost::math::gamma_q_inv(k + 1.0, tail) / hours;
  return interval;
}

}  // namespace odmetric
