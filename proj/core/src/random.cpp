#include "fa4p/random.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <numbers>

#include "fa4p/errors.hpp"

namespace fa4p {

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::Domain, "normal quantile needs p in (0, 1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace fa4p
