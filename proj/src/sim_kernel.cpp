#include "tsa/sim_kernel.hpp"

#include <cmath>

namespace tsa::detail {

double rayleigh_survival(const double* dx, const double* dy, std::size_t n, double scale, double alpha) {
  const double half = -alpha / 2.0;
  double acc = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d2 = dx[j] * dx[j] + dy[j] * dy[j];
    acc *= 1.0 / (1.0 + scale * std::exp(half * std::log(d2)));
  }
  return acc;
}

}  // namespace tsa::detail
