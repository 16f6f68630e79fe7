#include "tsa/lambert_w.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

constexpr double kBranchPoint = -1.0 / std::numbers::e;

double initial_guess(double x) {
  // Series about the branch point in p = sqrt(2(e x + 1)).
  if (x < -0.25) {
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < 3.0) return std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  // Allow a few ulps of slack at the branch point.
  if (x < kBranchPoint) {
    if (x > kBranchPoint - 4.0 * std::numeric_limits<double>::epsilon()) return -1.0;
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (std::isinf(x)) return x;
  if (x == 0.0) return 0.0;
  if (x == kBranchPoint) return -1.0;

  double w = initial_guess(x);
  // Halley iteration on w e^w - x.
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 2.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace tsa
