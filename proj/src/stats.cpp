#include "tsa/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "tsa/errors.hpp"

namespace tsa {

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("sample_mean: empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

namespace {

double sum_sq_dev(std::span<const double> xs) {
  const double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s;
}

}  // namespace

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) {
    if (xs.empty()) throw ConfigError("sample_variance: empty sample");
    return 0.0;
  }
  return sum_sq_dev(xs) / static_cast<double>(xs.size() - 1);
}

double population_variance(std::span<const double> xs) {
  return sum_sq_dev(xs) / static_cast<double>(xs.size());
}

Estimate t_interval(std::span<const double> xs, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("t_interval: confidence must lie in (0,1)");
  }
  const double m = sample_mean(xs);
  const std::size_t n = xs.size();
  if (n < 2) return {m, std::numeric_limits<double>::infinity(), n};
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  return {m, t * std::sqrt(sample_variance(xs) / static_cast<double>(n)), n};
}

Estimate collapsed_strata_interval(std::span<const double> xs, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("collapsed_strata_interval: confidence must lie in (0,1)");
  }
  const double m = sample_mean(xs);
  const std::size_t n = xs.size();
  if (n < 4) return t_interval(xs, confidence);
  // Adjacent pairs; an odd tail joins the last pair.
  const std::size_t groups = n / 2;
  double v = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t begin = 2 * g;
    const std::size_t size = g + 1 == groups ? n - begin : 2;
    const auto part = xs.subspan(begin, size);
    const double gm = sample_mean(part);
    double ss = 0.0;
    for (double x : part) ss += (x - gm) * (x - gm);
    v += static_cast<double>(size) / static_cast<double>(size - 1) * ss;
  }
  v /= static_cast<double>(n) * static_cast<double>(n);
  const boost::math::students_t dist(static_cast<double>(groups));
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  return {m, t * std::sqrt(v), n};
}

std::vector<double> batch_means(std::span<const double> series, std::size_t batches) {
  if (batches == 0 || series.size() < batches) {
    throw ConfigError("batch_means: need at least one point per batch");
  }
  const std::size_t len = series.size() / batches;
  std::vector<double> out;
  out.reserve(batches);
  for (std::size_t b = 0; b < batches; ++b) out.push_back(sample_mean(series.subspan(b * len, len)));
  return out;
}

}  // namespace tsa
