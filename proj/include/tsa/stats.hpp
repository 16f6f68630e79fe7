#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsa {

double sample_mean(std::span<const double> xs);

/// Unbiased sample variance; 0 for a single sample. Throws ConfigError when empty.
double sample_variance(std::span<const double> xs);

/// Population (1/n) variance of a time series.
double population_variance(std::span<const double> xs);

struct Estimate {
  double mean;
  double halfwidth;  // two-sided Student-t confidence halfwidth
  std::size_t samples;
};

/// Mean with a Student-t confidence halfwidth at the given two-sided level.
/// A single sample yields an infinite halfwidth.
Estimate t_interval(std::span<const double> xs, double confidence = 0.95);

/// Mean and halfwidth for one observation per stratum, strata in order.
/// Adjacent strata are collapsed into pairs (an odd tail joins the last pair)
/// and the variance comes from within-pair spread, with one degree of freedom
/// per pair. Falls back to t_interval below four observations.
Estimate collapsed_strata_interval(std::span<const double> xs, double confidence = 0.95);

/// Means of `batches` contiguous equal-length batches (the remainder is
/// dropped). Throws ConfigError if there are fewer points than batches.
std::vector<double> batch_means(std::span<const double> series, std::size_t batches);

}  // namespace tsa
