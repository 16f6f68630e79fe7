#pragma once

#include "tsa/fixed_point.hpp"
#include "tsa/network.hpp"

namespace tsa {

// Closed-form AoI metrics at an operating point. They take p_s explicitly so
// the caller decides which root to evaluate in a bistable configuration.
// Preconditions for all of them: eta in (0,1], A >= 0, p_s in (0,1]; p_s == 0
// raises DomainError (age diverges).

/// Mean peak AoI, A + 1/(eta p_s).
double mean_peak_aoi(double age_threshold, double eta, double p_s);

/// Time-average AoI, (A+1)/2 + 1/(eta p_s) - (A+1)/(2(1 + A eta p_s)).
double time_average_aoi(double age_threshold, double eta, double p_s);

/// Peak and average AoI of plain slotted ALOHA, exp(lambda c r^2 eta + K)/eta.
double sa_baseline(const NetworkConfig& config, double eta);

struct AoiBounds {
  double lower;
  double upper;
};

/// Lower bound (A eta p + 1)/(2 eta p) + 1/(2 eta p (1 + A eta p)) on the
/// time-average AoI; the upper bound adds 1/2.
AoiBounds aoi_bounds(double age_threshold, double eta, double p_s);

/// Sufficient condition lambda c r^2 >= (1 + A eta p_s)/eta for TSA to beat SA
/// in mean peak AoI. A false result makes no claim.
bool tsa_beats_sa_peak(const NetworkConfig& config, const ProtocolParams& params, double p_s_tsa);

/// Sufficient condition lambda c r^2 >= (1+A)(1 + A eta p_s)/(2 A eta) for TSA
/// to beat SA in time-average AoI. Requires A > 0.
bool tsa_beats_sa_average(const NetworkConfig& config, const ProtocolParams& params, double p_s_tsa);

struct AoiReport {
  double peak;
  double average;
  double lower_bound;
  double upper_bound;
  double p_s_used;
  Branch branch_used;
  Region region;
  /// Set when the operating point is bistable and the report silently picked
  /// one of two attainable steady states.
  bool bistable_warning;
};

/// Resolves p_s on the requested branch (High by default) and evaluates all metrics.
AoiReport evaluate_aoi(const NetworkConfig& config, const ProtocolParams& params,
                       Branch branch = Branch::High);

}  // namespace tsa
