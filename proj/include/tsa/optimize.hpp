#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tsa/network.hpp"

namespace tsa {

/// Which piece of a piecewise optimum produced a result.
enum class OptRegime {
  NoThreshold,    // A* = 0 at the given update rate
  Threshold,      // A* > 0 at the given update rate
  ReducedRate,    // eta* < 1 at the given threshold
  FullRate,       // eta* = 1 at the given threshold
  SaOptimal,      // joint optimum is plain ALOHA at full rate, (0, 1)
  JointFamily,    // joint peak optimum attained on a one-parameter family
  ClosedForm,     // closed-form (asymptotically exact) joint average optimum
  ExactFallback,  // closed form unavailable, exact single-knob solution used
  Alternating,    // alternating single-knob optimisation
  SafeBoundary,   // constrained to the monostable side of the bistable region
};

std::string_view to_string(OptRegime r);

enum class Objective { Peak, Average };

struct OptResult {
  double a_star;
  double eta_star;
  double objective;
  OptRegime regime;
  double p_s_at_opt;
};

/// Largest fixed-point root at eta = 1 for threshold A (the p_{s,*} of the
/// single-knob update-rate optima).
double unit_rate_success(const NetworkConfig& config, double age_threshold);

/// Optimal update rate for the mean peak AoI at a fixed threshold.
OptResult opt_eta_peak(const NetworkConfig& config, double age_threshold);

/// Optimal threshold for the mean peak AoI at a fixed update rate.
OptResult opt_a_peak(const NetworkConfig& config, double eta);

struct JointPeakResult {
  /// The eta = eta_max member of the optimal family (or (0,1) when sparse).
  OptResult result;
  double eta_min;
  double eta_max;
  double lambda_cr2;
  double noise_term;

  /// A_1(eta) = (lambda c r^2 - 1/eta) exp(1 + K) for eta in [eta_min, eta_max].
  double threshold_for(double eta) const;
};

/// Joint (A, eta) optimum of the mean peak AoI.
JointPeakResult opt_joint_peak(const NetworkConfig& config);

/// Optimal update rate for the time-average AoI at a fixed threshold.
OptResult opt_eta_avg(const NetworkConfig& config, double age_threshold);

/// Optimal threshold for the time-average AoI at a fixed update rate, solving
/// the stationarity condition by bisection in u = 1 + A eta p_s.
OptResult opt_a_avg(const NetworkConfig& config, double eta);

/// Stationarity residual of the time-average AoI in u = 1 + A eta p_s:
/// u^3 - x u^2 + (eta exp(-x/u - K) - 1) u - x with x = lambda c r^2 eta.
double avg_threshold_stationarity(const NetworkConfig& config, double eta, double u);

/// Omega = x^3 + 18x + 3 sqrt(3) sqrt(x^4 + 11x^2 - 1). Throws DomainError
/// when the discriminant is negative (x below ~0.3003).
double omega_surd(double x);

struct SuboptimalThreshold {
  double a_tilde;
  double objective;
  double omega;
  double u;     // 1 + A eta p_s at the suboptimal threshold
  double p_s;
};

/// Closed-form threshold minimising the time-average AoI bounds, with the
/// AoI it attains. Its gap to the exact optimum stays below half a slot.
SuboptimalThreshold subopt_a_avg_closed(const NetworkConfig& config, double eta);

inline constexpr std::uint64_t kDefaultOptimizerSeed = 0x7a5a'2024ULL;

struct AlternatingResult {
  OptResult result;
  double eta_start;
  std::size_t rounds;
  /// Objective after every half-step, threshold step first.
  std::vector<double> objective_trace;
};

/// Alternates the exact single-knob optima (threshold, then rate) from a
/// random initial rate until successive objectives differ by less than tol.
/// Throws ConvergenceError (with the trace) after max_rounds.
AlternatingResult alternating_optimize_avg(const NetworkConfig& config, double tol = 1e-9,
                                           std::size_t max_rounds = 10'000,
                                           std::uint64_t seed = kDefaultOptimizerSeed);

/// Same, from an explicit initial rate in (0,1].
AlternatingResult alternating_optimize_avg_from(const NetworkConfig& config, double eta_start,
                                                double tol = 1e-9,
                                                std::size_t max_rounds = 10'000);

/// Closed-form joint optimum of the time-average AoI (eta* = 1).
OptResult opt_joint_avg(const NetworkConfig& config);

enum class Protocol { SA, TSA };
std::string_view to_string(Protocol p);

struct ScalingPoint {
  double lambda_cr2;
  double avg_objective;   // optimal time-average AoI
  double peak_objective;  // optimal mean peak AoI
  double a_star;          // threshold at the time-average optimum
  double eta_star;
  double avg_ratio;       // avg_objective / lambda c r^2
  double peak_ratio;
  double threshold_ratio; // a_star / lambda c r^2
};

/// Optimal AoI along a sweep of interference levels for an interference-limited
/// network (rho must be infinite). Each level is realised by rescaling lambda.
std::vector<ScalingPoint> scaling_limits(const NetworkConfig& base, const std::vector<double>& levels,
                                         Protocol protocol);

/// Interference-rate product x = lambda c r^2 eta at which the peak-optimal
/// family A_1(eta) meets the bistable boundary A_h(eta). Independent of the
/// noise term; approximately 4.3509.
double peak_family_crossing();

struct SafePeakResult {
  OptResult result;
  double eta_min;
  double eta_max;
  bool has_safe_optimum;
};

/// Peak-optimal family restricted to rates whose point stays out of the
/// bistable region. `result` is the eta_max member.
SafePeakResult safe_peak_params(const NetworkConfig& config);

/// A_h extended to x = lambda c r^2 eta >= 4 (x == 4 gives the merge point).
double high_threshold_at(const NetworkConfig& config, double eta);

/// Time-average AoI on the curve A = A_h(eta), evaluated with the high root.
double high_boundary_average(const NetworkConfig& config, double eta);

/// Analytic d/d eta of the time-average AoI along A = A_h(eta).
double high_boundary_average_gradient(const NetworkConfig& config, double eta);

struct SafeAvgResult {
  OptResult result;
  double eta_min;
  double gradient;      // analytic gradient at the returned rate
  bool at_interval_edge;
};

/// Minimises the time-average AoI along A = A_h(eta), eta in [4/(lambda c r^2), 1],
/// by Brent's method. Requires the unconstrained optimum to be bistable;
/// throws PreconditionError otherwise.
SafeAvgResult safe_avg_params(const NetworkConfig& config, double eta_tol = 1e-10);

struct RoundedThreshold {
  std::int64_t age_threshold;
  double objective;
};

/// Picks floor(A) or ceil(A), whichever gives the smaller objective at rate eta
/// (high root).
RoundedThreshold round_age_threshold(const NetworkConfig& config, double eta, double age_threshold,
                                     Objective objective);

}  // namespace tsa
