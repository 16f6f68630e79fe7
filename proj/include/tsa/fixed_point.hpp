#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tsa/network.hpp"

namespace tsa {

/// Root of the success-probability fixed point, ordered by value. `Low` is the
/// smallest root and `High` the largest; in a monostable configuration both
/// name the same unique root. `Middle` exists only when there are three roots.
enum class Branch { Low, Middle, High };

enum class Region { Bistable, MonoHigh, MonoLow, Boundary };

std::string_view to_string(Branch b);
std::string_view to_string(Region r);

/// Solver tolerances shared by the analytic routines.
inline constexpr double kRootResidualTol = 1e-12;
inline constexpr double kIterationTol = 1e-10;
inline constexpr double kBoundaryRelTol = 1e-6;

/// Auxiliary form f(p) = -ln p - M/(N+p) - K of the fixed-point equation,
/// with M = lambda c r^2 / A, N = 1/(A eta), K = theta r^alpha / rho.
/// Its zeros in (0,1] coincide with the fixed points; only defined for A > 0.
struct FixedPointProblem {
  double m;
  double n;
  double k;

  /// Throws DomainError when A == 0.
  static FixedPointProblem from(const NetworkConfig& config, const ProtocolParams& params);

  double value(double p) const;
  /// Numerator of f'(p): phi(p) = -(p + N - M/2)^2 + M^2/4 - MN.
  double phi(double p) const;
  /// Zeros of phi (stationary points of f), ascending, if M > 4N.
  std::optional<std::pair<double, double>> stationary_points() const;
};

/// p - exp(-lambda c eta r^2 / (1 + A eta p) - K). Throws DomainError for p outside (0,1].
double fixed_point_residual(const NetworkConfig& config, const ProtocolParams& params, double p);

/// Right-hand side of the fixed-point map, exp(-lambda c eta r^2/(1 + A eta p) - K).
double fixed_point_map(const NetworkConfig& config, const ProtocolParams& params, double p);

struct IterationResult {
  double p_s;
  std::size_t iterations;
  std::vector<double> trajectory;  // p_1 = p0, p_2, ... ; empty unless requested
};

/// Runs p_{n+1} = map(p_n) from p0 until |p_{n+1} - p_n| < tol.
/// Throws ConvergenceError (carrying the last iterate) after max_iter steps.
IterationResult fixed_point_iterate(const NetworkConfig& config, const ProtocolParams& params,
                                    double p0, double tol = kIterationTol,
                                    std::size_t max_iter = 1'000'000,
                                    bool record_trajectory = false);

/// All roots of the fixed-point equation in (0,1], ascending. Near-tangent
/// double roots are reported once.
std::vector<double> fixed_point_roots(const NetworkConfig& config, const ProtocolParams& params);

/// Root on the requested branch, found by bracketed bisection on the
/// auxiliary function. Throws BranchNotPresent if the branch does not exist.
double solve_branch(const NetworkConfig& config, const ProtocolParams& params, Branch branch);

struct StabilityThresholds {
  double a_low;
  double a_high;
};

/// (A_l, A_h) bounding the bistable interval of the age threshold, or nullopt
/// when lambda c r^2 eta <= 4.
std::optional<StabilityThresholds> stability_thresholds(const NetworkConfig& config, double eta);

struct RegionClassification {
  Region region;
  std::optional<double> p_low;
  std::optional<double> p_middle;
  std::optional<double> p_high;
  std::optional<double> a_low;
  std::optional<double> a_high;

  /// Number of distinct roots attached.
  std::size_t root_count() const;
};

RegionClassification classify_region(const NetworkConfig& config, const ProtocolParams& params);

/// exp(sqrt(x^2 - 4x)) with x = lambda c r^2 eta: a strict lower bound on
/// p_H / p_L over the bistable region. Throws DomainError when x <= 4.
double bistable_ratio_bound(const NetworkConfig& config, double eta);

}  // namespace tsa
