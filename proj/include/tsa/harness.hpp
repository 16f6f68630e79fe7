#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsa/csv.hpp"
#include "tsa/fixed_point.hpp"
#include "tsa/network.hpp"
#include "tsa/optimize.hpp"
#include "tsa/simulator.hpp"

namespace tsa {

/// All scalar inputs of one operating point, linear units.
struct PointParams {
  double lambda = 0.01;
  double r = 3.0;
  double theta = 1.0;
  double rho = 100.0;
  double alpha = 3.8;
  double eta = 1.0;
  double age_threshold = 0.0;

  NetworkConfig network() const { return {lambda, r, theta, rho, alpha}; }
  ProtocolParams protocol() const { return {eta, age_threshold}; }

  /// Sets a parameter by name: lambda, r, theta, rho, alpha, eta, A.
  /// Throws ConfigError for an unknown name.
  void set(std::string_view name, double value);
};

enum class SweepMode { Analytic, Simulated, Both };

std::string_view to_string(SweepMode m);
SweepMode parse_sweep_mode(std::string_view text);

struct SweepSpec {
  /// Swept parameter and its values.
  std::string parameter = "A";
  std::vector<double> values;
  /// Optional outer axis (one curve per value); empty means a single curve.
  std::string series_parameter;
  std::vector<double> series;
  PointParams base;
  SweepMode mode = SweepMode::Analytic;
  SimConfig sim;
  Branch branch = Branch::High;
  std::size_t threads = 0;

  /// Throws ConfigError when the sweep is empty or names an unknown parameter.
  void validate() const;
  /// Cartesian product in output order: series outer, values inner.
  std::vector<PointParams> points() const;
};

/// start, start+step, ... up to stop (inclusive within half a step).
std::vector<double> linear_range(double start, double stop, double step);

/// Named figure presets: fig4 (ps-sweep), fig5a, fig5b, fig6 (aoi-sweep).
SweepSpec preset(std::string_view name);
std::vector<std::string> preset_names();

/// Success-probability sweep: roots per branch, region, optional simulated p_s.
CsvTable ps_sweep_table(const SweepSpec& spec);

/// AoI sweep on the chosen branch: peak, average, bounds, plain ALOHA
/// reference, optional simulated peak/average.
CsvTable aoi_sweep_table(const SweepSpec& spec);

/// Stability classification per point.
CsvTable regions_table(const SweepSpec& spec);

/// Optimal AoI versus interference level for each protocol (rho = inf).
CsvTable scaling_table(const PointParams& base, const std::vector<double>& levels,
                       const std::vector<Protocol>& protocols);

/// Optimal time-average AoI versus density: plain ALOHA, alternating
/// optimisation and the closed form side by side.
CsvTable gain_table(const PointParams& base, const std::vector<double>& lambdas, double tol,
                    std::size_t max_rounds, std::size_t threads = 0);
/// Densities of the default gain sweep (theta = 0 dB, rho = 20 dB, alpha = 3.8, r = 3).
std::vector<double> gain_preset_lambdas();

enum class OptTarget { Peak, Average };
enum class OptMode { FixedA, FixedEta, Joint, Safe };

OptTarget parse_opt_target(std::string_view text);
OptMode parse_opt_mode(std::string_view text);

/// One row per method; the average-joint mode reports the alternating
/// optimisation and the closed form side by side.
CsvTable optimize_table(const PointParams& point, OptTarget target, OptMode mode, double tol,
                        std::size_t max_rounds, std::uint64_t seed);

/// Simulation row with analytic references and agreement flags.
CsvTable simulate_table(const PointParams& point, const SimConfig& sim, const SimResult& result);

/// Typical-link trace as CSV: slot, age, attempted, success, sinr.
CsvTable trace_table(const std::vector<SlotRecord>& trace);

Branch parse_branch(std::string_view text);
InitialAges parse_initial_ages(std::string_view text);

}  // namespace tsa
