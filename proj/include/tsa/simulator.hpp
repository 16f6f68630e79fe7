#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "tsa/fixed_point.hpp"
#include "tsa/network.hpp"
#include "tsa/stats.hpp"

namespace tsa {

/// How ages are initialised at the start of a replication.
enum class InitialAges {
  NearStationary,  // uniform on [1, ceil(A + 1/(eta p_H))]
  Fresh,           // every age 1: gates closed, steers towards the high state
  Stale,           // every gate open: steers towards the low state
};

std::string_view to_string(InitialAges mode);

struct SimConfig {
  double window_side = 50.0;
  std::int64_t slots = 100'000;  // total, warmup included
  std::int64_t warmup_slots = 10'000;
  std::uint64_t seed = 1;
  std::size_t replications = 8;
  /// Worker threads for replications; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  /// Minimum-image distances on a torus instead of the open window.
  bool torus = false;
  InitialAges initial_ages = InitialAges::NearStationary;
  /// Overrides the Poisson draw of the non-typical link count.
  std::optional<std::size_t> forced_link_count;
  /// Draw replication i's link count from the i-th of `replications` equal
  /// probability strata of the Poisson law (variance reduction; the pooled
  /// estimate stays unbiased and the across-replication CI conservative).
  bool stratify_link_count = true;
  /// Keep the post-warmup trace of the typical link of replication 0.
  bool record_trace = false;
  /// Batches used for confidence intervals when there is one replication.
  std::size_t batches = 20;

  /// Throws ConfigError unless slots > warmup_slots >= 0, replications >= 1 and
  /// window_side > 2 r.
  void validate(const NetworkConfig& config) const;

  /// 100 x 100 window and 10^6 slots.
  static SimConfig paper_scale();
};

struct Point {
  double x;
  double y;
};

struct LinkState {
  std::int64_t age;
  Point tx;
  Point rx;
  bool is_typical;
};

struct SlotOutcome {
  std::int64_t age;  // age during the slot, before the update
  bool attempted;
  bool success;
  double sinr;       // realised SINR for the typical link; NaN if it stayed silent
};

/// Post-warmup record of the typical link.
struct SlotRecord {
  std::int64_t slot;
  std::int64_t age;
  bool attempted;
  bool success;
  double sinr;
};

/// One replication's network. Link 0 is the typical link: receiver at the
/// window centre, transmitter at distance r.
class World {
 public:
  World(const NetworkConfig& config, const ProtocolParams& params, const SimConfig& sim,
        std::size_t replication);

  /// Advances one slot and returns the typical link's outcome.
  SlotOutcome step();

  const std::vector<LinkState>& links() const noexcept { return links_; }
  /// Outcomes of every link in the last slot, same order as links().
  const std::vector<SlotOutcome>& last_outcomes() const noexcept { return outcomes_; }
  std::int64_t slot() const noexcept { return slot_; }

 private:
  Point random_position();
  Point partner(const Point& tx);
  Point offset(const Point& from, const Point& to) const;
  double path_gain(const Point& from, const Point& to) const;

  NetworkConfig config_;
  ProtocolParams params_;
  double side_;
  bool torus_;
  std::mt19937_64 rng_;
  std::vector<LinkState> links_;
  std::vector<SlotOutcome> outcomes_;
  std::vector<std::size_t> active_;
  std::vector<double> dx_, dy_;
  std::int64_t slot_ = 0;
};

struct SimResult {
  Estimate p_s_hat;
  Estimate peak_aoi_hat;
  Estimate avg_aoi_hat;
  Estimate var_aoi_hat;
  std::int64_t attempts;
  std::int64_t successes;
  std::size_t replications;
  /// Analytic root nearest to p_s_hat, and its branch label.
  double nearest_root;
  Branch nearest_branch;
  Region region;
  std::vector<SlotRecord> trace;
};

SimResult run_simulation(const NetworkConfig& config, const ProtocolParams& params, const SimConfig& sim);

/// Population variance of an age series. Throws ConfigError on an empty trace.
double estimate_variance_of_aoi(std::span<const double> ages);
double estimate_variance_of_aoi(std::span<const SlotRecord> trace);

struct IntervalMoments {
  double mean_j;
  double second_moment_j;
  double mean_i;
  double second_moment_i;
  double halfwidth_j;  // 95% halfwidth of mean_j
  double halfwidth_i;
  std::size_t deliveries;
  std::size_t attempts;
};

/// Moments of the update interval J (age at delivery) and of I, the number of
/// eligible slots up to and including an attempt. Samples cut by the start of
/// the trace are dropped. Throws ConfigError with fewer than two deliveries.
IntervalMoments update_interval_moments(std::span<const SlotRecord> trace, double age_threshold);

}  // namespace tsa
