#include "tsa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/distributions/poisson.hpp>

#include "tsa/errors.hpp"
#include "tsa/parallel.hpp"
#include "tsa/sim_kernel.hpp"

namespace tsa {

std::string_view to_string(InitialAges mode) {
  switch (mode) {
    case InitialAges::NearStationary: return "near-stationary";
    case InitialAges::Fresh: return "fresh";
    case InitialAges::Stale: return "stale";
  }
  return "unknown";
}

void SimConfig::validate(const NetworkConfig& config) const {
  if (!(warmup_slots >= 0)) throw ConfigError("simulation: warmup_slots must be >= 0");
  if (!(slots > warmup_slots)) throw ConfigError("simulation: slots must exceed warmup_slots");
  if (replications == 0) throw ConfigError("simulation: replications must be >= 1");
  if (!(window_side > 2.0 * config.r()) || !std::isfinite(window_side)) {
    throw ConfigError("simulation: window side must exceed 2r (got " + std::to_string(window_side) + ")");
  }
  if (batches == 0) throw ConfigError("simulation: batches must be >= 1");
}

SimConfig SimConfig::paper_scale() {
  SimConfig sim;
  sim.window_side = 100.0;
  sim.slots = 1'000'000;
  return sim;
}

namespace {

std::seed_seq replication_seed(std::uint64_t seed, std::size_t replication) {
  const auto rep = static_cast<std::uint64_t>(replication);
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
}

}  // namespace

World::World(const NetworkConfig& config, const ProtocolParams& params, const SimConfig& sim,
             std::size_t replication)
    : config_(config), params_(params), side_(sim.window_side), torus_(sim.torus) {
  params_.validate();
  sim.validate(config_);
  auto seq = replication_seed(sim.seed, replication);
  rng_.seed(seq);

  std::size_t others = 0;
  if (sim.forced_link_count) {
    others = *sim.forced_link_count;
  } else {
    const double mean = config_.lambda() * side_ * side_;
    if (mean > 0.0 && sim.stratify_link_count && sim.replications > 1) {
      using Policy = boost::math::policies::policy<
          boost::math::policies::discrete_quantile<boost::math::policies::integer_round_up>>;
      const boost::math::poisson_distribution<double, Policy> law(mean);
      const double u = (static_cast<double>(replication % sim.replications) +
                        std::uniform_real_distribution<double>(0.0, 1.0)(rng_)) /
                       static_cast<double>(sim.replications);
      others = static_cast<std::size_t>(boost::math::quantile(law, u));
    } else if (mean > 0.0) {
      others = static_cast<std::size_t>(std::poisson_distribution<std::int64_t>(mean)(rng_));
    }
  }

  const double a = params_.age_threshold;
  std::int64_t age_hi = 1;
  switch (sim.initial_ages) {
    case InitialAges::NearStationary: {
      const double p = solve_branch(config_, params_, Branch::High);
      const double mean_peak = a + 1.0 / (params_.eta * p);
      age_hi = static_cast<std::int64_t>(std::min(std::ceil(mean_peak), 1e15));
      break;
    }
    case InitialAges::Fresh: age_hi = 1; break;
    case InitialAges::Stale: age_hi = static_cast<std::int64_t>(std::floor(a)) + 1; break;
  }

  const Point centre{side_ / 2.0, side_ / 2.0};
  links_.resize(others + 1);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    auto& l = links_[i];
    l.is_typical = i == 0;
    if (sim.initial_ages == InitialAges::NearStationary) {
      l.age = std::uniform_int_distribution<std::int64_t>(1, std::max<std::int64_t>(1, age_hi))(rng_);
    } else {
      l.age = age_hi;
    }
    if (l.is_typical) {
      l.rx = centre;
      l.tx = partner(centre);
    } else {
      l.tx = random_position();
      l.rx = partner(l.tx);
    }
  }
  outcomes_.resize(links_.size());
}

Point World::random_position() {
  std::uniform_real_distribution<double> u(0.0, side_);
  const double x = u(rng_);
  return {x, u(rng_)};
}

Point World::partner(const Point& from) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double phi = angle(rng_);
  return {from.x + config_.r() * std::cos(phi), from.y + config_.r() * std::sin(phi)};
}

Point World::offset(const Point& from, const Point& to) const {
  double dx = std::abs(from.x - to.x);
  double dy = std::abs(from.y - to.y);
  if (torus_) {
    dx = std::fmod(dx, side_);
    dy = std::fmod(dy, side_);
    dx = std::min(dx, side_ - dx);
    dy = std::min(dy, side_ - dy);
  }
  return {dx, dy};
}

double World::path_gain(const Point& from, const Point& to) const {
  const auto [dx, dy] = offset(from, to);
  return std::pow(dx * dx + dy * dy, -config_.alpha() / 2.0);
}

SlotOutcome World::step() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> fade(1.0);
  const double a = params_.age_threshold;
  const double eta = params_.eta;

  active_.clear();
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const bool open = static_cast<double>(links_[i].age) > a;
    const bool attempt = open && (eta >= 1.0 || unit(rng_) < eta);
    outcomes_[i] = {links_[i].age, attempt, false, std::numeric_limits<double>::quiet_NaN()};
    if (attempt) active_.push_back(i);
  }

  links_[0].tx = partner(links_[0].rx);
  for (std::size_t i = 1; i < links_.size(); ++i) {
    links_[i].tx = random_position();
    links_[i].rx = partner(links_[i].tx);
  }

  const double theta = config_.theta();
  const double noise = std::isinf(config_.rho()) ? 0.0 : 1.0 / config_.rho();
  const double signal_gain = std::pow(config_.r(), -config_.alpha());
  const double link_scale = theta / signal_gain;  // theta r^alpha
  const double clear_channel = std::exp(-config_.noise_term());

  for (std::size_t i : active_) {
    if (i == 0) {
      // Typical link: explicit fades on every path into the centre receiver.
      double interference = 0.0;
      for (std::size_t j : active_) {
        if (j != 0) interference += fade(rng_) * path_gain(links_[j].tx, links_[0].rx);
      }
      const double sinr = fade(rng_) * signal_gain / (interference + noise);
      outcomes_[0].sinr = sinr;
      outcomes_[0].success = sinr > theta;
    } else {
      // Other links: the fades average out in closed form given the positions,
      // leaving one Bernoulli draw per attempt.
      dx_.clear();
      dy_.clear();
      for (std::size_t j : active_) {
        if (j == i) continue;
        const auto [ox, oy] = offset(links_[j].tx, links_[i].rx);
        dx_.push_back(ox);
        dy_.push_back(oy);
      }
      const double p =
          clear_channel * detail::rayleigh_survival(dx_.data(), dy_.data(), dx_.size(), link_scale, config_.alpha());
      outcomes_[i].success = unit(rng_) < p;
    }
  }

  for (std::size_t i = 0; i < links_.size(); ++i) {
    links_[i].age = outcomes_[i].success ? 1 : links_[i].age + 1;
  }
  ++slot_;
  return outcomes_[0];
}

namespace {

struct Welford {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 0 ? m2 / static_cast<double>(n) : 0.0; }
};

struct Tally {
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  double peak_sum = 0.0;
  Welford age;

  void add(const SlotOutcome& o) {
    age.add(static_cast<double>(o.age));
    if (!o.attempted) return;
    ++attempts;
    if (o.success) {
      ++successes;
      peak_sum += static_cast<double>(o.age);
    }
  }

  double p_s() const {
    return attempts > 0 ? static_cast<double>(successes) / static_cast<double>(attempts)
                        : std::numeric_limits<double>::quiet_NaN();
  }
  double peak() const {
    return successes > 0 ? peak_sum / static_cast<double>(successes) : std::numeric_limits<double>::quiet_NaN();
  }
};

struct ReplicationOutput {
  Tally total;
  std::vector<Tally> batches;
  std::vector<SlotRecord> trace;
};

ReplicationOutput run_replication(const NetworkConfig& config, const ProtocolParams& params,
                                  const SimConfig& sim, std::size_t rep) {
  World world(config, params, sim, rep);
  for (std::int64_t t = 0; t < sim.warmup_slots; ++t) world.step();

  const std::int64_t measured = sim.slots - sim.warmup_slots;
  const std::size_t nb = std::min<std::size_t>(sim.batches, static_cast<std::size_t>(measured));
  const std::int64_t batch_len = measured / static_cast<std::int64_t>(nb);

  ReplicationOutput out;
  out.batches.resize(nb);
  const bool keep_trace = sim.record_trace && rep == 0;
  if (keep_trace) out.trace.reserve(static_cast<std::size_t>(measured));
  for (std::int64_t t = 0; t < measured; ++t) {
    const SlotOutcome o = world.step();
    out.total.add(o);
    const auto b = static_cast<std::size_t>(t / batch_len);
    if (b < nb) out.batches[b].add(o);
    if (keep_trace) out.trace.push_back({sim.warmup_slots + t, o.age, o.attempted, o.success, o.sinr});
  }
  return out;
}

Estimate summarise(const std::vector<const Tally*>& tallies, double (*metric)(const Tally&), bool stratified) {
  std::vector<double> xs;
  xs.reserve(tallies.size());
  for (const Tally* t : tallies) xs.push_back(metric(*t));
  return stratified ? collapsed_strata_interval(xs) : t_interval(xs);
}

}  // namespace

SimResult run_simulation(const NetworkConfig& config, const ProtocolParams& params, const SimConfig& sim) {
  params.validate();
  sim.validate(config);

  auto reps = parallel_map(sim.replications, sim.threads,
                           [&](std::size_t rep) { return run_replication(config, params, sim, rep); });

  // Replication i sits in link-count stratum i, so neighbours are comparable.
  const bool stratified = reps.size() > 1 && sim.stratify_link_count && !sim.forced_link_count &&
                          config.lambda() > 0.0;
  std::vector<const Tally*> units;
  if (reps.size() == 1) {
    for (const auto& b : reps[0].batches) units.push_back(&b);
  } else {
    for (const auto& r : reps) units.push_back(&r.total);
  }

  SimResult res{};
  res.p_s_hat = summarise(units, [](const Tally& t) { return t.p_s(); }, stratified);
  res.peak_aoi_hat = summarise(units, [](const Tally& t) { return t.peak(); }, stratified);
  res.avg_aoi_hat = summarise(units, [](const Tally& t) { return t.age.mean; }, stratified);
  res.var_aoi_hat = summarise(units, [](const Tally& t) { return t.age.variance(); }, stratified);
  for (const auto& r : reps) {
    res.attempts += r.total.attempts;
    res.successes += r.total.successes;
  }
  res.replications = reps.size();

  const auto roots = fixed_point_roots(config, params);
  std::size_t best = 0;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (std::abs(roots[i] - res.p_s_hat.mean) < std::abs(roots[best] - res.p_s_hat.mean)) best = i;
  }
  res.nearest_root = roots[best];
  if (roots.size() == 3 && best == 1) res.nearest_branch = Branch::Middle;
  else if (roots.size() > 1 && best == 0) res.nearest_branch = Branch::Low;
  else res.nearest_branch = Branch::High;
  res.region = classify_region(config, params).region;
  res.trace = std::move(reps[0].trace);
  return res;
}

double estimate_variance_of_aoi(std::span<const double> ages) {
  if (ages.empty()) throw ConfigError("estimate_variance_of_aoi: empty trace");
  return population_variance(ages);
}

double estimate_variance_of_aoi(std::span<const SlotRecord> trace) {
  if (trace.empty()) throw ConfigError("estimate_variance_of_aoi: empty trace");
  Welford w;
  for (const auto& r : trace) w.add(static_cast<double>(r.age));
  return w.variance();
}

IntervalMoments update_interval_moments(std::span<const SlotRecord> trace, double age_threshold) {
  std::vector<double> js;
  std::vector<double> is;
  bool seen_delivery = false;
  bool seen_attempt = false;
  std::int64_t eligible = 0;
  for (const auto& r : trace) {
    if (static_cast<double>(r.age) > age_threshold) ++eligible;
    if (r.attempted) {
      if (seen_attempt) is.push_back(static_cast<double>(eligible));
      seen_attempt = true;
      eligible = 0;
    }
    if (r.success) {
      if (seen_delivery) js.push_back(static_cast<double>(r.age));
      seen_delivery = true;
    }
  }
  if (js.empty()) throw ConfigError("update_interval_moments: need at least two deliveries");

  auto second_moment = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x * x;
    return s / static_cast<double>(xs.size());
  };
  const Estimate j = t_interval(js);
  const Estimate i = is.empty() ? Estimate{std::numeric_limits<double>::quiet_NaN(), 0.0, 0} : t_interval(is);
  return {j.mean,
          second_moment(js),
          i.mean,
          is.empty() ? std::numeric_limits<double>::quiet_NaN() : second_moment(is),
          j.halfwidth,
          i.halfwidth,
          js.size(),
          is.size()};
}

}  // namespace tsa
