#include "tsa/harness.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tsa/aoi.hpp"
#include "tsa/errors.hpp"
#include "tsa/parallel.hpp"

namespace tsa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kParamColumns{"lambda", "r", "theta", "rho", "alpha", "eta", "age_threshold"};

void add_params(CsvTable::RowBuilder& row, const PointParams& p) {
  row.add(p.lambda).add(p.r).add(p.theta).add(p.rho).add(p.alpha).add(p.eta).add(p.age_threshold);
}

std::vector<std::string> with_params(std::vector<std::string> tail) {
  std::vector<std::string> cols = kParamColumns;
  cols.insert(cols.end(), tail.begin(), tail.end());
  return cols;
}

void append(std::vector<std::string>& cols, std::initializer_list<const char*> more) {
  for (const char* c : more) cols.emplace_back(c);
}

bool wants_analytic(SweepMode m) { return m != SweepMode::Simulated; }
bool wants_simulated(SweepMode m) { return m != SweepMode::Analytic; }

// Runs the simulations of a sweep, one point per worker.
std::vector<std::optional<SimResult>> simulate_points(const SweepSpec& spec,
                                                      const std::vector<PointParams>& pts) {
  if (!wants_simulated(spec.mode)) return std::vector<std::optional<SimResult>>(pts.size());
  const bool outer = pts.size() > 1;
  return parallel_map(pts.size(), outer ? spec.threads : 1, [&](std::size_t i) {
    SimConfig sim = spec.sim;
    sim.seed = spec.sim.seed + i;
    sim.threads = outer ? 1 : spec.threads;
    return std::optional<SimResult>(run_simulation(pts[i].network(), pts[i].protocol(), sim));
  });
}

struct RootSet {
  double low = kNaN;
  double middle = kNaN;
  double high = kNaN;
  std::size_t count = 0;
};

RootSet root_set(const PointParams& p) {
  const auto roots = fixed_point_roots(p.network(), p.protocol());
  RootSet s;
  s.count = roots.size();
  s.low = roots.front();
  s.high = roots.back();
  if (roots.size() == 3) s.middle = roots[1];
  return s;
}

}  // namespace

void PointParams::set(std::string_view name, double value) {
  if (name == "lambda") lambda = value;
  else if (name == "r") r = value;
  else if (name == "theta") theta = value;
  else if (name == "rho") rho = value;
  else if (name == "alpha") alpha = value;
  else if (name == "eta") eta = value;
  else if (name == "A" || name == "age_threshold") age_threshold = value;
  else throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Analytic: return "analytic";
    case SweepMode::Simulated: return "simulated";
    case SweepMode::Both: return "both";
  }
  return "unknown";
}

SweepMode parse_sweep_mode(std::string_view text) {
  if (text == "analytic") return SweepMode::Analytic;
  if (text == "simulated") return SweepMode::Simulated;
  if (text == "both") return SweepMode::Both;
  throw ConfigError("unknown sweep mode '" + std::string(text) + "' (analytic, simulated, both)");
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep: no values to sweep");
  PointParams probe = base;
  probe.set(parameter, values.front());
  if (!series_parameter.empty()) {
    if (series.empty()) throw ConfigError("sweep: series parameter given without values");
    probe.set(series_parameter, series.front());
  }
}

std::vector<PointParams> SweepSpec::points() const {
  validate();
  std::vector<PointParams> out;
  const std::vector<double> outer = series_parameter.empty() ? std::vector<double>{kNaN} : series;
  for (double s : outer) {
    for (double v : values) {
      PointParams p = base;
      if (!series_parameter.empty()) p.set(series_parameter, s);
      p.set(parameter, v);
      // Validates the point eagerly so a bad sweep fails before any work.
      p.network();
      p.protocol().validate();
      out.push_back(p);
    }
  }
  return out;
}

std::vector<double> linear_range(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("range: step must be positive");
  if (!(stop >= start)) throw ConfigError("range: stop must be >= start");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

SweepSpec preset(std::string_view name) {
  SweepSpec s;
  s.base = PointParams{};
  s.base.theta = 1.0;
  s.base.rho = 100.0;
  s.base.alpha = 3.8;
  s.base.eta = 1.0;
  if (name == "fig4") {
    s.base.r = 3.0;
    s.parameter = "A";
    s.values = linear_range(0.0, 100.0, 1.0);
    s.series_parameter = "lambda";
    s.series = {0.001, 0.003, 0.005, 0.01};
  } else if (name == "fig5a" || name == "fig5b") {
    s.base.lambda = 0.02;
    s.base.r = 4.0;
    s.parameter = "eta";
    s.values = linear_range(0.01, 1.0, 0.01);
    s.series_parameter = "A";
    s.series = name == "fig5a" ? std::vector<double>{0.0, 10.0} : std::vector<double>{20.0, 50.0};
  } else if (name == "fig6") {
    s.base.theta = 0.5;
    s.base.r = 5.0;
    s.parameter = "A";
    s.values = linear_range(0.0, 100.0, 1.0);
    s.series_parameter = "lambda";
    s.series = {0.01, 0.02, 0.03};
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (fig4, fig5a, fig5b, fig6, fig7)");
  }
  return s;
}

std::vector<std::string> preset_names() { return {"fig4", "fig5a", "fig5b", "fig6", "fig7"}; }

CsvTable ps_sweep_table(const SweepSpec& spec) {
  const auto pts = spec.points();
  std::vector<std::string> cols = with_params({"lambda_cr2"});
  if (wants_analytic(spec.mode)) append(cols, {"region", "root_count", "p_low", "p_middle", "p_high"});
  if (wants_simulated(spec.mode)) append(cols, {"p_s_hat", "p_s_halfwidth", "nearest_branch", "attempts"});

  const auto sims = simulate_points(spec, pts);
  CsvTable table(cols);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    auto row = table.row();
    add_params(row, p);
    row.add(p.network().interference_level());
    if (wants_analytic(spec.mode)) {
      const auto cls = classify_region(p.network(), p.protocol());
      const auto rs = root_set(p);
      row.add(to_string(cls.region)).add(rs.count).add(rs.low).add(rs.middle).add(rs.high);
    }
    if (const auto& s = sims[i]) {
      row.add(s->p_s_hat.mean).add(s->p_s_hat.halfwidth).add(to_string(s->nearest_branch)).add(s->attempts);
    }
  }
  return table;
}

CsvTable aoi_sweep_table(const SweepSpec& spec) {
  const auto pts = spec.points();
  std::vector<std::string> cols = with_params({"lambda_cr2"});
  if (wants_analytic(spec.mode)) {
    append(cols, {"region", "branch", "p_s", "peak_aoi", "avg_aoi", "avg_lower_bound", "avg_upper_bound",
                  "sa_aoi", "bistable_warning"});
  }
  if (wants_simulated(spec.mode)) {
    append(cols, {"p_s_hat", "p_s_halfwidth", "peak_aoi_hat", "peak_aoi_halfwidth", "avg_aoi_hat",
                  "avg_aoi_halfwidth"});
  }

  const auto sims = simulate_points(spec, pts);
  CsvTable table(cols);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    auto row = table.row();
    add_params(row, p);
    const NetworkConfig net = p.network();
    row.add(net.interference_level());
    if (wants_analytic(spec.mode)) {
      const auto cls = classify_region(net, p.protocol());
      row.add(to_string(cls.region)).add(to_string(spec.branch));
      try {
        const auto rep = evaluate_aoi(net, p.protocol(), spec.branch);
        row.add(rep.p_s_used).add(rep.peak).add(rep.average).add(rep.lower_bound).add(rep.upper_bound);
        row.add(sa_baseline(net, p.eta)).add(rep.bistable_warning);
      } catch (const BranchNotPresent&) {
        row.add(kNaN).add(kNaN).add(kNaN).add(kNaN).add(kNaN).add(sa_baseline(net, p.eta)).add(false);
      }
    }
    if (const auto& s = sims[i]) {
      row.add(s->p_s_hat.mean).add(s->p_s_hat.halfwidth);
      row.add(s->peak_aoi_hat.mean).add(s->peak_aoi_hat.halfwidth);
      row.add(s->avg_aoi_hat.mean).add(s->avg_aoi_hat.halfwidth);
    }
  }
  return table;
}

CsvTable regions_table(const SweepSpec& spec) {
  const auto pts = spec.points();
  CsvTable table(with_params({"lambda_cr2", "x", "region", "root_count", "p_low", "p_middle", "p_high",
                              "a_low", "a_high", "ratio_bound"}));
  for (const auto& p : pts) {
    const NetworkConfig net = p.network();
    const auto cls = classify_region(net, p.protocol());
    const auto rs = root_set(p);
    const double x = net.interference_level() * p.eta;
    auto row = table.row();
    add_params(row, p);
    row.add(net.interference_level()).add(x).add(to_string(cls.region)).add(rs.count);
    row.add(rs.low).add(rs.middle).add(rs.high);
    row.add(cls.a_low.value_or(kNaN)).add(cls.a_high.value_or(kNaN));
    row.add(x > 4.0 ? bistable_ratio_bound(net, p.eta) : kNaN);
  }
  return table;
}

CsvTable scaling_table(const PointParams& base, const std::vector<double>& levels,
                       const std::vector<Protocol>& protocols) {
  if (levels.empty()) throw ConfigError("scaling: no interference levels");
  CsvTable table({"protocol", "r", "theta", "rho", "alpha", "lambda", "lambda_cr2", "avg_aoi_opt",
                  "peak_aoi_opt", "a_star", "eta_star", "avg_ratio", "peak_ratio", "threshold_ratio"});
  const NetworkConfig net = base.network();
  for (Protocol proto : protocols) {
    const auto pts = scaling_limits(net, levels, proto);
    for (const auto& pt : pts) {
      auto row = table.row();
      row.add(to_string(proto)).add(base.r).add(base.theta).add(base.rho).add(base.alpha);
      row.add(net.with_interference_level(pt.lambda_cr2).lambda()).add(pt.lambda_cr2);
      row.add(pt.avg_objective).add(pt.peak_objective).add(pt.a_star).add(pt.eta_star);
      row.add(pt.avg_ratio).add(pt.peak_ratio).add(pt.threshold_ratio);
    }
  }
  return table;
}

std::vector<double> gain_preset_lambdas() { return linear_range(0.005, 0.1, 0.005); }

CsvTable gain_table(const PointParams& base, const std::vector<double>& lambdas, double tol,
                    std::size_t max_rounds, std::size_t threads) {
  if (lambdas.empty()) throw ConfigError("gain: no densities");
  struct Row {
    double lambda, lcr, sa, alg, alg_a, alg_eta;
    std::size_t rounds;
    double closed, closed_a;
    OptRegime closed_regime;
    Region closed_region;
  };
  const auto rows = parallel_map(lambdas.size(), threads, [&](std::size_t i) {
    PointParams p = base;
    p.lambda = lambdas[i];
    const NetworkConfig net = p.network();
    const double lcr = net.interference_level();
    const double sa = sa_baseline(net, lcr > 1.0 ? 1.0 / lcr : 1.0);
    const auto alg = alternating_optimize_avg(net, tol, max_rounds);
    const auto closed = opt_joint_avg(net);
    const auto cls = classify_region(net, ProtocolParams{closed.eta_star, closed.a_star});
    return Row{lambdas[i], lcr, sa, alg.result.objective, alg.result.a_star, alg.result.eta_star,
               alg.rounds, closed.objective, closed.a_star, closed.regime, cls.region};
  });
  CsvTable table({"lambda", "r", "theta", "rho", "alpha", "lambda_cr2", "sa_avg_opt", "tsa_avg_alternating",
                  "a_alternating", "eta_alternating", "rounds", "tsa_avg_closed", "a_closed", "closed_regime",
                  "closed_region"});
  for (const auto& r : rows) {
    auto row = table.row();
    row.add(r.lambda).add(base.r).add(base.theta).add(base.rho).add(base.alpha).add(r.lcr).add(r.sa);
    row.add(r.alg).add(r.alg_a).add(r.alg_eta).add(r.rounds).add(r.closed).add(r.closed_a);
    row.add(to_string(r.closed_regime)).add(to_string(r.closed_region));
  }
  return table;
}

OptTarget parse_opt_target(std::string_view text) {
  if (text == "peak") return OptTarget::Peak;
  if (text == "avg" || text == "average") return OptTarget::Average;
  throw ConfigError("unknown optimisation target '" + std::string(text) + "' (peak, avg)");
}

OptMode parse_opt_mode(std::string_view text) {
  if (text == "fixed-A" || text == "fixed-a") return OptMode::FixedA;
  if (text == "fixed-eta") return OptMode::FixedEta;
  if (text == "joint") return OptMode::Joint;
  if (text == "safe") return OptMode::Safe;
  throw ConfigError("unknown optimisation mode '" + std::string(text) + "' (fixed-A, fixed-eta, joint, safe)");
}

CsvTable optimize_table(const PointParams& point, OptTarget target, OptMode mode, double tol,
                        std::size_t max_rounds, std::uint64_t seed) {
  const NetworkConfig net = point.network();
  CsvTable table({"target", "mode", "method", "lambda", "r", "theta", "rho", "alpha", "lambda_cr2", "a_star",
                  "eta_star", "objective", "regime", "region", "p_s", "eta_min", "eta_max"});
  const std::string_view target_name = target == OptTarget::Peak ? "peak" : "avg";
  const std::string_view mode_name = mode == OptMode::FixedA     ? "fixed-A"
                                     : mode == OptMode::FixedEta ? "fixed-eta"
                                     : mode == OptMode::Joint    ? "joint"
                                                                 : "safe";
  auto emit = [&](std::string_view method, const OptResult& r, double eta_min = kNaN, double eta_max = kNaN) {
    const auto cls = classify_region(net, ProtocolParams{r.eta_star, r.a_star});
    auto row = table.row();
    row.add(target_name).add(mode_name).add(method);
    row.add(point.lambda).add(point.r).add(point.theta).add(point.rho).add(point.alpha);
    row.add(net.interference_level()).add(r.a_star).add(r.eta_star).add(r.objective);
    row.add(to_string(r.regime)).add(to_string(cls.region)).add(r.p_s_at_opt).add(eta_min).add(eta_max);
  };

  if (target == OptTarget::Peak) {
    switch (mode) {
      case OptMode::FixedA: emit("exact", opt_eta_peak(net, point.age_threshold)); break;
      case OptMode::FixedEta: emit("exact", opt_a_peak(net, point.eta)); break;
      case OptMode::Joint: {
        const auto j = opt_joint_peak(net);
        emit("exact", j.result, j.eta_min, j.eta_max);
        break;
      }
      case OptMode::Safe: {
        const auto s = safe_peak_params(net);
        emit("safe", s.result, s.eta_min, s.eta_max);
        break;
      }
    }
    return table;
  }

  switch (mode) {
    case OptMode::FixedA: emit("exact", opt_eta_avg(net, point.age_threshold)); break;
    case OptMode::FixedEta: {
      emit("exact", opt_a_avg(net, point.eta));
      const double x = net.interference_level() * point.eta;
      if (x * x * x * x + 11.0 * x * x - 1.0 >= 0.0) {
        const auto c = subopt_a_avg_closed(net, point.eta);
        emit("closed-form", {c.a_tilde, point.eta, c.objective, OptRegime::ClosedForm, c.p_s});
      }
      break;
    }
    case OptMode::Joint:
      emit("alternating", alternating_optimize_avg(net, tol, max_rounds, seed).result);
      emit("closed-form", opt_joint_avg(net));
      break;
    case OptMode::Safe: {
      const auto s = safe_avg_params(net);
      emit("unconstrained", opt_joint_avg(net));
      emit("safe", s.result, s.eta_min, 1.0);
      break;
    }
  }
  return table;
}

CsvTable simulate_table(const PointParams& point, const SimConfig& sim, const SimResult& res) {
  CsvTable table(with_params({"window", "slots", "warmup", "replications", "seed", "initial_ages", "torus",
                              "p_s_hat", "p_s_halfwidth", "peak_aoi_hat", "peak_aoi_halfwidth", "avg_aoi_hat",
                              "avg_aoi_halfwidth", "var_aoi_hat", "var_aoi_halfwidth", "attempts", "successes",
                              "region", "nearest_branch", "p_s_analytic", "peak_aoi_analytic", "avg_aoi_analytic",
                              "p_s_agrees", "peak_agrees", "avg_agrees"}));
  const double p = res.nearest_root;
  const double peak = mean_peak_aoi(point.age_threshold, point.eta, p);
  const double avg = time_average_aoi(point.age_threshold, point.eta, p);
  auto row = table.row();
  add_params(row, point);
  row.add(sim.window_side).add(sim.slots).add(sim.warmup_slots).add(sim.replications).add(sim.seed);
  row.add(to_string(sim.initial_ages)).add(sim.torus);
  row.add(res.p_s_hat.mean).add(res.p_s_hat.halfwidth);
  row.add(res.peak_aoi_hat.mean).add(res.peak_aoi_hat.halfwidth);
  row.add(res.avg_aoi_hat.mean).add(res.avg_aoi_hat.halfwidth);
  row.add(res.var_aoi_hat.mean).add(res.var_aoi_hat.halfwidth);
  row.add(res.attempts).add(res.successes).add(to_string(res.region)).add(to_string(res.nearest_branch));
  row.add(p).add(peak).add(avg);
  row.add(std::abs(res.p_s_hat.mean - p) <= 0.03 * p);
  row.add(std::abs(res.peak_aoi_hat.mean - peak) <= 3.0 * res.peak_aoi_hat.halfwidth);
  row.add(std::abs(res.avg_aoi_hat.mean - avg) <= 3.0 * res.avg_aoi_hat.halfwidth);
  return table;
}

CsvTable trace_table(const std::vector<SlotRecord>& trace) {
  CsvTable table({"slot", "age", "attempted", "success", "sinr"});
  for (const auto& r : trace) table.row().add(r.slot).add(r.age).add(r.attempted).add(r.success).add(r.sinr);
  return table;
}

Branch parse_branch(std::string_view text) {
  if (text == "high") return Branch::High;
  if (text == "low") return Branch::Low;
  if (text == "middle") return Branch::Middle;
  throw ConfigError("unknown branch '" + std::string(text) + "' (high, low, middle)");
}

InitialAges parse_initial_ages(std::string_view text) {
  if (text == "near-stationary") return InitialAges::NearStationary;
  if (text == "fresh") return InitialAges::Fresh;
  if (text == "stale") return InitialAges::Stale;
  throw ConfigError("unknown initial-age mode '" + std::string(text) + "' (near-stationary, fresh, stale)");
}

}  // namespace tsa
