// Command-line front end: sweeps, optimisers and simulation campaigns as CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsa/errors.hpp"
#include "tsa/harness.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kNoConvergence = 4 };

struct Options {
  std::optional<double> lambda, r, alpha, theta, theta_db, rho, snr_db, eta, age_threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> slots, warmup;
  std::optional<std::size_t> replications, threads;
  std::optional<double> window;
  std::string out;
  std::string preset;
  double tol = 1e-9;
  std::size_t max_iter = 10'000;
  std::string branch = "high";
  bool paper_scale = false;

  // sweeps
  std::string parameter = "A";
  std::vector<double> values;
  std::optional<double> start, stop, step;
  std::string series_parameter;
  std::vector<double> series;
  std::string mode = "analytic";

  // optimize
  std::string target = "avg";
  std::string opt_mode = "joint";

  // scaling
  std::vector<double> levels;
  std::string protocol = "both";

  // simulate
  std::string initial = "near-stationary";
  bool torus = false;
  std::optional<std::size_t> links;
  std::string trace;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--lambda", o.lambda, "Link density");
  app->add_option("--r", o.r, "Transmitter-receiver distance");
  app->add_option("--alpha", o.alpha, "Path-loss exponent (> 2)");
  auto* theta = app->add_option("--theta", o.theta, "Decoding threshold (linear)");
  auto* theta_db = app->add_option("--theta-db", o.theta_db, "Decoding threshold (dB)");
  theta->excludes(theta_db);
  auto* rho = app->add_option("--rho", o.rho, "Transmit SNR (linear, 'inf' for no noise)");
  auto* snr = app->add_option("--snr-db", o.snr_db, "Transmit SNR (dB)");
  rho->excludes(snr);
  app->add_option("--eta", o.eta, "Update rate in (0,1]");
  app->add_option("--age-threshold,-A", o.age_threshold, "Age threshold A >= 0");
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--slots", o.slots, "Simulated slots per replication, warmup included");
  app->add_option("--warmup", o.warmup, "Discarded warmup slots");
  app->add_option("--replications", o.replications, "Independent replications");
  app->add_option("--window", o.window, "Side of the square deployment window");
  app->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app->add_option("--out", o.out, "Output CSV path (stdout if omitted)");
  app->add_option("--preset", o.preset, "Named preset: fig4, fig5a, fig5b, fig6, fig7");
  app->add_option("--tol", o.tol, "Convergence tolerance");
  app->add_option("--max-iter", o.max_iter, "Iteration / round budget");
  app->add_option("--branch", o.branch, "Root branch: high, low, middle")
      ->check(CLI::IsMember({"high", "low", "middle"}));
  app->add_flag("--paper-scale", o.paper_scale, "100x100 window and 10^6 slots");
}

void add_sweep(CLI::App* app, Options& o) {
  app->add_option("--param", o.parameter, "Swept parameter: A, eta, lambda, r, theta, rho, alpha");
  app->add_option("--values", o.values, "Explicit sweep values")->delimiter(',');
  app->add_option("--start", o.start, "Range start");
  app->add_option("--stop", o.stop, "Range stop (inclusive)");
  app->add_option("--step", o.step, "Range step");
  app->add_option("--series-param", o.series_parameter, "Outer parameter, one curve per value");
  app->add_option("--series", o.series, "Values of the outer parameter")->delimiter(',');
  app->add_option("--mode", o.mode, "analytic, simulated or both")
      ->check(CLI::IsMember({"analytic", "simulated", "both"}));
}

void add_sim(CLI::App* app, Options& o) {
  app->add_option("--initial", o.initial, "Initial ages: near-stationary, fresh, stale")
      ->check(CLI::IsMember({"near-stationary", "fresh", "stale"}));
  app->add_flag("--torus", o.torus, "Wrap distances around the window");
  app->add_option("--links", o.links, "Force the number of non-typical links");
}

void apply_point(const Options& o, tsa::PointParams& p) {
  if (o.lambda) p.lambda = *o.lambda;
  if (o.r) p.r = *o.r;
  if (o.alpha) p.alpha = *o.alpha;
  if (o.theta) p.theta = *o.theta;
  if (o.theta_db) p.theta = tsa::db_to_linear(*o.theta_db);
  if (o.rho) p.rho = *o.rho;
  if (o.snr_db) p.rho = tsa::db_to_linear(*o.snr_db);
  if (o.eta) p.eta = *o.eta;
  if (o.age_threshold) p.age_threshold = *o.age_threshold;
}

void apply_sim(const Options& o, tsa::SimConfig& s) {
  if (o.paper_scale) s = tsa::SimConfig::paper_scale();
  if (o.seed) s.seed = *o.seed;
  if (o.slots) s.slots = *o.slots;
  if (o.warmup) s.warmup_slots = *o.warmup;
  if (o.replications) s.replications = *o.replications;
  if (o.window) s.window_side = *o.window;
  if (o.threads) s.threads = *o.threads;
  s.torus = o.torus;
  s.initial_ages = tsa::parse_initial_ages(o.initial);
  if (o.links) s.forced_link_count = *o.links;
}

std::vector<double> sweep_values(const Options& o) {
  if (!o.values.empty()) {
    if (o.start || o.stop || o.step) throw tsa::ConfigError("give either --values or --start/--stop/--step");
    return o.values;
  }
  if (o.start || o.stop || o.step) {
    if (!(o.start && o.stop && o.step)) throw tsa::ConfigError("--start, --stop and --step go together");
    return tsa::linear_range(*o.start, *o.stop, *o.step);
  }
  return {};
}

tsa::SweepSpec build_spec(const Options& o, bool require_values) {
  tsa::SweepSpec spec;
  const auto explicit_values = sweep_values(o);
  if (!o.preset.empty()) {
    spec = tsa::preset(o.preset);
    if (!explicit_values.empty()) {
      spec.parameter = o.parameter;
      spec.values = explicit_values;
    }
  } else {
    spec.parameter = o.parameter;
    spec.values = explicit_values;
    if (spec.values.empty()) {
      if (require_values) throw tsa::ConfigError("empty sweep: give --values, --start/--stop/--step or --preset");
      spec.parameter = "A";
    }
  }
  if (!o.series_parameter.empty() || !o.series.empty()) {
    spec.series_parameter = o.series_parameter;
    spec.series = o.series;
  }
  apply_point(o, spec.base);
  if (spec.values.empty()) spec.values = {spec.base.age_threshold};
  apply_sim(o, spec.sim);
  spec.mode = tsa::parse_sweep_mode(o.mode);
  spec.branch = tsa::parse_branch(o.branch);
  spec.threads = o.threads.value_or(0);
  return spec;
}

void emit(const tsa::CsvTable& table, const std::string& out) {
  if (out.empty() || out == "-") {
    table.write(std::cout);
  } else {
    table.save(out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-threshold slotted ALOHA: analysis, optimisation and simulation"};
  app.require_subcommand(1);
  Options o;

  auto* ps = app.add_subcommand("ps-sweep", "Success probability versus a swept parameter");
  auto* aoi = app.add_subcommand("aoi-sweep", "Peak and time-average AoI versus a swept parameter");
  auto* opt = app.add_subcommand("optimize", "Optimal age threshold and/or update rate");
  auto* scal = app.add_subcommand("scaling", "Optimal AoI versus interference level");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation with analytic reference");
  auto* reg = app.add_subcommand("regions", "Stability classification of operating points");
  for (auto* sub : {ps, aoi, opt, scal, sim, reg}) add_common(sub, o);
  for (auto* sub : {ps, aoi, reg}) add_sweep(sub, o);
  for (auto* sub : {ps, aoi, sim}) add_sim(sub, o);
  opt->add_option("--target", o.target, "peak or avg")->check(CLI::IsMember({"peak", "avg"}));
  opt->add_option("--mode", o.opt_mode, "fixed-A, fixed-eta, joint or safe")
      ->check(CLI::IsMember({"fixed-A", "fixed-eta", "joint", "safe"}));
  scal->add_option("--levels", o.levels, "Interference levels lambda c r^2")->delimiter(',');
  scal->add_option("--start", o.start, "Level range start");
  scal->add_option("--stop", o.stop, "Level range stop");
  scal->add_option("--step", o.step, "Level range step");
  scal->add_option("--protocol", o.protocol, "SA, TSA or both")->check(CLI::IsMember({"SA", "TSA", "both"}));
  sim->add_option("--trace", o.trace, "Write the typical-link trace of replication 0 to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (ps->parsed()) {
      emit(tsa::ps_sweep_table(build_spec(o, true)), o.out);
    } else if (aoi->parsed()) {
      emit(tsa::aoi_sweep_table(build_spec(o, true)), o.out);
    } else if (reg->parsed()) {
      emit(tsa::regions_table(build_spec(o, false)), o.out);
    } else if (opt->parsed()) {
      tsa::PointParams p;
      apply_point(o, p);
      emit(tsa::optimize_table(p, tsa::parse_opt_target(o.target), tsa::parse_opt_mode(o.opt_mode), o.tol,
                               o.max_iter, o.seed.value_or(tsa::kDefaultOptimizerSeed)),
           o.out);
    } else if (scal->parsed()) {
      tsa::PointParams p;
      if (o.preset == "fig7") {
        apply_point(o, p);
        auto lambdas = o.levels;  // --levels are densities for this preset
        if (lambdas.empty()) lambdas = tsa::gain_preset_lambdas();
        emit(tsa::gain_table(p, lambdas, o.tol, o.max_iter, o.threads.value_or(0)), o.out);
        return kOk;
      }
      if (!o.preset.empty()) throw tsa::ConfigError("scaling accepts only the fig7 preset");
      p.rho = tsa::kInfinity;
      apply_point(o, p);
      std::vector<double> levels = o.levels;
      if (levels.empty()) {
        Options range = o;
        range.values.clear();
        levels = sweep_values(range);
      }
      if (levels.empty()) throw tsa::ConfigError("empty sweep: give --levels or --start/--stop/--step");
      std::vector<tsa::Protocol> protos;
      if (o.protocol != "TSA") protos.push_back(tsa::Protocol::SA);
      if (o.protocol != "SA") protos.push_back(tsa::Protocol::TSA);
      emit(tsa::scaling_table(p, levels, protos), o.out);
    } else if (sim->parsed()) {
      tsa::PointParams p;
      apply_point(o, p);
      tsa::SimConfig sc;
      apply_sim(o, sc);
      sc.record_trace = !o.trace.empty();
      const auto res = tsa::run_simulation(p.network(), p.protocol(), sc);
      const auto table = tsa::simulate_table(p, sc, res);
      emit(table, o.out);
      if (sc.record_trace) tsa::trace_table(res.trace).save(o.trace);
      std::cerr << "p_s_hat " << res.p_s_hat.mean << " +- " << res.p_s_hat.halfwidth << ", peak "
                << res.peak_aoi_hat.mean << " +- " << res.peak_aoi_hat.halfwidth << ", avg "
                << res.avg_aoi_hat.mean << " +- " << res.avg_aoi_hat.halfwidth << " (" << to_string(res.region)
                << ", nearest branch " << to_string(res.nearest_branch) << ")\n";
    }
  } catch (const tsa::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const tsa::ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << " (last value " << e.last_value() << ")\n";
    return kNoConvergence;
  } catch (const tsa::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kNumeric;
  } catch (const tsa::BracketError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
