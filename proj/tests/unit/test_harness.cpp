#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"
#include "tsa/errors.hpp"
#include "tsa/harness.hpp"

using namespace tsa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path golden(const std::string& name) { return fs::path(TSA_GOLDEN_DIR) / name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tsa_unit_tests";
  fs::create_directories(dir);
  return dir / name;
}

// Runs the CLI with stdout/stderr discarded and returns its exit status.
int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TSA_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

double cell(const CsvTable& t, std::size_t row, std::string_view col) {
  return parse_double(t.rows().at(row).at(t.column(col)));
}

}  // namespace

TEST_CASE("point params by name") {
  PointParams p;
  p.set("lambda", 0.2);
  p.set("A", 12.0);
  p.set("age_threshold", 13.0);
  p.set("eta", 0.5);
  CHECK(p.lambda == 0.2);
  CHECK(p.age_threshold == 13.0);
  CHECK(p.protocol().eta == 0.5);
  CHECK_THROWS_AS(p.set("beta", 1.0), ConfigError);
}

TEST_CASE("linear ranges include the stop value") {
  const auto v = linear_range(0.0, 1.0, 0.1);
  REQUIRE(v.size() == 11);
  CHECK(v.back() == doctest::Approx(1.0));
  CHECK(linear_range(0.01, 1.0, 0.01).size() == 100);
  CHECK_THROWS_AS(linear_range(0.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("sweep validation") {
  SweepSpec s;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.values = {1.0};
  s.parameter = "nope";
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.parameter = "A";
  CHECK_NOTHROW(s.validate());
  s.series_parameter = "lambda";
  s.series = {0.1, 0.2};
  s.values = {1.0, 2.0, 3.0};
  const auto pts = s.points();
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].lambda == 0.1);
  CHECK(pts[2].age_threshold == 3.0);
  CHECK(pts[3].lambda == 0.2);
}

TEST_CASE("named presets") {
  CHECK(preset_names().size() >= 4);
  CHECK_THROWS_AS(preset("fig99"), ConfigError);
  const auto f4 = preset("fig4");
  CHECK(f4.points().size() == 404);
  CHECK(f4.base.r == 3.0);
  const auto f5 = preset("fig5a");
  CHECK(f5.points().size() == 200);
  CHECK(f5.base.lambda == 0.02);
  CHECK(f5.base.r == 4.0);
  const auto f6 = preset("fig6");
  CHECK(f6.base.theta == 0.5);
  CHECK(f6.base.r == 5.0);
}

TEST_CASE("success sweep rows agree with a grid root scan") {
  const auto t = ps_sweep_table(preset("fig4"));
  for (std::size_t i = 0; i < t.rows().size(); i += 37) {
    const NetworkConfig cfg(cell(t, i, "lambda"), cell(t, i, "r"), cell(t, i, "theta"), cell(t, i, "rho"),
                            cell(t, i, "alpha"));
    const auto roots = oracle::roots(
        {cfg.interference_level(), cfg.noise_term(), cell(t, i, "eta"), cell(t, i, "age_threshold")});
    CHECK(cell(t, i, "p_high") == doctest::Approx(roots.back()).epsilon(1e-9));
  }
}

TEST_CASE("success probability rises with the threshold and falls with density") {
  const auto t = ps_sweep_table(preset("fig4"));
  for (std::size_t i = 1; i < t.rows().size(); ++i) {
    if (cell(t, i, "lambda") == cell(t, i - 1, "lambda")) CHECK(cell(t, i, "p_high") >= cell(t, i - 1, "p_high"));
    else CHECK(cell(t, i, "lambda") > cell(t, i - 1, "lambda"));
  }
  // Same threshold, increasing density.
  CHECK(cell(t, 50, "p_high") > cell(t, 101 + 50, "p_high"));
}

TEST_CASE("library sweeps reproduce the golden files") {
  CHECK(ps_sweep_table(preset("fig4")).str() == slurp(golden("fig4_ps.csv")));
  CHECK(aoi_sweep_table(preset("fig5a")).str() == slurp(golden("fig5a_aoi.csv")));
  CHECK(aoi_sweep_table(preset("fig5b")).str() == slurp(golden("fig5b_aoi.csv")));
  CHECK(aoi_sweep_table(preset("fig6")).str() == slurp(golden("fig6_aoi.csv")));
}

TEST_CASE("command line reproduces the golden files") {
  struct Case {
    const char* args;
    const char* file;
  };
  const Case cases[] = {
      {"ps-sweep --preset fig4", "fig4_ps.csv"},
      {"aoi-sweep --preset fig6", "fig6_aoi.csv"},
      {"regions --lambda 0.15 --param A --values 10 50 150", "regions_bistable.csv"},
      {"scaling --levels 0.5 1 2 5 10 20 50 100", "scaling.csv"},
      {"scaling --preset fig7", "fig7_gain.csv"},
      {"optimize --lambda 0.15 --target avg --mode joint", "optimize_avg_joint.csv"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    const fs::path out = scratch(c.file);
    REQUIRE(cli(std::string(c.args) + " --out \"" + out.string() + "\"") == 0);
    CHECK(slurp(out) == slurp(golden(c.file)));
  }
}

TEST_CASE("bistable regions table") {
  const auto t = parse_csv(slurp(golden("regions_bistable.csv")));
  REQUIRE(t.rows().size() == 3);
  CHECK(t.rows()[0][t.column("region")] == "mono-low");
  CHECK(t.rows()[1][t.column("region")] == "bistable");
  CHECK(t.rows()[2][t.column("region")] == "mono-high");
}

TEST_CASE("average sweep reports the missing middle branch as nan") {
  SweepSpec s;
  s.values = {10.0, 50.0};
  s.base.lambda = 0.15;
  s.branch = Branch::Middle;
  const auto t = aoi_sweep_table(s);
  CHECK(std::isnan(cell(t, 0, "peak_aoi")));
  CHECK(std::isfinite(cell(t, 1, "peak_aoi")));
}

TEST_CASE("optimizer table modes") {
  PointParams sparse;
  sparse.rho = kInfinity;
  sparse.lambda = 0.5 / NetworkConfig(1.0, 3.0, 1.0, kInfinity, 3.8).interference_level();
  const auto peak = optimize_table(sparse, OptTarget::Peak, OptMode::Joint, 1e-9, 1000, 1);
  CHECK(cell(peak, 0, "a_star") == 0.0);
  CHECK(cell(peak, 0, "eta_star") == 1.0);

  PointParams dense;
  dense.lambda = 0.15;
  const auto safe = optimize_table(dense, OptTarget::Average, OptMode::Safe, 1e-9, 1000, 1);
  REQUIRE(safe.rows().size() == 2);
  CHECK(safe.rows()[1][safe.column("region")] != "bistable");
  const auto joint = parse_csv(slurp(golden("optimize_avg_joint.csv")));
  CHECK(std::abs(cell(joint, 0, "objective") / cell(joint, 1, "objective") - 1) < 0.01);
}

TEST_CASE("gain table compares both methods") {
  const auto t = parse_csv(slurp(golden("fig7_gain.csv")));
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    CHECK(cell(t, i, "tsa_avg_alternating") <= cell(t, i, "sa_avg_opt") + 1e-9);
    CHECK(cell(t, i, "tsa_avg_alternating") <= cell(t, i, "tsa_avg_closed") + 1e-9);
    if (cell(t, i, "lambda_cr2") >= 5.0)
      CHECK(cell(t, i, "tsa_avg_closed") / cell(t, i, "tsa_avg_alternating") - 1 < 0.01);
  }
}

TEST_CASE("simulation rows are deterministic for a seed") {
  const fs::path a = scratch("sim_a.csv"), b = scratch("sim_b.csv");
  const std::string args = "simulate --lambda 0.001 -A 5 --slots 4000 --warmup 400 --replications 2 --seed 9 --out ";
  REQUIRE(cli(args + "\"" + a.string() + "\"") == 0);
  REQUIRE(cli(args + "\"" + b.string() + "\"") == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("isolated link simulation flags agree") {
  const fs::path out = scratch("sim_iso.csv");
  REQUIRE(cli("simulate --lambda 0 --r 1 --rho 10 --links 0 --slots 20000 --warmup 1000 --replications 4 --out \"" +
              out.string() + "\"") == 0);
  const auto t = parse_csv(slurp(out));
  for (const char* flag : {"p_s_agrees", "peak_agrees", "avg_agrees"}) {
    CAPTURE(flag);
    CHECK(t.rows()[0][t.column(flag)] == "true");
  }
}

TEST_CASE("trace export") {
  const fs::path trace = scratch("trace.csv");
  REQUIRE(cli("simulate --lambda 0.001 --slots 600 --warmup 100 --replications 1 --trace \"" + trace.string() +
              "\"") == 0);
  const auto t = parse_csv(slurp(trace));
  CHECK(t.columns() == std::vector<std::string>{"slot", "age", "attempted", "success", "sinr"});
  CHECK(t.rows().size() == 500);
}

TEST_CASE("exit codes") {
  CHECK(cli("--help") == 0);
  CHECK(cli("no-such-command") == 2);
  CHECK(cli("ps-sweep --bogus 1") == 2);
  CHECK(cli("ps-sweep") == 2);                               // empty sweep
  CHECK(cli("aoi-sweep --preset nope") == 2);
  CHECK(cli("ps-sweep --param A --values 1 --alpha 1.5") == 3);
  CHECK(cli("aoi-sweep --param eta --values 1.5") == 3);
  CHECK(cli("simulate --window 4") == 2);
  CHECK(cli("optimize --lambda 0.05 --target avg --mode safe") == 3);
  CHECK(cli("optimize --lambda 0.15 --target avg --mode joint --tol 1e-300 --max-iter 2") == 4);
}
