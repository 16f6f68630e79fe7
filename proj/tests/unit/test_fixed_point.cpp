#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tsa/errors.hpp"
#include "tsa/fixed_point.hpp"

using namespace tsa;

namespace {

const NetworkConfig kBistable(0.15, 3.0, 1.0, 100.0, 3.8);

oracle::Point as_oracle(const NetworkConfig& c, const ProtocolParams& p) {
  return {c.interference_level(), c.noise_term(), p.eta, p.age_threshold};
}

}  // namespace

TEST_CASE("residual without a threshold has no self-coupling") {
  const NetworkConfig cfg(0.05, 3.0, 1.0, 100.0, 3.8);
  const double sa = std::exp(-cfg.interference_level() - cfg.noise_term());
  for (double p : {0.1, 0.5, 1.0}) {
    CHECK(fixed_point_residual(cfg, {1.0, 0.0}, p) == doctest::Approx(p - sa).epsilon(1e-15));
  }
}

TEST_CASE("isolated link succeeds with the noise-only probability") {
  const NetworkConfig cfg(0.0, 1.0, 1.0, 10.0, 3.8);
  CHECK(std::abs(fixed_point_residual(cfg, {1.0, 5.0}, std::exp(-0.1))) < 1e-15);
}

TEST_CASE("residual domain") {
  CHECK_THROWS_AS(fixed_point_residual(kBistable, {1.0, 50.0}, 0.0), DomainError);
  CHECK_THROWS_AS(fixed_point_residual(kBistable, {1.0, 50.0}, 1.5), DomainError);
}

TEST_CASE("three sign changes inside the bistable interval") {
  const auto roots = oracle::roots(as_oracle(kBistable, {1.0, 50.0}), 100000);
  CHECK(roots.size() == 3);
}

TEST_CASE("iteration without a threshold converges at once") {
  const NetworkConfig cfg(0.05, 3.0, 1.0, 100.0, 3.8);
  const auto it = fixed_point_iterate(cfg, {1.0, 0.0}, 1.0);
  CHECK(it.p_s == doctest::Approx(std::exp(-cfg.interference_level() - cfg.noise_term())).epsilon(1e-15));
  CHECK(it.iterations <= 2);
}

TEST_CASE("iteration picks the basin of its start point") {
  const ProtocolParams pp{1.0, 50.0};
  const double high = fixed_point_iterate(kBistable, pp, 1.0).p_s;
  const double low = fixed_point_iterate(kBistable, pp, 0.01).p_s;
  CHECK(high / low > 1.0);
  CHECK(high == doctest::Approx(solve_branch(kBistable, pp, Branch::High)).epsilon(1e-8));
  CHECK(low == doctest::Approx(solve_branch(kBistable, pp, Branch::Low)).epsilon(1e-8));
  const double middle = solve_branch(kBistable, pp, Branch::Middle);
  CHECK(fixed_point_iterate(kBistable, pp, middle * 1.01).p_s == doctest::Approx(high).epsilon(1e-8));
  CHECK(fixed_point_iterate(kBistable, pp, middle * 0.99).p_s == doctest::Approx(low).epsilon(1e-8));
}

TEST_CASE("monostable iteration is independent of the start") {
  const NetworkConfig cfg(0.05, 3.0, 1.0, 100.0, 3.8);  // lambda c r^2 ~ 2.35
  const ProtocolParams pp{1.0, 20.0};
  const double ref = fixed_point_iterate(cfg, pp, 1.0).p_s;
  for (double p0 : {0.01, 0.5}) CHECK(std::abs(fixed_point_iterate(cfg, pp, p0).p_s - ref) < 1e-9);
}

TEST_CASE("iteration reports exhaustion with the last iterate") {
  try {
    fixed_point_iterate(kBistable, {1.0, 31.0}, 1.0, 1e-15, 3);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_value() > 0.0);
  }
}

TEST_CASE("iteration records its trajectory") {
  const auto it = fixed_point_iterate(kBistable, {1.0, 150.0}, 1.0, 1e-12, 100000, true);
  REQUIRE(it.trajectory.size() >= 2);
  CHECK(it.trajectory.front() == 1.0);
  for (std::size_t i = 1; i < it.trajectory.size(); ++i) CHECK(it.trajectory[i] <= it.trajectory[i - 1]);
}

TEST_CASE("bistable branches are strictly ordered") {
  const ProtocolParams pp{1.0, 50.0};
  const double l = solve_branch(kBistable, pp, Branch::Low);
  const double m = solve_branch(kBistable, pp, Branch::Middle);
  const double h = solve_branch(kBistable, pp, Branch::High);
  CHECK(0.0 < l);
  CHECK(l < m);
  CHECK(m < h);
  CHECK(h < 1.0);
  for (double p : {l, m, h}) CHECK(std::abs(fixed_point_residual(kBistable, pp, p)) < 1e-10);
}

TEST_CASE("middle branch is absent outside the bistable region") {
  CHECK_THROWS_AS(solve_branch(kBistable, {1.0, 150.0}, Branch::Middle), BranchNotPresent);
  CHECK_THROWS_AS(solve_branch(kBistable, {1.0, 10.0}, Branch::Middle), BranchNotPresent);
}

TEST_CASE("high branch matches iteration from one in the high region") {
  const ProtocolParams pp{1.0, 150.0};
  CHECK(std::abs(solve_branch(kBistable, pp, Branch::High) - fixed_point_iterate(kBistable, pp, 1.0, 1e-14).p_s) <
        1e-10);
}

TEST_CASE("all roots collapse to plain ALOHA without a threshold") {
  const double sa = std::exp(-kBistable.interference_level() - kBistable.noise_term());
  const auto roots = fixed_point_roots(kBistable, {1.0, 0.0});
  REQUIRE(roots.size() == 1);
  CHECK(roots.front() == doctest::Approx(sa).epsilon(1e-12));
  CHECK(solve_branch(kBistable, {1.0, 0.0}, Branch::High) == doctest::Approx(sa).epsilon(1e-12));
}

TEST_CASE("zero threshold without noise means certain success") {
  const NetworkConfig cfg(0.3, 3.0, 0.0, kInfinity, 3.8);
  CHECK(solve_branch(cfg, {1.0, 5.0}, Branch::High) == 1.0);
}

TEST_CASE("stability thresholds of the reference bistable network") {
  const auto th = stability_thresholds(kBistable, 1.0);
  REQUIRE(th);
  CHECK(std::abs(th->a_low - 31.0) <= 2.0);
  CHECK(std::abs(th->a_high - 135.0) <= 2.0);
  CHECK(th->a_low < th->a_high);
}

TEST_CASE("stability thresholds vanish at x = 4") {
  const NetworkConfig cfg = kBistable.with_interference_level(4.0);
  CHECK_FALSE(stability_thresholds(cfg, 1.0).has_value());
  CHECK_FALSE(stability_thresholds(kBistable, 0.5).has_value());  // x = 3.5
}

TEST_CASE("thresholds produce a tangency at x = 16") {
  const NetworkConfig cfg = NetworkConfig(0.1, 1.0, 1.0, kInfinity, 4.0).with_interference_level(16.0);
  const auto th = stability_thresholds(cfg, 1.0);
  REQUIRE(th);
  for (double a : {th->a_low, th->a_high}) {
    // Just inside the band there are three roots, just outside only one.
    const double inside = a == th->a_low ? a * (1 + 1e-4) : a * (1 - 1e-4);
    const double outside = a == th->a_low ? a * (1 - 1e-4) : a * (1 + 1e-4);
    CHECK(oracle::roots({16.0, 0.0, 1.0, inside}, 200000).size() == 3);
    CHECK(oracle::roots({16.0, 0.0, 1.0, outside}, 200000).size() == 1);
    // The double root sits where the residual and its slope both vanish.
    const auto cls = classify_region(cfg, {1.0, a});
    CHECK(cls.region == Region::Boundary);
  }
}

TEST_CASE("region taxonomy of the reference network") {
  CHECK(classify_region(kBistable, {1.0, 50.0}).region == Region::Bistable);
  CHECK(classify_region(kBistable, {1.0, 10.0}).region == Region::MonoLow);
  CHECK(classify_region(kBistable, {1.0, 150.0}).region == Region::MonoHigh);
  const auto th = *stability_thresholds(kBistable, 1.0);
  CHECK(classify_region(kBistable, {1.0, th.a_low}).region == Region::Boundary);
  CHECK(classify_region(kBistable, {1.0, th.a_high}).region == Region::Boundary);
  const auto b = classify_region(kBistable, {1.0, 50.0});
  CHECK(b.root_count() == 3);
  CHECK(*b.p_low < *b.p_middle);
  CHECK(*b.p_middle < *b.p_high);
}

TEST_CASE("low-density networks are always high-efficiency") {
  const NetworkConfig cfg(0.05, 3.0, 1.0, 100.0, 3.8);
  for (double a : {0.0, 1.0, 30.0, 500.0}) CHECK(classify_region(cfg, {1.0, a}).region == Region::MonoHigh);
}

TEST_CASE("attached roots match grid sign changes on random configs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> level(0.1, 12.0), eta(0.1, 1.0), a(0.0, 200.0), k(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const NetworkConfig cfg = NetworkConfig(0.1, 1.0, 1.0, 1.0 / k(rng), 3.8).with_interference_level(level(rng));
    const ProtocolParams pp{eta(rng), a(rng)};
    const auto cls = classify_region(cfg, pp);
    if (cls.region == Region::Boundary) continue;
    const auto grid = oracle::roots(as_oracle(cfg, pp), 100000);
    CHECK(grid.size() == fixed_point_roots(cfg, pp).size());
    if (cls.region == Region::Bistable) CHECK(grid.size() == 3);
    else CHECK(grid.size() == 1);
  }
}

TEST_CASE("ratio bound at the merge point and at x = 6") {
  CHECK(bistable_ratio_bound(kBistable.with_interference_level(4.0 + 1e-12), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-5));
  const double b6 = bistable_ratio_bound(kBistable.with_interference_level(6.0), 1.0);
  CHECK(b6 == doctest::Approx(std::exp(std::sqrt(12.0))).epsilon(1e-12));
  CHECK(b6 > 30.0);
  CHECK_THROWS_AS(bistable_ratio_bound(kBistable.with_interference_level(4.0), 1.0), DomainError);
}

TEST_CASE("high to low ratio exceeds the bound in the bistable band") {
  for (double level : {5.0, 7.0, 10.0}) {
    const NetworkConfig cfg = kBistable.with_interference_level(level);
    const auto th = *stability_thresholds(cfg, 1.0);
    for (int i = 1; i < 10; ++i) {
      const double a = th.a_low + (th.a_high - th.a_low) * i / 10.0;
      const double ratio = solve_branch(cfg, {1.0, a}, Branch::High) / solve_branch(cfg, {1.0, a}, Branch::Low);
      CHECK(ratio > bistable_ratio_bound(cfg, 1.0));
    }
  }
}

TEST_CASE("auxiliary constants need a positive threshold") {
  CHECK_THROWS_AS(FixedPointProblem::from(kBistable, {1.0, 0.0}), DomainError);
  const auto fp = FixedPointProblem::from(kBistable, {1.0, 50.0});
  const double p = solve_branch(kBistable, {1.0, 50.0}, Branch::High);
  CHECK(std::abs(fp.value(p)) < 1e-10);
}
