#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tsa/errors.hpp"
#include "tsa/network.hpp"

using namespace tsa;

TEST_CASE("contention is zero at a zero threshold") {
  CHECK(spatial_contention(0.0, 3.8) == 0.0);
}

TEST_CASE("contention at alpha 4 is pi^2/2") {
  CHECK(spatial_contention(1.0, 4.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-14));
}

TEST_CASE("contention agrees with the reflection identity") {
  for (double alpha : {2.1, 2.5, 3.0, 3.8, 4.0, 5.5, 8.0}) {
    for (double theta : {0.01, 0.5, 1.0, 10.0}) {
      const double lib = spatial_contention(theta, alpha);
      const double ref = oracle::contention(theta, alpha);
      CHECK(std::abs(lib - ref) / ref < 1e-10);
    }
  }
}

TEST_CASE("contention rejects alpha at or below two and negative thresholds") {
  CHECK_THROWS_AS(spatial_contention(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(spatial_contention(1.0, 1.5), DomainError);
  CHECK_THROWS_AS(spatial_contention(-0.1, 3.8), DomainError);
}

TEST_CASE("network config derived quantities") {
  const NetworkConfig cfg(0.15, 3.0, 1.0, 100.0, 3.8);
  CHECK(cfg.contention() == doctest::Approx(5.2123).epsilon(1e-4));
  CHECK(cfg.interference_level() == doctest::Approx(7.0366).epsilon(1e-4));
  CHECK(cfg.noise_term() == doctest::Approx(std::pow(3.0, 3.8) / 100.0).epsilon(1e-14));
}

TEST_CASE("infinite SNR removes the noise term") {
  const NetworkConfig cfg(0.1, 2.0, 1.0, kInfinity, 3.5);
  CHECK(cfg.noise_term() == 0.0);
}

TEST_CASE("network config validation") {
  CHECK_THROWS_AS(NetworkConfig(-0.1, 3.0, 1.0, 100.0, 3.8), DomainError);
  CHECK_THROWS_AS(NetworkConfig(0.1, 0.0, 1.0, 100.0, 3.8), DomainError);
  CHECK_THROWS_AS(NetworkConfig(0.1, 3.0, 1.0, 0.0, 3.8), DomainError);
  CHECK_THROWS_AS(NetworkConfig(0.1, 3.0, 1.0, 100.0, 2.0), DomainError);
  CHECK_NOTHROW(NetworkConfig(0.0, 3.0, 1.0, 100.0, 3.8));
}

TEST_CASE("interference level rescaling keeps geometry") {
  const NetworkConfig cfg(0.01, 3.0, 1.0, 100.0, 3.8);
  const NetworkConfig dense = cfg.with_interference_level(12.5);
  CHECK(dense.interference_level() == doctest::Approx(12.5).epsilon(1e-14));
  CHECK(dense.r() == cfg.r());
  CHECK(dense.noise_term() == cfg.noise_term());
}

TEST_CASE("decibel conversion") {
  CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
  CHECK(std::isinf(db_to_linear(kInfinity)));
}

TEST_CASE("protocol params validation") {
  CHECK_NOTHROW((ProtocolParams{1.0, 0.0}.validate()));
  CHECK_THROWS_AS((ProtocolParams{0.0, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((ProtocolParams{1.5, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((ProtocolParams{1.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ProtocolParams{1.0, kInfinity}.validate()), DomainError);
}
