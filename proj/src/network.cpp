#include "tsa/network.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

double db_to_linear(double db) {
  if (std::isnan(db)) throw DomainError("db_to_linear: NaN");
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) {
  if (!(linear >= 0.0)) throw DomainError("linear_to_db: negative or NaN value");
  return 10.0 * std::log10(linear);
}

double spatial_contention(double theta, double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw DomainError("spatial_contention: alpha must be > 2 (got " + std::to_string(alpha) + ")");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw DomainError("spatial_contention: theta must be >= 0 (got " + std::to_string(theta) + ")");
  }
  if (theta == 0.0) return 0.0;
  const double delta = 2.0 / alpha;
  return std::numbers::pi * std::pow(theta, delta) * std::tgamma(1.0 - delta) *
         std::tgamma(1.0 + delta);
}

NetworkConfig::NetworkConfig(double lambda, double r, double theta, double rho, double alpha)
    : lambda_(lambda), r_(r), theta_(theta), rho_(rho), alpha_(alpha) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("NetworkConfig: lambda must be >= 0");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("NetworkConfig: r must be > 0");
  if (!(rho > 0.0)) throw DomainError("NetworkConfig: rho must be > 0");
  contention_ = spatial_contention(theta, alpha);
  noise_term_ = std::isinf(rho) ? 0.0 : theta * std::pow(r, alpha) / rho;
}

NetworkConfig NetworkConfig::with_lambda(double lambda) const {
  return NetworkConfig(lambda, r_, theta_, rho_, alpha_);
}

NetworkConfig NetworkConfig::with_interference_level(double level) const {
  if (!(level >= 0.0)) throw DomainError("with_interference_level: level must be >= 0");
  if (level == 0.0) return with_lambda(0.0);
  if (contention_ == 0.0) throw DomainError("with_interference_level: theta = 0 gives no contention");
  return with_lambda(level / (contention_ * r_ * r_));
}

void ProtocolParams::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("update rate eta must lie in (0,1]");
  if (!(age_threshold >= 0.0) || !std::isfinite(age_threshold)) {
    throw DomainError("age threshold must be a finite non-negative number");
  }
}

}  // namespace tsa
