#pragma once

#include <limits>

namespace tsa {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Converts a decibel quantity to linear scale; -inf dB maps to 0 and
/// +inf dB to +inf.
double db_to_linear(double db);
double linear_to_db(double linear);

/// Spatial contention constant c = pi * theta^(2/alpha) * G(1-2/alpha) * G(1+2/alpha).
/// Throws DomainError for alpha <= 2 (Gamma pole) or theta < 0.
double spatial_contention(double theta, double alpha);

/// Physical-layer and geometry parameters of a Poisson bipolar network.
///
/// All quantities are linear. `rho` may be +infinity to model the
/// interference-limited (noise-free) case, in which the noise term vanishes.
/// The derived spatial contention is computed once at construction.
class NetworkConfig {
 public:
  /// Throws DomainError unless lambda >= 0, r > 0, theta >= 0, rho > 0, alpha > 2.
  /// lambda = 0 is accepted and describes an isolated link.
  NetworkConfig(double lambda, double r, double theta, double rho, double alpha);

  double lambda() const noexcept { return lambda_; }
  double r() const noexcept { return r_; }
  double theta() const noexcept { return theta_; }
  double rho() const noexcept { return rho_; }
  double alpha() const noexcept { return alpha_; }

  /// Spatial contention c.
  double contention() const noexcept { return contention_; }
  /// Interference level lambda * c * r^2.
  double interference_level() const noexcept { return lambda_ * contention_ * r_ * r_; }
  /// Noise term K = theta * r^alpha / rho (0 when rho is infinite).
  double noise_term() const noexcept { return noise_term_; }

  /// Same geometry with a different density.
  NetworkConfig with_lambda(double lambda) const;

  /// Config whose interference level lambda*c*r^2 equals `level`, holding
  /// r, theta, rho, alpha fixed. Requires theta > 0 unless level == 0.
  NetworkConfig with_interference_level(double level) const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;

 private:
  double lambda_;
  double r_;
  double theta_;
  double rho_;
  double alpha_;
  double contention_;
  double noise_term_;
};

/// TSA control knobs: update rate eta in (0,1] and age threshold A >= 0.
/// A is real-valued for analysis; `round_age_threshold` maps it to an integer.
struct ProtocolParams {
  double eta = 1.0;
  double age_threshold = 0.0;

  /// Throws DomainError if eta is outside (0,1] or A is negative / not finite.
  void validate() const;

  friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

}  // namespace tsa
