#include "tsa/aoi.hpp"

#include <cmath>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

void check_point(double a, double eta, double p_s) {
  ProtocolParams{eta, a}.validate();
  if (p_s == 0.0) throw DomainError("AoI diverges: success probability is zero");
  if (!(p_s > 0.0 && p_s <= 1.0)) {
    throw DomainError("success probability must lie in (0,1] (got " + std::to_string(p_s) + ")");
  }
}

}  // namespace

double mean_peak_aoi(double age_threshold, double eta, double p_s) {
  check_point(age_threshold, eta, p_s);
  return age_threshold + 1.0 / (eta * p_s);
}

double time_average_aoi(double age_threshold, double eta, double p_s) {
  check_point(age_threshold, eta, p_s);
  const double a = age_threshold;
  const double q = eta * p_s;
  // (A+1)/2 - (A+1)/(2u) folded into one term so that A = 0 gives 1/q exactly.
  return 1.0 / q + (a + 1.0) * a * q / (2.0 * (1.0 + a * q));
}

double sa_baseline(const NetworkConfig& config, double eta) {
  ProtocolParams{eta, 0.0}.validate();
  return std::exp(config.interference_level() * eta + config.noise_term()) / eta;
}

AoiBounds aoi_bounds(double age_threshold, double eta, double p_s) {
  check_point(age_threshold, eta, p_s);
  const double q = eta * p_s;
  const double u = 1.0 + age_threshold * q;
  const double lower = u / (2.0 * q) + 1.0 / (2.0 * q * u);
  return {lower, lower + 0.5};
}

bool tsa_beats_sa_peak(const NetworkConfig& config, const ProtocolParams& params, double p_s_tsa) {
  check_point(params.age_threshold, params.eta, p_s_tsa);
  const double u = 1.0 + params.age_threshold * params.eta * p_s_tsa;
  return config.interference_level() >= u / params.eta;
}

bool tsa_beats_sa_average(const NetworkConfig& config, const ProtocolParams& params,
                          double p_s_tsa) {
  check_point(params.age_threshold, params.eta, p_s_tsa);
  const double a = params.age_threshold;
  if (!(a > 0.0)) throw DomainError("tsa_beats_sa_average: requires A > 0");
  const double u = 1.0 + a * params.eta * p_s_tsa;
  return config.interference_level() >= (1.0 + a) * u / (2.0 * a * params.eta);
}

AoiReport evaluate_aoi(const NetworkConfig& config, const ProtocolParams& params, Branch branch) {
  const auto cls = classify_region(config, params);
  const double p = solve_branch(config, params, branch);
  const auto bounds = aoi_bounds(params.age_threshold, params.eta, p);
  return {mean_peak_aoi(params.age_threshold, params.eta, p),
          time_average_aoi(params.age_threshold, params.eta, p),
          bounds.lower,
          bounds.upper,
          p,
          branch,
          cls.region,
          cls.region == Region::Bistable};
}

}  // namespace tsa
