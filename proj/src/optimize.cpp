#include "tsa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "tsa/aoi.hpp"
#include "tsa/errors.hpp"
#include "tsa/fixed_point.hpp"
#include "tsa/lambert_w.hpp"

namespace tsa {

std::string_view to_string(OptRegime r) {
  switch (r) {
    case OptRegime::NoThreshold: return "no-threshold";
    case OptRegime::Threshold: return "threshold";
    case OptRegime::ReducedRate: return "reduced-rate";
    case OptRegime::FullRate: return "full-rate";
    case OptRegime::SaOptimal: return "sa-optimal";
    case OptRegime::JointFamily: return "joint-family";
    case OptRegime::ClosedForm: return "closed-form";
    case OptRegime::ExactFallback: return "exact-fallback";
    case OptRegime::Alternating: return "alternating";
    case OptRegime::SafeBoundary: return "safe-boundary";
  }
  return "unknown";
}

std::string_view to_string(Protocol p) { return p == Protocol::SA ? "SA" : "TSA"; }

namespace {

void check_eta(double eta) { ProtocolParams{eta, 0.0}.validate(); }

void check_threshold(double a) { ProtocolParams{1.0, a}.validate(); }

double high_root(const NetworkConfig& config, double eta, double a) {
  return solve_branch(config, ProtocolParams{eta, a}, Branch::High);
}

// Root of an increasing-through-zero function on [lo, hi] with f(lo) < 0 < f(hi).
template <class F>
double bisect_increasing(F&& f, double lo, double hi) {
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double unit_rate_success(const NetworkConfig& config, double age_threshold) {
  check_threshold(age_threshold);
  return high_root(config, 1.0, age_threshold);
}

OptResult opt_eta_peak(const NetworkConfig& config, double age_threshold) {
  const double a = age_threshold;
  const double lcr = config.interference_level();
  const double k = config.noise_term();
  const double p_star = unit_rate_success(config, a);
  if (lcr > 1.0 + a * p_star) {
    const double eta = 1.0 / (lcr - a * std::exp(-1.0 - k));
    return {a, eta, lcr * std::exp(1.0 + k), OptRegime::ReducedRate, std::exp(-1.0 - k)};
  }
  return {a, 1.0, a + 1.0 / p_star, OptRegime::FullRate, p_star};
}

OptResult opt_a_peak(const NetworkConfig& config, double eta) {
  check_eta(eta);
  const double lcr = config.interference_level();
  const double k = config.noise_term();
  if (lcr > 1.0 / eta) {
    const double a = (lcr - 1.0 / eta) * std::exp(1.0 + k);
    return {a, eta, lcr * std::exp(1.0 + k), OptRegime::Threshold, std::exp(-1.0 - k)};
  }
  return {0.0, eta, sa_baseline(config, eta), OptRegime::NoThreshold, std::exp(-lcr * eta - k)};
}

double JointPeakResult::threshold_for(double eta) const {
  const double slack = 1e-12 * eta_max;
  if (!(eta >= eta_min - slack && eta <= eta_max + slack)) {
    throw DomainError("threshold_for: rate outside the optimal family [" + std::to_string(eta_min) +
                      ", " + std::to_string(eta_max) + "]");
  }
  if (!(lambda_cr2 > 1.0)) return 0.0;
  return std::max(0.0, (lambda_cr2 - 1.0 / eta) * std::exp(1.0 + noise_term));
}

JointPeakResult opt_joint_peak(const NetworkConfig& config) {
  const double lcr = config.interference_level();
  const double k = config.noise_term();
  if (lcr > 1.0) {
    const double a = (lcr - 1.0) * std::exp(1.0 + k);
    return {{a, 1.0, lcr * std::exp(1.0 + k), OptRegime::JointFamily, std::exp(-1.0 - k)},
            1.0 / lcr, 1.0, lcr, k};
  }
  return {{0.0, 1.0, std::exp(lcr + k), OptRegime::SaOptimal, std::exp(-lcr - k)}, 1.0, 1.0, lcr, k};
}

OptResult opt_eta_avg(const NetworkConfig& config, double age_threshold) {
  const double a = age_threshold;
  const double lcr = config.interference_level();
  const double k = config.noise_term();
  const double p_star = unit_rate_success(config, a);
  if (lcr > 1.0 + a * p_star) {
    const double eta = 1.0 / (lcr - a * std::exp(-1.0 - k));
    const double b = lcr * std::exp(1.0 + k);
    const double obj = (2.0 * b * b + a * (a + 1.0)) / (2.0 * b) - a;
    return {a, eta, obj, OptRegime::ReducedRate, std::exp(-1.0 - k)};
  }
  const double u = 1.0 + a * p_star;
  const double obj = (a + 1.0) / 2.0 + (a - 1.0) / (2.0 * u) + 1.0 / (p_star * u);
  return {a, 1.0, obj, OptRegime::FullRate, p_star};
}

double avg_threshold_stationarity(const NetworkConfig& config, double eta, double u) {
  const double x = config.interference_level() * eta;
  return u * u * u - x * u * u + (eta * std::exp(-x / u - config.noise_term()) - 1.0) * u - x;
}

OptResult opt_a_avg(const NetworkConfig& config, double eta) {
  check_eta(eta);
  const double x = config.interference_level() * eta;
  const double k = config.noise_term();
  if (!(x > lambert_w0(0.5 * eta * std::exp(-k)))) {
    return {0.0, eta, sa_baseline(config, eta), OptRegime::NoThreshold, std::exp(-x - k)};
  }
  auto f = [&](double u) { return avg_threshold_stationarity(config, eta, u); };
  double hi = std::max(2.0 * std::numbers::e * config.interference_level(), 2.0);
  for (int i = 0; f(hi) <= 0.0; ++i) {
    if (i > 200) throw BracketError("opt_a_avg: no sign change for the stationarity condition");
    hi *= 2.0;
  }
  const double u = bisect_increasing(f, 1.0, hi);
  const double p = std::exp(-x / u - k);
  const double a = (u - 1.0) / (eta * p);
  return {a, eta, time_average_aoi(a, eta, p), OptRegime::Threshold, p};
}

double omega_surd(double x) {
  const double disc = x * x * x * x + 11.0 * x * x - 1.0;
  if (disc < 0.0) {
    throw DomainError("closed-form threshold undefined: x^4 + 11x^2 - 1 < 0 at x = " +
                      std::to_string(x));
  }
  return x * x * x + 18.0 * x + 3.0 * std::sqrt(3.0) * std::sqrt(disc);
}

SuboptimalThreshold subopt_a_avg_closed(const NetworkConfig& config, double eta) {
  check_eta(eta);
  const double x = config.interference_level() * eta;
  const double k = config.noise_term();
  const double omega = omega_surd(x);
  const double c1 = std::cbrt(omega);
  const double c2 = c1 * c1;
  const double g = c2 + x * c1 + x * x + 3.0;
  const double p = std::exp(-3.0 * x * c1 / g - k);
  const double a = (c2 + (x - 3.0) * c1 + x * x + 3.0) / (3.0 * eta * c1 * p);
  const double obj = (g * g + 9.0 * c2 * (1.0 - eta * p)) / (6.0 * eta * c1 * g * p) + 0.5;
  return {a, obj, omega, g / (3.0 * c1), p};
}

AlternatingResult alternating_optimize_avg(const NetworkConfig& config, double tol,
                                           std::size_t max_rounds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double eta0 = 1.0 - unit(rng);  // (0, 1]
  return alternating_optimize_avg_from(config, eta0, tol, max_rounds);
}

AlternatingResult alternating_optimize_avg_from(const NetworkConfig& config, double eta_start,
                                                double tol, std::size_t max_rounds) {
  check_eta(eta_start);
  if (!(tol > 0.0)) throw ConfigError("alternating_optimize_avg: tol must be positive");
  AlternatingResult out{{0.0, eta_start, 0.0, OptRegime::Alternating, 0.0}, eta_start, 0, {}};
  double eta = eta_start;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    const OptResult a_step = opt_a_avg(config, eta);
    out.objective_trace.push_back(a_step.objective);
    const OptResult eta_step = opt_eta_avg(config, a_step.a_star);
    out.objective_trace.push_back(eta_step.objective);
    eta = eta_step.eta_star;
    out.rounds = round;
    out.result = {a_step.a_star, eta, eta_step.objective, OptRegime::Alternating, eta_step.p_s_at_opt};
    if (std::abs(eta_step.objective - a_step.objective) < tol) return out;
  }
  throw ConvergenceError("alternating_optimize_avg: no convergence after " +
                             std::to_string(max_rounds) + " rounds",
                         out.result.objective, out.objective_trace);
}

OptResult opt_joint_avg(const NetworkConfig& config) {
  const double lcr = config.interference_level();
  const double k = config.noise_term();
  if (!(lcr > lambert_w0(0.5 * std::exp(-k)))) {
    return {0.0, 1.0, std::exp(lcr + k), OptRegime::SaOptimal, std::exp(-lcr - k)};
  }
  if (lcr * lcr * lcr * lcr + 11.0 * lcr * lcr - 1.0 < 0.0) {
    OptResult exact = opt_a_avg(config, 1.0);
    exact.regime = OptRegime::ExactFallback;
    return exact;
  }
  const auto closed = subopt_a_avg_closed(config, 1.0);
  return {closed.a_tilde, 1.0, closed.objective, OptRegime::ClosedForm, closed.p_s};
}

std::vector<ScalingPoint> scaling_limits(const NetworkConfig& base, const std::vector<double>& levels,
                                         Protocol protocol) {
  if (base.noise_term() != 0.0) {
    throw DomainError("scaling_limits: requires an interference-limited network (rho = inf)");
  }
  std::vector<ScalingPoint> out;
  out.reserve(levels.size());
  for (double level : levels) {
    if (!(level > 0.0) || !std::isfinite(level)) {
      throw DomainError("scaling_limits: interference levels must be positive and finite");
    }
    const NetworkConfig cfg = base.with_interference_level(level);
    ScalingPoint pt{};
    pt.lambda_cr2 = level;
    if (protocol == Protocol::SA) {
      // exp(x eta)/eta is minimised at eta = 1/x when x > 1.
      pt.eta_star = level > 1.0 ? 1.0 / level : 1.0;
      pt.avg_objective = sa_baseline(cfg, pt.eta_star);
      pt.peak_objective = pt.avg_objective;
      pt.a_star = 0.0;
    } else {
      const OptResult avg = opt_joint_avg(cfg);
      pt.avg_objective = avg.objective;
      pt.a_star = avg.a_star;
      pt.eta_star = avg.eta_star;
      pt.peak_objective = opt_joint_peak(cfg).result.objective;
    }
    pt.avg_ratio = pt.avg_objective / level;
    pt.peak_ratio = pt.peak_objective / level;
    pt.threshold_ratio = pt.a_star / level;
    out.push_back(pt);
  }
  return out;
}

double peak_family_crossing() {
  // (x - 1) e - x s^2 exp(1/s), s the smaller root of s^2 - s + 1/x; decreasing on (4, 20].
  auto g = [](double x) {
    const double s_plus = 0.5 + std::sqrt(0.25 - 1.0 / x);
    const double s = (1.0 / x) / s_plus;
    return x * s * s * std::exp(1.0 / s) - (x - 1.0) * std::numbers::e;
  };
  return bisect_increasing(g, 4.0, 20.0);
}

SafePeakResult safe_peak_params(const NetworkConfig& config) {
  const double lcr = config.interference_level();
  const double k = config.noise_term();
  if (!(lcr > 1.0)) {
    const auto joint = opt_joint_peak(config);
    return {joint.result, 1.0, 1.0, true};
  }
  const double eta_min = 1.0 / lcr;
  const double eta_max = std::min(1.0, peak_family_crossing() / lcr);
  const double a = (lcr - 1.0 / eta_max) * std::exp(1.0 + k);
  const OptRegime regime = eta_max < 1.0 ? OptRegime::SafeBoundary : OptRegime::JointFamily;
  return {{a, eta_max, lcr * std::exp(1.0 + k), regime, std::exp(-1.0 - k)}, eta_min, eta_max,
          eta_min <= eta_max};
}

double high_threshold_at(const NetworkConfig& config, double eta) {
  check_eta(eta);
  const double x = config.interference_level() * eta;
  if (x < 4.0 * (1.0 - 1e-12)) {
    throw DomainError("high_threshold_at: requires lambda c r^2 eta >= 4");
  }
  const double s_plus = 0.5 + std::sqrt(std::max(0.0, 0.25 - 1.0 / x));
  const double s_minus = (1.0 / x) / s_plus;
  return x * s_minus * s_minus * std::exp(config.noise_term() + 1.0 / s_minus) / eta;
}

double high_boundary_average(const NetworkConfig& config, double eta) {
  const double a = high_threshold_at(config, eta);
  return time_average_aoi(a, eta, high_root(config, eta, a));
}

double high_boundary_average_gradient(const NetworkConfig& config, double eta) {
  const double lcr = config.interference_level();
  const double x = lcr * eta;
  const double a = high_threshold_at(config, eta);
  const double p = high_root(config, eta, a);
  const double s_plus = 0.5 + std::sqrt(std::max(0.0, 0.25 - 1.0 / x));
  const double s_minus = (1.0 / x) / s_plus;
  const double e = std::exp(config.noise_term() + 1.0 / s_minus);
  const double u = 1.0 + a * eta * p;

  const double da = e / (eta * eta);
  const double dp = lcr * p * (1.0 - p * e) / (lcr * a * eta * eta * p - u * u);
  const double du = da * eta * p + a * p + a * eta * dp;
  return da / 2.0 - (p + eta * dp) / (eta * eta * p * p) - da / (2.0 * u) +
         (a + 1.0) * du / (2.0 * u * u);
}

SafeAvgResult safe_avg_params(const NetworkConfig& config, double eta_tol) {
  const double lcr = config.interference_level();
  if (!(lcr > 4.0)) {
    throw PreconditionError("safe_avg_params: no bistable region when lambda c r^2 <= 4");
  }
  const OptResult unconstrained = opt_joint_avg(config);
  const auto cls = classify_region(config, ProtocolParams{unconstrained.eta_star, unconstrained.a_star});
  if (cls.region != Region::Bistable) {
    throw PreconditionError("safe_avg_params: unconstrained optimum is not bistable (region " +
                            std::string(to_string(cls.region)) + ")");
  }

  const double eta_min = 4.0 / lcr;
  auto objective = [&](double eta) { return high_boundary_average(config, eta); };
  const int bits = std::clamp(static_cast<int>(std::ceil(-std::log2(eta_tol))), 8,
                              std::numeric_limits<double>::digits / 2);
  auto [eta, value] = boost::math::tools::brent_find_minima(objective, eta_min, 1.0, bits);
  for (double edge : {eta_min, 1.0}) {
    const double v = objective(edge);
    if (v < value) {
      eta = edge;
      value = v;
    }
  }
  const double a = high_threshold_at(config, eta);
  const bool at_edge = std::abs(eta - eta_min) <= 10.0 * eta_tol || std::abs(eta - 1.0) <= 10.0 * eta_tol;
  return {{a, eta, value, OptRegime::SafeBoundary, high_root(config, eta, a)},
          eta_min,
          high_boundary_average_gradient(config, eta),
          at_edge};
}

RoundedThreshold round_age_threshold(const NetworkConfig& config, double eta, double age_threshold,
                                     Objective objective) {
  check_eta(eta);
  check_threshold(age_threshold);
  auto eval = [&](double a) {
    const double p = high_root(config, eta, a);
    return objective == Objective::Peak ? mean_peak_aoi(a, eta, p) : time_average_aoi(a, eta, p);
  };
  const double lo = std::floor(age_threshold);
  const double hi = std::ceil(age_threshold);
  const double v_lo = eval(lo);
  if (hi == lo) return {static_cast<std::int64_t>(lo), v_lo};
  const double v_hi = eval(hi);
  if (v_hi < v_lo) return {static_cast<std::int64_t>(hi), v_hi};
  return {static_cast<std::int64_t>(lo), v_lo};
}

}  // namespace tsa
