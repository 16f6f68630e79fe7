#include "tsa/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Low: return "low";
    case Branch::Middle: return "middle";
    case Branch::High: return "high";
  }
  return "?";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Bistable: return "bistable";
    case Region::MonoHigh: return "mono-high";
    case Region::MonoLow: return "mono-low";
    case Region::Boundary: return "boundary";
  }
  return "?";
}

namespace {

void check_probability(double p, const char* where) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError(std::string(where) + ": probability must lie in (0,1] (got " +
                      std::to_string(p) + ")");
  }
}

// h(p) = -ln p - x/(1 + A eta p) - K with x = lambda c r^2 eta. Equal to the
// auxiliary function f(p) when A > 0 and still well defined at A = 0.
struct Auxiliary {
  double x;
  double a_eta;
  double k;

  explicit Auxiliary(const NetworkConfig& c, const ProtocolParams& pp)
      : x(c.interference_level() * pp.eta), a_eta(pp.age_threshold * pp.eta), k(c.noise_term()) {}

  double operator()(double p) const { return -std::log(p) - x / (1.0 + a_eta * p) - k; }
};

// Bisection on a monotone piece [a, b] where h(a) and h(b) differ in sign
// (or one of them is zero). Runs to full double resolution.
double bisect(const Auxiliary& h, double a, double b, double ha, double hb) {
  if (ha == 0.0) return a;
  if (hb == 0.0) return b;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double hm = h(mid);
    if (hm == 0.0) return mid;
    if ((hm > 0.0) == (ha > 0.0)) {
      a = mid;
      ha = hm;
    } else {
      b = mid;
      hb = hm;
    }
  }
  return std::abs(ha) <= std::abs(hb) ? a : b;
}

}  // namespace

FixedPointProblem FixedPointProblem::from(const NetworkConfig& config, const ProtocolParams& params) {
  params.validate();
  if (params.age_threshold == 0.0) {
    throw DomainError("FixedPointProblem: auxiliary constants require A > 0");
  }
  const double a = params.age_threshold;
  return {config.interference_level() / a, 1.0 / (a * params.eta), config.noise_term()};
}

double FixedPointProblem::value(double p) const { return -std::log(p) - m / (n + p) - k; }

double FixedPointProblem::phi(double p) const {
  const double shifted = p + n - m / 2.0;
  return -shifted * shifted + m * m / 4.0 - m * n;
}

std::optional<std::pair<double, double>> FixedPointProblem::stationary_points() const {
  const double disc = m * m / 4.0 - m * n;
  if (!(disc > 0.0)) return std::nullopt;
  const double root = std::sqrt(disc);
  return std::make_pair(m / 2.0 - n - root, m / 2.0 - n + root);
}

double fixed_point_map(const NetworkConfig& config, const ProtocolParams& params, double p) {
  const double x = config.interference_level() * params.eta;
  return std::exp(-x / (1.0 + params.age_threshold * params.eta * p) - config.noise_term());
}

double fixed_point_residual(const NetworkConfig& config, const ProtocolParams& params, double p) {
  params.validate();
  check_probability(p, "fixed_point_residual");
  return p - fixed_point_map(config, params, p);
}

IterationResult fixed_point_iterate(const NetworkConfig& config, const ProtocolParams& params,
                                    double p0, double tol, std::size_t max_iter,
                                    bool record_trajectory) {
  params.validate();
  check_probability(p0, "fixed_point_iterate");
  if (!(tol > 0.0)) throw DomainError("fixed_point_iterate: tol must be > 0");

  IterationResult out{p0, 0, {}};
  if (record_trajectory) out.trajectory.push_back(p0);
  double p = p0;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    const double next = fixed_point_map(config, params, p);
    if (record_trajectory) out.trajectory.push_back(next);
    const double step = std::abs(next - p);
    p = next;
    if (step < tol) {
      out.p_s = p;
      out.iterations = n;
      return out;
    }
  }
  throw ConvergenceError("fixed_point_iterate: no convergence within " +
                             std::to_string(max_iter) + " iterations",
                         p, std::move(out.trajectory));
}

std::vector<double> fixed_point_roots(const NetworkConfig& config, const ProtocolParams& params) {
  params.validate();
  const Auxiliary h(config, params);

  // Every root lies in [exp(-x-K), exp(-x/(1+A eta) - K)].
  const double lo = std::exp(-h.x - h.k);
  const double hi = std::exp(-h.x / (1.0 + h.a_eta) - h.k);
  if (!(lo > 0.0)) throw DomainError("fixed_point_roots: success probability underflows");
  if (lo == hi) return {lo};

  std::vector<double> cuts{lo};
  std::vector<double> tangents;
  if (params.age_threshold > 0.0) {
    if (auto st = FixedPointProblem::from(config, params).stationary_points()) {
      for (double s : {st->first, st->second}) {
        if (s > lo && s < hi) {
          cuts.push_back(s);
          if (std::abs(h(s)) <= 1e-14) tangents.push_back(s);
        }
      }
    }
  }
  cuts.push_back(hi);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    // h >= 0 at the bottom of the bracket and <= 0 at the top; rounding may disagree.
    const double ha = i == 0 ? std::max(h(a), 0.0) : h(a);
    const double hb = i + 2 == cuts.size() ? std::min(h(b), 0.0) : h(b);
    if (ha == 0.0 || hb == 0.0 || (ha > 0.0) != (hb > 0.0)) roots.push_back(bisect(h, a, b, ha, hb));
  }
  roots.insert(roots.end(), tangents.begin(), tangents.end());
  std::sort(roots.begin(), roots.end());

  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > 1e-9 * r) unique.push_back(r);
  }
  return unique;
}

double solve_branch(const NetworkConfig& config, const ProtocolParams& params, Branch branch) {
  const auto roots = fixed_point_roots(config, params);
  switch (branch) {
    case Branch::Low: return roots.front();
    case Branch::High: return roots.back();
    case Branch::Middle:
      if (roots.size() == 3) return roots[1];
      throw BranchNotPresent("solve_branch: middle root exists only in the bistable region");
  }
  throw BranchNotPresent("solve_branch: unknown branch");
}

std::optional<StabilityThresholds> stability_thresholds(const NetworkConfig& config, double eta) {
  ProtocolParams{eta, 0.0}.validate();
  const double x = config.interference_level() * eta;
  if (!(x > 4.0)) return std::nullopt;
  // s_+ and s_- solve s^2 - s + 1/x = 0; x s - 1 = x s^2 on both roots.
  const double s_plus = 0.5 + std::sqrt(0.25 - 1.0 / x);
  const double s_minus = (1.0 / x) / s_plus;
  const double k = config.noise_term();
  const double a_low = x * s_plus * s_plus * std::exp(k + 1.0 / s_plus) / eta;
  const double a_high = x * s_minus * s_minus * std::exp(k + 1.0 / s_minus) / eta;
  return StabilityThresholds{a_low, a_high};
}

std::size_t RegionClassification::root_count() const {
  return static_cast<std::size_t>(p_low.has_value()) + static_cast<std::size_t>(p_middle.has_value()) +
         static_cast<std::size_t>(p_high.has_value());
}

RegionClassification classify_region(const NetworkConfig& config, const ProtocolParams& params) {
  params.validate();
  RegionClassification out{Region::MonoHigh, {}, {}, {}, {}, {}};
  const auto roots = fixed_point_roots(config, params);
  const auto thresholds = stability_thresholds(config, params.eta);
  if (!thresholds) {
    out.p_high = roots.back();
    return out;
  }
  out.a_low = thresholds->a_low;
  out.a_high = thresholds->a_high;

  const double a = params.age_threshold;
  const double band = kBoundaryRelTol * std::max(1.0, a);
  const bool at_low = std::abs(a - thresholds->a_low) < band;
  const bool at_high = std::abs(a - thresholds->a_high) < band;

  if (at_low || at_high) {
    out.region = Region::Boundary;
    out.p_low = roots.front();
    out.p_high = roots.back();
    if (roots.size() == 1) {
      // The double root sits at a stationary point of the auxiliary function:
      // the larger one at A_l (new high pair), the smaller one at A_h.
      const auto st = FixedPointProblem::from(config, params).stationary_points();
      if (st) {
        if (at_low) out.p_high = std::max(roots.back(), st->second);
        else out.p_low = std::min(roots.front(), st->first);
      }
    }
    return out;
  }
  if (a > thresholds->a_low && a < thresholds->a_high) {
    out.region = Region::Bistable;
    out.p_low = roots.front();
    out.p_high = roots.back();
    if (roots.size() == 3) out.p_middle = roots[1];
    return out;
  }
  if (a >= thresholds->a_high) {
    out.region = Region::MonoHigh;
    out.p_high = roots.back();
  } else {
    out.region = Region::MonoLow;
    out.p_low = roots.front();
  }
  return out;
}

double bistable_ratio_bound(const NetworkConfig& config, double eta) {
  ProtocolParams{eta, 0.0}.validate();
  const double x = config.interference_level() * eta;
  if (!(x > 4.0)) throw DomainError("bistable_ratio_bound: requires lambda c r^2 eta > 4");
  return std::exp(std::sqrt(x * x - 4.0 * x));
}

}  // namespace tsa
