#include "irislab/iris_core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace irislab {

namespace {

void require_open_unit(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error(std::string(what) + ": entry coordinate must lie in (0, 1), got " +
                            std::to_string(u));
  }
}

double rho_prime(double u, double lambda) { return lambda * std::pow(u, lambda - 1.0) - 1.0; }

// rho is convex on [lo, hi] and changes sign exactly once there.
double polish_root(double lo, double hi, const IrisParams& p) {
  double f_lo = rho(lo, p);
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = rho(mid, p);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }

  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double f = rho(u, p);
    if (f == 0.0) break;
    if ((f > 0.0) == (f_lo > 0.0)) {
      lo = u;
    } else {
      hi = u;
    }
    const double df = rho_prime(u, p.lambda);
    double next = (df != 0.0) ? u - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - u;
    u = next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * u) break;
  }
  return u;
}

}  // namespace

void IrisParams::validate() const {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be a positive finite number");
  }
  if (!std::isfinite(a) || a < 0.0 || a >= 1.0) {
    throw std::invalid_argument("offset a must satisfy 0 <= a < 1");
  }
  if (a > 0.0 && a < 1e-300) {
    throw std::invalid_argument("offset a below 1e-300 is not representable reliably");
  }
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::StableAndUnstableCycle: return "stable_and_unstable_cycle";
    case Regime::FoldPoint: return "fold_point";
    case Regime::NoCycleSpiral: return "no_cycle_spiral";
    case Regime::HeteroclinicBoundary: return "heteroclinic_boundary";
    case Regime::NeutralOrbits: return "neutral_orbits";
  }
  return "unknown";
}

double rho(double u, const IrisParams& p) {
  require_open_unit(u, "rho");
  return std::pow(u, p.lambda) - u + p.a;
}

double min_entry(double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("min_entry requires lambda > 1");
  return std::pow(lambda, 1.0 / (1.0 - lambda));
}

bool existence_test(const IrisParams& p) {
  if (!(p.lambda > 1.0)) return false;
  const double e = 1.0 / (1.0 - p.lambda);
  return std::pow(p.lambda, p.lambda * e) - std::pow(p.lambda, e) + p.a <= 0.0;
}

double fold_offset(double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("fold_offset requires lambda > 1");
  // u_min - u_min^lambda with u_min^(lambda-1) = 1/lambda.
  return min_entry(lambda) * (1.0 - 1.0 / lambda);
}

Regime classify_regime(const IrisParams& p) {
  p.validate();
  if (p.a == 0.0) {
    if (p.lambda == 1.0) return Regime::NeutralOrbits;
    if (p.lambda > 1.0) return Regime::HeteroclinicBoundary;
    return Regime::NoCycleSpiral;
  }
  if (!(p.lambda > 1.0)) return Regime::NoCycleSpiral;
  const double a_fold = fold_offset(p.lambda);
  if (std::abs(p.a - a_fold) < kFoldTolerance) return Regime::FoldPoint;
  return p.a < a_fold ? Regime::StableAndUnstableCycle : Regime::NoCycleSpiral;
}

std::optional<std::pair<double, double>> find_roots(const IrisParams& p) {
  p.validate();
  if (!(p.lambda > 1.0) || p.a == 0.0 || !existence_test(p)) return std::nullopt;

  const double u_min = min_entry(p.lambda);
  const double at_min = std::pow(u_min, p.lambda) - u_min + p.a;
  if (at_min >= -1e-15) return std::pair{u_min, u_min};

  // rho(0) = rho(1) = a > 0 closes both brackets.
  const double eps = std::numeric_limits<double>::min();
  const double lower = polish_root(eps, u_min, p);
  const double upper = polish_root(u_min, std::nextafter(1.0, 0.0), p);
  return std::pair{lower, upper};
}

std::optional<IrisCycle> find_cycle(const IrisParams& p) {
  const auto roots = find_roots(p);
  if (!roots) return std::nullopt;
  IrisCycle c;
  c.u_dag = roots->first;
  c.u_ddag = roots->second;
  c.s_dag = std::pow(c.u_dag, p.lambda);
  c.period = 4.0 * std::log(1.0 / c.u_dag);
  return c;
}

IrisCycle require_stable_cycle(const IrisParams& p) {
  const Regime r = classify_regime(p);
  if (r != Regime::StableAndUnstableCycle) {
    throw NoCycleError("no stable limit cycle for lambda=" + std::to_string(p.lambda) +
                       ", a=" + std::to_string(p.a) + " (" + std::string(to_string(r)) + ")");
  }
  auto c = find_cycle(p);
  if (!c || c->degenerate()) throw NoCycleError("limit cycle is degenerate at these parameters");
  return *c;
}

double stability_derivative(double u, const IrisParams& p) {
  require_open_unit(u, "stability_derivative");
  return p.lambda * std::pow(u, p.lambda - 1.0);
}

TransitMap map_fl(double u, const IrisParams& p) {
  require_open_unit(u, "map_fl");
  return {std::pow(u, p.lambda), std::log(1.0 / u)};
}

double map_h(double u, const IrisParams& p) { return map_fl(u, p).s_exit + p.a; }

Approach closest_slowest(double u_in, const IrisParams& p) {
  require_open_unit(u_in, "closest_slowest");
  const double lam = p.lambda;
  const double log_lam = std::log(lam);
  const double log_u = std::log(u_in);
  Approach r{};
  r.t_closest = (log_lam - 2.0 * log_u) / (2.0 * (lam + 1.0));
  r.t_slowest = (3.0 * log_lam - 2.0 * log_u) / (2.0 * (lam + 1.0));
  const double transit = -log_u;
  r.phi_closest = r.t_closest / transit;
  r.phi_slowest = r.t_slowest / transit;
  r.u_closest = u_in * std::exp(r.t_closest);
  r.s_closest = std::exp(-lam * r.t_closest);
  r.u_slowest = u_in * std::exp(r.t_slowest);
  r.s_slowest = std::exp(-lam * r.t_slowest);
  return r;
}

}  // namespace irislab
