#include "irislab/iris_prc.hpp"

#include <cmath>
#include <string>

#include "irislab/quadrature.hpp"

namespace irislab {

namespace {

void require_fraction(double phi) {
  if (!(phi >= 0.0 && phi < 1.0)) {
    throw std::domain_error("phase fraction must lie in [0, 1), got " + std::to_string(phi));
  }
}

GlobalBeta reindex(int k, BetaPair b) {
  switch (k) {
    case 0: return {b.s, b.u};
    case 1: return {b.u, -b.s};
    case 2: return {-b.s, -b.u};
    default: return {-b.u, b.s};
  }
}

double dot(PerturbDirection eta, BetaPair b) { return eta.eta_s * b.s + eta.eta_u * b.u; }

// Contraction of the entry map at the stable fixed point.
double contraction(const IrisCycle& c, const IrisParams& p) {
  return p.lambda * std::pow(c.u_dag, p.lambda - 1.0);
}

}  // namespace

PerturbDirection PerturbDirection::normalized(double eta_s, double eta_u) {
  const double norm = std::abs(eta_s) + std::abs(eta_u);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("perturbation direction must be a finite nonzero vector");
  }
  return {eta_s / norm, eta_u / norm};
}

PerturbDirection PerturbDirection::rotated(int quarter_turns) const {
  PerturbDirection r = *this;
  const int k = ((quarter_turns % 4) + 4) % 4;
  for (int i = 0; i < k; ++i) r = {-r.eta_u, r.eta_s};
  return r;
}

Phase Phase::wrap(double theta) {
  if (!std::isfinite(theta)) throw std::domain_error("phase must be finite");
  double t = std::fmod(theta, 4.0);
  if (t < 0.0) t += 4.0;
  if (t >= 4.0) t = 0.0;
  return {t};
}

int Phase::quarter() const {
  const int k = static_cast<int>(std::floor(theta));
  return k < 0 ? 0 : (k > 3 ? 3 : k);
}

double Phase::fraction() const { return theta - quarter(); }

BetaPair beta(double phi, const IrisCycle& cycle) {
  require_fraction(phi);
  return {std::pow(cycle.s_dag, 1.0 - phi), std::pow(cycle.u_dag, phi)};
}

GlobalBeta beta_global(Phase theta, const IrisCycle& cycle) {
  const Phase t = Phase::wrap(theta.theta);
  return reindex(t.quarter(), beta(t.fraction(), cycle));
}

double prc_denominator(const IrisCycle& cycle, const IrisParams& p) {
  return std::log(1.0 / cycle.u_dag) * (cycle.u_dag - p.lambda * cycle.s_dag);
}

double iprc_local(PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                  const IrisParams& p) {
  return dot(eta_local, beta(phi, cycle)) / prc_denominator(cycle, p);
}

double iprc(PerturbDirection eta, Phase theta, const IrisParams& p) {
  return iprc(eta, theta, require_stable_cycle(p), p);
}

double iprc(PerturbDirection eta, Phase theta, const IrisCycle& cycle, const IrisParams& p) {
  if (!(cycle.u_dag < cycle.u_ddag)) throw NoCycleError("iprc needs a strictly stable cycle");
  const Phase t = Phase::wrap(theta.theta);
  return iprc_local(eta.rotated(t.quarter()), t.fraction(), cycle, p);
}

double component(const PrcSample& sample, PrcDirection d) {
  switch (d) {
    case PrcDirection::GlobalX: return sample.z_x;
    case PrcDirection::GlobalY: return sample.z_y;
    case PrcDirection::LocalS: return sample.z_s;
    case PrcDirection::LocalU: return sample.z_u;
  }
  return 0.0;
}

std::vector<PrcSample> prc_curve(std::size_t n_samples, const IrisCycle& cycle,
                                 const IrisParams& p) {
  if (n_samples < 4) throw std::invalid_argument("prc_curve needs at least 4 samples");
  const double denom = prc_denominator(cycle, p);
  std::vector<PrcSample> out;
  out.reserve(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    const Phase theta = Phase::wrap(4.0 * static_cast<double>(j) / static_cast<double>(n_samples));
    const BetaPair b = beta(theta.fraction(), cycle);
    const GlobalBeta g = reindex(theta.quarter(), b);
    out.push_back({theta.theta, g.x / denom, g.y / denom, b.s / denom, b.u / denom});
  }
  return out;
}

double prc_jump(PrcDirection d, int k, const IrisCycle& cycle, const IrisParams& p) {
  if (k < 0 || k > 3) throw std::domain_error("prc_jump: integer phase must be 0..3");
  const double denom = prc_denominator(cycle, p);
  const BetaPair right = beta(0.0, cycle);
  const BetaPair left{1.0, cycle.u_dag};  // beta(phi -> 1-)
  const int prev = (k + 3) % 4;
  switch (d) {
    case PrcDirection::GlobalX: return (reindex(k, right).x - reindex(prev, left).x) / denom;
    case PrcDirection::GlobalY: return (reindex(k, right).y - reindex(prev, left).y) / denom;
    case PrcDirection::LocalS: return (right.s - left.s) / denom;
    case PrcDirection::LocalU: return (right.u - left.u) / denom;
  }
  return 0.0;
}

double v_integral(const IrisCycle& cycle, const IrisParams& p) {
  const double lam = p.lambda;
  const double u = cycle.u_dag;
  return (1.0 + lam - lam * u - std::pow(u, lam)) / (lam * std::log(1.0 / u));
}

AlphaPair alpha(Phase theta, const IrisCycle& cycle, const IrisParams& p) {
  const GlobalBeta g = beta_global(theta, cycle);
  const double v = v_integral(cycle, p);
  return {g.x / v, g.y / v};
}

double alpha_l1_integral(const IrisCycle& cycle, const IrisParams& p, double tol) {
  const double v = v_integral(cycle, p);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    // Each unit interval is smooth; the closed right end uses beta(1-) = (1, u_dag).
    auto integrand = [&](double phi) {
      const BetaPair b = phi < 1.0 ? beta(phi, cycle) : BetaPair{1.0, cycle.u_dag};
      const GlobalBeta g = reindex(k, b);
      return (std::abs(g.x) + std::abs(g.y)) / v;
    };
    total += adaptive_simpson(integrand, 0.0, 1.0, 0.25 * tol);
  }
  return total;
}

double magnitude_m(const IrisCycle& cycle, const IrisParams& p) {
  const double lam = p.lambda;
  const double u = cycle.u_dag;
  const double l = std::log(1.0 / u);
  return (1.0 + lam - lam * u - std::pow(u, lam)) / (lam * l * l * (u - lam * std::pow(u, lam)));
}

double critical_phase(double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("critical_phase requires lambda > 1");
  return 1.0 - 1.0 / lambda;
}

Sensitivity asymptotic_class(Eigendirection d, double phi, double lambda) {
  if (d == Eigendirection::Unstable) return Sensitivity::Diverges;
  return phi <= critical_phase(lambda) ? Sensitivity::ConvergesToZero : Sensitivity::Diverges;
}

SmallOffsetEntry u_dag_small_a(double a, double lambda) {
  const IrisParams p = IrisParams::make(lambda, a);
  const auto roots = find_roots(p);
  if (!roots) {
    throw NoCycleError("no limit cycle for lambda=" + std::to_string(lambda) +
                       ", a=" + std::to_string(a));
  }
  return {roots->first, (roots->first - a) / a};
}

void HomoclinicParams::validate() const {
  if (!(big_delta > 0.0) || !std::isfinite(big_delta)) {
    throw std::invalid_argument("box size must be positive");
  }
  if (!(epsilon_reinject > 0.0 && epsilon_reinject < big_delta)) {
    throw std::invalid_argument("reinjection coordinate must lie in (0, box size)");
  }
  if (!std::isfinite(nu_x)) throw std::invalid_argument("projection factor must be finite");
}

TableRow homoclinic_iprc(double phi, const HomoclinicParams& hp) {
  hp.validate();
  if (!(phi >= 0.0 && phi <= 1.0)) throw std::domain_error("phase fraction must lie in [0, 1]");
  const double u = hp.u();
  return {(hp.nu_x / hp.big_delta) * std::pow(u, phi) / (u * std::log(1.0 / u)), 0.0};
}

TableRow iris_table_row(double phi, double u, double lambda) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("entry coordinate must lie in (0, 1)");
  if (!(phi >= 0.0 && phi <= 1.0)) throw std::domain_error("phase fraction must lie in [0, 1]");
  const double s = std::pow(u, lambda);
  const double denom = (u - lambda * s) * std::log(1.0 / u);
  return {std::pow(u, phi) / denom, std::pow(s, 1.0 - phi) / denom};
}

double first_entry_shift(PerturbDirection eta, double phi, const IrisCycle& c,
                         const IrisParams& p) {
  require_fraction(phi);
  const double t = phi * c.transit();
  return eta.eta_s * std::pow(c.u_dag * std::exp(t), p.lambda) +
         eta.eta_u * contraction(c, p) * std::exp(-t);
}

double first_transit_shift(PerturbDirection eta, double phi, const IrisCycle& c,
                           const IrisParams&) {
  require_fraction(phi);
  return -eta.eta_u * std::exp(-phi * c.transit()) / c.u_dag;
}

double entry_shift(int n, PerturbDirection eta, double phi, const IrisCycle& c,
                   const IrisParams& p) {
  if (n < 1) throw std::domain_error("entry_shift: n must be >= 1");
  return std::pow(contraction(c, p), n - 1) * first_entry_shift(eta, phi, c, p);
}

double cumulative_shift(int n, PerturbDirection eta, double phi, const IrisCycle& c,
                        const IrisParams& p) {
  if (n < 1) throw std::domain_error("cumulative_shift: n must be >= 1");
  const double q = contraction(c, p);
  const double geometric = (1.0 - std::pow(q, n - 1)) / (1.0 - q);
  return first_transit_shift(eta, phi, c, p) -
         first_entry_shift(eta, phi, c, p) * geometric / c.u_dag;
}

double cumulative_shift_limit(PerturbDirection eta, double phi, const IrisCycle& c,
                              const IrisParams& p) {
  require_fraction(phi);
  const double t = phi * c.transit();
  return -(eta.eta_s * c.s_dag * std::exp(p.lambda * t) + eta.eta_u * std::exp(-t)) /
         (c.u_dag - p.lambda * c.s_dag);
}

}  // namespace irislab
