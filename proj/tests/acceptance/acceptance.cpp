// Acceptance suite. Usage: acceptance [N]; runs criterion N (1..11) or all
// of them, printing one PASS/FAIL line each. Exit status is nonzero if any
// selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "irislab/iris_core.hpp"
#include "irislab/iris_prc.hpp"
#include "irislab/iris_sim.hpp"
#include "irislab/smooth_system.hpp"

using namespace irislab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IrisParams random_valid(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(1.2, 8.0);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  const double l = lam(rng);
  return IrisParams::make(l, frac(rng) * fold_offset(l));
}

Outcome fold_boundary() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double l : {1.5, 2.0, 3.0, 5.0}) {
    double lo = 0.0, hi = 0.999;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (existence_test(IrisParams::make(l, mid)) ? lo : hi) = mid;
    }
    worst = std::max(worst, std::abs(0.5 * (lo + hi) - fold_offset(l)));
  }
  const bool exact = fold_offset(2.0) == 0.25;
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && exact && secs < 1.0,
          fmt("max |a_bisect - a_fold| = %.3g, fold(2) == 0.25: %s, %.3f s", worst,
              exact ? "yes" : "no", secs)};
}

Outcome analytic_vs_numeric() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double a : {0.1, 0.2, 0.24}) {
    const IrisParams p = IrisParams::make(2.0, a);
    const IrisCycle c = require_stable_cycle(p);
    for (int j = 0; j < 64; ++j) {
      const double th = 4.0 * j / 64.0;
      for (Vec2 eta : {Vec2{1, 0}, Vec2{0, 1}}) {
        const double z = iprc({eta.x, eta.y}, Phase{th}, c, p);
        const double zn = numeric_iprc(eta, th, 1e-6, p, c);
        worst = std::max(worst, std::abs(zn - z) / std::max(std::abs(z), 1e-300));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-3 && secs < 30.0,
          fmt("max relative error %.3g over 3 offsets x 64 phases x 2 directions, %.2f s", worst, secs)};
}

Outcome simulated_period() {
  std::mt19937_64 rng(20240101);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const IrisParams p = random_valid(rng);
    const IrisCycle c = require_stable_cycle(p);
    SimulateOptions o;
    o.stop_on_convergence = false;
    o.max_crossings = 4;
    const Trajectory tr = simulate(Location{1, {1.0, c.u_dag}}, p, o);
    worst = std::max(worst, std::abs(tr.segments.at(3).t_exit - 4.0 * std::log(1.0 / c.u_dag)));
  }
  return {worst < 1e-12, fmt("max |T_sim - 4 log(1/u)| = %.3g over 20 random pairs", worst)};
}

Outcome crossing_time_shift() {
  const IrisParams p = IrisParams::make(2.0, 0.2);
  const IrisCycle c = require_stable_cycle(p);
  const double r = 1e-6;
  SimulateOptions o;
  o.stop_on_convergence = false;
  o.max_crossings = 60;
  const Trajectory base = simulate(Location{1, {1.0, c.u_dag}}, p, o);
  const Trajectory pert = simulate(Location{1, {1.0, c.u_dag + r}}, p, o);
  const double measured = pert.segments.at(59).t_exit - base.segments.at(59).t_exit;
  const double predicted = r * cumulative_shift(60, {0.0, 1.0}, 0.0, c, p);
  const double rel = std::abs(measured - predicted) / std::abs(predicted);
  return {rel < 1e-3,
          fmt("measured %.9g, predicted %.9g, relative error %.3g", measured, predicted, rel)};
}

Outcome small_offset_deviation() {
  double worst = 0.0;
  bool ok = true;
  for (double a : {1e-2, 1e-3, 1e-4}) {
    const auto e = u_dag_small_a(a, 2.0);
    ok = ok && e.relative_deviation < 2.0 * a;
    worst = std::max(worst, e.relative_deviation / a);
  }
  return {ok, fmt("max (u_dag - a) / a^2 = %.6f", worst)};
}

Outcome monotone_trends() {
  const double offsets[] = {1e-2, 1e-3, 1e-4};
  std::vector<double> s_early, s_late, u_mid;
  for (double a : offsets) {
    const IrisParams p = IrisParams::make(2.0, a);
    const IrisCycle c = require_stable_cycle(p);
    s_early.push_back(iprc({1, 0}, Phase{0.25}, c, p));
    s_late.push_back(iprc({1, 0}, Phase{0.75}, c, p));
    u_mid.push_back(iprc({0, 1}, Phase{0.5}, c, p));
  }
  const bool ok = s_early[0] > s_early[1] && s_early[1] > s_early[2] && s_late[0] < s_late[1] &&
                  s_late[1] < s_late[2] && u_mid[0] < u_mid[1] && u_mid[1] < u_mid[2];
  return {ok, fmt("Z_s(0.25): %.4g > %.4g > %.4g; Z_s(0.75): %.4g < %.4g < %.4g; "
                  "Z_u(0.5): %.4g < %.4g < %.4g",
                  s_early[0], s_early[1], s_early[2], s_late[0], s_late[1], s_late[2], u_mid[0],
                  u_mid[1], u_mid[2])};
}

Outcome normalisation() {
  std::mt19937_64 rng(777);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const IrisParams p = random_valid(rng);
    worst = std::max(worst, std::abs(alpha_l1_integral(require_stable_cycle(p), p) - 4.0));
  }
  return {worst < 1e-8, fmt("max |integral |alpha|_1 - 4| = %.3g over 10 random pairs", worst)};
}

Outcome jump_heights() {
  double worst = 0.0;
  std::mt19937_64 rng(99);
  std::vector<IrisParams> cases = {IrisParams::make(2.0, 0.2), IrisParams::make(2.0, 0.1),
                                   IrisParams::make(3.0, 0.1)};
  for (int t = 0; t < 5; ++t) cases.push_back(random_valid(rng));
  for (const IrisParams& p : cases) {
    const IrisCycle c = require_stable_cycle(p);
    const double h = c.u_dag + c.s_dag;
    const double d = prc_denominator(c, p);
    for (int k = 0; k < 4; ++k) {
      const double jx = std::abs(prc_jump(PrcDirection::GlobalX, k, c, p)) * d;
      const double jy = std::abs(prc_jump(PrcDirection::GlobalY, k, c, p)) * d;
      // One global component steps by the full height, the other is continuous.
      const double step = std::max(jx, jy), flat = std::min(jx, jy);
      worst = std::max({worst, std::abs(step - h), flat});
    }
  }
  return {worst < 1e-10,
          fmt("max deviation of step height from u_dag + s_dag = %.3g over %zu parameter sets",
              worst, cases.size())};
}

Outcome isochron_field_checks() {
  const auto t0 = Clock::now();
  const IrisParams p = IrisParams::make(2.0, 0.2);
  const std::size_t n = 100;
  const IsochronField f = isochron_field(n, p);
  const UnstableCycle uc = unstable_cycle(p);
  std::size_t enclosed = 0, enclosed_phased = 0, pattern_mismatch = 0;
  double equiv = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto loc = locate(f.cell_center(i, j), p);
      if (loc && uc.encloses(*loc, p.lambda)) {
        ++enclosed;
        if (f.has_phase(i, j)) ++enclosed_phased;
      }
      const bool a = f.has_phase(i, j), b = f.has_phase(j, n - 1 - i);
      if (a != b) ++pattern_mismatch;
      if (a && b) {
        double d = std::fmod(f.at(j, n - 1 - i) - f.at(i, j) - 1.0, 4.0);
        if (d > 2.0) d -= 4.0;
        if (d <= -2.0) d += 4.0;
        equiv = std::max(equiv, std::abs(d));
      }
    }
  }
  const GradientPeak g = max_phase_gradient(f, p);
  const double secs = seconds_since(t0);
  const bool ok = enclosed > 0 && enclosed_phased == 0 && pattern_mismatch == 0 && equiv <= 1e-6 &&
                  g.boundary_distance <= 0.1 && secs < 60.0;
  return {ok, fmt("%zu enclosed cells (%zu with a phase), rotation error %.3g, "
                  "max |grad| %.3g at %.4f from a square edge, %.2f s",
                  enclosed, enclosed_phased, equiv, g.magnitude, g.boundary_distance, secs)};
}

Outcome smooth_system_checks() {
  using namespace irislab::smooth;
  const auto t0 = Clock::now();
  const double mus[] = {1e-3, 0.1, 0.3, 0.45};
  std::vector<SmoothCycle> cycles;
  for (double mu : mus) cycles.push_back(find_cycle(SmoothParams{7.0 / 30.0, mu}));

  bool periods_ok = true;
  for (std::size_t k = 1; k < cycles.size(); ++k)
    periods_ok = periods_ok && cycles[k].period < cycles[k - 1].period;

  auto ptm = [](const SmoothCycle& c) {
    std::vector<double> z;
    for (const auto& s : smooth_prc_curve(64, c)) z.push_back(s.z_x);
    return peak_to_median(z);
  };
  const double spiky = ptm(cycles.front());
  const double smooth = ptm(cycles.back());

  double tangent = 0.0;
  for (const SmoothCycle& c : cycles) {
    for (double th : {0.3, 1.7, 2.5}) {
      const State v = c.velocity_at_phase(th);
      const double zx = response_with_fallback({1, 0}, th, c);
      const double zy = response_with_fallback({0, 1}, th, c);
      tangent = std::max(tangent, std::abs((zx * v.y1 + zy * v.y2) * c.period / 4.0 - 1.0));
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = periods_ok && spiky > 10.0 && smooth < 3.0 && tangent < 0.02 && secs < 300.0;
  return {ok, fmt("periods %.4g > %.4g > %.4g > %.4g, peak/median %.3g (mu=1e-3) and %.3g "
                  "(mu=0.45), tangent error %.3g, %.1f s",
                  cycles[0].period, cycles[1].period, cycles[2].period, cycles[3].period, spiky,
                  smooth, tangent, secs)};
}

Outcome homoclinic_comparison() {
  const double u = 0.1, lambda = 50.0;
  const HomoclinicParams hp{1.0, 1.0, u};
  double worst_u = 0.0, worst_s = 0.0, worst_s_phi = 0.0;
  for (int k = 0; k <= 95; ++k) {
    const double phi = k / 100.0;
    const TableRow iris = iris_table_row(phi, u, lambda);
    const TableRow homo = homoclinic_iprc(phi, hp);
    worst_u = std::max(worst_u, std::abs(iris.z_u / homo.z_u - 1.0));
    if (phi <= 0.9 && std::abs(iris.z_s) > worst_s) {
      worst_s = std::abs(iris.z_s);
      worst_s_phi = phi;
    }
  }
  return {worst_u < 0.01 && worst_s < 1e-10,
          fmt("Z_u relative gap %.3g on [0, 0.95]; max |Z_s| on [0, 0.9] = %.3g at phi = %.2f",
              worst_u, worst_s, worst_s_phi)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"fold boundary matches bisection", fold_boundary},
      {"analytic iPRC matches finite perturbation", analytic_vs_numeric},
      {"simulated period", simulated_period},
      {"crossing-time shift after 60 crossings", crossing_time_shift},
      {"small-offset entry point", small_offset_deviation},
      {"monotone trends as a shrinks", monotone_trends},
      {"alpha normalisation", normalisation},
      {"iPRC step heights", jump_heights},
      {"isochron field", isochron_field_checks},
      {"smooth system", smooth_system_checks},
      {"homoclinic comparison", homoclinic_comparison},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const auto& all = criteria();
  std::vector<int> pick;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(all.size())) {
      std::fprintf(stderr, "criterion must be 1..%zu\n", all.size());
      return 2;
    }
    pick.push_back(n);
  } else {
    for (int n = 1; n <= static_cast<int>(all.size()); ++n) pick.push_back(n);
  }
  int failures = 0;
  for (int n : pick) {
    Outcome o;
    try {
      o = all[n - 1].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", n, o.pass ? "PASS" : "FAIL", all[n - 1].name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
