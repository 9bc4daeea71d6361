#include "irislab/iris_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace irislab {

namespace {

constexpr double kLocalSlack = 1.01;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int next_square(int k) { return k % 4 + 1; }

void check_location(const Location& loc) {
  if (loc.square < 1 || loc.square > 4) {
    throw std::invalid_argument("square index must be 1..4, got " + std::to_string(loc.square));
  }
  const LocalPoint q = loc.local;
  if (!std::isfinite(q.s) || !std::isfinite(q.u) || std::abs(q.s) > kLocalSlack ||
      std::abs(q.u) > kLocalSlack) {
    throw std::domain_error("local start lies outside its square");
  }
}

bool inside_closed(const SquareFrame& f, Vec2 p) {
  return std::abs(p.x - f.center.x) <= 1.0 && std::abs(p.y - f.center.y) <= 1.0;
}

// Phase difference mapped onto (-2, 2].
double wrap_difference(double d) {
  double w = std::fmod(d, 4.0);
  if (w <= -2.0) w += 4.0;
  if (w > 2.0) w -= 4.0;
  return w;
}

}  // namespace

Vec2 rotate_quarter(Vec2 p) { return {p.y, -p.x}; }

LocalPoint SquareFrame::to_local(Vec2 p) const {
  return local_components({p.x - center.x, p.y - center.y});
}

Vec2 SquareFrame::to_global(LocalPoint q) const {
  return {center.x + q.s * e_s.x + q.u * e_u.x, center.y + q.s * e_s.y + q.u * e_u.y};
}

LocalPoint SquareFrame::local_components(Vec2 v) const {
  return {v.x * e_s.x + v.y * e_s.y, v.x * e_u.x + v.y * e_u.y};
}

SquareFrame square_frame(int k, double a) {
  if (k < 1 || k > 4) throw std::invalid_argument("square index must be 1..4");
  SquareFrame f{1, {-1.0 + 0.5 * a, -1.0 - 0.5 * a}, {1.0, 0.0}, {0.0, 1.0}};
  for (int i = 1; i < k; ++i) {
    f.center = rotate_quarter(f.center);
    f.e_s = rotate_quarter(f.e_s);
    f.e_u = rotate_quarter(f.e_u);
  }
  f.index = k;
  return f;
}

std::optional<Location> locate(Vec2 p, const IrisParams& params) {
  bool hit[5] = {false, false, false, false, false};
  int count = 0;
  for (int k = 1; k <= 4; ++k) {
    hit[k] = inside_closed(square_frame(k, params.a), p);
    count += hit[k] ? 1 : 0;
  }
  if (count == 0) return std::nullopt;
  int chosen = 0;
  for (int k = 1; k <= 4 && chosen == 0; ++k) {
    const int prev = (k + 2) % 4 + 1;
    if (hit[k] && hit[prev] && !hit[next_square(k)]) chosen = k;
  }
  if (chosen == 0) {
    for (int k = 1; k <= 4 && chosen == 0; ++k) {
      if (hit[k]) chosen = k;
    }
  }
  return Location{chosen, square_frame(chosen, params.a).to_local(p)};
}

bool in_center_gap(Vec2 p, double a) {
  return std::abs(p.x) < 0.5 * a && std::abs(p.y) < 0.5 * a;
}

LocalPoint flow_in_square(LocalPoint q, double dt, double lambda) {
  return {q.s * std::exp(-lambda * dt), q.u * std::exp(dt)};
}

double time_to_exit(LocalPoint q) {
  if (!(q.u > 0.0)) throw std::domain_error("time_to_exit: u must be positive");
  return std::log(1.0 / q.u);
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Absorbed: return "absorbed";
    case Termination::Escaped: return "escaped";
    case Termination::Stalled: return "stalled";
    case Termination::MaxTime: return "max_time";
  }
  return "unknown";
}

Trajectory simulate(Location start, const IrisParams& p, const SimulateOptions& opt) {
  p.validate();
  check_location(start);
  std::optional<IrisCycle> cycle;
  if (opt.stop_on_convergence && classify_regime(p) == Regime::StableAndUnstableCycle) {
    cycle = find_cycle(p);
  }

  Trajectory tr;
  int k = start.square;
  LocalPoint q = start.local;
  double t = 0.0;
  std::size_t crossings = 0;
  for (;;) {
    if (q.u == 0.0) {
      tr.termination = Termination::Stalled;
      break;
    }
    const bool outward = q.u < 0.0;
    const double dt = std::log(1.0 / std::abs(q.u));
    const LocalPoint out{q.s * std::pow(std::abs(q.u), p.lambda), outward ? -1.0 : 1.0};
    if (t + dt > opt.max_time) {
      tr.segments.push_back({k, q, t, flow_in_square(q, opt.max_time - t, p.lambda), opt.max_time});
      tr.termination = Termination::MaxTime;
      break;
    }
    tr.segments.push_back({k, q, t, out, t + dt});
    t += dt;
    if (outward) {
      tr.termination = Termination::Escaped;
      break;
    }
    if (out.s > 1.0 - p.a) {
      tr.termination = Termination::Absorbed;
      break;
    }
    k = next_square(k);
    q = {1.0, out.s + p.a};
    ++crossings;
    if (cycle && std::abs(q.u - cycle->u_dag) < opt.convergence_tol) {
      tr.segments.push_back({k, q, t, q, t});
      tr.termination = Termination::Converged;
      break;
    }
    if (crossings >= opt.max_crossings) {
      tr.segments.push_back({k, q, t, q, t});
      tr.termination = Termination::MaxTime;
      break;
    }
  }
  return tr;
}

Trajectory simulate(Vec2 start, const IrisParams& p, const SimulateOptions& opt) {
  const auto loc = locate(start, p);
  if (!loc) throw std::domain_error("start point lies outside the four squares");
  return simulate(*loc, p, opt);
}

std::vector<TrajectoryPoint> sample_trajectory(const Trajectory& traj, const IrisParams& p,
                                               double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample spacing must be positive");
  std::vector<TrajectoryPoint> pts;
  for (const Segment& seg : traj.segments) {
    const SquareFrame f = square_frame(seg.square, p.a);
    pts.push_back({seg.t_entry, f.to_global(seg.entry), seg.square});
    const double len = seg.t_exit - seg.t_entry;
    if (len <= 0.0) continue;
    const auto n = static_cast<std::size_t>(std::ceil(len / dt));
    for (std::size_t i = 1; i < n; ++i) {
      const double tau = static_cast<double>(i) * dt;
      if (tau >= len) break;
      pts.push_back({seg.t_entry + tau, f.to_global(flow_in_square(seg.entry, tau, p.lambda)),
                     seg.square});
    }
    pts.push_back({seg.t_exit, f.to_global(seg.exit), seg.square});
  }
  return pts;
}

std::vector<double> entry_sequence(const Trajectory& traj) {
  std::vector<double> u;
  for (std::size_t i = 1; i < traj.segments.size(); ++i) u.push_back(traj.segments[i].entry.u);
  return u;
}

PhaseResult asymptotic_phase(Location start, const IrisParams& p, const IrisCycle& cycle,
                             std::size_t max_cycles, double tol) {
  check_location(start);
  if (!(cycle.u_dag < cycle.u_ddag)) throw NoCycleError("asymptotic phase needs a stable cycle");
  const LocalPoint q = start.local;
  if (q.u == 0.0) return {std::nullopt, Termination::Stalled, 0};
  if (q.u < 0.0) return {std::nullopt, Termination::Escaped, 0};

  const double transit = cycle.transit();
  const double slope = cycle.u_dag - p.lambda * cycle.s_dag;
  const double tau0 = std::log(1.0 / q.u);
  double s_exit = q.s * std::pow(q.u, p.lambda);
  if (s_exit > 1.0 - p.a) return {std::nullopt, Termination::Absorbed, 0};
  double u = s_exit + p.a;
  double lag = 0.0;  // sum of log(1/u_j) - transit over completed squares
  const std::size_t limit = 4 * max_cycles;
  for (std::size_t n = 1; n <= limit; ++n) {
    const double dev = u - cycle.u_dag;
    if (std::abs(dev) < tol) {
      const double tail = -dev / slope;
      const double theta = start.square - tau0 / transit - (lag + tail) / transit;
      return {Phase::wrap(theta).theta, Termination::Converged, n};
    }
    if (u < 0.0) return {std::nullopt, Termination::Escaped, n};
    if (u == 0.0) return {std::nullopt, Termination::Stalled, n};
    lag += -std::log1p(dev / cycle.u_dag);
    s_exit = std::pow(u, p.lambda);
    if (s_exit > 1.0 - p.a) return {std::nullopt, Termination::Absorbed, n};
    u = s_exit + p.a;
  }
  return {std::nullopt, Termination::MaxTime, limit};
}

PhaseResult asymptotic_phase(Vec2 start, const IrisParams& p, const IrisCycle& cycle,
                             std::size_t max_cycles, double tol) {
  const auto loc = locate(start, p);
  if (!loc) return {std::nullopt, Termination::Absorbed, 0};
  return asymptotic_phase(*loc, p, cycle, max_cycles, tol);
}

Location cycle_point(Phase theta, const IrisCycle& cycle, const IrisParams&) {
  const Phase t = Phase::wrap(theta.theta);
  const double phi = t.fraction();
  return {t.quarter() + 1, {std::pow(cycle.s_dag, phi), std::pow(cycle.u_dag, 1.0 - phi)}};
}

Vec2 velocity(Location loc, const IrisParams& p) {
  const SquareFrame f = square_frame(loc.square, p.a);
  const double vs = -p.lambda * loc.local.s;
  const double vu = loc.local.u;
  return {vs * f.e_s.x + vu * f.e_u.x, vs * f.e_s.y + vu * f.e_u.y};
}

double numeric_iprc(Vec2 eta, double theta, double r, const IrisParams& p,
                    const IrisCycle& cycle) {
  if (!(r > 0.0)) throw std::invalid_argument("perturbation size must be positive");
  const Location base = cycle_point(Phase::wrap(theta), cycle, p);
  const LocalPoint d = square_frame(base.square, p.a).local_components(eta);
  const Location moved{base.square, {base.local.s + r * d.s, base.local.u + r * d.u}};
  const PhaseResult before = asymptotic_phase(base, p, cycle);
  const PhaseResult after = asymptotic_phase(moved, p, cycle);
  if (!before.theta || !after.theta) {
    throw std::runtime_error("perturbed point has no asymptotic phase (" +
                             std::string(to_string(after.reason)) + ")");
  }
  return wrap_difference(*after.theta - *before.theta) / r;
}

bool UnstableCycle::encloses(Location loc, double lambda) const {
  const LocalPoint q = loc.local;
  return q.s > 0.0 && q.u > 0.0 && q.s * std::pow(q.u, lambda) > s_ddag;
}

UnstableCycle unstable_cycle(const IrisParams& p) {
  const auto c = find_cycle(p);
  if (!c) throw NoCycleError("no unstable cycle at these parameters");
  return {c->u_ddag, std::pow(c->u_ddag, p.lambda), 4.0 * std::log(1.0 / c->u_ddag)};
}

Vec2 IsochronField::cell_center(std::size_t i, std::size_t j) const {
  const double hx = (xmax - xmin) / static_cast<double>(nx);
  const double hy = (ymax - ymin) / static_cast<double>(ny);
  return {xmin + (static_cast<double>(i) + 0.5) * hx, ymin + (static_cast<double>(j) + 0.5) * hy};
}

bool IsochronField::has_phase(std::size_t i, std::size_t j) const { return !std::isnan(at(i, j)); }

IsochronField isochron_field(std::size_t grid_n, const IrisParams& p, unsigned threads) {
  if (grid_n < 2) throw std::invalid_argument("isochron grid needs at least 2 cells per side");
  const IrisCycle cycle = require_stable_cycle(p);
  IsochronField field;
  field.nx = field.ny = grid_n;
  const double half = 2.0 + 0.5 * p.a;
  field.xmin = field.ymin = -half;
  field.xmax = field.ymax = half;
  field.lambda = p.lambda;
  field.a = p.a;
  field.theta.assign(grid_n * grid_n, kNaN);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid_n));

  auto work = [&](unsigned worker) {
    for (std::size_t j = worker; j < grid_n; j += threads) {
      for (std::size_t i = 0; i < grid_n; ++i) {
        const PhaseResult r = asymptotic_phase(field.cell_center(i, j), p, cycle);
        if (r.theta) field.theta[j * grid_n + i] = *r.theta;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return field;
}

GradientPeak max_phase_gradient(const IsochronField& field, const IrisParams& p) {
  const double hx = (field.xmax - field.xmin) / static_cast<double>(field.nx);
  const double hy = (field.ymax - field.ymin) / static_cast<double>(field.ny);
  std::vector<int> square(field.nx * field.ny, 0);
  for (std::size_t j = 0; j < field.ny; ++j) {
    for (std::size_t i = 0; i < field.nx; ++i) {
      if (const auto loc = locate(field.cell_center(i, j), p)) square[j * field.nx + i] = loc->square;
    }
  }
  auto paired = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const int s0 = square[j0 * field.nx + i0];
    return s0 != 0 && s0 == square[j1 * field.nx + i1] && field.has_phase(i0, j0) &&
           field.has_phase(i1, j1);
  };

  GradientPeak best;
  bool found = false;
  for (std::size_t j = 0; j < field.ny; ++j) {
    for (std::size_t i = 0; i < field.nx; ++i) {
      double gx = 0.0, gy = 0.0;
      bool any = false;
      if (i + 1 < field.nx && paired(i, j, i + 1, j)) {
        gx = wrap_difference(field.at(i + 1, j) - field.at(i, j)) / hx;
        any = true;
      }
      if (j + 1 < field.ny && paired(i, j, i, j + 1)) {
        gy = wrap_difference(field.at(i, j + 1) - field.at(i, j)) / hy;
        any = true;
      }
      if (!any) continue;
      const double mag = std::hypot(gx, gy);
      if (!found || mag > best.magnitude) {
        const auto loc = locate(field.cell_center(i, j), p);
        const LocalPoint q = loc->local;
        best = {i, j, mag, std::min(1.0 - std::abs(q.s), 1.0 - std::abs(q.u))};
        found = true;
      }
    }
  }
  if (!found) throw std::runtime_error("isochron field has no adjacent phased cells");
  return best;
}

}  // namespace irislab
