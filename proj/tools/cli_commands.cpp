#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "irislab/format.hpp"
#include "irislab/iris_core.hpp"
#include "irislab/iris_prc.hpp"
#include "irislab/iris_sim.hpp"
#include "irislab/smooth_system.hpp"
#include "json.hpp"

namespace irislab::cli {

namespace {

using nlohmann::json;
using Header = std::vector<std::pair<std::string, std::string>>;

struct Common {
  std::string out_path;
  std::string format = "csv";
};

struct IrisOpts {
  double lambda = 2.0;
  double a = 0.2;
};

struct SmoothOpts {
  double alpha = 7.0 / 30.0;
  double mu = 0.1;
};

std::string header_line(const Header& h) {
  std::string s = "#";
  for (const auto& [k, v] : h) s += " " + k + "=" + v;
  return s + "\n";
}

json header_json(const Header& h) {
  json j = json::object();
  for (const auto& [k, v] : h) j[k] = v;
  return j;
}

std::string fd(double x) { return format_double(x); }

void add_common(CLI::App* sub, Common& c, std::vector<std::string> formats) {
  sub->add_option("--out", c.out_path, "Output file (default: stdout)");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember(std::move(formats)))
      ->capture_default_str();
}

void add_iris(CLI::App* sub, IrisOpts& o) {
  sub->add_option("--lambda", o.lambda, "Stable/unstable eigenvalue ratio")->capture_default_str();
  sub->add_option("--a", o.a, "Boundary offset")->capture_default_str();
}

void add_smooth(CLI::App* sub, SmoothOpts& o) {
  sub->add_option("--alpha", o.alpha, "Saddle parameter alpha")->capture_default_str();
  sub->add_option("--mu", o.mu, "Rotation parameter mu")->capture_default_str();
}

// ---------------------------------------------------------------- bifurcation

struct BifurcationOpts {
  Common common;
  double lambda_min = 0.5, lambda_max = 5.0;
  double a_min = 0.0, a_max = 0.5;
  std::optional<double> lambda, a;
  std::size_t grid = 100;
};

std::vector<double> axis(double lo, double hi, std::size_t n) {
  if (lo == hi) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::string cmd_bifurcation(const BifurcationOpts& o) {
  double lmin = o.lambda ? *o.lambda : o.lambda_min, lmax = o.lambda ? *o.lambda : o.lambda_max;
  double amin = o.a ? *o.a : o.a_min, amax = o.a ? *o.a : o.a_max;
  if (!(lmin > 0.0) || lmax < lmin || amin < 0.0 || amax < amin || amax >= 1.0 || o.grid < 2) {
    throw std::invalid_argument("invalid bifurcation ranges");
  }
  const auto ls = axis(lmin, lmax, o.grid);
  const auto as = axis(amin, amax, o.grid);
  const Header h{{"command", "bifurcation"}, {"lambda_min", fd(lmin)}, {"lambda_max", fd(lmax)},
                 {"a_min", fd(amin)},        {"a_max", fd(amax)},      {"grid", std::to_string(o.grid)}};

  std::ostringstream os;
  json grid = json::array(), fold = json::array();
  if (o.common.format == "csv") os << header_line(h) << "series,lambda,a,regime\n";
  for (double l : ls) {
    for (double a : as) {
      const auto r = std::string(to_string(classify_regime(IrisParams::make(l, a))));
      if (o.common.format == "csv") {
        os << "grid," << fd(l) << ',' << fd(a) << ',' << r << '\n';
      } else {
        grid.push_back({{"lambda", l}, {"a", a}, {"regime", r}});
      }
    }
  }
  for (double l : ls) {
    if (!(l > 1.0)) continue;
    const double af = fold_offset(l);
    if (o.common.format == "csv") {
      os << "fold," << fd(l) << ',' << fd(af) << ",fold_point\n";
    } else {
      fold.push_back({{"lambda", l}, {"a", af}});
    }
  }
  if (o.common.format == "json") {
    os << json{{"params", header_json(h)}, {"grid", grid}, {"fold", fold}}.dump(1) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------- cycle

struct CycleOpts {
  Common common;
  IrisOpts iris;
  bool return_map = false;
  std::size_t samples = 200;
};

std::string cmd_cycle(const CycleOpts& o) {
  const IrisParams p = IrisParams::make(o.iris.lambda, o.iris.a);
  const Regime regime = classify_regime(p);
  Header h{{"command", "cycle"}, {"lambda", fd(p.lambda)}, {"a", fd(p.a)},
           {"regime", std::string(to_string(regime))}};
  std::ostringstream os;

  if (o.return_map) {
    if (o.samples < 2) throw std::invalid_argument("--samples must be at least 2");
    h.emplace_back("samples", std::to_string(o.samples));
    json rows = json::array();
    if (o.common.format == "csv") os << header_line(h) << "u,h,rho\n";
    for (std::size_t i = 0; i < o.samples; ++i) {
      const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(o.samples);
      const double hu = map_h(u, p);
      if (o.common.format == "csv") {
        os << fd(u) << ',' << fd(hu) << ',' << fd(rho(u, p)) << '\n';
      } else {
        rows.push_back({{"u", u}, {"h", hu}, {"rho", rho(u, p)}});
      }
    }
    if (o.common.format == "json") os << json{{"params", header_json(h)}, {"map", rows}}.dump(1) << '\n';
    return os.str();
  }

  const IrisCycle c = require_stable_cycle(p);
  const Approach ap = closest_slowest(c.u_dag, p);
  const std::vector<std::pair<std::string, double>> rows{
      {"a_fold", fold_offset(p.lambda)},
      {"u_dag", c.u_dag},
      {"u_ddag", c.u_ddag},
      {"s_dag", c.s_dag},
      {"period", c.period},
      {"transit", c.transit()},
      {"stability_derivative", stability_derivative(c.u_dag, p)},
      {"v_integral", v_integral(c, p)},
      {"magnitude_m", magnitude_m(c, p)},
      {"critical_phase", critical_phase(p.lambda)},
      {"t_closest", ap.t_closest},
      {"t_slowest", ap.t_slowest},
      {"phi_closest", ap.phi_closest},
      {"phi_slowest", ap.phi_slowest},
  };
  if (o.common.format == "csv") {
    os << header_line(h) << "quantity,value\n";
    for (const auto& [k, v] : rows) os << k << ',' << fd(v) << '\n';
  } else {
    json j{{"params", header_json(h)}};
    for (const auto& [k, v] : rows) j[k] = v;
    os << j.dump(1) << '\n';
  }
  return os.str();
}

// ------------------------------------------------------------------------ prc

struct PrcOpts {
  Common common;
  IrisOpts iris;
  std::string direction = "x";
  std::string mode = "both";
  std::size_t samples = 256;
  double r = 1e-4;
};

std::string cmd_prc(const PrcOpts& o) {
  const IrisParams p = IrisParams::make(o.iris.lambda, o.iris.a);
  if (o.samples < 4) throw std::invalid_argument("--samples must be at least 4");
  if (!(o.r > 0.0 && o.r < 1.0)) throw std::invalid_argument("--r must lie in (0, 1)");
  const IrisCycle c = require_stable_cycle(p);
  const PrcDirection d = o.direction == "x"   ? PrcDirection::GlobalX
                         : o.direction == "y" ? PrcDirection::GlobalY
                         : o.direction == "s" ? PrcDirection::LocalS
                                              : PrcDirection::LocalU;
  const bool analytic = o.mode != "numeric";
  const bool numeric = o.mode != "analytic";
  const auto curve = prc_curve(o.samples, c, p);

  auto numeric_at = [&](double theta) {
    Vec2 eta{1.0, 0.0};
    if (d == PrcDirection::GlobalY) eta = {0.0, 1.0};
    if (d == PrcDirection::LocalS || d == PrcDirection::LocalU) {
      const SquareFrame f = square_frame(cycle_point(Phase{theta}, c, p).square, p.a);
      eta = d == PrcDirection::LocalS ? f.e_s : f.e_u;
    }
    return numeric_iprc(eta, theta, o.r, p, c);
  };

  const Header h{{"command", "prc"},          {"lambda", fd(p.lambda)},
                 {"a", fd(p.a)},              {"direction", o.direction},
                 {"mode", o.mode},            {"samples", std::to_string(o.samples)},
                 {"r", fd(o.r)},              {"u_dag", fd(c.u_dag)}};
  std::ostringstream os;
  json rows = json::array();
  if (o.common.format == "csv") {
    os << header_line(h) << "theta";
    if (analytic) os << ",z_analytic";
    if (numeric) os << ",z_numeric";
    os << '\n';
  }
  for (const PrcSample& s : curve) {
    const double za = component(s, d);
    const double zn = numeric ? numeric_at(s.theta) : 0.0;
    if (o.common.format == "csv") {
      os << fd(s.theta);
      if (analytic) os << ',' << fd(za);
      if (numeric) os << ',' << fd(zn);
      os << '\n';
    } else {
      json row{{"theta", s.theta}};
      if (analytic) row["z_analytic"] = za;
      if (numeric) row["z_numeric"] = zn;
      rows.push_back(row);
    }
  }
  if (o.common.format == "json") os << json{{"params", header_json(h)}, {"prc", rows}}.dump(1) << '\n';
  return os.str();
}

// ------------------------------------------------------------------ isochrons

struct IsochronOpts {
  Common common;
  IrisOpts iris;
  std::size_t grid = 400;
  unsigned threads = 0;
};

std::string cmd_isochrons(const IsochronOpts& o) {
  const IrisParams p = IrisParams::make(o.iris.lambda, o.iris.a);
  if (o.grid < 2) throw std::invalid_argument("--grid must be at least 2");
  const IsochronField f = isochron_field(o.grid, p, o.threads);
  std::ostringstream os;
  if (o.common.format == "csv") {
    write_field_csv(os, f);
  } else if (o.common.format == "binary") {
    write_field_binary(os, f);
  } else {
    json theta = json::array();
    for (double v : f.theta) theta.push_back(std::isnan(v) ? json(nullptr) : json(v));
    const Header h{{"command", "isochrons"}, {"lambda", fd(p.lambda)}, {"a", fd(p.a)},
                   {"grid", std::to_string(o.grid)}};
    os << json{{"params", header_json(h)}, {"nx", f.nx},     {"ny", f.ny},
               {"xmin", f.xmin},           {"xmax", f.xmax}, {"ymin", f.ymin},
               {"ymax", f.ymax},           {"theta", theta}}
              .dump()
       << '\n';
  }
  return os.str();
}

// ----------------------------------------------------------------- trajectory

struct TrajectoryOpts {
  Common common;
  IrisOpts iris;
  std::optional<double> u0, x0, y0, t_end;
  double dt = 0.01;
  bool entries = false;
};

std::string cmd_trajectory(const TrajectoryOpts& o) {
  const IrisParams p = IrisParams::make(o.iris.lambda, o.iris.a);
  if (!(o.dt > 0.0)) throw std::invalid_argument("--dt must be positive");
  if (o.x0.has_value() != o.y0.has_value()) throw std::invalid_argument("give both --x0 and --y0");
  if (o.u0 && o.x0) throw std::invalid_argument("--u0 and --x0/--y0 are exclusive");

  const auto cycle = find_cycle(p);
  Location start;
  if (o.x0) {
    const auto loc = locate({*o.x0, *o.y0}, p);
    if (!loc) throw std::invalid_argument("start point lies outside the four squares");
    start = *loc;
  } else if (o.u0) {
    if (!(*o.u0 >= -1.0 && *o.u0 <= 1.0)) throw std::invalid_argument("--u0 must lie in [-1, 1]");
    start = {1, {1.0, *o.u0}};
  } else {
    if (classify_regime(p) != Regime::StableAndUnstableCycle) require_stable_cycle(p);
    start = {1, {1.0, cycle->u_dag}};
  }
  double t_end = 50.0;
  if (o.t_end) {
    t_end = *o.t_end;
  } else if (cycle && cycle->u_dag < cycle->u_ddag) {
    t_end = 3.0 * cycle->period;
  }
  if (!(t_end > 0.0)) throw std::invalid_argument("--t-end must be positive");

  SimulateOptions so;
  so.max_time = t_end;
  so.stop_on_convergence = false;
  const Trajectory tr = simulate(start, p, so);
  const Header h{{"command", "trajectory"}, {"lambda", fd(p.lambda)}, {"a", fd(p.a)},
                 {"square", std::to_string(start.square)}, {"s0", fd(start.local.s)},
                 {"u0", fd(start.local.u)}, {"t_end", fd(t_end)}, {"dt", fd(o.dt)},
                 {"termination", std::string(to_string(tr.termination))}};
  std::ostringstream os;
  if (o.entries) {
    const auto u = entry_sequence(tr);
    if (o.common.format == "csv") {
      os << header_line(h) << "n,u\n";
      for (std::size_t i = 0; i < u.size(); ++i) os << i + 1 << ',' << fd(u[i]) << '\n';
    } else {
      os << json{{"params", header_json(h)}, {"entries", u}}.dump(1) << '\n';
    }
    return os.str();
  }
  const auto pts = sample_trajectory(tr, p, o.dt);
  if (o.common.format == "csv") {
    os << header_line(h) << "t,x,y,square\n";
    for (const auto& pt : pts) {
      os << fd(pt.t) << ',' << fd(pt.p.x) << ',' << fd(pt.p.y) << ',' << pt.square << '\n';
    }
  } else {
    json rows = json::array();
    for (const auto& pt : pts) rows.push_back({{"t", pt.t}, {"x", pt.p.x}, {"y", pt.p.y}, {"square", pt.square}});
    os << json{{"params", header_json(h)}, {"points", rows}}.dump(1) << '\n';
  }
  return os.str();
}

// ------------------------------------------------------------ smooth commands

smooth::SmoothParams smooth_params(const SmoothOpts& o) {
  smooth::SmoothParams p{o.alpha, o.mu};
  p.validate();
  return p;
}

struct SmoothCycleOpts {
  Common common;
  SmoothOpts smooth;
};

std::string cmd_smooth_cycle(const SmoothCycleOpts& o) {
  const auto p = smooth_params(o.smooth);
  const auto c = smooth::find_cycle(p);
  const Header h{{"command", "smooth-cycle"}, {"alpha", fd(p.alpha)}, {"mu", fd(p.mu)}};
  const std::vector<std::pair<std::string, double>> rows{
      {"period", c.period},
      {"anchor_y1", c.anchor.y1},
      {"anchor_y2", c.anchor.y2},
      {"dwell_fraction", smooth::dwell_fraction(c)},
      {"lambda_u", p.lambda_u()},
      {"lambda_s", p.lambda_s()},
      {"saddle_value", p.saddle_value()},
  };
  std::ostringstream os;
  if (o.common.format == "csv") {
    os << header_line(h) << "quantity,value\n";
    for (const auto& [k, v] : rows) os << k << ',' << fd(v) << '\n';
  } else {
    json j{{"alpha", p.alpha}, {"mu", p.mu}, {"period", c.period},
           {"section_anchor", {c.anchor.y1, c.anchor.y2}}};
    for (const auto& [k, v] : rows) j[k] = v;
    os << j.dump(1) << '\n';
  }
  return os.str();
}

struct SmoothPrcOpts {
  Common common;
  SmoothOpts smooth;
  std::string direction = "x";
  std::size_t samples = 64;
  double r = 1e-4;
  unsigned threads = 0;
};

std::string cmd_smooth_prc(const SmoothPrcOpts& o) {
  const auto p = smooth_params(o.smooth);
  if (o.direction != "x" && o.direction != "y") {
    throw std::invalid_argument("smooth-prc supports --direction x or y");
  }
  if (o.samples < 4) throw std::invalid_argument("--samples must be at least 4");
  if (!(o.r > 0.0 && o.r < 0.1)) throw std::invalid_argument("--r must lie in (0, 0.1)");
  const auto c = smooth::find_cycle(p);
  smooth::SmoothPrcOptions po;
  po.r = o.r;
  const smooth::State eta = o.direction == "x" ? smooth::State{1.0, 0.0} : smooth::State{0.0, 1.0};

  std::vector<double> z(o.samples);
  std::vector<double> theta(o.samples);
  unsigned threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, o.samples));
  auto work = [&](unsigned w) {
    for (std::size_t j = w; j < o.samples; j += threads) {
      theta[j] = 4.0 * static_cast<double>(j) / static_cast<double>(o.samples);
      z[j] = smooth::response_with_fallback(eta, theta[j], c, po);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  const Header h{{"command", "smooth-prc"}, {"alpha", fd(p.alpha)}, {"mu", fd(p.mu)},
                 {"direction", o.direction}, {"samples", std::to_string(o.samples)},
                 {"r", fd(o.r)}, {"period", fd(c.period)}};
  std::ostringstream os;
  if (o.common.format == "csv") {
    os << header_line(h) << "theta,z\n";
    for (std::size_t j = 0; j < o.samples; ++j) os << fd(theta[j]) << ',' << fd(z[j]) << '\n';
  } else {
    json rows = json::array();
    for (std::size_t j = 0; j < o.samples; ++j) rows.push_back({{"theta", theta[j]}, {"z", z[j]}});
    os << json{{"params", header_json(h)}, {"prc", rows}}.dump(1) << '\n';
  }
  return os.str();
}

struct SmoothTrajectoryOpts {
  Common common;
  SmoothOpts smooth;
  std::optional<double> y1, y2, t_end;
  double dt = 0.01;
};

std::string cmd_smooth_trajectory(const SmoothTrajectoryOpts& o) {
  const auto p = smooth_params(o.smooth);
  if (!(o.dt > 0.0)) throw std::invalid_argument("--dt must be positive");
  if (o.y1.has_value() != o.y2.has_value()) throw std::invalid_argument("give both --y1 and --y2");
  std::vector<smooth::TimeSample> series;
  double t_end = 0.0;
  std::string source;
  if (o.y1) {
    t_end = o.t_end.value_or(100.0);
    if (!(t_end > 0.0)) throw std::invalid_argument("--t-end must be positive");
    const auto path = smooth::integrate({*o.y1, *o.y2}, t_end, p);
    const auto n = static_cast<std::size_t>(std::floor(t_end / o.dt + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = std::min(t_end, static_cast<double>(i) * o.dt);
      const auto y = path.at(t);
      series.push_back({t, y.y1, y.y2});
    }
    source = "start";
  } else {
    const auto c = smooth::find_cycle(p);
    t_end = o.t_end.value_or(3.0 * c.period);
    if (!(t_end > 0.0)) throw std::invalid_argument("--t-end must be positive");
    series = smooth::timeplot(c, t_end, o.dt);
    source = "cycle";
  }
  Header h{{"command", "smooth-trajectory"}, {"alpha", fd(p.alpha)}, {"mu", fd(p.mu)},
           {"source", source}, {"t_end", fd(t_end)}, {"dt", fd(o.dt)}};
  if (o.y1) {
    h.emplace_back("y1", fd(*o.y1));
    h.emplace_back("y2", fd(*o.y2));
  }
  std::ostringstream os;
  if (o.common.format == "csv") {
    os << header_line(h) << "t,y1,y2\n";
    for (const auto& s : series) os << fd(s.t) << ',' << fd(s.y1) << ',' << fd(s.y2) << '\n';
  } else {
    json rows = json::array();
    for (const auto& s : series) rows.push_back({{"t", s.t}, {"y1", s.y1}, {"y2", s.y2}});
    os << json{{"params", header_json(h)}, {"series", rows}}.dump(1) << '\n';
  }
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit cycles, phase response and isochrons of the iris system and its smooth "
               "companion"};
  app.require_subcommand(1);

  BifurcationOpts bif;
  auto* s_bif = app.add_subcommand("bifurcation", "Regime labels over a (lambda, a) grid");
  add_common(s_bif, bif.common, {"csv", "json"});
  s_bif->add_option("--lambda-min", bif.lambda_min)->capture_default_str();
  s_bif->add_option("--lambda-max", bif.lambda_max)->capture_default_str();
  s_bif->add_option("--a-min", bif.a_min)->capture_default_str();
  s_bif->add_option("--a-max", bif.a_max)->capture_default_str();
  s_bif->add_option("--lambda", bif.lambda, "Single lambda column");
  s_bif->add_option("--a", bif.a, "Single a row");
  s_bif->add_option("--grid", bif.grid, "Points per axis")->capture_default_str();

  CycleOpts cyc;
  auto* s_cyc = app.add_subcommand("cycle", "Limit-cycle summary or entry return map");
  add_common(s_cyc, cyc.common, {"csv", "json"});
  add_iris(s_cyc, cyc.iris);
  s_cyc->add_flag("--return-map", cyc.return_map, "Emit h(u) and rho(u) instead");
  s_cyc->add_option("--samples", cyc.samples, "Return-map samples")->capture_default_str();

  PrcOpts prc;
  auto* s_prc = app.add_subcommand("prc", "Phase response curve of the iris cycle");
  add_common(s_prc, prc.common, {"csv", "json"});
  add_iris(s_prc, prc.iris);
  s_prc->add_option("--direction", prc.direction)
      ->check(CLI::IsMember({"x", "y", "s", "u"}))
      ->capture_default_str();
  s_prc->add_option("--mode", prc.mode)
      ->check(CLI::IsMember({"analytic", "numeric", "both"}))
      ->capture_default_str();
  s_prc->add_option("--samples", prc.samples)->capture_default_str();
  s_prc->add_option("--r", prc.r, "Numerical perturbation size")->capture_default_str();

  IsochronOpts iso;
  auto* s_iso = app.add_subcommand("isochrons", "Asymptotic phase on a grid");
  add_common(s_iso, iso.common, {"csv", "json", "binary"});
  add_iris(s_iso, iso.iris);
  s_iso->add_option("--grid", iso.grid, "Cells per side")->capture_default_str();
  s_iso->add_option("--threads", iso.threads, "Worker threads (0: hardware)")->capture_default_str();

  TrajectoryOpts traj;
  auto* s_traj = app.add_subcommand("trajectory", "Event-exact iris trajectory");
  add_common(s_traj, traj.common, {"csv", "json"});
  add_iris(s_traj, traj.iris);
  s_traj->add_option("--u0", traj.u0, "Entry coordinate on square 1 (default: the stable cycle)");
  s_traj->add_option("--x0", traj.x0, "Global start x");
  s_traj->add_option("--y0", traj.y0, "Global start y");
  s_traj->add_option("--t-end", traj.t_end, "Duration (default: three periods)");
  s_traj->add_option("--dt", traj.dt, "Sample spacing")->capture_default_str();
  s_traj->add_flag("--entries", traj.entries, "Emit the entry sequence u_n instead");

  SmoothCycleOpts scyc;
  auto* s_scyc = app.add_subcommand("smooth-cycle", "Smooth-system limit cycle summary");
  add_common(s_scyc, scyc.common, {"csv", "json"});
  add_smooth(s_scyc, scyc.smooth);

  SmoothPrcOpts sprc;
  auto* s_sprc = app.add_subcommand("smooth-prc", "Numerical phase response of the smooth system");
  add_common(s_sprc, sprc.common, {"csv", "json"});
  add_smooth(s_sprc, sprc.smooth);
  s_sprc->add_option("--direction", sprc.direction)
      ->check(CLI::IsMember({"x", "y", "s", "u"}))
      ->capture_default_str();
  s_sprc->add_option("--samples", sprc.samples)->capture_default_str();
  s_sprc->add_option("--r", sprc.r)->capture_default_str();
  s_sprc->add_option("--threads", sprc.threads)->capture_default_str();

  SmoothTrajectoryOpts straj;
  auto* s_straj = app.add_subcommand("smooth-trajectory", "Smooth-system time series");
  add_common(s_straj, straj.common, {"csv", "json"});
  add_smooth(s_straj, straj.smooth);
  s_straj->add_option("--y1", straj.y1, "Start y1 (default: along the settled cycle)");
  s_straj->add_option("--y2", straj.y2, "Start y2");
  s_straj->add_option("--t-end", straj.t_end, "Duration (default: three periods)");
  s_straj->add_option("--dt", straj.dt, "Sample spacing")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidParams;
  }

  const std::vector<std::pair<CLI::App*, std::function<std::string()>>> table{
      {s_bif, [&] { return cmd_bifurcation(bif); }},
      {s_cyc, [&] { return cmd_cycle(cyc); }},
      {s_prc, [&] { return cmd_prc(prc); }},
      {s_iso, [&] { return cmd_isochrons(iso); }},
      {s_traj, [&] { return cmd_trajectory(traj); }},
      {s_scyc, [&] { return cmd_smooth_cycle(scyc); }},
      {s_sprc, [&] { return cmd_smooth_prc(sprc); }},
      {s_straj, [&] { return cmd_smooth_trajectory(straj); }},
  };
  const std::vector<const Common*> commons{&bif.common,  &cyc.common,  &prc.common,  &iso.common,
                                           &traj.common, &scyc.common, &sprc.common, &straj.common};

  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i].first->parsed()) continue;
    std::string payload;
    try {
      payload = table[i].second();
    } catch (const NoCycleError& e) {
      err << "error: " << e.what() << '\n';
      return kNoCycle;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kInvalidParams;
    } catch (const std::domain_error& e) {
      err << "error: " << e.what() << '\n';
      return kInvalidParams;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kFailure;
    }
    const std::string& path = commons[i]->out_path;
    if (path.empty()) {
      out << payload;
      return out ? kSuccess : kFailure;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << payload)) {
      err << "error: cannot write " << path << '\n';
      return kInvalidParams;
    }
    return kSuccess;
  }
  return kInvalidParams;
}

}  // namespace irislab::cli
