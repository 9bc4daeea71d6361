#include "irislab/smooth_system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "irislab/iris_core.hpp"

namespace irislab::smooth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

State axpy(State y, double h, State k) { return {y.y1 + h * k.y1, y.y2 + h * k.y2}; }

bool in_cell(State y) {
  return y.y1 >= 0.5 * kPi && y.y1 <= 1.5 * kPi && y.y2 >= 0.5 * kPi && y.y2 <= 1.5 * kPi;
}

// Phase difference mapped onto (-2, 2].
double wrap_difference(double d) {
  double w = std::fmod(d, 4.0);
  if (w <= -2.0) w += 4.0;
  if (w > 2.0) w -= 4.0;
  return w;
}

double wrap_phase(double theta) {
  double w = std::fmod(theta, 4.0);
  if (w < 0.0) w += 4.0;
  return w >= 4.0 ? 0.0 : w;
}

// Downward crossing of the section between y0 (time t0) and the RK4 step of
// size h from it. Returns the crossing time offset in (0, h] located by
// bisection on the step length, or a negative value if there is none.
double section_crossing(State y0, State y1, double h, const SmoothParams& p) {
  if (!(y0.y2 > kPi && y1.y2 <= kPi)) return -1.0;
  if (!(y0.y1 > kPi || y1.y1 > kPi)) return -1.0;
  double lo = 0.0;
  double hi = h;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (rk4_step(y0, mid, p).y2 > kPi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

struct Crossing {
  double time;
  State point;
};

// Integrates from start until the next downward section crossing.
Crossing next_crossing(State start, const SmoothParams& p, double h, double max_time) {
  State y = start;
  for (std::size_t n = 0; static_cast<double>(n) * h < max_time; ++n) {
    const State next = rk4_step(y, h, p);
    const double tau = section_crossing(y, next, h, p);
    if (tau > 0.0) return {static_cast<double>(n) * h + tau, rk4_step(y, tau, p)};
    y = next;
    if (!in_cell(y)) throw SmoothEscapeError("trajectory left the saddle cell");
  }
  throw NoCycleError("no section crossing within the time budget");
}

}  // namespace

void SmoothParams::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in [0, 1)");
}

double SmoothParams::saddle_value() const { return std::pow(-lambda_s() / lambda_u(), 4.0); }

State vector_field(State y, const SmoothParams& p) {
  const double s1 = std::sin(y.y1), c1 = std::cos(y.y1);
  const double s2 = std::sin(y.y2), c2 = std::cos(y.y2);
  const double f = c1 * s2 + 2.0 * p.alpha * s1 * c1;
  const double g = -s1 * c2 + 2.0 * p.alpha * s2 * c2;
  return {f + p.mu * g, g - p.mu * f};
}

Jacobian jacobian(State y, const SmoothParams& p) {
  const double s1 = std::sin(y.y1), c1 = std::cos(y.y1);
  const double s2 = std::sin(y.y2), c2 = std::cos(y.y2);
  const double f1 = -s1 * s2 + 2.0 * p.alpha * std::cos(2.0 * y.y1);
  const double f2 = c1 * c2;
  const double g1 = -c1 * c2;
  const double g2 = s1 * s2 + 2.0 * p.alpha * std::cos(2.0 * y.y2);
  return {f1 + p.mu * g1, f2 + p.mu * g2, g1 - p.mu * f1, g2 - p.mu * f2};
}

Eigenvalues eigenvalues(const Jacobian& j) {
  const double tr = j.a11 + j.a22;
  const double det = j.a11 * j.a22 - j.a12 * j.a21;
  const std::complex<double> root = std::sqrt(std::complex<double>(0.25 * tr * tr - det, 0.0));
  return {0.5 * tr + root, 0.5 * tr - root};
}

std::vector<State> saddles(const SmoothParams& p) {
  p.validate();
  const State guesses[4] = {{0.5 * kPi, 0.5 * kPi},
                            {1.5 * kPi, 0.5 * kPi},
                            {1.5 * kPi, 1.5 * kPi},
                            {0.5 * kPi, 1.5 * kPi}};
  std::vector<State> out;
  for (State y : guesses) {
    for (int it = 0; it < 50; ++it) {
      const State f = vector_field(y, p);
      const Jacobian j = jacobian(y, p);
      const double det = j.a11 * j.a22 - j.a12 * j.a21;
      const double d1 = (j.a22 * f.y1 - j.a12 * f.y2) / det;
      const double d2 = (-j.a21 * f.y1 + j.a11 * f.y2) / det;
      y = {y.y1 - d1, y.y2 - d2};
      if (std::abs(d1) + std::abs(d2) < 1e-15) break;
    }
    out.push_back(y);
  }
  return out;
}

State wrap_torus(State y) {
  auto w = [](double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
  };
  return {w(y.y1), w(y.y2)};
}

State rk4_step(State y, double h, const SmoothParams& p) {
  const State k1 = vector_field(y, p);
  const State k2 = vector_field(axpy(y, 0.5 * h, k1), p);
  const State k3 = vector_field(axpy(y, 0.5 * h, k2), p);
  const State k4 = vector_field(axpy(y, h, k3), p);
  return {y.y1 + h / 6.0 * (k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1),
          y.y2 + h / 6.0 * (k1.y2 + 2.0 * k2.y2 + 2.0 * k3.y2 + k4.y2)};
}

State Path::at_unwrapped(double time) const {
  if (t.size() < 2) throw std::logic_error("path has fewer than two nodes");
  if (time < t.front() || time > t.back()) throw std::out_of_range("time outside the path");
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  i = std::clamp<std::size_t>(i, 1, t.size() - 1) - 1;
  const double h = t[i + 1] - t[i];
  const double x = (time - t[i]) / h;
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
  const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
  return {h00 * y[i].y1 + h10 * h * dy[i].y1 + h01 * y[i + 1].y1 + h11 * h * dy[i + 1].y1,
          h00 * y[i].y2 + h10 * h * dy[i].y2 + h01 * y[i + 1].y2 + h11 * h * dy[i + 1].y2};
}

State Path::at(double time) const { return wrap_torus(at_unwrapped(time)); }

Path integrate(State start, double t_end, const SmoothParams& p, double h) {
  p.validate();
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("integration horizon must be positive");
  Path path;
  const auto n = static_cast<std::size_t>(std::ceil(t_end / h));
  path.t.reserve(n + 1);
  path.y.reserve(n + 1);
  path.dy.reserve(n + 1);
  State y = start;
  double t = 0.0;
  path.t.push_back(t);
  path.y.push_back(y);
  path.dy.push_back(vector_field(y, p));
  for (std::size_t i = 1; i <= n; ++i) {
    const double t_next = std::min(t_end, static_cast<double>(i) * h);
    if (t_next <= t) break;
    y = rk4_step(y, t_next - t, p);
    t = t_next;
    path.t.push_back(t);
    path.y.push_back(y);
    path.dy.push_back(vector_field(y, p));
  }
  return path;
}

SmoothCycle find_cycle(const SmoothParams& p, const CycleOptions& opt) {
  p.validate();
  if (!(p.mu > 0.0 && p.mu < 2.0 * p.alpha)) {
    throw NoCycleError("smooth limit cycle requires 0 < mu < 2 alpha");
  }
  const double budget = 1e5;
  auto ret = [&](double d) {
    if (!(d > 0.0 && d < 0.5 * kPi)) throw NoCycleError("return map left the section ray");
    return next_crossing({kPi + d, kPi}, p, opt.h, budget);
  };

  double x = opt.initial_offset;
  double gx = 0.0;
  Crossing c{};
  bool done = false;
  double x_prev = x, g_prev = 0.0;
  int it = 0;
  try {
    for (; it < opt.plain_iterations; ++it) {
      c = ret(x);
      gx = c.point.y1 - kPi - x;
      if (std::abs(gx) < opt.tol) {
        done = true;
        break;
      }
      x_prev = x;
      g_prev = gx;
      x = c.point.y1 - kPi;
    }
    for (; !done && it < opt.max_iterations; ++it) {
      c = ret(x);
      gx = c.point.y1 - kPi - x;
      if (std::abs(gx) < opt.tol) {
        done = true;
        break;
      }
      double next = x + gx;
      if (g_prev != gx && x_prev != x) next = x - gx * (x - x_prev) / (gx - g_prev);
      x_prev = x;
      g_prev = gx;
      x = next;
    }
  } catch (const SmoothEscapeError&) {
    throw NoCycleError("return-map iteration escaped the saddle cell");
  }
  if (!done) throw NoCycleError("return-map iteration did not converge");

  SmoothCycle cyc;
  cyc.params = p;
  cyc.anchor = {kPi + x, kPi};
  cyc.period = c.time;
  cyc.h = opt.h;
  cyc.orbit = integrate(cyc.anchor, cyc.period, p, opt.h);
  return cyc;
}

State SmoothCycle::at_phase(double theta) const {
  return orbit.at(wrap_phase(theta) * 0.25 * period);
}

State SmoothCycle::velocity_at_phase(double theta) const {
  return vector_field(at_phase(theta), params);
}

double numeric_iprc_smooth(State eta, double theta, const SmoothCycle& cyc,
                           const SmoothPrcOptions& opt) {
  if (!(opt.r > 0.0)) throw std::invalid_argument("perturbation size must be positive");
  const SmoothParams& p = cyc.params;
  const double base = wrap_phase(theta);
  const State x0 = cyc.at_phase(base);
  State y{x0.y1 + opt.r * eta.y1, x0.y2 + opt.r * eta.y2};

  const double h = cyc.h;
  const double horizon = static_cast<double>(opt.min_periods) * cyc.period;
  const double t_max = static_cast<double>(opt.max_periods) * cyc.period;
  double last = 0.0;
  bool have_last = false;
  for (std::size_t n = 0; static_cast<double>(n) * h < t_max; ++n) {
    const double t = static_cast<double>(n) * h;
    const State next = rk4_step(y, h, p);
    const double tau = section_crossing(y, next, h, p);
    if (tau > 0.0) {
      const double measured = -4.0 * (t + tau) / cyc.period;
      if (t >= horizon && have_last &&
          std::abs(wrap_difference(measured - last)) < opt.settle_tol) {
        return wrap_difference(measured - base) / opt.r;
      }
      last = measured;
      have_last = true;
    }
    y = next;
    if (!in_cell(y)) throw SmoothEscapeError("perturbed trajectory left the saddle cell");
  }
  if (!have_last) throw SmoothEscapeError("perturbed trajectory never crossed the section");
  return wrap_difference(last - base) / opt.r;
}

double response_with_fallback(State eta, double theta, const SmoothCycle& cyc,
                              const SmoothPrcOptions& opt) {
  try {
    return numeric_iprc_smooth(eta, theta, cyc, opt);
  } catch (const SmoothEscapeError&) {
    return numeric_iprc_smooth({-eta.y1, -eta.y2}, theta, cyc, opt) * -1.0;
  }
}

std::vector<SmoothPrcSample> smooth_prc_curve(std::size_t n, const SmoothCycle& cyc,
                                              const SmoothPrcOptions& opt, unsigned threads) {
  if (n < 4) throw std::invalid_argument("smooth_prc_curve needs at least 4 samples");
  std::vector<SmoothPrcSample> out(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  auto work = [&](unsigned w) {
    for (std::size_t j = w; j < n; j += threads) {
      const double theta = 4.0 * static_cast<double>(j) / static_cast<double>(n);
      out[j] = {theta, response_with_fallback({1.0, 0.0}, theta, cyc, opt),
                response_with_fallback({0.0, 1.0}, theta, cyc, opt)};
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<TimeSample> timeplot(const SmoothCycle& cyc, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("time span and spacing must be positive");
  const double tp = cyc.orbit.t_end();
  std::vector<TimeSample> out;
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const State y = cyc.orbit.at(std::fmod(t, tp));
    out.push_back({t, y.y1, y.y2});
  }
  return out;
}

double dwell_fraction(const SmoothCycle& cyc, double threshold) {
  const Path& o = cyc.orbit;
  std::vector<double> speed(o.dy.size());
  for (std::size_t i = 0; i < speed.size(); ++i) speed[i] = std::hypot(o.dy[i].y1, o.dy[i].y2);
  const double vmax = *std::max_element(speed.begin(), speed.end());
  double slow = 0.0;
  for (std::size_t i = 0; i + 1 < speed.size(); ++i) {
    const double mid = 0.5 * (speed[i] + speed[i + 1]);
    if (mid < threshold * vmax) slow += o.t[i + 1] - o.t[i];
  }
  return slow / (o.t.back() - o.t.front());
}

double peak_to_median(const std::vector<double>& z) {
  if (z.empty()) throw std::invalid_argument("peak_to_median of an empty series");
  std::vector<double> a(z.size());
  std::transform(z.begin(), z.end(), a.begin(), [](double v) { return std::abs(v); });
  const double peak = *std::max_element(a.begin(), a.end());
  const std::size_t mid = a.size() / 2;
  std::nth_element(a.begin(), a.begin() + mid, a.end());
  double median = a[mid];
  if (a.size() % 2 == 0) median = 0.5 * (median + *std::max_element(a.begin(), a.begin() + mid));
  return peak / median;
}

}  // namespace irislab::smooth
