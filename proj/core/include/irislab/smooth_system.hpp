// Smooth toroidal vector field with a heteroclinic cycle between four
// saddles, rotated by mu into a stable limit cycle around the spiral at
// (pi, pi). Fixed-step RK4 integration, Poincare-section cycle location and
// finite-perturbation phase response.
//
// Phase runs over [0, 4) with zero at the downward crossing of the ray
// y2 = pi, y1 in (pi, 2 pi). The cycle runs clockwise, so phase k + 1 is the
// quarter turn of phase k about (pi, pi).
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace irislab::smooth {

/// Trajectory left the cell bounded by the four saddles.
class SmoothEscapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SmoothParams {
  double alpha = 7.0 / 30.0;
  double mu = 0.1;

  /// alpha in (0, 1/2), mu in [0, 1); throws std::invalid_argument.
  void validate() const;
  double lambda_u() const { return 1.0 - 2.0 * alpha; }
  double lambda_s() const { return -1.0 - 2.0 * alpha; }
  /// ((1 + 2 alpha) / (1 - 2 alpha))^4
  double saddle_value() const;
};

struct State {
  double y1 = 0.0;
  double y2 = 0.0;
};

State vector_field(State y, const SmoothParams& p);
inline State vector_field(double y1, double y2, const SmoothParams& p) {
  return vector_field(State{y1, y2}, p);
}

struct Jacobian {
  double a11, a12, a21, a22;
};

Jacobian jacobian(State y, const SmoothParams& p);

struct Eigenvalues {
  std::complex<double> first;   // larger real part
  std::complex<double> second;
};

Eigenvalues eigenvalues(const Jacobian& j);

/// The four saddles, Newton-refined from (pi/2 + m pi, pi/2 + n pi), ordered
/// (pi/2, pi/2), (3pi/2, pi/2), (3pi/2, 3pi/2), (pi/2, 3pi/2).
std::vector<State> saddles(const SmoothParams& p);
inline State spiral_point() { return {3.141592653589793, 3.141592653589793}; }

/// Both coordinates reduced to [0, 2 pi).
State wrap_torus(State y);

State rk4_step(State y, double h, const SmoothParams& p);

/// Integrated path on the universal cover with cubic Hermite dense output.
struct Path {
  std::vector<double> t;
  std::vector<State> y;   // unwrapped
  std::vector<State> dy;  // field values at the nodes

  /// Interpolated state at time t, wrapped onto the torus.
  State at(double time) const;
  State at_unwrapped(double time) const;
  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
};

/// RK4 from t = 0 to t_end with step h (the last step is shortened to land
/// on t_end).
Path integrate(State start, double t_end, const SmoothParams& p, double h = 1e-3);

struct CycleOptions {
  double h = 1e-3;
  double tol = 1e-10;          // successive-crossing distance
  int plain_iterations = 6;    // return-map iterations before the secant phase
  int max_iterations = 100;
  double initial_offset = 0.8; // y1 - pi of the first section point
};

struct SmoothCycle {
  SmoothParams params;
  State anchor;   // section point, phase 0
  double period = 0.0;
  double h = 1e-3;
  Path orbit;     // one period starting at the anchor

  State at_phase(double theta) const;
  State velocity_at_phase(double theta) const;
};

/// Fixed point of the section return map. Throws irislab::NoCycleError
/// unless 0 < mu < 2 alpha and the iteration converges.
SmoothCycle find_cycle(const SmoothParams& p, const CycleOptions& opt = {});

struct SmoothPrcOptions {
  double r = 1e-4;
  std::size_t min_periods = 20;
  std::size_t max_periods = 4000;
  double settle_tol = 1e-9;    // change of measured phase between crossings
};

/// Finite-perturbation phase response to r * eta at phase theta, divided by
/// r. Advance-positive. Throws SmoothEscapeError if the perturbed trajectory
/// leaves the saddle cell.
double numeric_iprc_smooth(State eta, double theta, const SmoothCycle& cycle,
                           const SmoothPrcOptions& opt = {});

/// As numeric_iprc_smooth, but if the kick along +eta leaves the basin the
/// one-sided difference along -eta is used instead.
double response_with_fallback(State eta, double theta, const SmoothCycle& cycle,
                              const SmoothPrcOptions& opt = {});

struct SmoothPrcSample {
  double theta;
  double z_x;
  double z_y;
};

/// Horizontal and vertical responses at theta_j = 4 j / n, each computed with
/// response_with_fallback.
std::vector<SmoothPrcSample> smooth_prc_curve(std::size_t n, const SmoothCycle& cycle,
                                              const SmoothPrcOptions& opt = {},
                                              unsigned threads = 0);

struct TimeSample {
  double t;
  double y1;
  double y2;
};

/// States along the settled cycle from the anchor, spaced dt, up to t_end.
std::vector<TimeSample> timeplot(const SmoothCycle& cycle, double t_end, double dt);

/// Fraction of one period spent at speed below threshold * max speed.
double dwell_fraction(const SmoothCycle& cycle, double threshold = 0.1);

/// max |z| / median |z|.
double peak_to_median(const std::vector<double>& z);

}  // namespace irislab::smooth
