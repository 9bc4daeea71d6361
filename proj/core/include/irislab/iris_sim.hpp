// Event-exact simulation of the four-square iris system in global
// coordinates, asymptotic phase, numerical phase response and isochrons.
//
// Square k (k = 1..4) has half-side 1 and centre z_k = sqrt(2)(-i)^k
// (e^{-i pi/4} + (a/2) e^{i pi/4}); square 1 is the lower-left one with its
// stable axis along +x and unstable axis along +y. Squares 2-4 follow by
// clockwise quarter turns about the origin. Inside a square the flow is
// s' = -lambda s, u' = u, solved in closed form; boundary crossings are
// exact logarithmic event times.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "irislab/iris_core.hpp"
#include "irislab/iris_prc.hpp"

namespace irislab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct LocalPoint {
  double s = 0.0;
  double u = 0.0;
};

/// Clockwise quarter turn about the origin, (x, y) -> (y, -x). Maps square k
/// onto square k+1.
Vec2 rotate_quarter(Vec2 p);

struct SquareFrame {
  int index = 1;
  Vec2 center;
  Vec2 e_s;  // global direction of the local stable axis
  Vec2 e_u;  // global direction of the local unstable axis

  LocalPoint to_local(Vec2 p) const;
  Vec2 to_global(LocalPoint q) const;
  /// Components of a global vector along (e_s, e_u).
  LocalPoint local_components(Vec2 v) const;
};

SquareFrame square_frame(int k, double a);

/// A point tagged with the square whose flow governs it.
struct Location {
  int square = 1;
  LocalPoint local;
};

/// Square containing p. Points on an edge shared by squares k and k+1 belong
/// to k+1, the square being entered. Empty outside the four large squares
/// (including the central gap of side a).
std::optional<Location> locate(Vec2 p, const IrisParams& params);

bool in_center_gap(Vec2 p, double a);

/// Closed-form flow of the saddle square, (s e^{-lambda dt}, u e^{dt}).
LocalPoint flow_in_square(LocalPoint q, double dt, double lambda);

/// log(1/u): time to reach the exit edge u = 1. Throws std::domain_error for
/// u <= 0 (the trajectory never reaches the exit edge).
double time_to_exit(LocalPoint q);

enum class Termination {
  Converged,  // entry position within tolerance of u_dag
  Absorbed,   // exit point lies on the central gap
  Escaped,    // left the four-square domain through an outer edge
  Stalled,    // started on a stable manifold, u == 0
  MaxTime,    // time or crossing budget exhausted
};

std::string_view to_string(Termination t);

struct Segment {
  int square;
  LocalPoint entry;
  double t_entry;
  LocalPoint exit;
  double t_exit;
};

struct Trajectory {
  std::vector<Segment> segments;
  Termination termination = Termination::MaxTime;
};

struct SimulateOptions {
  double max_time = 1e300;
  std::size_t max_crossings = 40000;  // 10^4 cycles
  bool stop_on_convergence = true;
  double convergence_tol = 1e-10;
};

/// Advances by exact per-square flow and hands off u_next = s_exit + a.
/// Local starts may sit slightly outside the square (|s|, |u| <= 1.01); the
/// square's linear flow is then extended to that point.
Trajectory simulate(Location start, const IrisParams& params, const SimulateOptions& opt = {});
Trajectory simulate(Vec2 start, const IrisParams& params, const SimulateOptions& opt = {});

struct TrajectoryPoint {
  double t;
  Vec2 p;
  int square;
};

/// Dense samples at spacing dt plus the exact entry and exit points of every
/// segment.
std::vector<TrajectoryPoint> sample_trajectory(const Trajectory& traj, const IrisParams& params,
                                               double dt);

/// Entry positions u of every segment after the first.
std::vector<double> entry_sequence(const Trajectory& traj);

struct PhaseResult {
  std::optional<double> theta;  // empty: no asymptotic phase
  Termination reason;
  std::size_t crossings;
};

/// Asymptotic phase in [0, 4) relative to the cycle's entry into square 1.
/// The tail beyond |u - u_dag| < tol is added from the linearised entry map.
PhaseResult asymptotic_phase(Location start, const IrisParams& params, const IrisCycle& cycle,
                             std::size_t max_cycles = 10000, double tol = 1e-10);
PhaseResult asymptotic_phase(Vec2 start, const IrisParams& params, const IrisCycle& cycle,
                             std::size_t max_cycles = 10000, double tol = 1e-10);

/// Point of the stable cycle at phase theta, in the square being traversed.
Location cycle_point(Phase theta, const IrisCycle& cycle, const IrisParams& params);

/// Velocity of the flow at a location, in global coordinates.
Vec2 velocity(Location loc, const IrisParams& params);

/// Finite-perturbation phase response: displaces the cycle point at theta by
/// r * eta (global frame), measures the asymptotic phase shift, divides by r.
/// Advance-positive. Throws std::runtime_error if the displaced point has no
/// asymptotic phase.
double numeric_iprc(Vec2 eta, double theta, double r, const IrisParams& params,
                    const IrisCycle& cycle);

/// Entry-position description of the unstable cycle.
struct UnstableCycle {
  double u_ddag;
  double s_ddag;  // u_ddag^lambda
  double period;  // 4 log(1/u_ddag)

  /// True for points on the central side of the unstable cycle (strictly
  /// inside the quadrant s, u > 0 with s u^lambda > s_ddag).
  bool encloses(Location loc, double lambda) const;
};

/// Throws NoCycleError unless both roots exist.
UnstableCycle unstable_cycle(const IrisParams& params);

/// Asymptotic phase sampled at cell centres of a square grid covering the
/// four large squares. NaN marks cells without a phase.
struct IsochronField {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  std::vector<double> theta;  // row-major, row j = y index (ascending)

  double at(std::size_t i, std::size_t j) const { return theta[j * nx + i]; }
  Vec2 cell_center(std::size_t i, std::size_t j) const;
  bool has_phase(std::size_t i, std::size_t j) const;
};

IsochronField isochron_field(std::size_t grid_n, const IrisParams& params,
                             unsigned threads = 0);

struct GradientPeak {
  std::size_t i = 0;
  std::size_t j = 0;
  double magnitude = 0.0;
  double boundary_distance = 0.0;  // to the nearest edge of its square
};

/// Largest finite-difference |grad theta| over pairs of adjacent phased cells
/// inside the same square (phase differences taken on the circle).
GradientPeak max_phase_gradient(const IsochronField& field, const IrisParams& params);

// Serialization. CSV files carry a one-line '#' header with the parameters.
void write_field_csv(std::ostream& os, const IsochronField& field);
/// Little-endian binary grid: "IRISISO1", u64 nx, u64 ny, f64 xmin, xmax,
/// ymin, ymax, lambda, a, then nx*ny f64 row-major (NaN = no phase).
void write_field_binary(std::ostream& os, const IsochronField& field);
IsochronField read_field_binary(std::istream& is);
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points,
                          const IrisParams& params);

}  // namespace irislab
