// Scalar analysis of the piecewise-linear iris system.
//
// All quantities are nondimensional: each saddle square has half-side 1, the
// unstable eigenvalue is 1 and the stable one is -lambda. A trajectory that
// enters a square at local (1, u) leaves it at (u^lambda, 1) after a transit
// time log(1/u) and enters the next square at (1, u^lambda + a).
#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace irislab {

/// Thrown when an operation needs a stable limit cycle and the parameters
/// do not admit one.
class NoCycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Saddle ratio and boundary offset of one iris instance.
struct IrisParams {
  double lambda = 2.0;
  double a = 0.2;

  /// Throws std::invalid_argument unless lambda > 0 and 0 <= a < 1.
  /// Offsets in (0, 1e-300) are rejected as well.
  void validate() const;

  static IrisParams make(double lambda, double a) {
    IrisParams p{lambda, a};
    p.validate();
    return p;
  }
};

/// Entry coordinates of the stable (u_dag) and unstable (u_ddag) limit
/// cycles along the s = 1 edge of every square.
struct IrisCycle {
  double u_dag = 0.0;
  double u_ddag = 0.0;
  double s_dag = 0.0;   // exit coordinate, u_dag^lambda
  double period = 0.0;  // 4 log(1/u_dag)

  /// Time spent in one square, log(1/u_dag).
  double transit() const { return 0.25 * period; }
  bool degenerate() const { return u_dag == u_ddag; }
};

enum class Regime {
  StableAndUnstableCycle,
  FoldPoint,
  NoCycleSpiral,
  HeteroclinicBoundary,
  NeutralOrbits,
};

std::string_view to_string(Regime r);

/// |a - a_fold| below this is reported as a fold point.
inline constexpr double kFoldTolerance = 1e-9;

/// rho(u) = u^lambda - u + a. Fixed points of the entry map are its zeros.
double rho(double u, const IrisParams& p);

/// Minimiser of rho on (0, 1), lambda^(1/(1-lambda)). Requires lambda > 1.
double min_entry(double lambda);

/// True iff lambda > 1 and rho(min_entry) <= 0.
bool existence_test(const IrisParams& p);

/// Offset at which the stable and unstable cycles merge.
double fold_offset(double lambda);

Regime classify_regime(const IrisParams& p);

/// Both zeros of rho in (0, 1): bisection on either side of min_entry down to
/// a 1e-6 bracket, then a safeguarded Newton polish. At exact tangency both
/// entries equal min_entry. Empty when lambda <= 1, a == 0 or the existence
/// test fails.
std::optional<std::pair<double, double>> find_roots(const IrisParams& p);

/// Cycle geometry when roots exist (including the tangent case).
std::optional<IrisCycle> find_cycle(const IrisParams& p);

/// Like find_cycle but throws NoCycleError unless a strictly stable cycle
/// exists (fold points are excluded: the semi-stable cycle has no phase
/// response in the usual sense).
IrisCycle require_stable_cycle(const IrisParams& p);

/// dh/du = lambda u^(lambda-1). Below 1 the fixed point is stable.
double stability_derivative(double u, const IrisParams& p);

struct TransitMap {
  double s_exit;
  double transit;
};

/// Passage through one square from entry (1, u): exit coordinate u^lambda
/// and transit time log(1/u).
TransitMap map_fl(double u, const IrisParams& p);

/// Square-to-square entry map h(u) = u^lambda + a.
double map_h(double u, const IrisParams& p);

struct Approach {
  double t_closest;
  double t_slowest;
  double phi_closest;  // t_closest / log(1/u_in)
  double phi_slowest;
  double u_closest, s_closest;
  double u_slowest, s_slowest;
};

/// Times (and fractional phases of the square transit) at which the
/// trajectory entering at (1, u_in) is closest to the saddle and slowest.
Approach closest_slowest(double u_in, const IrisParams& p);

}  // namespace irislab
