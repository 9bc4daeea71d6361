// Closed-form infinitesimal phase response of the iris limit cycle.
//
// Phase runs over [0, 4), one unit per square, with zero where the cycle
// enters square 1 at local (1, u_dag). Positive responses are phase
// advances, i.e. the perturbed trajectory crosses square boundaries earlier
// than the unperturbed one.
//
// Directions are given in the frame of square 1, which coincides with the
// global frame (stable axis = +x, unstable axis = +y). Squares 2-4 are
// successive clockwise quarter turns of square 1, so a global direction eta
// has local components R^k eta in square k+1, with R = [[0,-1],[1,0]].
#pragma once

#include <cstddef>
#include <vector>

#include "irislab/iris_core.hpp"

namespace irislab {

/// Perturbation direction (eta_s, eta_u). normalized() scales to unit L1 norm.
struct PerturbDirection {
  double eta_s = 0.0;
  double eta_u = 0.0;

  static PerturbDirection normalized(double eta_s, double eta_u);
  /// R eta, one clockwise square further along the cycle.
  PerturbDirection rotated(int quarter_turns) const;
};

/// theta in [0, 4) split into square index k = floor(theta) and fraction phi.
struct Phase {
  double theta = 0.0;

  static Phase wrap(double theta);
  int quarter() const;
  double fraction() const;
};

struct BetaPair {
  double s;
  double u;
};

/// beta(phi) = ((s_dag)^(1-phi), (u_dag)^phi) for phi in [0, 1).
BetaPair beta(double phi, const IrisCycle& cycle);

/// beta_x, beta_y over the full cycle: beta reindexed by the square the
/// phase falls in.
struct GlobalBeta {
  double x;
  double y;
};
GlobalBeta beta_global(Phase theta, const IrisCycle& cycle);

/// log(1/u_dag) (u_dag - lambda s_dag); positive for a stable cycle.
double prc_denominator(const IrisCycle& cycle, const IrisParams& p);

/// Response to a perturbation with local components eta at fraction phi of
/// the current square.
double iprc_local(PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                  const IrisParams& p);

/// Response to a perturbation along eta (square-1 frame) at phase theta.
/// Throws NoCycleError unless a stable cycle exists. Integer phases are
/// evaluated in the square being entered.
double iprc(PerturbDirection eta, Phase theta, const IrisParams& p);
double iprc(PerturbDirection eta, Phase theta, const IrisCycle& cycle, const IrisParams& p);

enum class PrcDirection { GlobalX, GlobalY, LocalS, LocalU };

struct PrcSample {
  double theta;
  double z_x;
  double z_y;
  double z_s;
  double z_u;
};

double component(const PrcSample& sample, PrcDirection d);

/// Uniform grid theta_j = 4 j / n, j = 0..n-1, ordered by theta.
std::vector<PrcSample> prc_curve(std::size_t n_samples, const IrisCycle& cycle,
                                 const IrisParams& p);

/// Z(k) - lim Z(theta -> k-) for an integer phase k in {0,1,2,3}; the left
/// limit at 0 is taken from theta -> 4-.
double prc_jump(PrcDirection d, int k, const IrisCycle& cycle, const IrisParams& p);

/// Integral of beta_x over [0, 2), closed form.
double v_integral(const IrisCycle& cycle, const IrisParams& p);

struct AlphaPair {
  double x;
  double y;
};

/// Normalised response beta / V on the full cycle.
AlphaPair alpha(Phase theta, const IrisCycle& cycle, const IrisParams& p);

/// Adaptive-Simpson value of the integral of |alpha_x| + |alpha_y| over
/// [0, 4), integrated piecewise over the four smooth unit intervals.
double alpha_l1_integral(const IrisCycle& cycle, const IrisParams& p, double tol = 1e-12);

/// Overall PRC magnitude M with Z = (eta . alpha) M.
double magnitude_m(const IrisCycle& cycle, const IrisParams& p);

/// phi* = 1 - 1/lambda.
double critical_phase(double lambda);

enum class Eigendirection { Stable, Unstable };
enum class Sensitivity { Diverges, ConvergesToZero };

/// Limit of the response as a -> 0 for a perturbation along one eigenvector
/// at fraction phi of a square.
Sensitivity asymptotic_class(Eigendirection d, double phi, double lambda);

struct SmallOffsetEntry {
  double u_dag;
  double relative_deviation;  // (u_dag - a) / a
};

SmallOffsetEntry u_dag_small_a(double a, double lambda);

/// Reinjection box of the classical homoclinic phase-response model.
struct HomoclinicParams {
  double nu_x = 1.0;
  double big_delta = 1.0;
  double epsilon_reinject = 0.1;

  void validate() const;
  double u() const { return epsilon_reinject / big_delta; }
};

struct TableRow {
  double z_u;
  double z_s;
};

/// Homoclinic response (Z_u, Z_s) at fraction phi in [0, 1].
TableRow homoclinic_iprc(double phi, const HomoclinicParams& hp);

/// Iris response along the local eigendirections for a cycle entering at u,
/// with s = u^lambda.
TableRow iris_table_row(double phi, double u, double lambda);

// Linear propagation of a perturbation r eta applied at fraction phi of the
// first square (t' = phi log(1/u_dag)). All values are per unit r.

/// First entry-position offset Delta u_1 / r.
double first_entry_shift(PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                         const IrisParams& p);
/// First transit-time offset Delta T_1 / r.
double first_transit_shift(PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                           const IrisParams& p);
/// Entry-position offset after n >= 1 crossings.
double entry_shift(int n, PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                   const IrisParams& p);
/// Sum of the first n dwell-time offsets (crossing n happens this much later).
double cumulative_shift(int n, PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                        const IrisParams& p);
/// n -> infinity limit of cumulative_shift.
double cumulative_shift_limit(PerturbDirection eta_local, double phi, const IrisCycle& cycle,
                              const IrisParams& p);

}  // namespace irislab
