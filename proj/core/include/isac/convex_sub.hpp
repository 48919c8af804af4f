#pragma once

#include <vector>

#include "isac/ci.hpp"
#include "isac/config.hpp"
#include "isac/types.hpp"

namespace isac {

/// Projection onto {v : Re{h_r^H v} ≥ γ_r for all r} by cyclic Dykstra sweeps.
/// Stops when a full sweep moves the iterate by at most tol times the problem scale.
CVec project_halfspaces(const CVec& v, const std::vector<CVec>& normals, const std::vector<double>& gamma,
                        double tol = 1e-10, int max_sweeps = 100000);

/// Cell-wise CI projection of a whole frequency-domain frame.
CVec project_ci(const CVec& x, const CiSet& ci, double tol = 1e-10);
void project_ci(const CVec& x, const CiSet& ci, CVec& out, double tol = 1e-10);

/// Radial projection of each scalar onto the disk of radius cap.
CVec project_modulus_caps(const CVec& w, double cap);

/// Projection of a time-domain frame onto {w : Σ_b N_t‖w_b‖² − |a^H w_b|² ≤ cap}. The
/// a-components pass through; the orthogonal parts scale by 1/(1 + μ N_t). If mu is given it
/// receives the multiplier.
CVec project_illumination(const GridDims& dims, const CVec& w, const CVec& a, double cap, double* mu = nullptr);

/// Problem data of the ADMM x-update: min Re{m^H x} + (ρ/2)‖x‖² over the CI, modulus-cap and
/// illumination sets.
struct XUpdateProblem {
  CVec m;
  double rho = 1.0;
  const CiSet* ci = nullptr;
  double illum_cap = 0.0;
  double modulus_cap = 0.0;
  CVec a;
};

enum class SolveStatus { converged, max_iters };

struct SolveReport {
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double kkt_residual = 0.0;
  /// Recomputed from the returned point.
  double ci_violation = 0.0;
  double cap_violation = 0.0;
  double illum_violation = 0.0;
  double objective = 0.0;
};

struct XUpdateOptions {
  double tol = 1e-7;  ///< residual threshold, multiplied by sqrt(N_tot)
  int max_iters = 5000;
  double sigma = 1.0;  ///< initial consensus penalty, relative to ρ
  bool balance = true;
};

double x_update_objective(const XUpdateProblem& p, const CVec& x);
/// Constraint violations of x (absolute units) written into the report.
void fill_violations(const XUpdateProblem& p, const CVec& x, SolveReport& r);

/// Consensus splitting over three copies: CI in frequency, modulus caps and illumination in
/// time. Keeps its copies and scaled duals between calls for warm starts.
class XUpdateSolver {
 public:
  XUpdateSolver(const CiSet& ci, CVec a, double modulus_cap, double illum_cap, XUpdateOptions opts = {});

  /// Solves for the given m and ρ; x receives the solution.
  SolveReport solve(const CVec& m, double rho, CVec& x);
  void reset();
  const XUpdateOptions& options() const { return opts_; }

 private:
  const CiSet* ci_;
  CVec a_;
  double cap_;
  double illum_cap_;
  XUpdateOptions opts_;
  GridDims dims_;
  bool warm_ = false;
  double sigma_ = 1.0;
  CVec x_, y1_, u1_, y2_, u2_, y3_, u3_;
};

/// One-shot solve; throws infeasible when the constraint set is empty.
std::pair<CVec, SolveReport> solve_x_update(const XUpdateProblem& p, const XUpdateOptions& opts = {});

struct FeasibilityReport {
  bool feasible = false;
  double max_violation = 0.0;  ///< scale-free, see feasibility_phase
  int sweeps = 0;
  CVec point;
};

/// Cyclic projections onto the three sets from `start`. Violation is measured as the larger of
/// the normalized CI shortfall (per unit ‖h̃‖, over the modulus cap), the relative cap excess and
/// the relative illumination excess. Infeasible when the violation decreases by less than 1e-3
/// (relative) over 100 sweeps.
FeasibilityReport feasibility_phase(const XUpdateProblem& p, const CVec& start, int max_sweeps = 20000);

struct MaxMinOptions {
  int bisection_steps = 40;
  int max_sweeps = 4000;
  double violation_tol = 1e-6;
};

struct MaxMinResult {
  FreqWaveform x;
  double t = 0.0;  ///< achieved min_{n,m,k'} Re{h̃^H x_{n,m}}
  int steps = 0;
  int sweeps = 0;
};

/// max t s.t. Re{h̃^H x_{n,m}} ≥ t and |F̃^H x| ≤ cap, by bisection on t with alternating
/// projections at each level.
MaxMinResult solve_maxmin_init(const CiSet& ci, double modulus_cap, const MaxMinOptions& opts = {});

}  // namespace isac
