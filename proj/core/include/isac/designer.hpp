#pragma once

#include <string>
#include <vector>

#include "isac/ci.hpp"
#include "isac/config.hpp"
#include "isac/convex_sub.hpp"
#include "isac/model.hpp"
#include "isac/types.hpp"

namespace isac {

struct TraceRow {
  int outer_iter = 0;
  double isl = 0.0;
  double normalized_isl_db = 0.0;
  int inner_iters = 0;
  double primal_residual = 0.0;  ///< ‖F̃^H x − z‖² at inner exit
  double dual_residual = 0.0;    ///< ‖|z| − r‖² at inner exit
  double min_ci_margin = 0.0;
  double illum_power = 0.0;
};

enum class DesignStatus {
  converged,    ///< relative ISL change ≤ δ_th
  outer_cap,    ///< outer iteration cap reached (no_progress)
  rejected,     ///< a candidate iterate raised the ISL; previous iterate kept
  stationary,   ///< surrogate gradient vanished
};

std::string to_string(DesignStatus s);

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  DesignStatus status = DesignStatus::converged;
  int inner_cap_hits = 0;
  int x_update_cap_hits = 0;
  long x_update_iterations = 0;
};

/// Scaled ADMM state of the inner loop: x, z, λ and μ (μ is real because |z| − r is).
struct MmAdmmState {
  CVec x;
  CVec z;
  CVec lam;
  RVec mu;
  double rho = 1.0;
  int outer_iter = 0;
  int inner_iter = 0;
  std::vector<double> isl_history;
};

/// z_i = ½(|v_i| + r_i) e^{j∠v_i} with phase 0 at v_i = 0. A negative magnitude is clamped to 0.
CVec z_update(const CVec& v, const RVec& r);
/// λ += ρ(w − z), μ += ρ(|z| − r0) where w = F̃^H x.
void dual_update(MmAdmmState& s, const CVec& w, double r0);

struct DesignResult {
  FreqWaveform x;
  ConvergenceTrace trace;
};

/// Per-sample CM normalization x ↦ F̃(r e^{j∠F̃^H x}); zero samples take phase 0.
FreqWaveform to_constant_modulus(const FreqWaveform& x, double modulus);

/// Max-min fairness waveform (comm-only baseline).
FreqWaveform design_comm_only(const SystemConfig& cfg, const SolverOptions& solver, const CiSet& ci);

/// MM-ADMM design. Starts from `init` when given, otherwise from the comm-only waveform.
DesignResult design_slp_waveform(const LabConfig& cfg, const CiSet& ci, double theta_rad,
                                 const FreqWaveform* init = nullptr);
DesignResult design_slp_waveform(const LabConfig& cfg, const ChannelSet& channels, const SymbolGrid& symbols,
                                 double theta_rad);

/// Radar-only MM with the phase-only closed-form update, starting from `init`.
DesignResult design_radar_only(const LabConfig& cfg, double theta_rad, const FreqWaveform& init);

}  // namespace isac
