#include "isac/designer.hpp"

#include <cmath>

#include "isac/ambiguity.hpp"
#include "isac/error.hpp"
#include "isac/majorize.hpp"
#include "isac/transforms.hpp"

namespace isac {

std::string to_string(DesignStatus s) {
  switch (s) {
    case DesignStatus::converged: return "converged";
    case DesignStatus::outer_cap: return "no_progress";
    case DesignStatus::rejected: return "rejected_step";
    case DesignStatus::stationary: return "stationary";
  }
  return "unknown";
}

CVec z_update(const CVec& v, const RVec& r) {
  CVec z(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(0.0, 0.5 * (std::abs(v[i]) + r[i]));
    z[i] = v[i] == cd(0.0, 0.0) ? cd(mag, 0.0) : mag * (v[i] / std::abs(v[i]));
  }
  return z;
}

void dual_update(MmAdmmState& s, const CVec& w, double r0) {
  s.lam += s.rho * (w - s.z);
  s.mu += s.rho * (s.z.cwiseAbs().array() - r0).matrix();
}

FreqWaveform to_constant_modulus(const FreqWaveform& x, double modulus) {
  CVec w;
  to_time(x.dims, x.data, w);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double m = std::abs(w[i]);
    w[i] = m > 0.0 ? modulus * (w[i] / m) : cd(modulus, 0.0);
  }
  FreqWaveform out(x.dims);
  to_freq(x.dims, w, out.data);
  return out;
}

FreqWaveform design_comm_only(const SystemConfig& cfg, const SolverOptions& solver, const CiSet& ci) {
  MaxMinOptions mo;
  mo.bisection_steps = solver.maxmin_bisection_steps;
  mo.max_sweeps = solver.maxmin_max_sweeps;
  return solve_maxmin_init(ci, cfg.modulus(), mo).x;
}

namespace {

TraceRow make_row(int iter, const FreqWaveform& x, const CVec& a, const CiSet* ci) {
  TraceRow row;
  row.outer_iter = iter;
  const RMat p = power_grid(x, a);
  row.isl = isl(p);
  row.normalized_isl_db = normalized_isl_db(p);
  row.min_ci_margin = ci ? ci_margin(x.data, *ci) : 0.0;
  row.illum_power = p.sum();
  return row;
}

CVec normalized_gradient(const SurrogateState& s) {
  CVec g = surrogate_gradient(s);
  const double gn = g.norm();
  // The argmin of Re{g^H x} over the feasible set is invariant to positive scaling of g;
  // matching ‖g‖ to ‖x_t‖ keeps ρ dimensionless.
  if (gn > 0.0) g *= s.x.norm() / gn;
  return g;
}

bool accept(double cand, double prev) { return cand <= prev + 1e-8 * (1.0 + prev); }

/// Below this the power grid is flat to rounding and relative ISL changes are noise.
constexpr double kFlatIslDb = -200.0;

bool flat(const TraceRow& row) { return row.isl == 0.0 || row.normalized_isl_db <= kFlatIslDb; }

bool feasible_constant_modulus(const FreqWaveform& x, const CiSet& ci, const CVec& a, const SystemConfig& sys) {
  const double r0 = sys.modulus();
  CVec w;
  to_time(x.dims, x.data, w);
  if (((w.cwiseAbs().array() - r0).abs() > 1e-9 * r0).any()) return false;
  if (ci_margin_normalized(x.data, ci) < -1e-9 * r0) return false;
  return illumination_power(x, a) >= sys.min_illum_power_w - 1e-9 * sys.n_tx * sys.power_budget_w;
}

}  // namespace

DesignResult design_slp_waveform(const LabConfig& cfg, const CiSet& ci, double theta, const FreqWaveform* init) {
  require_valid(cfg);
  const SystemConfig& sys = cfg.system;
  const GridDims d = sys.dims();
  const CVec a = steering(theta, sys.n_tx, sys.tx_spacing_wavelengths);
  const double r0 = sys.modulus();
  const double rho = sys.admm_penalty;
  const double inner_tol = cfg.solver.inner_tol > 0.0 ? cfg.solver.inner_tol : sys.conv_tol;

  DesignResult res;
  res.x = init ? *init : design_comm_only(sys, cfg.solver, ci);
  auto& trace = res.trace;

  XUpdateOptions xo;
  xo.tol = cfg.solver.x_update_tol;
  xo.max_iters = cfg.solver.x_update_max_iters;
  XUpdateSolver xsolver(ci, a, r0, sys.illum_cap(), xo);
  {
    // An empty constraint set is reported before any outer work.
    XUpdateProblem p{CVec::Zero(d.total()), rho, &ci, sys.illum_cap(), r0, a};
    const auto feas = feasibility_phase(p, res.x.data);
    if (!feas.feasible)
      throw Error(ErrorCode::infeasible, "CI, modulus and illumination constraints have no common point");
  }

  MmAdmmState st;
  st.rho = rho;
  trace.status = DesignStatus::outer_cap;
  CVec xt, tmp, mvec;
  // Iteration 0 maps the starting point, which need not be constant modulus, onto the feasible
  // set; the monotone history starts from that first feasible iterate. A start that is already
  // feasible and constant modulus is itself the first iterate.
  int first_outer = 0;
  if (init && feasible_constant_modulus(res.x, ci, a, sys)) {
    TraceRow row = make_row(0, res.x, a, &ci);
    trace.rows.push_back(row);
    st.isl_history.push_back(row.isl);
    if (flat(row)) {
      trace.status = DesignStatus::converged;
      return res;
    }
    first_outer = 1;
  }
  for (int outer = first_outer; outer <= cfg.solver.outer_max_iters; ++outer) {
    const SurrogateState S = build_surrogate(res.x, a);
    const CVec g = normalized_gradient(S);
    if (g.norm() == 0.0) {
      trace.status = DesignStatus::stationary;
      break;
    }
    st.outer_iter = outer;
    st.x = res.x.data;
    to_time(d, st.x, st.z);
    st.lam = CVec::Zero(d.total());
    st.mu = RVec::Zero(d.total());
    double p1 = 0.0, p2 = 0.0;
    int inner = 0;
    bool inner_ok = false;
    for (inner = 1; inner <= cfg.solver.inner_max_iters; ++inner) {
      tmp = st.lam - rho * st.z;
      to_freq(d, tmp, mvec);
      mvec += g;
      const SolveReport rep = xsolver.solve(mvec, rho, st.x);
      trace.x_update_iterations += rep.iterations;
      if (rep.status == SolveStatus::max_iters) ++trace.x_update_cap_hits;
      to_time(d, st.x, xt);
      const CVec v = xt + st.lam / rho;
      const RVec r = (RVec::Constant(d.total(), r0) - st.mu / rho);
      st.z = z_update(v, r);
      dual_update(st, xt, r0);
      p1 = (xt - st.z).squaredNorm();
      p2 = (st.z.cwiseAbs().array() - r0).matrix().squaredNorm();
      if (p1 <= inner_tol && p2 <= inner_tol) {
        inner_ok = true;
        break;
      }
    }
    if (!inner_ok) {
      ++trace.inner_cap_hits;
      inner = cfg.solver.inner_max_iters;
    }
    st.inner_iter = inner;
    FreqWaveform cand = to_constant_modulus(FreqWaveform(d, st.x), r0);
    TraceRow row = make_row(outer, cand, a, &ci);
    row.inner_iters = inner;
    row.primal_residual = p1;
    row.dual_residual = p2;
    if (outer == 0) {
      res.x = std::move(cand);
      trace.rows.push_back(row);
      st.isl_history.push_back(row.isl);
      if (flat(row)) {
        trace.status = DesignStatus::converged;
        break;
      }
      continue;
    }
    const double prev = st.isl_history.back();
    if (!accept(row.isl, prev)) {
      trace.status = DesignStatus::rejected;
      break;
    }
    res.x = std::move(cand);
    trace.rows.push_back(row);
    st.isl_history.push_back(row.isl);
    if (flat(row) || std::abs(row.isl - prev) / prev <= sys.conv_tol) {
      trace.status = DesignStatus::converged;
      break;
    }
  }
  return res;
}

DesignResult design_slp_waveform(const LabConfig& cfg, const ChannelSet& channels, const SymbolGrid& symbols,
                                 double theta) {
  const CiSet ci = build_ci(channels, symbols, cfg.system);
  return design_slp_waveform(cfg, ci, theta, nullptr);
}

DesignResult design_radar_only(const LabConfig& cfg, double theta, const FreqWaveform& init) {
  const SystemConfig& sys = cfg.system;
  const GridDims d = sys.dims();
  const CVec a = steering(theta, sys.n_tx, sys.tx_spacing_wavelengths);
  const double r0 = sys.modulus();
  DesignResult res;
  res.x = to_constant_modulus(init, r0);
  auto& trace = res.trace;
  trace.rows.push_back(make_row(0, res.x, a, nullptr));
  trace.status = DesignStatus::outer_cap;
  if (flat(trace.rows.back())) {
    trace.status = DesignStatus::converged;
    return res;
  }
  CVec w;
  for (int it = 1; it <= cfg.solver.radar_only_max_iters; ++it) {
    const SurrogateState S = build_surrogate(res.x, a);
    const CVec g = surrogate_gradient(S);
    // argmin over the constant-modulus set of ‖F̃^H(x + g)‖² is r e^{j∠(−F̃^H g)} per sample.
    to_time(d, g, w);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double m = std::abs(w[i]);
      w[i] = m > 0.0 ? -r0 * (w[i] / m) : cd(r0, 0.0);
    }
    FreqWaveform cand(d);
    to_freq(d, w, cand.data);
    TraceRow row = make_row(it, cand, a, nullptr);
    const double prev = trace.rows.back().isl;
    if (!accept(row.isl, prev)) {
      trace.status = DesignStatus::rejected;
      break;
    }
    res.x = std::move(cand);
    trace.rows.push_back(row);
    if (flat(row) || std::abs(row.isl - prev) / prev <= sys.conv_tol) {
      trace.status = DesignStatus::converged;
      break;
    }
  }
  return res;
}

}  // namespace isac
