#include "isac/convex_sub.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isac/error.hpp"
#include "isac/transforms.hpp"

namespace isac {

namespace {

/// Cyclic Dykstra on one cell. rows[r] points at an N_t vector; P holds the per-row increments.
void dykstra_cell(int nt, int R, const CVec* const* rows, const double* gamma, const double* nsq, const cd* v,
                  cd* out, CMat& P, double tol, int max_sweeps) {
  Eigen::Map<const CVec> vin(v, nt);
  Eigen::Map<CVec> y(out, nt);
  y = vin;
  // Fast exit when v already satisfies every row.
  bool feasible = true;
  double offset = 0.0;
  for (int r = 0; r < R; ++r) {
    if (nsq[r] <= 0.0) continue;
    if (rows[r]->dot(vin).real() < gamma[r]) feasible = false;
    offset = std::max(offset, std::abs(gamma[r]) / std::sqrt(nsq[r]));
  }
  if (feasible) return;
  const double scale = vin.norm() + offset;
  P.setZero(nt, R);
  CVec t(nt);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int r = 0; r < R; ++r) {
      if (nsq[r] <= 0.0) continue;
      t = y + P.col(r);
      const double viol = gamma[r] - rows[r]->dot(t).real();
      if (viol > 0.0) {
        const CVec ynew = t + (viol / nsq[r]) * (*rows[r]);
        P.col(r) = t - ynew;
        change += (ynew - y).squaredNorm();
        y = ynew;
      } else {
        P.col(r).setZero();
        change += (t - y).squaredNorm();
        y = t;
      }
    }
    if (std::sqrt(change) <= tol * scale) break;
  }
}

void project_ci_levels(const CVec& x, const CiSet& ci, const double* gamma, CVec& out, double tol) {
  const int nt = ci.dims.n_tx;
  const int R = ci.rows_per_cell();
  out.resize(x.size());
  CMat P(nt, R);
  std::vector<const CVec*> rows(std::size_t(R), nullptr);
  for (Eigen::Index c = 0; c < ci.dims.cells(); ++c) {
    for (int r = 0; r < R; ++r) rows[std::size_t(r)] = &ci.row(c, r);
    dykstra_cell(nt, R, rows.data(), gamma, &ci.norm_sq[std::size_t(c) * R], x.data() + c * nt,
                 out.data() + c * nt, P, tol, 100000);
  }
}

}  // namespace

CVec project_halfspaces(const CVec& v, const std::vector<CVec>& normals, const std::vector<double>& gamma,
                        double tol, int max_sweeps) {
  const int R = int(normals.size());
  std::vector<const CVec*> rows;
  std::vector<double> nsq;
  for (const auto& h : normals) {
    rows.push_back(&h);
    nsq.push_back(h.squaredNorm());
  }
  CVec out(v.size());
  CMat P(v.size(), R);
  dykstra_cell(int(v.size()), R, rows.data(), gamma.data(), nsq.data(), v.data(), out.data(), P, tol, max_sweeps);
  return out;
}

void project_ci(const CVec& x, const CiSet& ci, CVec& out, double tol) {
  project_ci_levels(x, ci, ci.gamma.data(), out, tol);
}

CVec project_ci(const CVec& x, const CiSet& ci, double tol) {
  CVec out;
  project_ci(x, ci, out, tol);
  return out;
}

CVec project_modulus_caps(const CVec& w, double cap) {
  CVec out = w;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double m = std::abs(out[i]);
    if (m > cap) out[i] *= cap / m;
  }
  return out;
}

CVec project_illumination(const GridDims& d, const CVec& w, const CVec& a, double cap, double* mu) {
  const int nt = d.n_tx;
  const double a2 = a.squaredNorm();
  CVec par(w.size());
  double q = 0.0;
  for (Eigen::Index c = 0; c < d.cells(); ++c) {
    const auto blk = w.segment(c * nt, nt);
    par.segment(c * nt, nt) = a * (a.dot(blk) / a2);
    q += double(nt) * (blk - par.segment(c * nt, nt)).squaredNorm();
  }
  if (mu) *mu = 0.0;
  if (q <= cap) return w;
  // Orthogonal parts shrink by s = 1/(1 + μ N_t) with N_t ‖s P⊥w‖² = cap.
  const double s = cap > 0.0 ? std::sqrt(cap / q) : 0.0;
  if (mu) *mu = s > 0.0 ? (1.0 / s - 1.0) / nt : std::numeric_limits<double>::infinity();
  return par + s * (w - par);
}

double x_update_objective(const XUpdateProblem& p, const CVec& x) {
  return p.m.dot(x).real() + 0.5 * p.rho * x.squaredNorm();
}

void fill_violations(const XUpdateProblem& p, const CVec& x, SolveReport& r) {
  const GridDims& d = p.ci->dims;
  r.ci_violation = std::max(0.0, -ci_margin(x, *p.ci));
  CVec w;
  to_time(d, x, w);
  r.cap_violation = std::max(0.0, w.cwiseAbs().maxCoeff() - p.modulus_cap);
  r.illum_violation = std::max(0.0, illum_quadratic(d, w, p.a) - p.illum_cap);
  r.objective = x_update_objective(p, x);
}

XUpdateSolver::XUpdateSolver(const CiSet& ci, CVec a, double modulus_cap, double illum_cap, XUpdateOptions opts)
    : ci_(&ci), a_(std::move(a)), cap_(modulus_cap), illum_cap_(illum_cap), opts_(opts), dims_(ci.dims) {}

void XUpdateSolver::reset() { warm_ = false; }

SolveReport XUpdateSolver::solve(const CVec& m, double rho, CVec& x) {
  const Eigen::Index N = dims_.total();
  const CVec c = -m / rho;
  if (!warm_) {
    x_ = c;
    y1_ = x_;
    u1_ = CVec::Zero(N);
    to_time(dims_, x_, y2_);
    y3_ = y2_;
    u2_ = CVec::Zero(N);
    u3_ = CVec::Zero(N);
    sigma_ = opts_.sigma * rho;
    warm_ = true;
  }
  const double thresh = opts_.tol * std::sqrt(double(N));
  SolveReport rep;
  rep.status = SolveStatus::max_iters;
  CVec tsum(N), tf(N), xt(N), y1o, y2o, y3o;
  for (int it = 1; it <= opts_.max_iters; ++it) {
    tsum = (y2_ - u2_) + (y3_ - u3_);
    to_freq(dims_, tsum, tf);
    x_ = (rho * c + sigma_ * (y1_ - u1_) + sigma_ * tf) / (rho + 3.0 * sigma_);
    to_time(dims_, x_, xt);
    y1o.swap(y1_);
    y2o.swap(y2_);
    y3o.swap(y3_);
    project_ci(x_ + u1_, *ci_, y1_);
    y2_ = project_modulus_caps(xt + u2_, cap_);
    y3_ = project_illumination(dims_, xt + u3_, a_, illum_cap_);
    u1_ += x_ - y1_;
    u2_ += xt - y2_;
    u3_ += xt - y3_;
    const double r = std::sqrt((x_ - y1_).squaredNorm() + (xt - y2_).squaredNorm() + (xt - y3_).squaredNorm());
    const double s =
        sigma_ * std::sqrt((y1_ - y1o).squaredNorm() + (y2_ - y2o).squaredNorm() + (y3_ - y3o).squaredNorm());
    rep.iterations = it;
    rep.primal_residual = r;
    rep.dual_residual = s;
    if (r <= thresh && s <= thresh) {
      rep.status = SolveStatus::converged;
      break;
    }
    if (opts_.balance && it % 10 == 0) {
      if (r > 10.0 * s) {
        sigma_ *= 2.0;
        u1_ /= 2.0;
        u2_ /= 2.0;
        u3_ /= 2.0;
      } else if (s > 10.0 * r) {
        sigma_ /= 2.0;
        u1_ *= 2.0;
        u2_ *= 2.0;
        u3_ *= 2.0;
      }
    }
  }
  x = x_;
  rep.kkt_residual = std::max(rep.primal_residual, rep.dual_residual);
  XUpdateProblem p{m, rho, ci_, illum_cap_, cap_, a_};
  fill_violations(p, x, rep);
  return rep;
}

std::pair<CVec, SolveReport> solve_x_update(const XUpdateProblem& p, const XUpdateOptions& opts) {
  if (!p.ci) throw Error(ErrorCode::bad_parameter, "x-update needs a CI set");
  if (!(p.rho > 0.0)) throw Error(ErrorCode::bad_parameter, "rho must be > 0");
  XUpdateSolver solver(*p.ci, p.a, p.modulus_cap, p.illum_cap, opts);
  CVec x;
  SolveReport rep = solver.solve(p.m, p.rho, x);
  if (rep.status == SolveStatus::max_iters) {
    const auto feas = feasibility_phase(p, -p.m / p.rho);
    if (!feas.feasible)
      throw Error(ErrorCode::infeasible, "constraint set appears empty (violation " +
                                             std::to_string(feas.max_violation) + ")");
  }
  return {x, rep};
}

namespace {

double normalized_ci_violation(const CVec& x, const CiSet& ci, const double* gamma, double unit) {
  const RVec v = ci_values(x, ci);
  const int R = ci.rows_per_cell();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double n = std::sqrt(ci.norm_sq[std::size_t(i)]);
    const double short_by = gamma[i % R] - v[i];
    if (short_by > 0.0) worst = std::max(worst, n > 0.0 ? short_by / n / unit : std::numeric_limits<double>::infinity());
  }
  return worst;
}

}  // namespace

FeasibilityReport feasibility_phase(const XUpdateProblem& p, const CVec& start, int max_sweeps) {
  const GridDims& d = p.ci->dims;
  const double unit = p.modulus_cap > 0.0 ? p.modulus_cap : 1.0;
  const double illum_unit = std::max(double(d.n_tx) * d.total() * unit * unit, 1e-300);
  FeasibilityReport rep;
  CVec x = start, y, w;
  double window_start = std::numeric_limits<double>::infinity();
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    project_ci(x, *p.ci, y);
    to_time(d, y, w);
    w = project_illumination(d, project_modulus_caps(w, p.modulus_cap), p.a, p.illum_cap);
    to_freq(d, w, x);
    to_time(d, x, w);
    const double v_ci = normalized_ci_violation(x, *p.ci, p.ci->gamma.data(), unit);
    const double v_cap = std::max(0.0, w.cwiseAbs().maxCoeff() - p.modulus_cap) / unit;
    const double v_il = std::max(0.0, illum_quadratic(d, w, p.a) - p.illum_cap) / illum_unit;
    rep.max_violation = std::max({v_ci, v_cap, v_il});
    rep.sweeps = sweep;
    if (rep.max_violation < 1e-6) {
      rep.feasible = true;
      break;
    }
    if (sweep % 100 == 0) {
      if (rep.max_violation > (1.0 - 1e-3) * window_start) break;
      window_start = rep.max_violation;
    }
  }
  rep.point = x;
  return rep;
}

MaxMinResult solve_maxmin_init(const CiSet& ci, double cap, const MaxMinOptions& opts) {
  const GridDims& d = ci.dims;
  MaxMinResult res;
  res.x = FreqWaveform(d);
  if (cap <= 0.0) return res;
  const int R = ci.rows_per_cell();
  double hmin = std::numeric_limits<double>::infinity();
  for (double n2 : ci.norm_sq) hmin = std::min(hmin, std::sqrt(n2));
  double lo = 0.0;
  double hi = hmin * std::sqrt(double(d.n_sc) * d.n_tx) * cap;
  CVec feasible_x = CVec::Zero(d.total());
  std::vector<double> level(static_cast<std::size_t>(R));
  CVec y, w, x;
  for (int step = 0; step < opts.bisection_steps && hi - lo > 1e-12 * hi; ++step) {
    const double t = 0.5 * (lo + hi);
    std::fill(level.begin(), level.end(), t);
    x = feasible_x;
    bool ok = false;
    double window_start = std::numeric_limits<double>::infinity();
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
      project_ci_levels(x, ci, level.data(), y, 1e-10);
      to_time(d, y, w);
      w = project_modulus_caps(w, cap);
      to_freq(d, w, x);
      ++res.sweeps;
      const double viol = normalized_ci_violation(x, ci, level.data(), cap);
      if (viol < opts.violation_tol) {
        ok = true;
        break;
      }
      if (sweep % 100 == 0) {
        if (viol > (1.0 - 1e-3) * window_start) break;
        window_start = viol;
      }
    }
    ++res.steps;
    if (ok) {
      lo = t;
      feasible_x = x;
    } else {
      hi = t;
    }
  }
  // Exact cap feasibility, then report the level actually achieved.
  to_time(d, feasible_x, w);
  to_freq(d, project_modulus_caps(w, cap), res.x.data);
  const RVec v = ci_values(res.x.data, ci);
  res.t = v.size() ? v.minCoeff() : 0.0;
  return res;
}

}  // namespace isac
