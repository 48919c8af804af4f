#include "isac/power_iteration.hpp"

#include <cmath>

#include "isac/error.hpp"

namespace isac {

PowerIterationResult power_iteration(const std::function<CVec(const CVec&)>& op, Eigen::Index n,
                                     const PowerIterationOptions& opts, const CVec& start) {
  PowerIterationResult res;
  CVec v = start.size() == n ? start : CVec(CVec::Ones(n));
  double nv = v.norm();
  if (nv == 0.0) {
    v = CVec::Ones(n);
    nv = v.norm();
  }
  v /= nv;
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    CVec w = op(v);
    const double rq = v.dot(w).real();
    w += opts.shift * v;
    const double nw = w.norm();
    res.iterations = it;
    res.value = rq;
    res.vector = v;
    if (nw == 0.0) {
      res.converged = true;
      break;
    }
    v = w / nw;
    if (it > 1 && std::abs(rq - prev) <= opts.tol * std::max(std::abs(rq) + opts.shift, 1e-300)) {
      res.converged = true;
      res.vector = v;
      res.value = v.dot(op(v)).real();
      break;
    }
    prev = rq;
  }
  if (!res.converged && opts.strict)
    throw Error(ErrorCode::power_iteration_no_converge,
                "no convergence after " + std::to_string(opts.max_iters) + " iterations");
  return res;
}

}  // namespace isac
