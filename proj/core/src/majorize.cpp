#include "isac/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isac/power_iteration.hpp"
#include "isac/transforms.hpp"

namespace isac {

double b_diag_entry(std::int64_t j, int nc, int ns) {
  const std::int64_t n = j % nc;
  const std::int64_t mp = (j / nc) % ns;
  const std::int64_t np = (j / (std::int64_t(ns) * nc)) % nc;
  const std::int64_t m = (j / (std::int64_t(ns) * nc * nc)) % ns;
  return (n == np && m == mp) ? double(ns) * nc - 1.0 : -1.0;
}

double lambda_Gt(const CVec& u, const CVec& x, int nt) {
  const double uu = u.squaredNorm();
  const double xx = x.squaredNorm();
  const double ux2 = std::norm(u.dot(x));
  const double nt2 = double(nt) * nt;
  const double tr = 2.0 * (uu - nt2 * xx);
  const double gram_det = std::max(uu * xx - ux2, 0.0);
  const double det = -4.0 * nt2 * gram_det;
  const double top = 0.5 * (tr + std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
  // G_t has rank ≤ 2, so 0 is an eigenvalue whenever the space is larger than its range.
  const int rank = (gram_det > 0.0) ? 2 : ((uu > 0.0 || xx > 0.0) ? 1 : 0);
  return u.size() > rank ? std::max(top, 0.0) : top;
}

namespace {

/// 1 + Σ d_i / (μ − d_i) for Diag(d) − y y^H with d_i = |y_i|²; decreasing on (d_(2), d_(1)).
double secular(const RVec& d, double mu) {
  double s = 1.0;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d[i] > 0.0) s += d[i] / (mu - d[i]);
  return s;
}

/// Smallest certified upper bound on λ_max(Diag(d) − y y^H), starting from a lower estimate.
double certify_top(const RVec& d, double estimate) {
  double d1 = 0.0, d2 = 0.0;
  int count_top = 0;
  int nonzero = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] > 0.0) ++nonzero;
    if (d[i] > d1) {
      d2 = d1;
      d1 = d[i];
      count_top = 1;
    } else if (d[i] == d1) {
      ++count_top;
    } else if (d[i] > d2) {
      d2 = d[i];
    }
  }
  // A single nonzero entry leaves the zero matrix on its support.
  if (nonzero <= 1) return 0.0;
  if (count_top > 1) return d1;
  // The top eigenvalue is the unique root in (d2, d1): above it the secular function is negative.
  double lo = d2;
  double hi = d1;
  if (estimate > lo && estimate < hi && secular(d, estimate) > 0.0) lo = estimate;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * d1; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (secular(d, mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace

double lambda_max_Mtilde(const CVec& y, int nc, int ns, int* iterations) {
  const double scale = 2.0 * double(nc) * ns;
  const RVec d = y.cwiseAbs2();
  const double ynorm2 = d.sum();
  if (ynorm2 == 0.0) {
    if (iterations) *iterations = 0;
    return 0.0;
  }
  // Diag(d) − y y^H ⪰ −‖y‖² I, so this shift makes the operator positive semidefinite.
  PowerIterationOptions opts;
  opts.shift = ynorm2;
  opts.strict = false;
  auto op = [&](const CVec& w) -> CVec { return (d.cast<cd>().array() * w.array()).matrix() - y * y.dot(w); };
  // Start on the largest-|y| coordinate where the top eigenvector concentrates.
  CVec start = CVec::Constant(y.size(), cd(1e-3, 0.0));
  Eigen::Index imax;
  d.maxCoeff(&imax);
  start[imax] = 1.0;
  const auto pi = power_iteration(op, y.size(), opts, start);
  if (iterations) *iterations = pi.iterations;
  return scale * certify_top(d, pi.value);
}

SurrogateState build_surrogate(const FreqWaveform& x, const CVec& a) {
  SurrogateState s;
  s.dims = x.dims;
  s.a = a;
  s.x = x.data;
  s.y = beamform(x.dims, x.data, a);
  s.u = spread(x.dims, s.y, a);
  const int nt = x.dims.n_tx;
  s.lambda_B = double(x.dims.n_sc) * x.dims.n_sym - 1.0;
  s.lambda_C = double(nt) * nt;
  s.lambda_Gt = lambda_Gt(s.u, s.x, nt);
  s.lambda_Mtilde = lambda_max_Mtilde(s.y, x.dims.n_sc, x.dims.n_sym, &s.power_iterations);
  s.lambda_Mt = nt * s.lambda_Mtilde;
  return s;
}

CVec apply_Gt(const SurrogateState& s, const CVec& v) {
  const double nt2 = double(s.dims.n_tx) * s.dims.n_tx;
  return 2.0 * (s.u * s.u.dot(v) - nt2 * s.x * s.x.dot(v));
}

CVec apply_Mtilde(const SurrogateState& s, const CVec& w) {
  const double scale = 2.0 * double(s.dims.n_sc) * s.dims.n_sym;
  return scale * ((s.y.cwiseAbs2().cast<cd>().array() * w.array()).matrix() - s.y * s.y.dot(w));
}

CVec apply_Mt(const SurrogateState& s, const CVec& v) {
  return spread(s.dims, apply_Mtilde(s, beamform(s.dims, v, s.a)), s.a);
}

CVec surrogate_gradient(const SurrogateState& s) {
  return 2.0 * s.lambda_B * (apply_Gt(s, s.x) - s.lambda_Gt * s.x) + 2.0 * (apply_Mt(s, s.x) - s.lambda_Mt * s.x);
}

}  // namespace isac
