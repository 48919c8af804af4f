#include "isac/ci.hpp"

#include <cmath>
#include <limits>

#include "isac/parallel.hpp"
#include "isac/rng.hpp"

namespace isac {

CiSet build_ci(const ChannelSet& ch, const SymbolGrid& sym, const SystemConfig& cfg) {
  CiSet ci;
  ci.dims = cfg.dims();
  ci.n_users = cfg.n_users;
  ci.phi = kPi / cfg.psk_order;
  double sp = std::sin(ci.phi);
  double cp = std::cos(ci.phi);
  if (cfg.psk_order == 2) {
    sp = 1.0;
    cp = 0.0;
  }
  const double sigma_c = std::sqrt(cfg.comm_noise_w);
  for (int k = 0; k < cfg.n_users; ++k) {
    const double g = sigma_c * std::sqrt(cfg.qos(k)) * sp;
    ci.gamma.push_back(g);
    ci.gamma.push_back(g);
  }
  const cd minus(sp, -cp);
  const cd plus(sp, cp);
  for (int m = 0; m < ci.dims.n_sym; ++m)
    for (int n = 0; n < ci.dims.n_sc; ++n)
      for (int k = 0; k < cfg.n_users; ++k) {
        const CVec hs = ch.at(n, k) * sym.at(n, m, k);
        ci.rotated.push_back(hs * minus);
        ci.rotated.push_back(hs * plus);
      }
  for (const auto& r : ci.rotated) ci.norm_sq.push_back(r.squaredNorm());
  return ci;
}

RVec ci_values(const CVec& x, const CiSet& ci) {
  const int R = ci.rows_per_cell();
  const int nt = ci.dims.n_tx;
  RVec v(ci.dims.cells() * R);
  for (Eigen::Index c = 0; c < ci.dims.cells(); ++c)
    for (int r = 0; r < R; ++r) v[c * R + r] = ci.row(c, r).dot(x.segment(c * nt, nt)).real();
  return v;
}

double ci_margin(const CVec& x, const CiSet& ci) {
  const RVec v = ci_values(x, ci);
  const int R = ci.rows_per_cell();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::min(best, v[i] - ci.gamma[std::size_t(i % R)]);
  return best;
}

std::vector<double> ci_margin_per_user(const CVec& x, const CiSet& ci) {
  const RVec v = ci_values(x, ci);
  const int R = ci.rows_per_cell();
  std::vector<double> out(std::size_t(ci.n_users), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int kp = int(i % R);
    auto& slot = out[std::size_t(kp / 2)];
    slot = std::min(slot, v[i] - ci.gamma[std::size_t(kp)]);
  }
  return out;
}

double ci_margin_normalized(const CVec& x, const CiSet& ci) {
  const RVec v = ci_values(x, ci);
  const int R = ci.rows_per_cell();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double n = std::sqrt(ci.norm_sq[std::size_t(i)]);
    if (n > 0.0) best = std::min(best, (v[i] - ci.gamma[std::size_t(i % R)]) / n);
  }
  return best;
}

std::vector<double> ser_simulate(const CVec& x, const ChannelSet& ch, const SymbolGrid& sym,
                                 const SystemConfig& cfg, int trials, std::uint64_t seed, int threads) {
  const GridDims d = cfg.dims();
  const int K = cfg.n_users;
  const int omega = cfg.psk_order;
  // Noise-free received points are fixed across trials.
  std::vector<cd> clean(std::size_t(d.cells()) * K);
  for (int m = 0; m < d.n_sym; ++m)
    for (int n = 0; n < d.n_sc; ++n)
      for (int k = 0; k < K; ++k)
        clean[std::size_t(d.cell(n, m)) * K + k] = ch.at(n, k).dot(x.segment(d.offset(n, m), d.n_tx));
  std::vector<std::vector<long>> errors(std::size_t(trials), std::vector<long>(std::size_t(K), 0));
  parallel_for(trials, threads, [&](int t) {
    Philox rng(seed, Stream::trial, std::uint64_t(t));
    auto& err = errors[std::size_t(t)];
    for (int m = 0; m < d.n_sym; ++m)
      for (int n = 0; n < d.n_sc; ++n)
        for (int k = 0; k < K; ++k) {
          const cd r = clean[std::size_t(d.cell(n, m)) * K + k] + rng.complex_normal(cfg.comm_noise_w);
          double ang = std::arg(r);
          if (ang < 0) ang += 2.0 * kPi;
          int decided = int(std::floor(ang * omega / (2.0 * kPi)));
          if (decided >= omega) decided = omega - 1;
          if (decided != sym.index[std::size_t(d.cell(n, m)) * K + k]) ++err[std::size_t(k)];
        }
  });
  std::vector<double> ser(std::size_t(K), 0.0);
  const double per_user = double(trials) * double(d.cells());
  for (int k = 0; k < K; ++k) {
    long total = 0;
    for (const auto& e : errors) total += e[std::size_t(k)];
    ser[std::size_t(k)] = double(total) / per_user;
  }
  return ser;
}

double ser_bound(double qos_linear, int psk_order) {
  const double s = psk_order == 2 ? 1.0 : std::sin(kPi / psk_order);
  const double arg = std::sqrt(2.0 * qos_linear) * s;
  const double q = 0.5 * std::erfc(arg / std::sqrt(2.0));
  return psk_order == 2 ? q : 2.0 * q;
}

}  // namespace isac
