#include "isac/detection.hpp"

#include <algorithm>
#include <cmath>

#include "isac/error.hpp"
#include "isac/model.hpp"
#include "isac/parallel.hpp"
#include "isac/transforms.hpp"

namespace isac {

TwoTargetScene two_target_scene(const LabConfig& cfg) {
  if (cfg.scene.targets.size() < 2)
    throw Error(ErrorCode::bad_parameter, "two-target experiments need two [target] blocks");
  if (auto e = validate_scene(cfg.scene, cfg.system)) throw Error(e->code, e->message);
  const auto& s = cfg.scene.targets[0];
  const auto& w = cfg.scene.targets[1];
  return {cfg.scene.azimuth_rad(), cfg.system.tx_spacing_wavelengths,
          {target_gain(s, cfg.system), s.range_bin, s.doppler_bin},
          {target_gain(w, cfg.system), w.range_bin, w.doppler_bin}};
}

std::pair<double, double> wilson_interval(long k, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = double(k) / n;
  const double z2 = z * z;
  const double den = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * double(n))) / den;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double noise_for_snr(const CMat& xbar, double weak_gain_abs, double snr_db) {
  const double echo = weak_gain_abs * weak_gain_abs * xbar.cwiseAbs2().mean();
  return echo / db_to_linear(snr_db);
}

namespace {

cd unit_phase(Philox& rng) {
  const double ph = 2.0 * kPi * rng.uniform();
  return {std::cos(ph), std::sin(ph)};
}

CMat unit_noise(int nc, int ns, Philox& rng) {
  CMat n(nc, ns);
  for (int j = 0; j < ns; ++j)
    for (int i = 0; i < nc; ++i) n(i, j) = rng.complex_normal(1.0);
  return n;
}

CMat rdmap(const DesignUnderTest& d, const CMat& y, const CMat& xbar, double floor) {
  return d.filter == RxFilter::matched ? matched_rdmap(y, xbar) : reciprocal_rdmap(y, xbar, floor);
}

double statistic(const CMat& chi, int l, int nu, Detector det) {
  if (det == Detector::clairvoyant_cell) return std::abs(chi(l, nu));
  const int nc = int(chi.rows());
  double train = 0.0;
  int count = 0;
  for (int off = 3; off <= 6; ++off) {
    train += std::norm(chi((l + off) % nc, nu)) + std::norm(chi(((l - off) % nc + nc) % nc, nu));
    count += 2;
  }
  const double mean = train / count;
  return mean > 0.0 ? std::norm(chi(l, nu)) / mean : 0.0;
}

}  // namespace

std::vector<RocCurve> detect_roc(const std::vector<DesignUnderTest>& designs, const TwoTargetScene& scene,
                                 double snr_db, const std::vector<double>& pfa_grid, const MonteCarloOptions& opts) {
  if (opts.trials < 100) throw Error(ErrorCode::bad_parameter, "ROC needs at least 100 trials");
  std::vector<RocCurve> out;
  for (const auto& d : designs) {
    const int nc = d.x.dims.n_sc;
    const int ns = d.x.dims.n_sym;
    const CVec a = steering(scene.theta_rad, d.x.dims.n_tx, scene.spacing_wavelengths);
    const CMat xbar = beamformed_grid(d.x, a);
    const double sigma = std::sqrt(noise_for_snr(xbar, std::abs(scene.weak.gain), snr_db));
    std::vector<double> h0(std::size_t(opts.trials)), h1(std::size_t(opts.trials));
    parallel_for(opts.trials, opts.threads, [&](int t) {
      Philox ph(opts.seed, Stream::phase, std::uint64_t(t));
      const cd ps = unit_phase(ph);
      const cd pw = unit_phase(ph);
      EchoComponent strong = scene.strong;
      strong.gain = std::abs(strong.gain) * ps;
      EchoComponent weak = scene.weak;
      weak.gain = std::abs(weak.gain) * pw;
      Philox n0(opts.seed, Stream::noise, 2 * std::uint64_t(t));
      Philox n1(opts.seed, Stream::noise, 2 * std::uint64_t(t) + 1);
      const CMat y0 = echo_signal(xbar, {strong}) + sigma * unit_noise(nc, ns, n0);
      const CMat y1 = echo_signal(xbar, {strong, weak}) + sigma * unit_noise(nc, ns, n1);
      h0[std::size_t(t)] = statistic(rdmap(d, y0, xbar, opts.reciprocal_floor), weak.range_bin, weak.doppler_bin,
                                     opts.detector);
      h1[std::size_t(t)] = statistic(rdmap(d, y1, xbar, opts.reciprocal_floor), weak.range_bin, weak.doppler_bin,
                                     opts.detector);
    });
    std::vector<double> sorted = h0;
    std::sort(sorted.begin(), sorted.end());
    RocCurve curve{d.name, {}};
    const long n = opts.trials;
    for (double pfa : pfa_grid) {
      // Smallest threshold whose empirical exceedance fraction does not exceed pfa.
      long allowed = long(std::floor(pfa * n));
      allowed = std::clamp(allowed, 0L, n - 1);
      const double thr = sorted[std::size_t(n - 1 - allowed)];
      const long fa = long(std::count_if(h0.begin(), h0.end(), [&](double v) { return v > thr; }));
      const long det = long(std::count_if(h1.begin(), h1.end(), [&](double v) { return v > thr; }));
      RocPoint p;
      p.pfa_nominal = pfa;
      p.threshold = thr;
      p.pfa = double(fa) / n;
      std::tie(p.pfa_lo, p.pfa_hi) = wilson_interval(fa, n);
      p.pd = double(det) / n;
      std::tie(p.pd_lo, p.pd_hi) = wilson_interval(det, n);
      curve.points.push_back(p);
    }
    out.push_back(std::move(curve));
  }
  return out;
}

namespace {

int circular_diff(int est, int truth, int n) {
  int d = ((est - truth) % n + n) % n;
  if (d > n / 2) d -= n;
  return d;
}

void rms_bounds(const std::vector<double>& sq, double& rms, double& lo, double& hi) {
  const double n = double(sq.size());
  double mean = 0.0;
  for (double v : sq) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  var = n > 1 ? var / (n - 1) : 0.0;
  const double half = 1.959963984540054 * std::sqrt(var / n);
  rms = std::sqrt(mean);
  lo = std::sqrt(std::max(0.0, mean - half));
  hi = std::sqrt(mean + half);
}

}  // namespace

std::vector<RmseCurve> rmse_curve(const std::vector<DesignUnderTest>& designs, const TwoTargetScene& scene,
                                  const SystemConfig& cfg, const std::vector<double>& snr_grid_db,
                                  const MonteCarloOptions& opts) {
  const double dr = range_bin_m(cfg);
  const double dv = velocity_bin_mps(cfg);
  std::vector<RmseCurve> out;
  for (const auto& d : designs) {
    const int nc = d.x.dims.n_sc;
    const int ns = d.x.dims.n_sym;
    const CVec a = steering(scene.theta_rad, d.x.dims.n_tx, scene.spacing_wavelengths);
    const CMat xbar = beamformed_grid(d.x, a);
    RmseCurve curve{d.name, {}};
    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
      const double snr = snr_grid_db[si];
      const double sigma = std::sqrt(noise_for_snr(xbar, std::abs(scene.weak.gain), snr));
      std::vector<double> er(std::size_t(opts.trials)), ev(std::size_t(opts.trials));
      parallel_for(opts.trials, opts.threads, [&](int t) {
        Philox ph(opts.seed, Stream::phase, std::uint64_t(t));
        EchoComponent strong = scene.strong;
        strong.gain = std::abs(strong.gain) * unit_phase(ph);
        EchoComponent weak = scene.weak;
        weak.gain = std::abs(weak.gain) * unit_phase(ph);
        Philox nz(opts.seed, Stream::noise, std::uint64_t(t));
        CMat y = echo_signal(xbar, {strong, weak});
        if (std::isfinite(snr)) y += sigma * unit_noise(nc, ns, nz);
        const CMat chi = rdmap(d, y, xbar, opts.reciprocal_floor);
        SearchWindow w = full_window(chi);
        w.excluded.push_back({strong.range_bin, strong.doppler_bin});
        const auto [l, nu] = estimate_peak(chi, w);
        const double dl = circular_diff(l, weak.range_bin, nc);
        const double dn = circular_diff(nu, weak.doppler_bin, ns);
        er[std::size_t(t)] = dl * dl;
        ev[std::size_t(t)] = dn * dn;
      });
      RmsePoint p;
      p.snr_db = snr;
      double rr, rlo, rhi, vr, vlo, vhi;
      rms_bounds(er, rr, rlo, rhi);
      rms_bounds(ev, vr, vlo, vhi);
      p.range_rmse_bins = rr;
      p.velocity_rmse_bins = vr;
      p.range_rmse_m = rr * dr;
      p.range_lo_m = rlo * dr;
      p.range_hi_m = rhi * dr;
      p.velocity_rmse_mps = vr * dv;
      p.velocity_lo_mps = vlo * dv;
      p.velocity_hi_mps = vhi * dv;
      curve.points.push_back(p);
    }
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace isac
