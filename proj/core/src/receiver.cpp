#include "isac/receiver.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "isac/error.hpp"
#include "isac/model.hpp"
#include "isac/transforms.hpp"

namespace isac {

CMat beamformed_grid(const FreqWaveform& x, const CVec& a) {
  const CVec y = beamform(x.dims, x.data, a);
  return Eigen::Map<const CMat>(y.data(), x.dims.n_sc, x.dims.n_sym);
}

CMat echo_signal(const CMat& xbar, const std::vector<EchoComponent>& targets) {
  const int nc = int(xbar.rows());
  const int ns = int(xbar.cols());
  CMat y = CMat::Zero(nc, ns);
  for (const auto& t : targets) {
    for (int m = 0; m < ns; ++m)
      for (int n = 0; n < nc; ++n) {
        const double ph = -2.0 * kPi * double((std::int64_t(t.range_bin) * n) % nc) / nc +
                          2.0 * kPi * double((std::int64_t(t.doppler_bin) * m) % ns) / ns;
        y(n, m) += t.gain * xbar(n, m) * cd(std::cos(ph), std::sin(ph));
      }
  }
  return y;
}

void add_noise(CMat& y, double variance, Philox& rng) {
  if (variance <= 0.0) return;
  for (Eigen::Index j = 0; j < y.cols(); ++j)
    for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, j) += rng.complex_normal(variance);
}

CMat synth_echo(const FreqWaveform& x, const TargetScene& scene, const SystemConfig& cfg, std::uint64_t seed) {
  if (auto e = validate_scene(scene, cfg)) throw Error(e->code, e->message);
  const CVec a = steering(scene.azimuth_rad(), cfg.n_tx, cfg.tx_spacing_wavelengths);
  const CMat xbar = beamformed_grid(x, a);
  std::vector<EchoComponent> comps;
  for (const auto& t : scene.targets) comps.push_back({target_gain(t, cfg), t.range_bin, t.doppler_bin});
  CMat y = echo_signal(xbar, comps);
  Philox rng(seed, Stream::noise);
  add_noise(y, cfg.radar_noise_w / cfg.n_rx, rng);
  return y;
}

namespace {

CMat rd_transform(const CMat& z) {
  const int nc = int(z.rows());
  const int ns = int(z.cols());
  CMat tmp(nc, ns), out(nc, ns);
  detail::dft(z.data(), tmp.data(), {nc, 1, ns, nc, 1, 0}, +1);
  detail::dft(tmp.data(), out.data(), {ns, nc, nc, 1, 1, 0}, -1);
  out *= 1.0 / std::sqrt(double(nc) * ns);
  return out;
}

void check_dims(const CMat& y, const CMat& xbar) {
  if (y.rows() != xbar.rows() || y.cols() != xbar.cols())
    throw Error(ErrorCode::bad_dimension, "echo and reference grids differ in size");
}

}  // namespace

CMat matched_rdmap(const CMat& y, const CMat& xbar) {
  check_dims(y, xbar);
  return rd_transform(y.cwiseProduct(xbar.conjugate()));
}

CMat reciprocal_rdmap(const CMat& y, const CMat& xbar, double floor) {
  check_dims(y, xbar);
  const double guard = floor * xbar.cwiseAbs().maxCoeff();
  CMat z(y.rows(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j)
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      cd ref = xbar(i, j);
      const double m = std::abs(ref);
      if (m < guard) ref = m > 0.0 ? ref * (guard / m) : cd(guard, 0.0);
      z(i, j) = ref == cd(0.0, 0.0) ? cd(0.0, 0.0) : y(i, j) / ref;
    }
  return rd_transform(z);
}

SearchWindow full_window(const CMat& chi) { return {0, int(chi.rows()), 0, int(chi.cols()), {}}; }

std::pair<int, int> estimate_peak(const CMat& chi, const SearchWindow& w) {
  if (w.l_begin < 0 || w.nu_begin < 0 || w.l_end > chi.rows() || w.nu_end > chi.cols() || w.l_begin >= w.l_end ||
      w.nu_begin >= w.nu_end)
    throw Error(ErrorCode::bad_dimension, "search window outside the map");
  std::pair<int, int> best{-1, -1};
  double best_mag = -1.0;
  // Scan l outer, ν inner with strict improvement so ties keep the smallest (l, ν).
  for (int l = w.l_begin; l < w.l_end; ++l)
    for (int nu = w.nu_begin; nu < w.nu_end; ++nu) {
      if (std::find(w.excluded.begin(), w.excluded.end(), std::make_pair(l, nu)) != w.excluded.end()) continue;
      const double m = std::abs(chi(l, nu));
      if (m > best_mag) {
        best_mag = m;
        best = {l, nu};
      }
    }
  return best;
}

}  // namespace isac
