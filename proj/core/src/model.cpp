#include "isac/model.hpp"

#include <cmath>
#include <limits>

#include "isac/error.hpp"
#include "isac/rng.hpp"

namespace isac {

double ChannelSet::path_gain(int k) const {
  return db_to_linear(pathloss_ref_db) * std::pow(user_distance_m.at(std::size_t(k)), -exponent);
}

ChannelSet generate_channels(const SystemConfig& cfg, const ChannelModel& model, std::uint64_t seed) {
  ChannelSet cs;
  cs.n_sc = cfg.n_sc;
  cs.n_users = cfg.n_users;
  cs.n_tx = cfg.n_tx;
  cs.pathloss_ref_db = model.pathloss_ref_db;
  cs.exponent = model.exponent;
  cs.h.assign(std::size_t(cfg.n_sc) * cfg.n_users, CVec::Zero(cfg.n_tx));
  const int L = model.taps;
  for (int k = 0; k < cfg.n_users; ++k) {
    Philox rng(seed, Stream::channel, std::uint64_t(k));
    const double d = model.min_distance_m + (model.max_distance_m - model.min_distance_m) * rng.uniform();
    cs.user_distance_m.push_back(d);
    CMat taps(cfg.n_tx, L);
    for (int l = 0; l < L; ++l)
      for (int i = 0; i < cfg.n_tx; ++i) taps(i, l) = rng.complex_normal(1.0 / L);
    const double amp = std::sqrt(cs.path_gain(k));
    for (int n = 0; n < cfg.n_sc; ++n) {
      CVec h = CVec::Zero(cfg.n_tx);
      for (int l = 0; l < L; ++l) {
        const double ang = -2.0 * kPi * double((std::int64_t(n) * l) % cfg.n_sc) / cfg.n_sc;
        h += taps.col(l) * cd(std::cos(ang), std::sin(ang));
      }
      cs.h[std::size_t(n) * cfg.n_users + k] = amp * h;
    }
  }
  return cs;
}

std::vector<cd> psk_table(int order) {
  if (order < 2 || (order & (order - 1)) != 0)
    throw Error(ErrorCode::bad_constellation, "psk order must be a power of two");
  std::vector<cd> t;
  for (int i = 0; i < order; ++i) {
    const double ph = kPi * (2.0 * i + 1.0) / order;
    const double re0 = std::cos(ph);
    const double im0 = std::sin(ph);
    cd best(re0, im0);
    // Search a few ulps around (cos, sin) for a point whose modulus rounds to exactly one.
    for (int a = 0; a <= 8 && std::abs(best) != 1.0; ++a) {
      for (int b = 0; b <= 8 && std::abs(best) != 1.0; ++b) {
        for (int sa : {1, -1})
          for (int sb : {1, -1}) {
            double re = re0, im = im0;
            for (int s = 0; s < a; ++s) re = std::nextafter(re, sa * 2.0);
            for (int s = 0; s < b; ++s) im = std::nextafter(im, sb * 2.0);
            if (std::abs(best) != 1.0 && std::abs(cd(re, im)) == 1.0) best = cd(re, im);
          }
      }
    }
    if (std::abs(best) != 1.0) throw Error(ErrorCode::bad_constellation, "no exact unit-modulus point found");
    t.push_back(best);
  }
  return t;
}

SymbolGrid generate_symbols(const SystemConfig& cfg, std::uint64_t seed) {
  SymbolGrid g;
  g.n_sc = cfg.n_sc;
  g.n_sym = cfg.n_sym;
  g.n_users = cfg.n_users;
  g.order = cfg.psk_order;
  g.table = psk_table(cfg.psk_order);
  Philox rng(seed, Stream::symbols);
  g.index.resize(std::size_t(cfg.n_sc) * cfg.n_sym * cfg.n_users);
  for (auto& v : g.index) v = static_cast<std::uint16_t>(rng.below(std::uint64_t(cfg.psk_order)));
  return g;
}

cd target_gain(const TargetSpec& t, const SystemConfig& cfg) {
  if (t.range_m == 0.0) throw Error(ErrorCode::zero_range, "target range must be nonzero");
  const double rcs = db_to_linear(t.rcs_dbsm);
  const double lam = cfg.wavelength_m();
  const double mag = std::sqrt(rcs * lam * lam / (std::pow(4.0 * kPi, 3) * std::pow(t.range_m, 4)));
  const double tau = t.range_bin / (cfg.n_sc * cfg.subcarrier_spacing_hz);
  // Reduce f_c τ_0 modulo one cycle before forming the angle.
  const double cycles = cfg.carrier_hz * tau;
  const double frac = cycles - std::floor(cycles);
  const double ph = -2.0 * kPi * frac;
  return mag * cd(std::cos(ph), std::sin(ph));
}

double range_bin_m(const SystemConfig& cfg) {
  return kSpeedOfLight / (2.0 * cfg.n_sc * cfg.subcarrier_spacing_hz);
}

double velocity_bin_mps(const SystemConfig& cfg) {
  return kSpeedOfLight / (2.0 * cfg.carrier_hz * cfg.n_sym * cfg.symbol_total_s());
}

}  // namespace isac
