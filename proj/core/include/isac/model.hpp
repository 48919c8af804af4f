#pragma once

#include <cstdint>
#include <vector>

#include "isac/config.hpp"
#include "isac/types.hpp"

namespace isac {

/// Frequency-domain user channels h_{n,k}, one N_t vector per (subcarrier, user).
struct ChannelSet {
  int n_sc = 0;
  int n_users = 0;
  int n_tx = 0;
  /// Index n * n_users + k.
  std::vector<CVec> h;
  double pathloss_ref_db = 0.0;
  double exponent = 0.0;
  std::vector<double> user_distance_m;

  const CVec& at(int n, int k) const { return h[std::size_t(n) * n_users + k]; }
  /// Linear path gain ζ_0 d^{-ε} of user k.
  double path_gain(int k) const;
};

/// Pure function of (cfg, model, seed): L i.i.d. CN(0, 1/L) taps per antenna,
/// transformed to the subcarrier grid and scaled by sqrt(PL(d_k)).
ChannelSet generate_channels(const SystemConfig& cfg, const ChannelModel& model, std::uint64_t seed);

/// PSK symbols stored as constellation indices i ∈ [0, Ω); the symbol is
/// exp(jπ(2i+1)/Ω) taken from a table with |s| == 1 exactly.
struct SymbolGrid {
  int n_sc = 0;
  int n_sym = 0;
  int n_users = 0;
  int order = 4;
  std::vector<std::uint16_t> index;  ///< (m * n_sc + n) * n_users + k
  std::vector<cd> table;

  cd at(int n, int m, int k) const {
    return table[index[(std::size_t(m) * n_sc + n) * n_users + k]];
  }
};

/// Unit-modulus table of phases π(2i+1)/Ω, i = 0..Ω-1.
std::vector<cd> psk_table(int order);
SymbolGrid generate_symbols(const SystemConfig& cfg, std::uint64_t seed);

/// ᾱ_0 = sqrt(σ λ² / ((4π)³ R⁴)) · exp(−j 2π f_c τ_0), τ_0 = l_0 / (N_c Δf).
cd target_gain(const TargetSpec& target, const SystemConfig& cfg);

/// Range and velocity per bin.
double range_bin_m(const SystemConfig& cfg);
double velocity_bin_mps(const SystemConfig& cfg);

}  // namespace isac
