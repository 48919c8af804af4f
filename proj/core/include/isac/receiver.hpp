#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/types.hpp"

namespace isac {

/// X̄[n][m] = a^H x_{n,m} as an N_c × N_s matrix.
CMat beamformed_grid(const FreqWaveform& x, const CVec& a);

/// One echo component: complex gain and integer delay/Doppler bins.
struct EchoComponent {
  cd gain;
  int range_bin = 0;
  int doppler_bin = 0;
};

/// Noise-free echo Σ_i ᾱ_i D_{l_i} X̄ D_{ν_i}.
CMat echo_signal(const CMat& xbar, const std::vector<EchoComponent>& targets);
/// Adds i.i.d. CN(0, variance) to every cell.
void add_noise(CMat& y, double variance, Philox& rng);

/// Echo for a configured scene: gains from target_gain and noise variance σ_r²/N_r per cell.
CMat synth_echo(const FreqWaveform& x, const TargetScene& scene, const SystemConfig& cfg, std::uint64_t seed);

/// χ = F_{N_c}^H (Y ⊙ X̄^*) F_{N_s} with unitary DFT matrices.
CMat matched_rdmap(const CMat& y, const CMat& xbar);
/// χ = F_{N_c}^H (Y ⊘ X̄_g) F_{N_s}; cells with |X̄| < floor·max|X̄| are raised to that magnitude.
CMat reciprocal_rdmap(const CMat& y, const CMat& xbar, double floor = 1e-3);

struct SearchWindow {
  int l_begin = 0;
  int l_end = 0;  ///< exclusive
  int nu_begin = 0;
  int nu_end = 0;  ///< exclusive
  /// Cells skipped inside the window (e.g. a known strong target).
  std::vector<std::pair<int, int>> excluded;
};

SearchWindow full_window(const CMat& chi);

/// argmax |χ| over the window; ties go to the smallest l, then the smallest ν.
std::pair<int, int> estimate_peak(const CMat& chi, const SearchWindow& window);

}  // namespace isac
