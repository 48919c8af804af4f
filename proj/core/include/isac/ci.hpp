#pragma once

#include <cstdint>
#include <vector>

#include "isac/config.hpp"
#include "isac/model.hpp"
#include "isac/types.hpp"

namespace isac {

/// Constructive-interference half-spaces Re{h̃^H x_{n,m}} ≥ γ_{k'}, 2K per cell.
/// For user k, k' = 2k uses h s (sin φ − j cos φ) and k' = 2k+1 uses h s (sin φ + j cos φ),
/// so that Re{h̃^H x} = sin φ Re{q} ∓ cos φ Im{q} with q = h^H x s^*.
struct CiSet {
  GridDims dims;
  int n_users = 0;
  double phi = 0.0;
  std::vector<double> gamma;  ///< length 2K
  std::vector<CVec> rotated;  ///< index cell * 2K + k'
  std::vector<double> norm_sq;

  int rows_per_cell() const { return 2 * n_users; }
  const CVec& row(Eigen::Index cell, int kp) const { return rotated[std::size_t(cell) * rows_per_cell() + kp]; }
  double row_norm_sq(Eigen::Index cell, int kp) const { return norm_sq[std::size_t(cell) * rows_per_cell() + kp]; }
};

CiSet build_ci(const ChannelSet& channels, const SymbolGrid& symbols, const SystemConfig& cfg);

/// Re{h̃^H x_{n,m}} for every row, flattened as cell * 2K + k'.
RVec ci_values(const CVec& x, const CiSet& ci);
/// min over all rows of Re{h̃^H x} − γ.
double ci_margin(const CVec& x, const CiSet& ci);
/// Per-user minimum margin.
std::vector<double> ci_margin_per_user(const CVec& x, const CiSet& ci);
/// Scale-free margin: min over rows of (Re{h̃^H x} − γ) / ‖h̃‖.
double ci_margin_normalized(const CVec& x, const CiSet& ci);

/// Monte Carlo symbol error rate per user under AWGN CN(0, σ_c²) with
/// nearest-sector PSK decisions. Trials use per-trial substreams of `seed`.
std::vector<double> ser_simulate(const CVec& x, const ChannelSet& channels, const SymbolGrid& symbols,
                                 const SystemConfig& cfg, int trials, std::uint64_t seed, int threads = 1);

/// Sector-crossing bound 2 Q(sqrt(2Γ) sin φ) for a point at distance σ_c sqrt(Γ) sin φ from both boundaries.
double ser_bound(double qos_linear, int psk_order);

}  // namespace isac
