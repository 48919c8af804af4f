#pragma once

#include "isac/types.hpp"

namespace isac {

/// chi(l, ν) for l ∈ [0, N_c), ν ∈ [0, N_s), stored as an N_c × N_s matrix.
struct AmbiguitySurface {
  CMat chi;
};

inline constexpr double kDbFloor = -300.0;

/// chi(l, ν) = Σ_{n,m} p[n][m] e^{−j2πln/N_c} e^{+j2πνm/N_s}.
AmbiguitySurface ambiguity_surface(const RMat& power);
AmbiguitySurface ambiguity_surface(const FreqWaveform& x, const CVec& a);

/// ξ = N_c N_s Σ (p − p̄)², algebraically equal to N_c N_s Σp² − (Σp)².
double isl(const RMat& power);
double isl(const FreqWaveform& x, const CVec& a);
/// Σ_{l,ν} |chi|² − |chi(0,0)|², summed directly over the surface.
double isl_from_surface(const AmbiguitySurface& s);

/// 10 log10(ξ / |chi(0,0)|²); floors at kDbFloor; throws degenerate_mainlobe when chi(0,0) = 0.
double normalized_isl_db(const RMat& power);
double normalized_isl_db(const FreqWaveform& x, const CVec& a);

struct ZeroSlices {
  RVec zero_doppler;  ///< 20 log10 |chi(l, 0)| / |chi(0,0)|, length N_c
  RVec zero_delay;    ///< 20 log10 |chi(0, ν)| / |chi(0,0)|, length N_s
};

ZeroSlices zero_slices(const AmbiguitySurface& s);

/// 20 log10(|v| / ref), floored at kDbFloor.
double mag_db(double magnitude, double ref);

}  // namespace isac
