#pragma once

#include "isac/types.hpp"

namespace isac {

/// a_i = exp(j 2π i d sin θ), i = 0..n-1.
CVec steering(double theta_rad, int n, double spacing_wavelengths);

/// w = F̃^H x: per symbol and antenna, w_p = N_c^{-1/2} Σ_n x_n e^{+j2πpn/N_c}.
void to_time(const GridDims& dims, const CVec& x, CVec& w);
/// x = F̃ w, the inverse of to_time.
void to_freq(const GridDims& dims, const CVec& w, CVec& x);

TimeWaveform to_time(const FreqWaveform& x);
FreqWaveform to_freq(const TimeWaveform& w);

/// Beamformed scalars a^H s_{n,m} per cell, flattened as m * N_c + n.
CVec beamform(const GridDims& dims, const CVec& s, const CVec& a);
/// Ã v: places v_c · a in every cell (adjoint of beamform).
CVec spread(const GridDims& dims, const CVec& v, const CVec& a);

/// p[n][m] = |a^H x_{n,m}|² as an N_c × N_s matrix.
RMat power_grid(const FreqWaveform& x, const CVec& a);

/// P_IL = Σ_{p,m} |a^H w_{p,m}|², evaluated in the time domain.
double illumination_power(const FreqWaveform& x, const CVec& a);
/// x^H Ā x = Σ_blocks N_t ‖w_b‖² − |a^H w_b|² for a time-domain frame.
double illum_quadratic(const GridDims& dims, const CVec& w, const CVec& a);

}  // namespace isac
