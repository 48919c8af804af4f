#pragma once

#include <cstdint>

#include "isac/types.hpp"

namespace isac {

/// Diagonal entry j of B. With n = j mod N_c, m' = ⌊j/N_c⌋ mod N_s,
/// n' = ⌊j/(N_s N_c)⌋ mod N_c, m = ⌊j/(N_s N_c²)⌋ it is N_s N_c − 1 when n = n' and
/// m = m', else −1.
double b_diag_entry(std::int64_t j, int n_sc, int n_sym);

/// Expansion point of the two-stage surrogate and its eigenvalue bounds.
struct SurrogateState {
  GridDims dims;
  CVec a;
  CVec x;         ///< expansion point x_t
  CVec y;         ///< Ã^H x_t, one scalar per cell
  CVec u;         ///< ÃÃ^H x_t
  double lambda_B = 0.0;
  double lambda_C = 0.0;
  double lambda_Gt = 0.0;
  double lambda_Mtilde = 0.0;  ///< certified upper bound on λ_max(M̃_t)
  double lambda_Mt = 0.0;      ///< N_t · lambda_Mtilde
  int power_iterations = 0;
};

SurrogateState build_surrogate(const FreqWaveform& x, const CVec& a);

/// G_t v = 2(u (u^H v) − N_t² x_t (x_t^H v)).
CVec apply_Gt(const SurrogateState& s, const CVec& v);
/// Exact largest eigenvalue of G_t from its 2 × 2 restriction to span{u, x_t}.
double lambda_Gt(const CVec& u, const CVec& x, int n_tx);

/// M̃_t w = 2 N_s N_c (Diag(|y|²) − y y^H) w on the cell grid.
CVec apply_Mtilde(const SurrogateState& s, const CVec& w);
/// M_t v = Ã M̃_t Ã^H v.
CVec apply_Mt(const SurrogateState& s, const CVec& v);
/// Upper bound on λ_max(M̃_t): power iteration on the shifted operator, then a
/// secular-equation bisection for Diag(d) − y y^H that only moves upward.
double lambda_max_Mtilde(const CVec& y, int n_sc, int n_sym, int* iterations = nullptr);

/// g_t = 2 λ_B (G_t − λ_Gt I) x_t + 2 (M_t − λ_Mt I) x_t.
CVec surrogate_gradient(const SurrogateState& s);

}  // namespace isac
