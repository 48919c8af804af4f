#pragma once

#include <functional>

#include "isac/types.hpp"

namespace isac {

struct PowerIterationResult {
  double value = 0.0;  ///< Rayleigh quotient of `vector` for the unshifted operator
  CVec vector;
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  /// Added to the operator so that it is positive semidefinite.
  double shift = 0.0;
  double tol = 1e-10;
  int max_iters = 500;
  /// Throw power_iteration_no_converge instead of returning an unconverged estimate.
  bool strict = true;
};

/// Largest algebraic eigenvalue of a Hermitian operator via power iteration on op + shift·I.
/// Deterministic start vector of all ones unless `start` is nonempty.
PowerIterationResult power_iteration(const std::function<CVec(const CVec&)>& op, Eigen::Index n,
                                     const PowerIterationOptions& opts, const CVec& start = CVec());

}  // namespace isac
