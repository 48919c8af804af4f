#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace isac {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Frame dimensions. Flattened vectors put the antenna index fastest, then
/// the subcarrier (or time sample), then the OFDM symbol.
struct GridDims {
  int n_tx = 1;
  int n_sc = 1;
  int n_sym = 1;

  Eigen::Index cells() const { return Eigen::Index(n_sc) * n_sym; }
  Eigen::Index total() const { return cells() * n_tx; }
  /// Offset of the first antenna entry of cell (n, m).
  Eigen::Index offset(int n, int m) const {
    return (Eigen::Index(m) * n_sc + n) * n_tx;
  }
  /// Index of cell (n, m) in a beamformed (per-cell scalar) grid.
  Eigen::Index cell(int n, int m) const { return Eigen::Index(m) * n_sc + n; }

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

namespace detail {
struct FreqTag {};
struct TimeTag {};
}  // namespace detail

/// One complex N_t-vector per (subcarrier or sample, symbol) cell.
template <class Tag>
struct GridSignal {
  GridDims dims;
  CVec data;

  GridSignal() = default;
  explicit GridSignal(const GridDims& d) : dims(d), data(CVec::Zero(d.total())) {}
  GridSignal(const GridDims& d, CVec v) : dims(d), data(std::move(v)) {}

  auto cell(int n, int m) { return data.segment(dims.offset(n, m), dims.n_tx); }
  auto cell(int n, int m) const { return data.segment(dims.offset(n, m), dims.n_tx); }
};

/// Precoded frequency-domain frame x (the design variable).
using FreqWaveform = GridSignal<detail::FreqTag>;
/// Time-domain frame w = F̃^H x, one sample vector per (p, m).
using TimeWaveform = GridSignal<detail::TimeTag>;

}  // namespace isac
