#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isac/config.hpp"
#include "isac/receiver.hpp"
#include "isac/types.hpp"

namespace isac {

enum class RxFilter { matched, reciprocal };

struct DesignUnderTest {
  std::string name;
  FreqWaveform x;
  RxFilter filter = RxFilter::matched;
};

/// Strong and weak target at a common azimuth. Target phases are redrawn uniformly per trial.
struct TwoTargetScene {
  double theta_rad = 0.0;
  double spacing_wavelengths = 0.5;
  EchoComponent strong;
  EchoComponent weak;
};

/// First two configured targets (strong, weak); gains from target_gain.
TwoTargetScene two_target_scene(const LabConfig& cfg);

/// Wilson score interval (lower, upper) for k successes in n trials.
std::pair<double, double> wilson_interval(long k, long n, double z = 1.959963984540054);

/// Per-cell noise variance putting the weak echo at `snr_db` over the noise:
/// |ᾱ_weak|² mean|X̄|² / σ².
double noise_for_snr(const CMat& xbar, double weak_gain_abs, double snr_db);

enum class Detector {
  clairvoyant_cell,  ///< |χ| at the weak target's cell
  ca_cfar,           ///< |χ|² at that cell over the mean of 4+4 range training cells beyond 2 guard cells
};

struct RocPoint {
  double pfa_nominal = 0.0;
  double threshold = 0.0;
  double pfa = 0.0;
  double pfa_lo = 0.0;
  double pfa_hi = 0.0;
  double pd = 0.0;
  double pd_lo = 0.0;
  double pd_hi = 0.0;
};

struct RocCurve {
  std::string name;
  std::vector<RocPoint> points;
};

struct MonteCarloOptions {
  int trials = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
  Detector detector = Detector::clairvoyant_cell;
  double reciprocal_floor = 1e-3;
};

/// Thresholds are the empirical (1 − P_fa) quantiles of the H0 statistic (strong target only).
std::vector<RocCurve> detect_roc(const std::vector<DesignUnderTest>& designs, const TwoTargetScene& scene,
                                 double snr_db, const std::vector<double>& pfa_grid, const MonteCarloOptions& opts);

struct RmsePoint {
  double snr_db = 0.0;
  double range_rmse_m = 0.0;
  double range_lo_m = 0.0;
  double range_hi_m = 0.0;
  double velocity_rmse_mps = 0.0;
  double velocity_lo_mps = 0.0;
  double velocity_hi_mps = 0.0;
  double range_rmse_bins = 0.0;
  double velocity_rmse_bins = 0.0;
};

struct RmseCurve {
  std::string name;
  std::vector<RmsePoint> points;
};

/// Weak-target peak search over the full map minus the strong target's cell; errors are
/// circular bin differences converted with range_bin_m and velocity_bin_mps.
std::vector<RmseCurve> rmse_curve(const std::vector<DesignUnderTest>& designs, const TwoTargetScene& scene,
                                  const SystemConfig& cfg, const std::vector<double>& snr_grid_db,
                                  const MonteCarloOptions& opts);

}  // namespace isac
