#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isac/error.hpp"
#include "isac/types.hpp"

namespace isac {

/// System parameters. Powers in watts, frequencies in hertz, Γ_k linear.
struct SystemConfig {
  int n_tx = 6;
  int n_rx = 6;
  int n_sc = 32;
  int n_sym = 16;
  int n_users = 2;
  double carrier_hz = 24e9;
  double subcarrier_spacing_hz = 120e3;
  double cp_fraction = 0.25;
  double tx_spacing_wavelengths = 0.5;
  double rx_spacing_wavelengths = 0.5;
  double power_budget_w = 10.0;
  double min_illum_power_w = 8.0;
  std::vector<double> qos_snr_linear{3.981071705534972, 3.981071705534972};
  double comm_noise_w = 1e-10;
  double radar_noise_w = 1e-10;
  int psk_order = 4;
  double conv_tol = 1e-4;
  double admm_penalty = 1.0;

  GridDims dims() const { return {n_tx, n_sc, n_sym}; }
  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
  /// Symbol duration including the cyclic prefix.
  double symbol_total_s() const { return (1.0 + cp_fraction) / subcarrier_spacing_hz; }
  /// Per-sample modulus sqrt(P_T / N_tot) of a constant-modulus frame.
  double modulus() const;
  /// P̄_0 = N_t P_T − P_0.
  double illum_cap() const { return n_tx * power_budget_w - min_illum_power_w; }
  double qos(int k) const;
};

/// Channel generator parameters.
struct ChannelModel {
  double pathloss_ref_db = -30.0;
  double exponent = 2.5;
  double min_distance_m = 30.0;
  double max_distance_m = 100.0;
  int taps = 8;
};

/// Iteration caps and tolerances for the design loops.
struct SolverOptions {
  int outer_max_iters = 200;
  int inner_max_iters = 2000;
  /// Squared-residual threshold for the inner ADMM; 0 means use conv_tol.
  double inner_tol = 0.0;
  int x_update_max_iters = 5000;
  double x_update_tol = 1e-7;
  bool residual_balancing = false;
  int radar_only_max_iters = 200;
  int maxmin_bisection_steps = 40;
  int maxmin_max_sweeps = 4000;
};

struct TargetSpec {
  double azimuth_rad = 0.0;
  int range_bin = 0;
  int doppler_bin = 0;
  double rcs_dbsm = 0.0;
  double range_m = 50.0;
};

struct TargetScene {
  std::vector<TargetSpec> targets;
  /// Common azimuth; the first target's azimuth when targets exist.
  double azimuth_rad() const { return targets.empty() ? 0.0 : targets.front().azimuth_rad; }
};

struct LabConfig {
  SystemConfig system;
  ChannelModel channel;
  SolverOptions solver;
  TargetScene scene;
};

struct ConfigIssue {
  ErrorCode code;
  std::string message;
};

std::optional<ConfigIssue> validate_config(const SystemConfig& cfg);
std::optional<ConfigIssue> validate_scene(const TargetScene& scene, const SystemConfig& cfg);
/// Throws Error with the first violated invariant.
void require_valid(const LabConfig& cfg);

/// Parses the key = value format described in README.md.
LabConfig parse_config(std::string_view text);
LabConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const LabConfig& cfg);

/// Every config key with its unit and default, for --help output.
std::string config_reference();

/// Desk-scale preset: N_t=4, N_c=16, N_s=4, K=2, Γ=6 dB, P_0/(N_t P_T) = 8/60, 20000 outer
/// iterations, and a strong (20 dBsm, bin 1) plus weak (−3 dBsm, bin 2, Doppler 1) target.
LabConfig desk_config();

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace isac
