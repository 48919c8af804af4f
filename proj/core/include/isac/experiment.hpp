#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isac/config.hpp"
#include "isac/designer.hpp"
#include "isac/detection.hpp"
#include "isac/io.hpp"

namespace isac {

enum class ExperimentKind { design, convergence, ambiguity, isl_vs_qos, rdmap_two_target, roc, rmse };

std::string to_string(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::design;
  LabConfig config;
  /// Γ in dB for isl_vs_qos, P_fa values for roc, sensing SNR in dB for rmse. Empty selects the defaults below.
  std::vector<double> sweep;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "out";
  int trials = 2000;
  int threads = 1;
  /// Sensing SNR for rdmap_two_target and roc; unset selects the per-kind default.
  std::optional<double> snr_db;
  Detector detector = Detector::clairvoyant_cell;
};

inline const std::vector<double> kDefaultQosDb{0, 2, 4, 6, 8, 10};
inline const std::vector<double> kDefaultPfa{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1, 2e-1, 5e-1};
inline const std::vector<double> kDefaultRmseSnrDb{-15, -12.5, -10, -7.5, -5, -2.5, 0};
inline constexpr double kDefaultRocSnrDb = -2.5;
inline constexpr double kDefaultRdmapSnrDb = 10.0;

/// Every waveform an experiment compares, built from one (config, seed) instance.
struct DesignBundle {
  ChannelSet channels;
  SymbolGrid symbols;
  CiSet ci;
  FreqWaveform comm_only;
  DesignResult proposed;
  std::optional<DesignResult> radar_only;
};

DesignBundle build_designs(const LabConfig& cfg, std::uint64_t seed, bool with_radar_only);

/// Proposed, radar-only (if present), reciprocal (comm-only waveform, reciprocal filter), comm-only (matched).
std::vector<DesignUnderTest> detection_designs(const DesignBundle& b);

struct ExperimentResult {
  ManifestInfo manifest;
  std::filesystem::path manifest_path;
};

/// Runs the experiment and writes CSVs plus manifest.json into spec.output_dir. On failure every file
/// written so far is removed and the error propagates.
ExperimentResult run(const ExperimentSpec& spec);

}  // namespace isac
