#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isac/config.hpp"
#include "isac/error.hpp"
#include "isac/experiment.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kInfeasible = 2 };

int exit_code_for(isac::ErrorCode c) {
  switch (c) {
    case isac::ErrorCode::infeasible:
    case isac::ErrorCode::max_iters:
    case isac::ErrorCode::no_progress:
    case isac::ErrorCode::power_iteration_no_converge:
      return kInfeasible;
    default:
      return kConfigError;
  }
}

struct Options {
  std::string config;
  std::string out = "out";
  std::vector<std::uint64_t> seeds{1};
  std::string experiment;
  std::vector<double> qos_db;
  std::vector<double> pfa;
  std::vector<double> snr_grid;
  double snr_db = 0.0;
  int trials = 2000;
  int threads = 1;
  bool cfar = false;
};

isac::LabConfig load(const Options& o) {
  return o.config.empty() ? isac::desk_config() : isac::load_config(o.config);
}

int run_kind(const Options& o, isac::ExperimentKind kind, bool snr_given) {
  isac::ExperimentSpec spec;
  spec.kind = kind;
  spec.config = load(o);
  spec.seeds = o.seeds;
  spec.output_dir = o.out;
  spec.trials = o.trials;
  spec.threads = o.threads;
  spec.detector = o.cfar ? isac::Detector::ca_cfar : isac::Detector::clairvoyant_cell;
  if (snr_given) spec.snr_db = o.snr_db;
  switch (kind) {
    case isac::ExperimentKind::isl_vs_qos: spec.sweep = o.qos_db; break;
    case isac::ExperimentKind::roc: spec.sweep = o.pfa; break;
    case isac::ExperimentKind::rmse: spec.sweep = o.snr_grid; break;
    default: break;
  }
  const auto res = isac::run(spec);
  std::printf("%s: %zu files, manifest %s\n", isac::to_string(kind).c_str(), res.manifest.files.size(),
              res.manifest_path.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isac_lab: constant-modulus symbol-level precoded ISAC waveform design and radar evaluation"};
  app.footer("\nWithout --config the desk preset is used (N_t=4, N_c=16, N_s=4, K=2).\n"
             "Exit codes: 0 success, 1 config or input error, 2 solver infeasibility.\n\n" +
             isac::config_reference());
  app.require_subcommand(1);

  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "Config file path")->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "Output directory")->capture_default_str();
    s->add_option("--seed", o.seeds, "Instance seed(s); repeat or comma-separate for several")
        ->delimiter(',')
        ->capture_default_str();
    s->add_option("--threads", o.threads, "Worker threads; outputs do not depend on it")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* design = app.add_subcommand("design", "Design the proposed waveform (or run --experiment KIND)");
  common(design);
  design->add_option("--experiment", o.experiment,
                     "design|convergence|ambiguity|isl_vs_qos|rdmap_two_target|roc|rmse");
  design->add_option("--qos-db", o.qos_db, "QoS thresholds in dB for isl_vs_qos")->delimiter(',');
  design->add_option("--trials", o.trials, "Monte Carlo trials for roc/rmse")->check(CLI::Range(100, 100000000));

  auto* convergence = app.add_subcommand("convergence", "Trace the proposed and radar-only MM iterations");
  common(convergence);

  auto* ambiguity = app.add_subcommand("ambiguity", "Ambiguity surfaces and zero cuts per design");
  common(ambiguity);

  auto* isl_qos = app.add_subcommand("isl_vs_qos", "Normalized ISL versus the QoS threshold");
  common(isl_qos);
  isl_qos->add_option("--qos-db", o.qos_db, "QoS thresholds in dB (default 0,2,4,6,8,10)")->delimiter(',');

  auto* rdmap = app.add_subcommand("rdmap", "Two-target range-Doppler maps per design");
  common(rdmap);
  auto* rd_snr = rdmap->add_option("--snr-db", o.snr_db, "Weak-target sensing SNR in dB (default 10)");

  auto* roc = app.add_subcommand("roc", "Detection ROC for the weak target");
  common(roc);
  roc->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(100, 100000000))->capture_default_str();
  auto* roc_snr = roc->add_option("--snr-db", o.snr_db, "Weak-target sensing SNR in dB (default -2.5)");
  roc->add_option("--pfa", o.pfa, "False-alarm grid (default 1e-3 ... 0.5)")->delimiter(',');
  roc->add_flag("--cfar", o.cfar, "Cell-averaging CFAR statistic instead of the known-cell magnitude");

  auto* rmse = app.add_subcommand("rmse", "Weak-target range/velocity RMSE versus sensing SNR");
  common(rmse);
  rmse->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(100, 100000000))->capture_default_str();
  rmse->add_option("--snr-grid", o.snr_grid, "Sensing SNR grid in dB (default -15:2.5:0)")->delimiter(',');

  auto* validate = app.add_subcommand("validate", "Check a config file and print its canonical form");
  validate->add_option("--config", o.config, "Config file path")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (validate->parsed()) {
      const auto cfg = isac::load_config(o.config);
      if (auto issue = isac::validate_config(cfg.system)) {
        std::fprintf(stderr, "%s: %s\n", std::string(isac::to_string(issue->code)).c_str(), issue->message.c_str());
        return kConfigError;
      }
      isac::require_valid(cfg);
      std::fputs(isac::format_config(cfg).c_str(), stdout);
      return kOk;
    }
    if (design->parsed()) {
      auto kind = isac::ExperimentKind::design;
      if (!o.experiment.empty()) {
        const auto k = isac::parse_experiment_kind(o.experiment);
        if (!k) {
          std::fprintf(stderr, "unknown experiment kind '%s'\n", o.experiment.c_str());
          return kConfigError;
        }
        kind = *k;
      }
      return run_kind(o, kind, false);
    }
    if (convergence->parsed()) return run_kind(o, isac::ExperimentKind::convergence, false);
    if (ambiguity->parsed()) return run_kind(o, isac::ExperimentKind::ambiguity, false);
    if (isl_qos->parsed()) return run_kind(o, isac::ExperimentKind::isl_vs_qos, false);
    if (rdmap->parsed()) return run_kind(o, isac::ExperimentKind::rdmap_two_target, rd_snr->count() > 0);
    if (roc->parsed()) return run_kind(o, isac::ExperimentKind::roc, roc_snr->count() > 0);
    if (rmse->parsed()) return run_kind(o, isac::ExperimentKind::rmse, false);
  } catch (const isac::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  return kConfigError;
}
