#include "isac/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <cmath>
#include <cstdio>

#include "isac/ambiguity.hpp"
#include "isac/ci.hpp"
#include "isac/error.hpp"
#include "isac/model.hpp"
#include "isac/parallel.hpp"
#include "isac/receiver.hpp"
#include "isac/transforms.hpp"

namespace isac {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::design: return "design";
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::ambiguity: return "ambiguity";
    case ExperimentKind::isl_vs_qos: return "isl_vs_qos";
    case ExperimentKind::rdmap_two_target: return "rdmap_two_target";
    case ExperimentKind::roc: return "roc";
    case ExperimentKind::rmse: return "rmse";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::design, ExperimentKind::convergence, ExperimentKind::ambiguity,
                 ExperimentKind::isl_vs_qos, ExperimentKind::rdmap_two_target, ExperimentKind::roc,
                 ExperimentKind::rmse})
    if (to_string(k) == s) return k;
  if (s == "rdmap") return ExperimentKind::rdmap_two_target;
  return std::nullopt;
}

DesignBundle build_designs(const LabConfig& cfg, std::uint64_t seed, bool with_radar_only) {
  require_valid(cfg);
  const double theta = cfg.scene.azimuth_rad();
  DesignBundle b{generate_channels(cfg.system, cfg.channel, seed), generate_symbols(cfg.system, seed), {}, {}, {}, {}};
  b.ci = build_ci(b.channels, b.symbols, cfg.system);
  b.comm_only = design_comm_only(cfg.system, cfg.solver, b.ci);
  b.proposed = design_slp_waveform(cfg, b.ci, theta, &b.comm_only);
  if (with_radar_only) b.radar_only = design_radar_only(cfg, theta, b.comm_only);
  return b;
}

std::vector<DesignUnderTest> detection_designs(const DesignBundle& b) {
  std::vector<DesignUnderTest> d{{"proposed", b.proposed.x, RxFilter::matched}};
  if (b.radar_only) d.push_back({"radar_only", b.radar_only->x, RxFilter::matched});
  d.push_back({"reciprocal", b.comm_only, RxFilter::reciprocal});
  d.push_back({"comm_only", b.comm_only, RxFilter::matched});
  return d;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string suffix(std::uint64_t seed) { return "_seed" + std::to_string(seed) + ".csv"; }

std::string design_summary_csv(const DesignBundle& b, const LabConfig& cfg) {
  const CVec a = steering(cfg.scene.azimuth_rad(), cfg.system.n_tx, cfg.system.tx_spacing_wavelengths);
  std::string out = "design,normalized_isl_db,min_ci_margin,illum_power,status,outer_iters\n";
  auto row = [&](const std::string& name, const FreqWaveform& x, const std::string& status, std::size_t iters) {
    out += name + "," + fmt("%.17g", normalized_isl_db(x, a)) + "," + fmt("%.17g", ci_margin(x.data, b.ci)) + "," +
           fmt("%.17g", illumination_power(x, a)) + "," + status + "," + std::to_string(iters) + "\n";
  };
  row("proposed", b.proposed.x, to_string(b.proposed.trace.status), b.proposed.trace.rows.size());
  row("comm_only", b.comm_only, "closed_form", 0);
  if (b.radar_only)
    row("radar_only", b.radar_only->x, to_string(b.radar_only->trace.status), b.radar_only->trace.rows.size());
  return out;
}

void run_design(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto b = build_designs(spec.config, seed, false);
  dir.write("waveform" + suffix(seed), waveform_csv(b.proposed.x));
  dir.write("waveform_seed" + std::to_string(seed) + ".bin", waveform_binary(b.proposed.x));
  dir.write("trace" + suffix(seed), trace_csv(b.proposed.trace));
  dir.write("summary" + suffix(seed), design_summary_csv(b, spec.config));
}

void run_convergence(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto b = build_designs(spec.config, seed, true);
  dir.write("trace_proposed" + suffix(seed), trace_csv(b.proposed.trace));
  dir.write("trace_radar_only" + suffix(seed), trace_csv(b.radar_only->trace));
  dir.write("summary" + suffix(seed), design_summary_csv(b, spec.config));
}

void run_ambiguity(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto& cfg = spec.config;
  const auto b = build_designs(cfg, seed, true);
  const CVec a = steering(cfg.scene.azimuth_rad(), cfg.system.n_tx, cfg.system.tx_spacing_wavelengths);
  auto emit = [&](const std::string& name, const FreqWaveform& x) {
    const auto s = ambiguity_surface(x, a);
    dir.write("surface_" + name + suffix(seed), surface_csv(s.chi));
    dir.write("slices_" + name + suffix(seed), slices_csv(zero_slices(s)));
  };
  emit("proposed", b.proposed.x);
  emit("comm_only", b.comm_only);
  emit("radar_only", b.radar_only->x);
}

void run_isl_vs_qos(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto& grid = spec.sweep.empty() ? kDefaultQosDb : spec.sweep;
  const auto& base = spec.config;
  require_valid(base);
  const auto channels = generate_channels(base.system, base.channel, seed);
  const auto symbols = generate_symbols(base.system, seed);
  const CVec a = steering(base.scene.azimuth_rad(), base.system.n_tx, base.system.tx_spacing_wavelengths);
  const double theta = base.scene.azimuth_rad();
  const std::size_t n = grid.size();

  struct Point {
    LabConfig cfg;
    CiSet ci;
    std::optional<FreqWaveform> comm;
    std::optional<FreqWaveform> x;
    std::string status;
    std::string start = "cold";
  };
  std::vector<Point> pts(n);
  parallel_for(int(n), spec.threads, [&](int k) {
    Point& p = pts[std::size_t(k)];
    p.cfg = base;
    p.cfg.system.qos_snr_linear = {db_to_linear(grid[std::size_t(k)])};
    p.ci = build_ci(channels, symbols, p.cfg.system);
    try {
      p.comm = design_comm_only(p.cfg.system, p.cfg.solver, p.ci);
      auto r = design_slp_waveform(p.cfg, p.ci, theta, &*p.comm);
      p.x = std::move(r.x);
      p.status = to_string(r.trace.status);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::infeasible) throw;
    }
  });

  // A design for a stricter threshold is feasible for every looser one, so each point also
  // restarts from its stricter neighbour's design. The reported metric depends on the mainlobe
  // as well as the ISL, so the neighbour's design itself stays a candidate.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return grid[l] > grid[r]; });
  const FreqWaveform* stricter = nullptr;
  for (std::size_t idx : order) {
    Point& p = pts[idx];
    if (!p.x) continue;
    if (stricter) {
      auto warm = design_slp_waveform(p.cfg, p.ci, theta, stricter);
      double best = normalized_isl_db(*p.x, a);
      if (const double v = normalized_isl_db(warm.x, a); v < best) {
        best = v;
        p.x = std::move(warm.x);
        p.status = to_string(warm.trace.status);
        p.start = "warm";
      }
      if (normalized_isl_db(*stricter, a) < best) {
        p.x = *stricter;
        p.status = "inherited";
        p.start = "inherited";
      }
    }
    stricter = &*p.x;
  }

  std::string out = "qos_db,comm_only_isl_db,proposed_isl_db,min_ci_margin,illum_power,status,start\n";
  for (std::size_t k = 0; k < n; ++k) {
    const Point& p = pts[k];
    out += fmt("%.17g", grid[k]) + ",";
    if (!p.x) {
      out += "nan,nan,nan,nan,infeasible,none\n";
      continue;
    }
    out += fmt("%.17g", normalized_isl_db(*p.comm, a)) + "," + fmt("%.17g", normalized_isl_db(*p.x, a)) + "," +
           fmt("%.17g", ci_margin(p.x->data, p.ci)) + "," + fmt("%.17g", illumination_power(*p.x, a)) + "," +
           p.status + "," + p.start + "\n";
  }
  dir.write("isl_vs_qos" + suffix(seed), out);
}

void run_rdmap(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto& cfg = spec.config;
  const auto scene = two_target_scene(cfg);
  const auto b = build_designs(cfg, seed, true);
  const double snr = spec.snr_db.value_or(kDefaultRdmapSnrDb);
  const CVec a = steering(scene.theta_rad, cfg.system.n_tx, scene.spacing_wavelengths);
  for (const auto& d : detection_designs(b)) {
    const CMat xbar = beamformed_grid(d.x, a);
    CMat y = echo_signal(xbar, {scene.strong, scene.weak});
    Philox rng(seed, Stream::noise);
    add_noise(y, noise_for_snr(xbar, std::abs(scene.weak.gain), snr), rng);
    const CMat chi = d.filter == RxFilter::matched ? matched_rdmap(y, xbar) : reciprocal_rdmap(y, xbar);
    dir.write("rdmap_" + d.name + suffix(seed), surface_csv(chi, chi.cwiseAbs().maxCoeff()));
  }
}

MonteCarloOptions mc_options(const ExperimentSpec& spec, std::uint64_t seed) {
  MonteCarloOptions o;
  o.trials = spec.trials;
  o.seed = seed;
  o.threads = spec.threads;
  o.detector = spec.detector;
  return o;
}

void run_roc(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto scene = two_target_scene(spec.config);
  const auto b = build_designs(spec.config, seed, true);
  const auto curves = detect_roc(detection_designs(b), scene, spec.snr_db.value_or(kDefaultRocSnrDb),
                                 spec.sweep.empty() ? kDefaultPfa : spec.sweep, mc_options(spec, seed));
  dir.write("roc" + suffix(seed), roc_csv(curves));
}

void run_rmse(const ExperimentSpec& spec, std::uint64_t seed, ArtifactDir& dir) {
  const auto scene = two_target_scene(spec.config);
  const auto b = build_designs(spec.config, seed, true);
  const auto curves = rmse_curve(detection_designs(b), scene, spec.config.system,
                                 spec.sweep.empty() ? kDefaultRmseSnrDb : spec.sweep, mc_options(spec, seed));
  dir.write("rmse" + suffix(seed), rmse_csv(curves));
}

}  // namespace

ExperimentResult run(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) throw Error(ErrorCode::bad_parameter, "at least one seed is required");
  if (spec.threads < 1) throw Error(ErrorCode::bad_parameter, "threads must be positive");
  require_valid(spec.config);
  if (spec.kind == ExperimentKind::rdmap_two_target || spec.kind == ExperimentKind::roc ||
      spec.kind == ExperimentKind::rmse)
    (void)two_target_scene(spec.config);
  if (spec.kind == ExperimentKind::roc)
    for (double p : spec.sweep)
      if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::bad_parameter, "P_fa grid values must lie in (0, 1)");

  const auto t0 = std::chrono::steady_clock::now();
  ArtifactDir dir(spec.output_dir);
  try {
    for (auto seed : spec.seeds) {
      switch (spec.kind) {
        case ExperimentKind::design: run_design(spec, seed, dir); break;
        case ExperimentKind::convergence: run_convergence(spec, seed, dir); break;
        case ExperimentKind::ambiguity: run_ambiguity(spec, seed, dir); break;
        case ExperimentKind::isl_vs_qos: run_isl_vs_qos(spec, seed, dir); break;
        case ExperimentKind::rdmap_two_target: run_rdmap(spec, seed, dir); break;
        case ExperimentKind::roc: run_roc(spec, seed, dir); break;
        case ExperimentKind::rmse: run_rmse(spec, seed, dir); break;
      }
    }
    ExperimentResult res;
    auto& m = res.manifest;
    m.kind = to_string(spec.kind);
    m.config_hash = sha256_hex(format_config(spec.config));
    m.seeds = spec.seeds;
    m.threads = spec.threads;
    m.files = dir.files();
    if (spec.kind == ExperimentKind::ambiguity)
      m.notes.push_back({"combined", "unavailable: the dual-function combined waveform is not implemented"});
    if (spec.kind == ExperimentKind::roc || spec.kind == ExperimentKind::rmse)
      m.notes.push_back({"detector", spec.detector == Detector::ca_cfar ? "ca_cfar" : "clairvoyant_cell"});
    if (spec.kind == ExperimentKind::roc)
      m.notes.push_back({"sensing_snr_db", fmt("%.17g", spec.snr_db.value_or(kDefaultRocSnrDb))});
    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.manifest_path = dir.path() / "manifest.json";
    dir.write("manifest.json", manifest_json(m));
    return res;
  } catch (...) {
    dir.discard();
    throw;
  }
}

}  // namespace isac
