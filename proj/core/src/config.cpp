#include "isac/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace isac {

double SystemConfig::modulus() const {
  return std::sqrt(power_budget_w / static_cast<double>(dims().total()));
}

double SystemConfig::qos(int k) const {
  if (qos_snr_linear.size() == 1) return qos_snr_linear.front();
  return qos_snr_linear.at(static_cast<std::size_t>(k));
}

namespace {

std::optional<ConfigIssue> issue(ErrorCode code, std::string msg) {
  return ConfigIssue{code, std::move(msg)};
}

bool is_pow2(int v) { return v >= 2 && (v & (v - 1)) == 0; }

}  // namespace

std::optional<ConfigIssue> validate_config(const SystemConfig& c) {
  if (c.n_tx < 1 || c.n_rx < 1 || c.n_sc < 1 || c.n_sym < 1 || c.n_users < 1)
    return issue(ErrorCode::bad_dimension, "all counts must be >= 1");
  if (!is_pow2(c.psk_order))
    return issue(ErrorCode::bad_constellation,
                 "psk_order must be a power of two >= 2, got " + std::to_string(c.psk_order));
  if (c.qos_snr_linear.size() != 1 && c.qos_snr_linear.size() != std::size_t(c.n_users))
    return issue(ErrorCode::bad_dimension, "qos_snr_linear needs 1 or n_users entries");
  for (double g : c.qos_snr_linear)
    if (!(g >= 0.0) || !std::isfinite(g))
      return issue(ErrorCode::bad_parameter, "qos_snr_linear entries must be finite and >= 0");
  if (!(c.power_budget_w >= 0.0) || !(c.min_illum_power_w >= 0.0))
    return issue(ErrorCode::bad_parameter, "powers must be >= 0");
  if (c.min_illum_power_w > c.n_tx * c.power_budget_w)
    return issue(ErrorCode::infeasible_illumination,
                 "min_illum_power_w " + std::to_string(c.min_illum_power_w) + " exceeds n_tx * power_budget_w " +
                     std::to_string(c.n_tx * c.power_budget_w));
  if (!(c.admm_penalty > 0.0)) return issue(ErrorCode::bad_parameter, "admm_penalty must be > 0");
  if (!(c.conv_tol > 0.0)) return issue(ErrorCode::bad_parameter, "conv_tol must be > 0");
  if (!(c.carrier_hz > 0.0) || !(c.subcarrier_spacing_hz > 0.0))
    return issue(ErrorCode::bad_parameter, "frequencies must be > 0");
  if (!(c.cp_fraction > 0.0)) return issue(ErrorCode::bad_parameter, "cp_fraction must be > 0");
  if (!(c.comm_noise_w >= 0.0) || !(c.radar_noise_w >= 0.0))
    return issue(ErrorCode::bad_parameter, "noise powers must be >= 0");
  return std::nullopt;
}

std::optional<ConfigIssue> validate_scene(const TargetScene& scene, const SystemConfig& c) {
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const auto& t = scene.targets[i];
    const std::string tag = "target " + std::to_string(i) + ": ";
    if (t.range_bin < 0 || t.range_bin >= c.n_sc || t.doppler_bin < 0 || t.doppler_bin >= c.n_sym)
      return issue(ErrorCode::target_out_of_grid, tag + "range/doppler bin outside the grid");
    // τ_0 = l_0/(N_c Δf) must stay below T_CP = cp_fraction/Δf.
    if (static_cast<double>(t.range_bin) >= c.cp_fraction * c.n_sc)
      return issue(ErrorCode::target_out_of_grid, tag + "round-trip delay exceeds the cyclic prefix");
    if (!(t.range_m > 0.0)) return issue(ErrorCode::zero_range, tag + "range_m must be > 0");
    if (t.azimuth_rad != scene.targets.front().azimuth_rad)
      return issue(ErrorCode::bad_parameter, tag + "all targets must share one azimuth");
  }
  return std::nullopt;
}

void require_valid(const LabConfig& cfg) {
  if (auto e = validate_config(cfg.system)) throw Error(e->code, e->message);
  if (auto e = validate_scene(cfg.scene, cfg.system)) throw Error(e->code, e->message);
  if (cfg.channel.taps < 1) throw Error(ErrorCode::bad_dimension, "channel taps must be >= 1");
  if (!(cfg.channel.min_distance_m > 0.0) || cfg.channel.max_distance_m < cfg.channel.min_distance_m)
    throw Error(ErrorCode::bad_parameter, "channel distance range invalid");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, const std::string& key, int line) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad number for " + key);
  return out;
}

int to_int(const std::string& v, const std::string& key, int line) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad integer for " + key);
  return out;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad boolean for " + key);
}

std::vector<double> to_list(const std::string& v, const std::string& key, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), key, line));
  if (out.empty()) throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": empty list for " + key);
  return out;
}

constexpr double kDeg = kPi / 180.0;

using Setter = std::function<void(LabConfig&, const std::string&, int)>;

#define ISAC_D(sec, field) \
  {#field, [](LabConfig& c, const std::string& v, int l) { c.sec.field = to_double(v, #field, l); }}
#define ISAC_I(sec, field) \
  {#field, [](LabConfig& c, const std::string& v, int l) { c.sec.field = to_int(v, #field, l); }}
#define ISAC_B(sec, field) \
  {#field, [](LabConfig& c, const std::string& v, int l) { c.sec.field = to_bool(v, #field, l); }}

const std::map<std::string, Setter>& system_keys() {
  static const std::map<std::string, Setter> keys{
      ISAC_I(system, n_tx), ISAC_I(system, n_rx), ISAC_I(system, n_sc), ISAC_I(system, n_sym),
      ISAC_I(system, n_users), ISAC_D(system, carrier_hz), ISAC_D(system, subcarrier_spacing_hz),
      ISAC_D(system, cp_fraction), ISAC_D(system, tx_spacing_wavelengths),
      ISAC_D(system, rx_spacing_wavelengths), ISAC_D(system, power_budget_w),
      ISAC_D(system, min_illum_power_w), ISAC_D(system, comm_noise_w), ISAC_D(system, radar_noise_w),
      ISAC_I(system, psk_order), ISAC_D(system, conv_tol), ISAC_D(system, admm_penalty),
      {"qos_snr_linear",
       [](LabConfig& c, const std::string& v, int l) { c.system.qos_snr_linear = to_list(v, "qos_snr_linear", l); }},
  };
  return keys;
}

const std::map<std::string, Setter>& channel_keys() {
  static const std::map<std::string, Setter> keys{
      ISAC_D(channel, pathloss_ref_db), ISAC_D(channel, exponent), ISAC_D(channel, min_distance_m),
      ISAC_D(channel, max_distance_m), ISAC_I(channel, taps)};
  return keys;
}

const std::map<std::string, Setter>& solver_keys() {
  static const std::map<std::string, Setter> keys{
      ISAC_I(solver, outer_max_iters),  ISAC_I(solver, inner_max_iters),     ISAC_D(solver, inner_tol),
      ISAC_I(solver, x_update_max_iters), ISAC_D(solver, x_update_tol),      ISAC_B(solver, residual_balancing),
      ISAC_I(solver, radar_only_max_iters), ISAC_I(solver, maxmin_bisection_steps),
      ISAC_I(solver, maxmin_max_sweeps)};
  return keys;
}

#undef ISAC_D
#undef ISAC_I
#undef ISAC_B

void set_target_key(TargetSpec& t, const std::string& key, const std::string& v, int line) {
  if (key == "azimuth_deg") t.azimuth_rad = to_double(v, key, line) * kDeg;
  else if (key == "range_bin") t.range_bin = to_int(v, key, line);
  else if (key == "doppler_bin") t.doppler_bin = to_int(v, key, line);
  else if (key == "rcs_dbsm") t.rcs_dbsm = to_double(v, key, line);
  else if (key == "range_m") t.range_m = to_double(v, key, line);
  else throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": unknown target key " + key);
}

}  // namespace

LabConfig parse_config(std::string_view text) {
  LabConfig cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad section");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section == "target") cfg.scene.targets.emplace_back();
      else if (section != "system" && section != "channel" && section != "solver")
        throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": unknown section " + section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string val = trim(std::string_view(s).substr(eq + 1));
    if (section == "target") {
      set_target_key(cfg.scene.targets.back(), key, val, line);
      continue;
    }
    const auto& table = section == "channel" ? channel_keys() : section == "solver" ? solver_keys() : system_keys();
    auto it = table.find(key);
    if (it == table.end())
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": unknown key " + key);
    it->second(cfg, val, line);
  }
  return cfg;
}

LabConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io_error, "cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

std::string format_config(const LabConfig& c) {
  const auto& s = c.system;
  std::ostringstream o;
  o << "[system]\n"
    << "n_tx = " << s.n_tx << "\nn_rx = " << s.n_rx << "\nn_sc = " << s.n_sc << "\nn_sym = " << s.n_sym
    << "\nn_users = " << s.n_users << "\ncarrier_hz = " << num(s.carrier_hz)
    << "\nsubcarrier_spacing_hz = " << num(s.subcarrier_spacing_hz) << "\ncp_fraction = " << num(s.cp_fraction)
    << "\ntx_spacing_wavelengths = " << num(s.tx_spacing_wavelengths)
    << "\nrx_spacing_wavelengths = " << num(s.rx_spacing_wavelengths)
    << "\npower_budget_w = " << num(s.power_budget_w) << "\nmin_illum_power_w = " << num(s.min_illum_power_w)
    << "\nqos_snr_linear = ";
  for (std::size_t i = 0; i < s.qos_snr_linear.size(); ++i) o << (i ? ", " : "") << num(s.qos_snr_linear[i]);
  o << "\ncomm_noise_w = " << num(s.comm_noise_w) << "\nradar_noise_w = " << num(s.radar_noise_w)
    << "\npsk_order = " << s.psk_order << "\nconv_tol = " << num(s.conv_tol)
    << "\nadmm_penalty = " << num(s.admm_penalty) << "\n\n[channel]\n"
    << "pathloss_ref_db = " << num(c.channel.pathloss_ref_db) << "\nexponent = " << num(c.channel.exponent)
    << "\nmin_distance_m = " << num(c.channel.min_distance_m)
    << "\nmax_distance_m = " << num(c.channel.max_distance_m) << "\ntaps = " << c.channel.taps
    << "\n\n[solver]\n"
    << "outer_max_iters = " << c.solver.outer_max_iters << "\ninner_max_iters = " << c.solver.inner_max_iters
    << "\ninner_tol = " << num(c.solver.inner_tol) << "\nx_update_max_iters = " << c.solver.x_update_max_iters
    << "\nx_update_tol = " << num(c.solver.x_update_tol)
    << "\nresidual_balancing = " << (c.solver.residual_balancing ? "true" : "false")
    << "\nradar_only_max_iters = " << c.solver.radar_only_max_iters
    << "\nmaxmin_bisection_steps = " << c.solver.maxmin_bisection_steps
    << "\nmaxmin_max_sweeps = " << c.solver.maxmin_max_sweeps << "\n";
  for (const auto& t : c.scene.targets) {
    o << "\n[target]\nazimuth_deg = " << num(t.azimuth_rad / kDeg) << "\nrange_bin = " << t.range_bin
      << "\ndoppler_bin = " << t.doppler_bin << "\nrcs_dbsm = " << num(t.rcs_dbsm) << "\nrange_m = " << num(t.range_m)
      << "\n";
  }
  return o.str();
}

std::string config_reference() {
  return R"(Config file: INI-style "key = value" lines, '#' starts a comment. Unset keys keep their defaults.
[system]  (also the implicit first section)
  n_tx                   transmit antennas N_t                      6
  n_rx                   receive antennas N_r                       6
  n_sc                   subcarriers N_c                            32
  n_sym                  OFDM symbols N_s                           16
  n_users                downlink users K                           2
  carrier_hz             carrier frequency f_c                      24e9
  subcarrier_spacing_hz  subcarrier spacing                         120e3
  cp_fraction            cyclic prefix length / symbol length       0.25
  tx_spacing_wavelengths transmit element spacing / wavelength      0.5
  rx_spacing_wavelengths receive element spacing / wavelength       0.5
  power_budget_w         per-frame power budget P_T (W)             10
  min_illum_power_w      minimum illumination power P_0 (W)         8
  qos_snr_linear         QoS threshold per user, comma list (lin.)  3.98107 (6 dB); one value applies to all
  comm_noise_w           user noise power (W)                       1e-10
  radar_noise_w          radar receiver noise power (W)             1e-10
  psk_order              PSK order                                  4
  conv_tol               relative ISL change stopping threshold     1e-4
  admm_penalty           ADMM penalty rho                           1
[channel]
  pathloss_ref_db        path loss at 1 m (dB)                      -30
  exponent               path loss exponent                         2.5
  min_distance_m         nearest user distance (m)                  30
  max_distance_m         farthest user distance (m)                 100
  taps                   delay taps per user channel                8
[solver]
  outer_max_iters        MM outer iteration cap                     200
  inner_max_iters        ADMM inner iteration cap                   2000
  inner_tol              inner squared-residual threshold, 0 = conv_tol   0
  x_update_max_iters     x-subproblem iteration cap                 5000
  x_update_tol           x-subproblem residual tolerance            1e-7
  residual_balancing     adapt the x-subproblem penalty             false
  radar_only_max_iters   radar-only MM iteration cap                200
  maxmin_bisection_steps comm-only bisection steps                  40
  maxmin_max_sweeps      comm-only projection sweeps per step       4000
[target]  (repeat per target; all targets share one azimuth)
  azimuth_deg            target direction (deg)                     0
  range_bin              delay bin l_0, must be < cp_fraction * n_sc
  doppler_bin            Doppler bin nu_0
  rcs_dbsm               radar cross section (dBsm)                 0
  range_m                target range (m), nonzero                  50
)";
}

LabConfig desk_config() {
  LabConfig c;
  auto& s = c.system;
  s.n_tx = 4;
  s.n_rx = 4;
  s.n_sc = 16;
  s.n_sym = 4;
  s.n_users = 2;
  s.qos_snr_linear = {db_to_linear(6.0)};
  s.min_illum_power_w = 8.0 / 60.0 * s.n_tx * s.power_budget_w;
  c.solver.outer_max_iters = 20000;
  c.solver.radar_only_max_iters = 20000;
  c.solver.inner_tol = 1e-10;
  // Strong and weak target in adjacent range bins, one Doppler bin apart.
  const double bin_m = kSpeedOfLight / (2.0 * s.n_sc * s.subcarrier_spacing_hz);
  c.scene.targets = {{0.0, 1, 0, 20.0, bin_m}, {0.0, 2, 1, -3.0, 2.0 * bin_m}};
  return c;
}

}  // namespace isac
