#include "isac/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <fftw3.h>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "isac/error.hpp"
#include "json.hpp"

#ifndef ISAC_VERSION_STRING
#define ISAC_VERSION_STRING "unknown"
#endif

namespace isac {

static_assert(std::endian::native == std::endian::little, "binary waveform format assumes a little-endian host");

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

template <class... Ts>
void append_row(std::string& out, const Ts&... vs) {
  bool first = true;
  auto one = [&](const auto& v) {
    if (!first) out += ',';
    first = false;
    using V = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<V, std::string>)
      out += v;
    else if constexpr (std::is_integral_v<V>)
      out += std::to_string(v);
    else
      append_num(out, double(v));
  };
  (one(vs), ...);
  out += '\n';
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_num(std::string_view s) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::parse_error, "bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string waveform_csv(const FreqWaveform& x) {
  std::string out = "m,n,i,re,im\n";
  const auto& d = x.dims;
  for (int m = 0; m < d.n_sym; ++m)
    for (int n = 0; n < d.n_sc; ++n)
      for (int i = 0; i < d.n_tx; ++i) {
        const cd v = x.data(d.offset(n, m) + i);
        append_row(out, m, n, i, v.real(), v.imag());
      }
  return out;
}

FreqWaveform parse_waveform_csv(std::string_view text, const GridDims& dims) {
  FreqWaveform x(dims);
  std::vector<char> seen(std::size_t(dims.total()), 0);
  auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != "m,n,i,re,im") throw Error(ErrorCode::parse_error, "missing waveform header");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const auto f = split(lines[k], ',');
    if (f.size() != 5) throw Error(ErrorCode::parse_error, "waveform row needs 5 fields");
    const int m = parse_num<int>(f[0]), n = parse_num<int>(f[1]), i = parse_num<int>(f[2]);
    if (m < 0 || m >= dims.n_sym || n < 0 || n >= dims.n_sc || i < 0 || i >= dims.n_tx)
      throw Error(ErrorCode::bad_dimension, "waveform row outside the grid");
    const auto idx = dims.offset(n, m) + i;
    x.data(idx) = cd(parse_num<double>(f[3]), parse_num<double>(f[4]));
    seen[std::size_t(idx)] = 1;
  }
  for (char s : seen)
    if (!s) throw Error(ErrorCode::bad_dimension, "waveform CSV is missing entries");
  return x;
}

std::string waveform_binary(const FreqWaveform& x) {
  const std::uint32_t head[4] = {kWaveformMagic, std::uint32_t(x.dims.n_sym), std::uint32_t(x.dims.n_sc),
                                 std::uint32_t(x.dims.n_tx)};
  std::string out(sizeof head + std::size_t(x.data.size()) * 16, '\0');
  std::memcpy(out.data(), head, sizeof head);
  char* p = out.data() + sizeof head;
  for (Eigen::Index k = 0; k < x.data.size(); ++k) {
    const double re = x.data(k).real(), im = x.data(k).imag();
    std::memcpy(p, &re, 8);
    std::memcpy(p + 8, &im, 8);
    p += 16;
  }
  return out;
}

FreqWaveform parse_waveform_binary(std::string_view bytes) {
  std::uint32_t head[4];
  if (bytes.size() < sizeof head) throw Error(ErrorCode::parse_error, "binary waveform shorter than its header");
  std::memcpy(head, bytes.data(), sizeof head);
  if (head[0] != kWaveformMagic) throw Error(ErrorCode::parse_error, "bad binary waveform magic");
  const GridDims d{int(head[3]), int(head[2]), int(head[1])};
  if (bytes.size() != sizeof head + std::size_t(d.total()) * 16)
    throw Error(ErrorCode::bad_dimension, "binary waveform size does not match its header");
  FreqWaveform x(d);
  const char* p = bytes.data() + sizeof head;
  for (Eigen::Index k = 0; k < x.data.size(); ++k) {
    double re, im;
    std::memcpy(&re, p, 8);
    std::memcpy(&im, p + 8, 8);
    x.data(k) = cd(re, im);
    p += 16;
  }
  return x;
}

std::string surface_csv(const CMat& map, double ref) {
  if (ref <= 0.0) ref = std::abs(map(0, 0));
  std::string out = "l,nu,re,im,mag_db\n";
  for (Eigen::Index l = 0; l < map.rows(); ++l)
    for (Eigen::Index nu = 0; nu < map.cols(); ++nu) {
      const cd v = map(l, nu);
      append_row(out, int(l), int(nu), v.real(), v.imag(), mag_db(std::abs(v), ref));
    }
  return out;
}

std::string slices_csv(const ZeroSlices& s) {
  std::string out = "axis,index,mag_db\n";
  for (Eigen::Index k = 0; k < s.zero_doppler.size(); ++k)
    append_row(out, std::string("zero_doppler"), int(k), s.zero_doppler(k));
  for (Eigen::Index k = 0; k < s.zero_delay.size(); ++k)
    append_row(out, std::string("zero_delay"), int(k), s.zero_delay(k));
  return out;
}

std::string trace_csv(const ConvergenceTrace& t) {
  std::string out =
      "outer_iter,isl,normalized_isl_db,inner_iters,primal_residual,dual_residual,min_ci_margin,illum_power\n";
  for (const auto& r : t.rows)
    append_row(out, r.outer_iter, r.isl, r.normalized_isl_db, r.inner_iters, r.primal_residual, r.dual_residual,
               r.min_ci_margin, r.illum_power);
  return out;
}

std::string roc_csv(const std::vector<RocCurve>& curves) {
  std::string out = "design,pfa_nominal,threshold,pfa,pfa_half,pd,pd_half,pd_lo,pd_hi\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      append_row(out, c.name, p.pfa_nominal, p.threshold, p.pfa, 0.5 * (p.pfa_hi - p.pfa_lo), p.pd,
                 0.5 * (p.pd_hi - p.pd_lo), p.pd_lo, p.pd_hi);
  return out;
}

std::string rmse_csv(const std::vector<RmseCurve>& curves) {
  std::string out =
      "design,snr_db,range_rmse_m,range_half_m,velocity_rmse_mps,velocity_half_mps,range_rmse_bins,"
      "velocity_rmse_bins\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      append_row(out, c.name, p.snr_db, p.range_rmse_m, 0.5 * (p.range_hi_m - p.range_lo_m), p.velocity_rmse_mps,
                 0.5 * (p.velocity_hi_mps - p.velocity_lo_mps), p.range_rmse_bins, p.velocity_rmse_bins);
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::io_error, "SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

ArtifactDir::ArtifactDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!std::filesystem::exists(dir_, ec)) {
    created_ = std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir_.string() + ": " + ec.message());
  } else if (!std::filesystem::is_directory(dir_, ec)) {
    throw Error(ErrorCode::io_error, dir_.string() + " is not a directory");
  }
}

void ArtifactDir::write(const std::string& name, const std::string& content) {
  std::lock_guard lock(mu_);
  const auto path = dir_ / name;
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    f.write(content.data(), std::streamsize(content.size()));
    if (!f) throw Error(ErrorCode::io_error, "write failed for " + path.string());
  }
  files_.push_back({name, sha256_hex(content), content.size()});
}

void ArtifactDir::discard() {
  std::lock_guard lock(mu_);
  std::error_code ec;
  for (const auto& f : files_) std::filesystem::remove(dir_ / f.name, ec);
  files_.clear();
  if (created_ && std::filesystem::is_empty(dir_, ec)) std::filesystem::remove(dir_, ec);
}

std::vector<FileRecord> ArtifactDir::files() const {
  std::lock_guard lock(mu_);
  return files_;
}

std::string library_version() { return ISAC_VERSION_STRING; }

std::string manifest_json(const ManifestInfo& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["kind"] = m.kind;
  j["config_sha256"] = m.config_hash;
  j["seeds"] = m.seeds;
  j["threads"] = m.threads;
  auto& v = j["versions"];
  v["isac"] = library_version();
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["fftw"] = std::string(fftw_version);
  v["openssl"] = std::string(OPENSSL_VERSION_TEXT);
  j["wall_clock_s"] = m.wall_clock_s;
  auto notes = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.notes) notes[k] = v;
  j["notes"] = notes;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = files;
  return j.dump(2) + "\n";
}

}  // namespace isac
