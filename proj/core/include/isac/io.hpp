#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isac/ambiguity.hpp"
#include "isac/designer.hpp"
#include "isac/detection.hpp"
#include "isac/types.hpp"

namespace isac {

inline constexpr int kCsvSchemaVersion = 1;
/// "ISWF" little-endian.
inline constexpr std::uint32_t kWaveformMagic = 0x46575349u;

/// Columns m,n,i,re,im with %.17g values.
std::string waveform_csv(const FreqWaveform& x);
FreqWaveform parse_waveform_csv(std::string_view text, const GridDims& dims);
/// 16-byte header (magic, N_s, N_c, N_t as uint32) followed by re/im float64 pairs in flattening order.
std::string waveform_binary(const FreqWaveform& x);
FreqWaveform parse_waveform_binary(std::string_view bytes);

/// Columns l,nu,re,im,mag_db; mag_db is relative to |map(0,0)| when `ref` ≤ 0, otherwise to `ref`.
std::string surface_csv(const CMat& map, double ref = 0.0);
/// Columns axis,index,mag_db for the zero-Doppler and zero-delay cuts.
std::string slices_csv(const ZeroSlices& s);
std::string trace_csv(const ConvergenceTrace& t);
/// Columns design,pfa_nominal,threshold,pfa,pfa_half,pd,pd_half,pd_lo,pd_hi.
std::string roc_csv(const std::vector<RocCurve>& curves);
/// Columns design,snr_db,range_rmse_m,range_half_m,velocity_rmse_mps,velocity_half_mps,range_rmse_bins,velocity_rmse_bins.
std::string rmse_csv(const std::vector<RmseCurve>& curves);

std::string sha256_hex(std::string_view data);

struct FileRecord {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Output directory that remembers what it wrote so a failed run can remove its partial artifacts.
class ArtifactDir {
 public:
  explicit ArtifactDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  void write(const std::string& name, const std::string& content);
  /// Removes every file written so far, and the directory if this object created it and it is empty.
  void discard();
  std::vector<FileRecord> files() const;

 private:
  std::filesystem::path dir_;
  bool created_ = false;
  mutable std::mutex mu_;
  std::vector<FileRecord> files_;
};

struct ManifestInfo {
  std::string kind;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  int threads = 1;
  double wall_clock_s = 0.0;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<FileRecord> files;
};

std::string manifest_json(const ManifestInfo& m);
std::string library_version();

}  // namespace isac
