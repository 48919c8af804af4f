#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>

#include "isac/error.hpp"
#include "isac/io.hpp"
#include "test_util.hpp"

using namespace isac;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("isac_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Io, Sha256KnownAnswers) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Io, WaveformCsvRoundTripIsExact) {
  testutil::Gen g(100);
  const GridDims d{3, 4, 2};
  const FreqWaveform x = g.waveform(d);
  const std::string csv = waveform_csv(x);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,n,i,re,im");
  EXPECT_EQ(parse_waveform_csv(csv, d).data, x.data);
}

TEST(Io, WaveformBinaryRoundTripAndHeader) {
  testutil::Gen g(101);
  const GridDims d{2, 8, 3};
  const FreqWaveform x = g.waveform(d);
  const std::string bin = waveform_binary(x);
  ASSERT_EQ(bin.size(), 16u + 16u * std::size_t(d.total()));
  std::uint32_t hdr[4];
  std::memcpy(hdr, bin.data(), 16);
  EXPECT_EQ(hdr[0], kWaveformMagic);
  EXPECT_EQ(hdr[1], 3u);
  EXPECT_EQ(hdr[2], 8u);
  EXPECT_EQ(hdr[3], 2u);
  const FreqWaveform back = parse_waveform_binary(bin);
  EXPECT_EQ(back.dims, d);
  EXPECT_EQ(back.data, x.data);
}

TEST(Io, MalformedInputsRaise) {
  EXPECT_THROW(parse_waveform_binary("short"), Error);
  std::string bad(16, '\0');
  EXPECT_THROW(parse_waveform_binary(bad), Error);
  EXPECT_THROW(parse_waveform_csv("m,n,i,re,im\n0,0,0,1\n", {1, 1, 1}), Error);
}

TEST(Io, SurfaceCsvReferencesMainlobe) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = 10.0;
  m(1, 1) = 1.0;
  const std::string csv = surface_csv(m);
  EXPECT_NE(csv.find("l,nu,re,im,mag_db"), std::string::npos);
  EXPECT_NE(csv.find("1,1,1,0,-20"), std::string::npos);
  EXPECT_NE(csv.find("-300"), std::string::npos);
}

TEST(Io, TableHeaders) {
  RocCurve c{"proposed", {RocPoint{0.1, 1.0, 0.1, 0.09, 0.11, 0.5, 0.4, 0.6}}};
  const std::string roc = roc_csv({c});
  EXPECT_EQ(roc.substr(0, roc.find('\n')), "design,pfa_nominal,threshold,pfa,pfa_half,pd,pd_half,pd_lo,pd_hi");
  const std::string rmse = rmse_csv({RmseCurve{"x", {RmsePoint{}}}});
  EXPECT_EQ(rmse.substr(0, rmse.find('\n')),
            "design,snr_db,range_rmse_m,range_half_m,velocity_rmse_mps,velocity_half_mps,range_rmse_bins,velocity_rmse_bins");
}

TEST(Io, ArtifactDirRecordsDigestsAndDiscards) {
  const fs::path p = scratch_dir("art");
  {
    ArtifactDir dir(p);
    dir.write("a.csv", "abc");
    dir.write("b.csv", "");
    const auto files = dir.files();
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(files[0].sha256, sha256_hex("abc"));
    EXPECT_EQ(files[0].bytes, 3u);
    EXPECT_EQ(testutil::read_file((p / "a.csv").string()), "abc");
    dir.discard();
  }
  EXPECT_FALSE(fs::exists(p));
}

TEST(Io, DiscardKeepsPreexistingDirectory) {
  const fs::path p = scratch_dir("keep");
  fs::create_directories(p);
  {
    std::ofstream(p / "other.txt") << "x";
    ArtifactDir dir(p);
    dir.write("a.csv", "1");
    dir.discard();
  }
  EXPECT_TRUE(fs::exists(p / "other.txt"));
  EXPECT_FALSE(fs::exists(p / "a.csv"));
  fs::remove_all(p);
}

TEST(Io, ManifestFields) {
  ManifestInfo m;
  m.kind = "design";
  m.config_hash = sha256_hex("cfg");
  m.seeds = {1, 2};
  m.threads = 3;
  m.notes = {{"detector", "clairvoyant_cell"}};
  m.files = {{"a.csv", sha256_hex("abc"), 3}};
  const auto j = nlohmann::json::parse(manifest_json(m));
  EXPECT_EQ(j["schema_version"], kCsvSchemaVersion);
  EXPECT_EQ(j["kind"], "design");
  EXPECT_EQ(j["seeds"].size(), 2u);
  EXPECT_EQ(j["threads"], 3);
  EXPECT_EQ(j["files"][0]["sha256"], sha256_hex("abc"));
  EXPECT_TRUE(j["versions"].contains("eigen"));
  EXPECT_TRUE(j["versions"].contains("fftw"));
}
