#include <gtest/gtest.h>

#include <limits>

#include "isac/detection.hpp"
#include "isac/model.hpp"
#include "isac/transforms.hpp"
#include "test_util.hpp"

using namespace isac;

namespace {

struct Bench {
  LabConfig cfg = desk_config();
  TwoTargetScene scene;
  std::vector<DesignUnderTest> designs;
  Bench() {
    scene = two_target_scene(cfg);
    testutil::Gen g(90);
    const FreqWaveform x = g.waveform(cfg.system.dims());
    designs.push_back({"matched", x, RxFilter::matched});
    designs.push_back({"reciprocal", x, RxFilter::reciprocal});
  }
};

}  // namespace

TEST(Detection, WilsonKnownValues) {
  const auto [lo0, hi0] = wilson_interval(0, 10);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_NEAR(hi0, 0.27753279, 1e-7);
  const auto [lo, hi] = wilson_interval(5, 10);
  EXPECT_NEAR(lo, 0.23659309, 1e-7);
  EXPECT_NEAR(hi, 0.76340691, 1e-7);
  const auto [lo1, hi1] = wilson_interval(10, 10);
  EXPECT_NEAR(lo1, 1.0 - hi0, 1e-12);
  EXPECT_DOUBLE_EQ(hi1, 1.0);
}

TEST(Detection, WilsonContainsEstimate) {
  testutil::Gen g(91);
  for (int t = 0; t < 200; ++t) {
    const long n = g.integer(1, 5000);
    const long k = g.integer(0, int(n));
    const auto [lo, hi] = wilson_interval(k, n);
    EXPECT_LE(lo, double(k) / n + 1e-15);
    EXPECT_GE(hi, double(k) / n - 1e-15);
    EXPECT_GE(lo, 0.0);
    EXPECT_LE(hi, 1.0);
  }
}

TEST(Detection, NoiseForSnrDefinition) {
  const CMat xb = CMat::Constant(4, 2, cd(2.0, 0.0));
  EXPECT_NEAR(noise_for_snr(xb, 0.5, 10.0), 0.25 * 4.0 / 10.0, 1e-15);
}

TEST(Detection, SceneFromDeskConfig) {
  const LabConfig cfg = desk_config();
  const auto s = two_target_scene(cfg);
  EXPECT_EQ(s.strong.range_bin, cfg.scene.targets[0].range_bin);
  EXPECT_EQ(s.weak.doppler_bin, cfg.scene.targets[1].doppler_bin);
  EXPECT_GT(std::abs(s.strong.gain), std::abs(s.weak.gain));
}

TEST(Detection, NullHypothesisGivesPdNearPfa) {
  Bench s;
  // Noise is set relative to the weak gain: shrinking it by 1e-9 and the SNR by 180 dB keeps the
  // noise level while the weak echo vanishes, so H0 and H1 share a distribution.
  s.scene.weak.gain *= 1e-9;
  MonteCarloOptions o;
  o.trials = 4000;
  const auto curves = detect_roc(s.designs, s.scene, -180.0, {0.05, 0.2}, o);
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      EXPECT_NEAR(p.pfa, p.pfa_nominal, 1.0 / o.trials + 1e-12);
      EXPECT_GT(p.pd, p.pfa_nominal - 4 * std::sqrt(p.pfa_nominal / o.trials));
      EXPECT_LT(p.pd, p.pfa_nominal + 4 * std::sqrt(p.pfa_nominal / o.trials));
    }
}

TEST(Detection, HighSnrDetectsAlways) {
  Bench s;
  MonteCarloOptions o;
  o.trials = 200;
  const auto curves = detect_roc({s.designs[1]}, s.scene, 60.0, {1e-2}, o);
  EXPECT_EQ(curves[0].points[0].pd, 1.0);
}

TEST(Detection, RocIsThreadDeterministic) {
  Bench s;
  MonteCarloOptions o;
  o.trials = 300;
  o.threads = 1;
  const auto a = detect_roc(s.designs, s.scene, -5.0, {0.01, 0.1}, o);
  o.threads = 3;
  const auto b = detect_roc(s.designs, s.scene, -5.0, {0.01, 0.1}, o);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].points.size(); ++j) {
      EXPECT_EQ(a[i].points[j].threshold, b[i].points[j].threshold);
      EXPECT_EQ(a[i].points[j].pd, b[i].points[j].pd);
    }
}

TEST(Detection, CfarStatisticIsScaleFree) {
  Bench s;
  MonteCarloOptions o;
  o.trials = 200;
  o.detector = Detector::ca_cfar;
  const auto a = detect_roc({s.designs[0]}, s.scene, -5.0, {0.1}, o);
  s.designs[0].x.data *= 3.0;
  const auto b = detect_roc({s.designs[0]}, s.scene, -5.0, {0.1}, o);
  EXPECT_NEAR(a[0].points[0].threshold, b[0].points[0].threshold, 1e-9 * a[0].points[0].threshold);
  EXPECT_EQ(a[0].points[0].pd, b[0].points[0].pd);
}

TEST(Detection, TooFewTrialsRejected) {
  Bench s;
  MonteCarloOptions o;
  o.trials = 10;
  EXPECT_THROW(detect_roc(s.designs, s.scene, 0.0, {0.1}, o), std::exception);
}

TEST(Detection, NoiselessRmseIsZeroForReciprocalFilter) {
  Bench s;
  MonteCarloOptions o;
  o.trials = 50;
  const auto c = rmse_curve({s.designs[1]}, s.scene, s.cfg.system, {std::numeric_limits<double>::infinity()}, o);
  EXPECT_EQ(c[0].points[0].range_rmse_m, 0.0);
  EXPECT_EQ(c[0].points[0].velocity_rmse_mps, 0.0);
}

TEST(Detection, RmseUsesBinWidths) {
  Bench s;
  MonteCarloOptions o;
  o.trials = 100;
  const auto c = rmse_curve({s.designs[0]}, s.scene, s.cfg.system, {-20.0}, o);
  const auto& p = c[0].points[0];
  EXPECT_NEAR(p.range_rmse_m, p.range_rmse_bins * range_bin_m(s.cfg.system), 1e-9 * (1 + p.range_rmse_m));
  EXPECT_NEAR(p.velocity_rmse_mps, p.velocity_rmse_bins * velocity_bin_mps(s.cfg.system), 1e-9 * (1 + p.velocity_rmse_mps));
  EXPECT_LE(p.range_lo_m, p.range_rmse_m);
  EXPECT_GE(p.range_hi_m, p.range_rmse_m);
  // Circular errors cannot exceed half the grid.
  EXPECT_LE(p.range_rmse_bins, s.cfg.system.n_sc / 2.0);
}
