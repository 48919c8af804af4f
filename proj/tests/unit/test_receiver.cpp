#include <gtest/gtest.h>

#include "isac/ambiguity.hpp"
#include "isac/receiver.hpp"
#include "isac/transforms.hpp"
#include "test_util.hpp"

using namespace isac;

namespace {

CMat random_grid(testutil::Gen& g, int nc, int ns) {
  CMat m(nc, ns);
  for (int j = 0; j < ns; ++j) m.col(j) = g.cvec(nc);
  return m;
}

}  // namespace

TEST(Receiver, BeamformedGridLayout) {
  testutil::Gen g(80);
  const GridDims d{3, 4, 2};
  const FreqWaveform x = g.waveform(d);
  const CVec a = g.unit_steering(3);
  const CMat xb = beamformed_grid(x, a);
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(std::abs(xb(n, m) - a.dot(x.cell(n, m))), 0.0, 1e-14);
}

TEST(Receiver, EchoAppliesDelayAndDopplerPhases) {
  testutil::Gen g(81);
  const CMat xb = random_grid(g, 8, 4);
  const cd gain(0.3, -0.2);
  const CMat y = echo_signal(xb, {{gain, 3, 1}});
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 8; ++n) {
      const cd want = gain * xb(n, m) * std::polar(1.0, -2 * kPi * 3 * n / 8) * std::polar(1.0, 2 * kPi * m / 4);
      EXPECT_NEAR(std::abs(y(n, m) - want), 0.0, 1e-14);
    }
  EXPECT_EQ(echo_signal(xb, {}).norm(), 0.0);
}

TEST(Receiver, UnitGridPeaksAtSqrtCells) {
  const CMat ones = CMat::Ones(8, 4);
  const CMat chi = matched_rdmap(ones, ones);
  EXPECT_NEAR(std::abs(chi(0, 0)), std::sqrt(32.0), 1e-12);
  EXPECT_NEAR(chi.norm(), std::sqrt(32.0), 1e-12);
  EXPECT_EQ(matched_rdmap(CMat::Zero(8, 4), ones).norm(), 0.0);
}

TEST(Receiver, MatchedMapIsShiftedAmbiguity) {
  testutil::Gen g(82);
  const GridDims d{2, 8, 4};
  const FreqWaveform x = g.waveform(d);
  const CVec a = g.unit_steering(2);
  const CMat xb = beamformed_grid(x, a);
  const int l0 = 3, nu0 = 2;
  const CMat chi = matched_rdmap(echo_signal(xb, {{1.0, l0, nu0}}), xb);
  const auto amb = ambiguity_surface(x, a);
  for (int l = 0; l < 8; ++l)
    for (int nu = 0; nu < 4; ++nu)
      EXPECT_NEAR(std::abs(chi((l + l0) % 8, (nu + nu0) % 4)), std::abs(amb.chi(l, nu)) / std::sqrt(32.0), 1e-11);
}

TEST(Receiver, ReciprocalFilterGivesDelta) {
  testutil::Gen g(83);
  const CMat xb = random_grid(g, 8, 4);
  const cd gain(0.5, 0.25);
  const CMat chi = reciprocal_rdmap(echo_signal(xb, {{gain, 5, 3}}), xb, 0.0);
  for (int l = 0; l < 8; ++l)
    for (int nu = 0; nu < 4; ++nu) {
      const cd want = (l == 5 && nu == 3) ? gain * std::sqrt(32.0) : cd(0.0, 0.0);
      EXPECT_NEAR(std::abs(chi(l, nu) - want), 0.0, 1e-12);
    }
}

TEST(Receiver, ReciprocalFloorGuardsNulls) {
  CMat xb = CMat::Ones(4, 2);
  xb(1, 0) = 0.0;
  const CMat y = CMat::Ones(4, 2);
  const CMat chi = reciprocal_rdmap(y, xb, 1e-2);
  EXPECT_TRUE(chi.allFinite());
  // The null cell is divided by 1e-2 with the phase of 1.
  CMat expect_grid = CMat::Ones(4, 2);
  expect_grid(1, 0) = 100.0;
  EXPECT_LT(testutil::rel_err(chi, matched_rdmap(expect_grid, CMat::Ones(4, 2))), 1e-12);
}

TEST(Receiver, MapsAreLinearAndEnergyPreserving) {
  testutil::Gen g(84);
  const CMat xb = random_grid(g, 8, 4);
  const CMat y1 = random_grid(g, 8, 4);
  const CMat y2 = random_grid(g, 8, 4);
  const cd c(0.7, -1.3);
  EXPECT_LT(testutil::rel_err(matched_rdmap(y1 + c * y2, xb), CMat(matched_rdmap(y1, xb) + c * matched_rdmap(y2, xb))),
            1e-12);
  EXPECT_NEAR(matched_rdmap(y1, xb).squaredNorm(), y1.cwiseProduct(xb.conjugate()).squaredNorm(),
              1e-10 * y1.squaredNorm());
}

TEST(Receiver, PeakSearchTieBreakAndExclusion) {
  CMat chi = CMat::Zero(4, 3);
  chi(2, 1) = 5.0;
  chi(1, 2) = 5.0;
  chi(3, 0) = 4.0;
  SearchWindow w = full_window(chi);
  EXPECT_EQ(estimate_peak(chi, w), std::make_pair(1, 2));
  w.excluded = {{1, 2}, {2, 1}};
  EXPECT_EQ(estimate_peak(chi, w), std::make_pair(3, 0));
  SearchWindow sub{0, 2, 0, 3, {}};
  EXPECT_EQ(estimate_peak(chi, sub), std::make_pair(1, 2));
}

TEST(Receiver, NoiseVarianceAndDeterminism) {
  CMat y = CMat::Zero(64, 64);
  Philox rng(3, Stream::noise, 0);
  add_noise(y, 0.25, rng);
  EXPECT_NEAR(y.squaredNorm() / y.size(), 0.25, 0.01);
  CMat y2 = CMat::Zero(64, 64);
  Philox rng2(3, Stream::noise, 0);
  add_noise(y2, 0.25, rng2);
  EXPECT_EQ(y, y2);
}

TEST(Receiver, SynthEchoIsSeedDeterministic) {
  const LabConfig cfg = desk_config();
  testutil::Gen g(85);
  const FreqWaveform x = g.waveform(cfg.system.dims());
  EXPECT_EQ(synth_echo(x, cfg.scene, cfg.system, 7), synth_echo(x, cfg.scene, cfg.system, 7));
  EXPECT_NE(synth_echo(x, cfg.scene, cfg.system, 7), synth_echo(x, cfg.scene, cfg.system, 8));
}
