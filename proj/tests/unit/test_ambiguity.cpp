#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "isac/ambiguity.hpp"
#include "isac/error.hpp"
#include "isac/transforms.hpp"
#include "test_util.hpp"

using namespace isac;

TEST(Ambiguity, ConstantGridIsThumbtack) {
  const RMat p = RMat::Constant(4, 2, 0.7);
  const auto s = ambiguity_surface(p);
  EXPECT_NEAR(s.chi(0, 0).real(), 0.7 * 8, 1e-14);
  for (int l = 0; l < 4; ++l)
    for (int nu = 0; nu < 2; ++nu) {
      if (l || nu) {
        EXPECT_LT(std::abs(s.chi(l, nu)), 1e-14);
      }
    }
  EXPECT_EQ(isl(p), 0.0);
  EXPECT_EQ(normalized_isl_db(p), kDbFloor);
}

TEST(Ambiguity, ImpulseGridIsFlat) {
  RMat p = RMat::Zero(4, 2);
  p(0, 0) = 1.0;
  const auto s = ambiguity_surface(p);
  for (int l = 0; l < 4; ++l)
    for (int nu = 0; nu < 2; ++nu) EXPECT_NEAR(std::abs(s.chi(l, nu) - cd(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(isl(p), 7.0, 1e-14);
  EXPECT_NEAR(normalized_isl_db(p), 10 * std::log10(7.0), 1e-12);
}

TEST(Ambiguity, SignConventionPerAxis) {
  // p = δ at (n, m) = (1, 1): chi(l, ν) = e^{−j2πl/N_c} e^{+j2πν/N_s}.
  RMat p = RMat::Zero(4, 4);
  p(1, 1) = 1.0;
  const auto s = ambiguity_surface(p);
  EXPECT_NEAR(std::abs(s.chi(1, 0) - std::polar(1.0, -3.141592653589793 / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.chi(0, 1) - std::polar(1.0, 3.141592653589793 / 2)), 0.0, 1e-15);
}

TEST(Ambiguity, MatchesDenseQuadraticForm) {
  testutil::Gen g(10);
  const GridDims d{2, 4, 2};
  for (int t = 0; t < 20; ++t) {
    const FreqWaveform x = g.waveform(d);
    const CVec a = g.unit_steering(2);
    EXPECT_LT(testutil::rel_err(ambiguity_surface(x, a).chi, oracle::chi_surface(d, x.data, a)), 1e-12);
  }
}

TEST(Ambiguity, IslPathsAgree) {
  testutil::Gen g(11);
  for (int t = 0; t < 30; ++t) {
    const GridDims d{g.integer(1, 3), g.integer(1, 8), g.integer(1, 4)};
    const FreqWaveform x = g.waveform(d);
    const CVec a = g.unit_steering(d.n_tx);
    const RMat p = power_grid(x, a);
    const double closed = d.cells() * p.cwiseAbs2().sum() - p.sum() * p.sum();
    EXPECT_LT(testutil::rel_err(isl(x, a), closed), 1e-10);
    EXPECT_LT(testutil::rel_err(isl_from_surface(ambiguity_surface(x, a)), closed), 1e-10);
  }
}

TEST(Ambiguity, ParsevalOverSurface) {
  testutil::Gen g(12);
  const RMat p = g.rvec(24, 0.0, 2.0).reshaped(6, 4);
  const auto s = ambiguity_surface(p);
  EXPECT_NEAR(s.chi.cwiseAbs2().sum(), 24 * p.cwiseAbs2().sum(), 1e-10 * s.chi.cwiseAbs2().sum());
}

TEST(Ambiguity, IslIgnoresPerCellPhase) {
  testutil::Gen g(13);
  const GridDims d{3, 8, 2};
  const CVec a = g.unit_steering(3);
  FreqWaveform x = g.waveform(d);
  const double before = isl(x, a);
  for (Eigen::Index c = 0; c < d.cells(); ++c)
    x.data.segment(c * d.n_tx, d.n_tx) *= std::polar(1.0, g.uniform(0, 6.283185307179586));
  EXPECT_LT(testutil::rel_err(isl(x, a), before), 1e-12);
}

TEST(Ambiguity, IslZeroOnlyForFlatGrids) {
  testutil::Gen g(14);
  for (int t = 0; t < 50; ++t) {
    RMat p = RMat::Constant(4, 3, g.uniform(0.1, 2.0));
    EXPECT_LT(isl(p), 1e-12);
    p(g.integer(0, 3), g.integer(0, 2)) += g.uniform(1e-3, 1.0);
    EXPECT_GT(isl(p), 0.0);
  }
}

TEST(Ambiguity, DegenerateMainlobeThrows) {
  try {
    normalized_isl_db(RMat::Zero(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_mainlobe);
  }
}

TEST(Ambiguity, SlicesAreSurfaceCuts) {
  testutil::Gen g(15);
  const RMat p = g.rvec(32, 0.0, 1.0).reshaped(8, 4);
  const auto s = ambiguity_surface(p);
  const auto z = zero_slices(s);
  ASSERT_EQ(z.zero_doppler.size(), 8);
  ASSERT_EQ(z.zero_delay.size(), 4);
  EXPECT_EQ(z.zero_doppler[0], 0.0);
  EXPECT_EQ(z.zero_delay[0], 0.0);
  const double ref = std::abs(s.chi(0, 0));
  for (int l = 0; l < 8; ++l) EXPECT_NEAR(z.zero_doppler[l], 20 * std::log10(std::abs(s.chi(l, 0)) / ref), 1e-9);
  for (int nu = 0; nu < 4; ++nu) EXPECT_NEAR(z.zero_delay[nu], 20 * std::log10(std::abs(s.chi(0, nu)) / ref), 1e-9);
}

TEST(Ambiguity, MagDbFloor) {
  EXPECT_EQ(mag_db(0.0, 1.0), kDbFloor);
  EXPECT_NEAR(mag_db(0.1, 1.0), -20.0, 1e-12);
}
