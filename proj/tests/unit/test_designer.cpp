#include <gtest/gtest.h>

#include "isac/ambiguity.hpp"
#include "isac/designer.hpp"
#include "isac/error.hpp"
#include "isac/transforms.hpp"
#include "test_util.hpp"

using namespace isac;

namespace {

struct Tiny {
  LabConfig cfg = testutil::tiny_config();
  ChannelSet ch;
  SymbolGrid sym;
  CiSet ci;
  CVec a;
  explicit Tiny(std::uint64_t seed, int outer = 300) {
    cfg.solver.outer_max_iters = outer;
    cfg.solver.radar_only_max_iters = outer;
    ch = generate_channels(cfg.system, cfg.channel, seed);
    sym = generate_symbols(cfg.system, seed);
    ci = build_ci(ch, sym, cfg.system);
    a = steering(0.0, cfg.system.n_tx, cfg.system.tx_spacing_wavelengths);
  }
};

double z_objective(cd v, double r, cd z) { return std::norm(z - v) + std::pow(std::abs(z) - r, 2); }

void expect_constant_modulus(const FreqWaveform& x, double r0) {
  CVec w;
  to_time(x.dims, x.data, w);
  for (auto s : w) EXPECT_NEAR(std::abs(s), r0, 1e-12 * r0);
}

}  // namespace

TEST(Designer, ZUpdateMinimizesAgainstPolarGrid) {
  testutil::Gen g(70);
  for (int t = 0; t < 40; ++t) {
    const CVec v = g.cvec(1) * g.uniform(0.1, 2.0);
    RVec r(1);
    r[0] = g.uniform(-0.5, 2.0);
    const cd z = z_update(v, r)[0];
    double best = 1e300;
    for (int i = 0; i <= 400; ++i)
      for (int k = 0; k < 360; ++k)
        best = std::min(best, z_objective(v[0], r[0], std::polar(4.0 * i / 400, 2 * kPi * k / 360)));
    EXPECT_LE(z_objective(v[0], r[0], z), best + 1e-12);
  }
}

TEST(Designer, ZUpdateClampsAndHandlesZero) {
  CVec v(2);
  v << cd(0.3, 0.0), cd(0.0, 0.0);
  RVec r(2);
  r << -1.0, 0.8;
  const CVec z = z_update(v, r);
  EXPECT_EQ(z[0], cd(0.0, 0.0));
  EXPECT_EQ(z[1], cd(0.4, 0.0));
}

TEST(Designer, ConstantModulusNormalization) {
  testutil::Gen g(71);
  const GridDims d{2, 4, 2};
  FreqWaveform x = g.waveform(d);
  const FreqWaveform c = to_constant_modulus(x, 0.7);
  expect_constant_modulus(c, 0.7);
  EXPECT_LT(testutil::rel_err(to_constant_modulus(c, 0.7).data, c.data), 1e-13);
  // Phases survive the normalization.
  CVec w, wc;
  to_time(d, x.data, w);
  to_time(d, c.data, wc);
  for (Eigen::Index i = 0; i < w.size(); ++i) EXPECT_NEAR(std::arg(wc[i] / w[i]), 0.0, 1e-12);
  const FreqWaveform z = to_constant_modulus(FreqWaveform(d), 0.5);
  to_time(d, z.data, w);
  for (auto s : w) EXPECT_EQ(s, cd(0.5, 0.0));
}

TEST(Designer, SlpTraceIsMonotoneFeasibleAndConstantModulus) {
  for (std::uint64_t seed : {1, 2, 3}) {
    Tiny in(seed);
    const auto res = design_slp_waveform(in.cfg, in.ci, 0.0);
    const auto& rows = res.trace.rows;
    ASSERT_FALSE(rows.empty());
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].isl, rows[i - 1].isl * (1 + 1e-8) + 1e-20);
    const double r0 = in.cfg.system.modulus();
    expect_constant_modulus(res.x, r0);
    EXPECT_GE(ci_margin_normalized(res.x.data, in.ci), -1e-4 * r0);
    EXPECT_GE(illumination_power(res.x, in.a), in.cfg.system.min_illum_power_w * (1 - 1e-4));
    EXPECT_NEAR(rows.back().isl, isl(res.x, in.a), 1e-12 * rows.back().isl);
    EXPECT_LT(rows.back().isl, rows.front().isl);
  }
}

TEST(Designer, ConvergedDesignIsNearFixedPoint) {
  // Two users at 12 dB keep the optimum away from a flat grid.
  Tiny in(4, 3000);
  in.cfg.system.n_users = 2;
  in.cfg.system.qos_snr_linear = {db_to_linear(12.0)};
  in.ch = generate_channels(in.cfg.system, in.cfg.channel, 4);
  in.sym = generate_symbols(in.cfg.system, 4);
  in.ci = build_ci(in.ch, in.sym, in.cfg.system);
  const auto first = design_slp_waveform(in.cfg, in.ci, 0.0);
  ASSERT_EQ(first.trace.status, DesignStatus::converged);
  const auto again = design_slp_waveform(in.cfg, in.ci, 0.0, &first.x);
  ASSERT_GT(first.trace.rows.back().normalized_isl_db, -100.0);
  EXPECT_EQ(again.trace.status, DesignStatus::converged);
  EXPECT_LE(again.trace.rows.size(), 2u);
}

TEST(Designer, CommOnlyMarginDominatesSlp) {
  Tiny in(5);
  const FreqWaveform comm = design_comm_only(in.cfg.system, in.cfg.solver, in.ci);
  const auto slp = design_slp_waveform(in.cfg, in.ci, 0.0);
  EXPECT_GE(ci_margin(comm.data, in.ci), ci_margin(slp.x.data, in.ci) - 1e-9 * in.ci.gamma[0]);
}

TEST(Designer, RadarOnlyIsExactConstantModulusAndMonotone) {
  Tiny in(6);
  testutil::Gen g(72);
  const auto res = design_radar_only(in.cfg, 0.0, g.waveform(in.cfg.system.dims()));
  expect_constant_modulus(res.x, in.cfg.system.modulus());
  const auto& rows = res.trace.rows;
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].isl, rows[i - 1].isl * (1 + 1e-8));
  EXPECT_LT(rows.back().normalized_isl_db, rows.front().normalized_isl_db);
}

TEST(Designer, RadarOnlyBeatsSlp) {
  Tiny in(7);
  const auto slp = design_slp_waveform(in.cfg, in.ci, 0.0);
  const auto rad = design_radar_only(in.cfg, 0.0, slp.x);
  EXPECT_LE(isl(rad.x, in.a), isl(slp.x, in.a) * (1 + 1e-9));
}

TEST(Designer, UnreachableQosIsInfeasible) {
  Tiny in(8);
  in.cfg.system.qos_snr_linear = {db_to_linear(90.0)};
  const CiSet ci = build_ci(in.ch, in.sym, in.cfg.system);
  try {
    design_slp_waveform(in.cfg, ci, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infeasible);
  }
}

TEST(Designer, FlatStartExitsImmediately) {
  // A Zadoff-Chu sample sequence on every antenna has a flat spectrum toward broadside.
  Tiny in(9);
  const GridDims d = in.cfg.system.dims();
  CVec w(d.total());
  for (int m = 0; m < d.n_sym; ++m)
    for (int p = 0; p < d.n_sc; ++p)
      for (int i = 0; i < d.n_tx; ++i)
        w[d.offset(p, m) + i] = in.cfg.system.modulus() * std::polar(1.0, -kPi * p * p / d.n_sc);
  FreqWaveform x(d);
  to_freq(d, w, x.data);
  const auto res = design_radar_only(in.cfg, 0.0, x);
  EXPECT_EQ(res.trace.status, DesignStatus::converged);
  EXPECT_EQ(res.trace.rows.size(), 1u);
}

TEST(Designer, StatusNames) {
  EXPECT_EQ(to_string(DesignStatus::outer_cap), "no_progress");
  EXPECT_EQ(to_string(DesignStatus::converged), "converged");
}
