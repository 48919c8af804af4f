#include <benchmark/benchmark.h>

#include "isac/ambiguity.hpp"
#include "isac/ci.hpp"
#include "isac/config.hpp"
#include "isac/convex_sub.hpp"
#include "isac/majorize.hpp"
#include "isac/model.hpp"
#include "isac/rng.hpp"
#include "isac/transforms.hpp"

using namespace isac;

namespace {

FreqWaveform random_frame(const GridDims& d, std::uint64_t seed) {
  Philox g(seed, Stream::trial);
  FreqWaveform x(d);
  for (auto& v : x.data) v = g.complex_normal(1.0);
  return x;
}

GridDims desk_dims() {
  const auto& s = desk_config().system;
  return {s.n_tx, s.n_sc, s.n_sym};
}

void BM_ToTime(benchmark::State& st) {
  const GridDims d = desk_dims();
  const FreqWaveform x = random_frame(d, 1);
  CVec w;
  for (auto _ : st) {
    to_time(d, x.data, w);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_ToTime);

void BM_AmbiguitySurface(benchmark::State& st) {
  const GridDims d = desk_dims();
  const FreqWaveform x = random_frame(d, 2);
  const CVec a = steering(0.0, d.n_tx, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(ambiguity_surface(x, a).chi.data());
}
BENCHMARK(BM_AmbiguitySurface);

void BM_Isl(benchmark::State& st) {
  const GridDims d = desk_dims();
  const FreqWaveform x = random_frame(d, 3);
  const CVec a = steering(0.0, d.n_tx, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(isl(x, a));
}
BENCHMARK(BM_Isl);

void BM_BuildSurrogate(benchmark::State& st) {
  const GridDims d = desk_dims();
  const FreqWaveform x = random_frame(d, 4);
  const CVec a = steering(0.0, d.n_tx, 0.5);
  for (auto _ : st) {
    const SurrogateState s = build_surrogate(x, a);
    benchmark::DoNotOptimize(surrogate_gradient(s).data());
  }
}
BENCHMARK(BM_BuildSurrogate);

void BM_XUpdate(benchmark::State& st) {
  const LabConfig cfg = desk_config();
  const auto ch = generate_channels(cfg.system, cfg.channel, 1);
  const auto sym = generate_symbols(cfg.system, 1);
  const CiSet ci = build_ci(ch, sym, cfg.system);
  const GridDims d = desk_dims();
  const CVec a = steering(cfg.scene.azimuth_rad(), d.n_tx, cfg.system.tx_spacing_wavelengths);
  const FreqWaveform m = random_frame(d, 5);
  XUpdateSolver solver(ci, a, cfg.system.modulus(), cfg.system.illum_cap());
  CVec x;
  for (auto _ : st) {
    solver.reset();
    benchmark::DoNotOptimize(solver.solve(m.data, 1.0, x).iterations);
  }
}
BENCHMARK(BM_XUpdate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
