#include <benchmark/benchmark.h>

#include "ribaucour/congruence.hpp"
#include "ribaucour/duality.hpp"

using namespace ribaucour;

namespace {

Execution mode(const benchmark::State& st) { return st.range(1) ? Execution::parallel : Execution::serial; }

void BM_SamplePatch(benchmark::State& st) {
  const auto patch = RibaucourPatch::from_strings("z", "exp(z)");
  const Grid grid(Domain{-1, 1, -1, 1}, int(st.range(0)), int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sample_patch(patch, grid, mode(st)));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(grid.size()));
}

void BM_VerifyPatch(benchmark::State& st) {
  const auto patch = RibaucourPatch::from_strings("z^2", "z + 2");
  const Grid grid(Domain{-1, 1, -1, 1}, int(st.range(0)), int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(verify_patch(patch, grid, {}, mode(st)));
}

void BM_VerifyDual(benchmark::State& st) {
  const DualPair pair = make_dual(RibaucourPatch::from_strings("z", "exp(z)"));
  const Grid grid(Domain{-1, 1, -1, 1}, int(st.range(0)), int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(verify_dual(pair, grid, {}, mode(st)));
}

void BM_IntegrateCatenoid(benchmark::State& st) {
  const Grid grid(Domain{-1, 1, -1, 1}, int(st.range(0)), int(st.range(0)));
  const AnalyticExample ex(catenoid_patch(), grid);
  const int c = (grid.nu - 1) / 2;
  const CongruenceState init = ex.at(grid.u(c), grid.v(c)).state;
  for (auto _ : st) benchmark::DoNotOptimize(integrate_system(ex.patch(), init, c, c, ex.constants(), grid, mode(st)));
}

}  // namespace

BENCHMARK(BM_SamplePatch)->ArgsProduct({{41, 161}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyPatch)->ArgsProduct({{41, 81}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyDual)->ArgsProduct({{41, 81}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateCatenoid)->ArgsProduct({{101, 201}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
