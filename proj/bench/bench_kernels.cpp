// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <numbers>

#include "susy/kernels.hpp"
#include "susy/potential.hpp"
#include "susy/schrodinger.hpp"

using namespace susy;

namespace {

std::vector<cplx> axis_points(std::size_t n) {
  std::vector<cplx> s;
  for (std::size_t i = 0; i < n; ++i) s.emplace_back(0.05 + 4.95 * i / (n - 1), 0.0);
  return s;
}

const PotentialSpec& soliton() {
  static const PotentialSpec v = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4));
  return v;
}

void BM_JostBatch(benchmark::State& st) {
  const JostEngine e(PotentialSpec::sech_well(2));
  const auto s = axis_points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(jost_batch(e, s));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_JostBatchSerial(benchmark::State& st) {
  const JostEngine e(PotentialSpec::sech_well(2));
  const auto s = axis_points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(jost_batch_serial(e, s));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SamplePotential(benchmark::State& st) {
  const auto grid = uniform_grid(0.0, 25.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sample_potential(soliton(), grid));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SamplePotentialSerial(benchmark::State& st) {
  const auto grid = uniform_grid(0.0, 25.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sample_potential_serial(soliton(), grid));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_JostBatch)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JostBatchSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePotential)->Arg(4000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SamplePotentialSerial)->Arg(4000)->Arg(100000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
