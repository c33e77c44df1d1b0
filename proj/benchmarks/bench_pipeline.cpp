#include <benchmark/benchmark.h>

#include <vector>

#include "wmi/fine.hpp"
#include "wmi/image_ops.hpp"
#include "wmi/mser.hpp"
#include "wmi/phantom.hpp"
#include "wmi/pipeline.hpp"

namespace {

const wmi::PhantomStack& stack() {
  static const wmi::PhantomStack s = wmi::generate_phantom(wmi::PhantomConfig::with_random_lesions(7));
  return s;
}

void BM_PeronaMalik(benchmark::State& state) {
  const auto& slice = stack().slices[5];
  for (auto _ : state) benchmark::DoNotOptimize(wmi::perona_malik(slice));
}
BENCHMARK(BM_PeronaMalik);

void BM_Mser(benchmark::State& state) {
  const auto pre = wmi::segregate_background(wmi::perona_malik(stack().slices[5]));
  const auto params = wmi::MserParams::defaults_for(pre.cleaned.width(), pre.cleaned.height());
  for (auto _ : state) benchmark::DoNotOptimize(wmi::detect_dark_regions(pre.cleaned, params));
}
BENCHMARK(BM_Mser);

void BM_ConnectedComponents(benchmark::State& state) {
  const auto pre = wmi::segregate_background(stack().slices[5]);
  for (auto _ : state) benchmark::DoNotOptimize(wmi::connected_components_8(pre.foreground));
}
BENCHMARK(BM_ConnectedComponents);

void BM_CoarseSlice(benchmark::State& state) {
  const wmi::PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(wmi::coarse_detect_slice(stack().slices[5], cfg, 42));
}
BENCHMARK(BM_CoarseSlice)->Unit(benchmark::kMillisecond);

void BM_FineStage(benchmark::State& state) {
  const wmi::PipelineConfig cfg;
  std::vector<std::vector<wmi::CandidateObject>> coarse;
  for (std::size_t s = 0; s < stack().slices.size(); ++s) {
    coarse.push_back(wmi::coarse_detect_slice(stack().slices[s], cfg, wmi::slice_seed(42, s)).coarse.candidates);
  }
  for (auto _ : state) benchmark::DoNotOptimize(wmi::fine_validate(coarse, cfg.fine));
}
BENCHMARK(BM_FineStage);

void BM_Volume(benchmark::State& state) {
  wmi::PipelineConfig cfg;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wmi::detect_volume(stack().slices, cfg));
}
BENCHMARK(BM_Volume)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
