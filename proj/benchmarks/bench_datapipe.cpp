#include <benchmark/benchmark.h>

#include <sstream>

#include "trafficast/pipeline.hpp"
#include "trafficast/synthetic.hpp"

using namespace trafficast;

namespace {

const std::vector<RawRecord>& full_series() {
  static const auto rows = [] {
    std::ostringstream out;
    write_csv(out, generate_metro_like(SyntheticConfig{}));
    std::istringstream in(out.str());
    return parse_csv(in).records;
  }();
  return rows;
}

void BM_ParseCsv(benchmark::State& state) {
  std::ostringstream out;
  write_csv(out, generate_metro_like(SyntheticConfig{}));
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_csv(in));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseCsv)->Unit(benchmark::kMillisecond);

void BM_MakeWindows(benchmark::State& state) {
  const auto frame = encode(full_series(), FeatureSet::all);
  const WindowConfig cfg{static_cast<std::size_t>(state.range(0)), 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(make_windows(frame, cfg));
}
BENCHMARK(BM_MakeWindows)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Prepare(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.feature_set = state.range(0) == 0 ? FeatureSet::all : FeatureSet::reduced;
  for (auto _ : state) benchmark::DoNotOptimize(prepare(full_series(), cfg));
}
BENCHMARK(BM_Prepare)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
