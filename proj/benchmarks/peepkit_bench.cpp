// SPDX-License-Identifier: Apache-2.0
#include <string>

#include <benchmark/benchmark.h>

#include "peepkit/classifier.hpp"
#include "peepkit/synth.hpp"
#include "peepkit/zoo.hpp"

namespace {

using namespace peepkit;

void BM_AggregateStats(benchmark::State& state) {
  const ArchitectureSpec arch = load_zoo_model("DenseNet-121");
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_stats(arch));
}
BENCHMARK(BM_AggregateStats);

void BM_SynthFingerprint(benchmark::State& state) {
  const ArchitectureSpec arch = load_zoo_model("MobileNet-V1");
  const auto b = default_batch_sizes(p100());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(synth_fingerprint(arch, p100(), b, ++seed));
}
BENCHMARK(BM_SynthFingerprint);

void BM_Classify(benchmark::State& state) {
  const ReferenceSource refs = synth_reference_source(default_zoo_dir());
  const auto b = default_batch_sizes(p100());
  const Fingerprint fp = synth_fingerprint(load_zoo_model("2.0-SqNxt-23v5"), p100(), b, 1);
  classify(fp, refs);  // warm the reference cache
  for (auto _ : state) benchmark::DoNotOptimize(classify(fp, refs));
}
BENCHMARK(BM_Classify);

void BM_ParseProfilerCsv(benchmark::State& state) {
  std::string text = "\"Type\",\"Time(%)\",\"Time\",\"Calls\",\"Avg\",\"Min\",\"Max\",\"Name\"\n";
  const char* names[] = {"void gemv2T_kernel_val<float>", "void gemv2N_kernel_val<float>",
                         "void gemmk1_kernel<float>", "maxwell_scudnn_128x64_relu_small_nn"};
  for (int i = 0; i < state.range(0); ++i) {
    text += "\"GPU activities\",0.01,1ms,1,1ms,1ms,1ms,\"" + std::string(names[i % 4]) + "\"\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(parse_profiler_csv(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseProfilerCsv)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
