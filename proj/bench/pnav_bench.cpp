// Copyright 2026 The Panoptic-Nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial vs OpenMP pixel kernels, plus the per-frame post-processing path.
#include <benchmark/benchmark.h>

#include <random>

#include "pnav/kernels.hpp"
#include "pnav/pipeline.hpp"
#include "pnav/synth.hpp"

namespace {

namespace k = pnav::kernels;

struct Planes {
  std::vector<std::uint32_t> labels;
  std::vector<std::uint32_t> labels2;
  std::vector<std::uint16_t> classes;
  std::vector<std::uint16_t> classes2;
  std::vector<std::uint16_t> depth;
  std::vector<std::uint8_t> mask;
  std::vector<std::int32_t> owner;
  std::vector<int> lut;
};

// Blocky label planes of the given size (nearby pixels share labels).
const Planes& planes(int w, int h) {
  static std::map<std::pair<int, int>, Planes> cache;
  auto [it, fresh] = cache.try_emplace({w, h});
  if (!fresh) return it->second;
  Planes& p = it->second;
  std::mt19937 rng(5);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  p.labels.resize(n);
  p.labels2.resize(n);
  p.classes.resize(n);
  p.classes2.resize(n);
  p.depth.resize(n);
  p.mask.resize(n);
  p.owner.assign(n, -1);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const std::uint32_t block = static_cast<std::uint32_t>((r / 32) * 64 + c / 32);
      p.labels[i] = ((block % 40) << 16) | (block % 7);
      p.labels2[i] = (rng() % 16 == 0) ? p.labels[(i + 1) % n] : p.labels[i];
      p.classes[i] = static_cast<std::uint16_t>(block % 40);
      p.classes2[i] = static_cast<std::uint16_t>(rng() % 8 == 0 ? rng() % 40 : block % 40);
      p.depth[i] = static_cast<std::uint16_t>(rng() % 4 == 0 ? 0 : 500 + rng() % 9000);
      p.mask[i] = (r > h / 4 && r < 3 * h / 4 && c > w / 4 && c < 3 * w / 4) ? 1 : 0;
      if (c < w / 3) p.owner[i] = 0;
    }
  }
  p.lut.resize(40);
  for (int i = 0; i < 40; ++i) p.lut[static_cast<std::size_t>(i)] = i;
  return p;
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({320, 240})->Args({640, 480})->Args({1280, 960})->Unit(benchmark::kMicrosecond);
}

#define PNAV_KERNEL_BENCH(name, call)                                      \
  template <bool Parallel>                                                 \
  void BM_##name(benchmark::State& state) {                                \
    const Planes& p = planes(static_cast<int>(state.range(0)),             \
                             static_cast<int>(state.range(1)));            \
    const int w = static_cast<int>(state.range(0));                        \
    (void)w;                                                               \
    for (auto _ : state) {                                                 \
      if constexpr (Parallel) {                                            \
        namespace ns = k::parallel;                                        \
        benchmark::DoNotOptimize(call);                                    \
      } else {                                                             \
        namespace ns = k::serial;                                          \
        benchmark::DoNotOptimize(call);                                    \
      }                                                                    \
    }                                                                      \
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1)); \
  }                                                                        \
  BENCHMARK(BM_##name<false>)->Name(#name "/serial")->Apply(sizes);        \
  BENCHMARK(BM_##name<true>)->Name(#name "/parallel")->Apply(sizes);

PNAV_KERNEL_BENCH(label_histogram, ns::label_histogram(p.labels))
PNAV_KERNEL_BENCH(pair_histogram, ns::pair_histogram(p.labels2, p.labels))
PNAV_KERNEL_BENCH(confusion_tally, ns::confusion_tally(p.classes2, p.classes, p.lut, 40, -1))
PNAV_KERNEL_BENCH(accumulate_segments, ns::accumulate_segments(p.labels, w, p.depth))
PNAV_KERNEL_BENCH(count_unowned, ns::count_unowned(p.mask, p.owner))
PNAV_KERNEL_BENCH(unowned_class_histogram, ns::unowned_class_histogram(p.classes, p.owner))

void BM_process_frame(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0)), h = static_cast<int>(state.range(1));
  const pnav::Frame f = pnav::synthesize_dense_frame(w, h, 20, 77, pnav::default_schema());
  for (auto _ : state) {
    pnav::FrameProcessor proc(pnav::default_schema(), pnav::PipelineConfig{});
    benchmark::DoNotOptimize(proc.process(f));
  }
}
BENCHMARK(BM_process_frame)->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
