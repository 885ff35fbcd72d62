#include <benchmark/benchmark.h>

#include "sparrow/baselines.hpp"
#include "sparrow/estimator.hpp"
#include "sparrow/image.hpp"
#include "sparrow/spray.hpp"
#include "test_support.hpp"

namespace {

sparrow::LinearImage bench_image(int w, int h) {
  return testsupport::make_mondrian(w, h, 7, {0.85, 1.0, 0.75}, 0.02, 20);
}

void BM_BoxBlur(benchmark::State& state) {
  const sparrow::LinearImage img = bench_image(1024, 768);
  const sparrow::Kernel kernel(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sparrow::box_blur(img, kernel));
  }
}
BENCHMARK(BM_BoxBlur)->Arg(5)->Arg(25);

void BM_SprayLightness(benchmark::State& state) {
  const sparrow::LinearImage img = bench_image(1024, 768);
  sparrow::SprayParams params{.num_sprays = 1,
                              .points_per_spray =
                                  static_cast<int>(state.range(0)),
                              .seed = 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sparrow::rsr_lightness(img, {512, 384}, params));
  }
}
BENCHMARK(BM_SprayLightness)->Arg(16)->Arg(225)->Arg(400);

void BM_GrayWorld(benchmark::State& state) {
  const sparrow::LinearImage img = bench_image(2193, 1460);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sparrow::gray_world(img));
  }
}
BENCHMARK(BM_GrayWorld);

void BM_SparrowEstimate(benchmark::State& state) {
  const sparrow::LinearImage img = bench_image(2193, 1460);
  sparrow::CsParams params;  // tuned defaults
  for (auto _ : state) {
    benchmark::DoNotOptimize(sparrow::estimate(img, nullptr, params, 1));
  }
}
BENCHMARK(BM_SparrowEstimate);

}  // namespace

BENCHMARK_MAIN();
