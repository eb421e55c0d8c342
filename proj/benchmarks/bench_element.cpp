#include <benchmark/benchmark.h>

#include "panto/element.hpp"

using namespace panto;

static void BM_UnipletClosedForm(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        uniplet_stiffness_closed_form(210000, 28, 290, 290, 353.55, 353.55));
  }
}
BENCHMARK(BM_UnipletClosedForm);

static void BM_UnipletCondensation(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        uniplet_stiffness_by_condensation(210000, 28, 290, 290, 353.55, 353.55));
  }
}
BENCHMARK(BM_UnipletCondensation);

static void BM_UnipletToGlobal(benchmark::State& state) {
  const UnipletStiffness local =
      uniplet_stiffness_closed_form(210000, 28, 290, 290, 353.55, 353.55);
  const Eigen::Matrix3d frame = member_frame(Vec3(1, 2, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_global(local.k, frame));
  }
}
BENCHMARK(BM_UnipletToGlobal);
