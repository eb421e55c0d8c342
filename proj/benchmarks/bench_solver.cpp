#include <benchmark/benchmark.h>

#include "builders.hpp"
#include "panto/solver.hpp"

using namespace panto;
using namespace panto::testing;

namespace {

Model grid_model() {
  PantographGridParams p;
  p.top_node_load = 2310.0;
  return pantograph_grid(p);
}

}  // namespace

static void BM_AssembleGrid(benchmark::State& state) {
  const Model model = grid_model();
  std::vector<CableFlag> flags;
  for (const auto& m : model.members) {
    if (m.kind == MemberKind::Cable) flags.push_back(CableFlag::Active);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(model, flags));
  }
}
BENCHMARK(BM_AssembleGrid);

static void BM_SolveGrid(benchmark::State& state) {
  const Model model = grid_model();
  std::vector<CableFlag> flags;
  for (const auto& m : model.members) {
    if (m.kind == MemberKind::Cable) flags.push_back(CableFlag::Active);
  }
  const AssembledSystem sys = assemble(model, flags);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_static(model, sys));
  }
}
BENCHMARK(BM_SolveGrid);

static void BM_IterateArch(benchmark::State& state) {
  const Model arch = loaded_arch(1000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_cable_status(arch));
  }
}
BENCHMARK(BM_IterateArch);
