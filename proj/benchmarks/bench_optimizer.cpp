#include <benchmark/benchmark.h>

#include "builders.hpp"
#include "panto/document.hpp"
#include "panto/optimizer.hpp"

using namespace panto;
using namespace panto::testing;

static void BM_EvaluateCandidate(benchmark::State& state) {
  const ModelDocument doc = load_model_document(fixture_path("problem1.json"));
  const Model model = build_model_or_throw(doc);
  const DesignSpace space = design_space_from_block(model, *doc.optimizer);
  const Eigen::VectorXd areas = Eigen::VectorXd::Constant(space.variable_count(), 20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_candidate(model, space, areas));
  }
}
BENCHMARK(BM_EvaluateCandidate);

static void BM_OptimizeTenIterations(benchmark::State& state) {
  const ModelDocument doc = load_model_document(fixture_path("problem1.json"));
  const Model model = build_model_or_throw(doc);
  const DesignSpace space = design_space_from_block(model, *doc.optimizer);
  OptimizeConfig config;
  config.population = 25;
  config.iterations = 10;
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize(model, space, config));
  }
}
BENCHMARK(BM_OptimizeTenIterations);
