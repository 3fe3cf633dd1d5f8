// Parallel kernels against their serial reference implementations.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "growform/colony.hpp"
#include "growform/evolve.hpp"
#include "growform/fitness.hpp"
#include "growform/forces.hpp"

using namespace growform;

namespace {

std::vector<Vec2> scattered(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 600);
  std::vector<Vec2> pts(n);
  for (auto &p : pts) p = {u(rng), u(rng)};
  return pts;
}

const FormHistory &sample_history() {
  static const FormHistory h = grow(Genome{}, SimParams{}, 7, 150);
  return h;
}

void BM_Repulsion(benchmark::State &state) {
  const auto pts = scattered(static_cast<std::size_t>(state.range(0)));
  std::vector<Vec2> f(pts.size());
  for (auto _ : state) {
    std::fill(f.begin(), f.end(), Vec2{});
    accumulate_repulsion(pts, SimParams{}, f);
    benchmark::DoNotOptimize(f.data());
  }
}

void BM_RepulsionReference(benchmark::State &state) {
  const auto pts = scattered(static_cast<std::size_t>(state.range(0)));
  std::vector<Vec2> f(pts.size());
  for (auto _ : state) {
    std::fill(f.begin(), f.end(), Vec2{});
    accumulate_repulsion_reference(pts, SimParams{}, f);
    benchmark::DoNotOptimize(f.data());
  }
}

void BM_Evaluate(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(sample_history(), FitnessParams{}));
}

void BM_EvaluateReference(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_reference(sample_history(), FitnessParams{}));
}

std::vector<Genome> population() {
  const SearchBox box;
  std::vector<Genome> g;
  for (int i = 0; i < 8; ++i) g.push_back(box.denormalize({0.1 * i, 0.5, 0.5, 0.5, 0.5}));
  return g;
}

void BM_EvaluatePopulation(benchmark::State &state) {
  EvolutionConfig c = EvolutionConfig::desk_profile();
  c.steps_per_individual = 60;
  c.jobs = omp_get_max_threads();
  const auto g = population();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_population(g, 1, c));
}

void BM_EvaluatePopulationSerial(benchmark::State &state) {
  EvolutionConfig c = EvolutionConfig::desk_profile();
  c.steps_per_individual = 60;
  const auto g = population();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_population_serial(g, 1, c));
}

}  // namespace

BENCHMARK(BM_Repulsion)->Arg(500)->Arg(4000);
BENCHMARK(BM_RepulsionReference)->Arg(500)->Arg(4000);
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePopulation)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePopulationSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
