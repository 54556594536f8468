#include <benchmark/benchmark.h>


#include "ptt/codec.hpp"
#include "ptt/engine.hpp"
#include "ptt/instances.hpp"
#include "ptt/model.hpp"

namespace {

const ptt::Instance& instance(int which) {
  static const ptt::Instance cs1 = ptt::build_cs1();
  static const ptt::Instance cs2 = ptt::generate_cs2_like(1);
  return which == 0 ? cs1 : cs2;
}

void BM_Decode(benchmark::State& state) {
  const auto& in = instance(static_cast<int>(state.range(0)));
  ptt::Rng rng(1);
  const auto g = ptt::random_genotype(ptt::gene_bounds(in), rng);
  for (auto _ : state) benchmark::DoNotOptimize(ptt::decode(g, in));
}
BENCHMARK(BM_Decode)->Arg(0)->Arg(1);

void BM_Evaluate(benchmark::State& state) {
  const auto& in = instance(static_cast<int>(state.range(0)));
  const auto cs = ptt::derive_bounds(in);
  ptt::Rng rng(1);
  const auto tt = ptt::decode(ptt::random_genotype(ptt::gene_bounds(in), rng), in);
  for (auto _ : state) benchmark::DoNotOptimize(ptt::evaluate(tt, cs, in.weights));
}
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1);

void BM_Fitness(benchmark::State& state) {
  const auto& in = instance(static_cast<int>(state.range(0)));
  const auto cs = ptt::derive_bounds(in);
  ptt::FitnessFunction fitness(in, cs);
  ptt::Rng rng(1);
  const auto g = ptt::random_genotype(ptt::gene_bounds(in), rng);
  for (auto _ : state) benchmark::DoNotOptimize(fitness(g.genes));
}
BENCHMARK(BM_Fitness)->Arg(0)->Arg(1);

void BM_Generation(benchmark::State& state) {
  const auto& in = instance(static_cast<int>(state.range(0)));
  const auto cs = ptt::derive_bounds(in);
  ptt::FitnessFunction fitness(in, cs);
  const auto bounds = ptt::gene_bounds(in);
  ptt::GaConfig cfg;
  ptt::GaState st{{}, 0, ptt::Rng(1)};
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    auto g = ptt::random_genotype(bounds, st.rng);
    const double f = fitness(g.genes);
    st.population.push_back({std::move(g), f});
  }
  for (auto _ : state) {
    st = ptt::step_generation(std::move(st), bounds, cfg);
    for (auto& ind : st.population) {
      if (!ind.fitness) ind.fitness = fitness(ind.genotype.genes);
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.population_size));
}
BENCHMARK(BM_Generation)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
