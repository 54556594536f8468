#include "ptt/engine.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "ptt/errors.hpp"

namespace ptt {
namespace {

constexpr std::array<ConstraintKind, 3> kPairwiseKinds = {
    ConstraintKind::Headway, ConstraintKind::SingleTrack, ConstraintKind::Connection};

bool chance(double p, Rng& rng) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

std::vector<std::size_t> ranked(const std::vector<Individual>& population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *population[a].fitness < *population[b].fitness;
  });
  return order;
}

}  // namespace

void validate(const GaConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigInvalid(what); };
  if (c.population_size < 2) fail("population_size must be at least 2");
  if (c.max_evaluations < c.population_size) fail("max_evaluations must be >= population_size");
  if (c.elite_count >= c.population_size) fail("elite_count must be < population_size");
  if (c.tournament_size < 1 || c.tournament_size > c.population_size) {
    fail("tournament_size must be in [1, population_size]");
  }
  if (!(c.crossover_rate >= 0.0 && c.crossover_rate <= 1.0)) fail("crossover_rate outside [0,1]");
  if (c.mutation_rate_per_gene &&
      !(*c.mutation_rate_per_gene >= 0.0 && *c.mutation_rate_per_gene <= 1.0)) {
    fail("mutation_rate_per_gene outside [0,1]");
  }
}

double mutation_rate(const GaConfig& config, std::size_t genotype_length) {
  if (config.mutation_rate_per_gene) return *config.mutation_rate_per_gene;
  return genotype_length == 0 ? 0.0 : 1.0 / static_cast<double>(genotype_length);
}

const char* to_string(Termination t) {
  return t == Termination::OptimumFound ? "optimum_found" : "eval_limit";
}

FitnessFunction::FitnessFunction(const Instance& instance,
                                 std::span<const PeriodicConstraint> constraints)
    : bounds_(gene_bounds(instance)),
      compiled_(constraints, event_order(instance), instance.period_T, kPairwiseKinds),
      weights_(instance.weights),
      period_(instance.period_T),
      times_(bounds_.size()) {}

double FitnessFunction::operator()(std::span<const Minutes> genes) const {
  decode_into(genes, bounds_.section_offsets, period_, times_);
  return compiled_.fitness(times_, weights_);
}

std::size_t select_parent(std::span<const double> fitnesses, std::size_t tournament_size,
                          Rng& rng) {
  const std::size_t n = fitnesses.size();
  const std::size_t k = std::clamp<std::size_t>(tournament_size, 1, n);
  // Floyd's sampling of k distinct indices.
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  std::size_t best = picked.front();
  for (std::size_t idx : picked) {
    if (fitnesses[idx] < fitnesses[best] || (fitnesses[idx] == fitnesses[best] && idx < best)) {
      best = idx;
    }
  }
  return best;
}

std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, double rate,
                                        Rng& rng) {
  if (a.size() != b.size()) {
    throw LengthMismatch("crossover parents have lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  if (a.size() < 2 || !chance(rate, rng)) return {a, b};
  const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, a.size() - 1)(rng);
  Genotype c1 = a;
  Genotype c2 = b;
  std::swap_ranges(c1.genes.begin() + static_cast<std::ptrdiff_t>(cut), c1.genes.end(),
                   c2.genes.begin() + static_cast<std::ptrdiff_t>(cut));
  return {std::move(c1), std::move(c2)};
}

Genotype mutate(Genotype g, const GeneBounds& bounds, double rate, Rng& rng) {
  if (rate <= 0.0) return g;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!chance(rate, rng)) continue;
    const GeneRange& r = bounds.ranges[i];
    g.genes[i] = std::uniform_int_distribution<Minutes>(r.lo, r.hi)(rng);
  }
  return g;
}

GaState step_generation(GaState state, const GeneBounds& bounds, const GaConfig& config) {
  const auto& pop = state.population;
  std::vector<double> fitnesses;
  fitnesses.reserve(pop.size());
  for (const Individual& ind : pop) {
    if (!ind.fitness) throw std::logic_error("step_generation on an unevaluated individual");
    fitnesses.push_back(*ind.fitness);
  }

  std::vector<Individual> next;
  next.reserve(config.population_size);
  const std::vector<std::size_t> order = ranked(pop);
  for (std::size_t e = 0; e < config.elite_count && e < order.size(); ++e) {
    next.push_back(pop[order[e]]);
  }

  const double pm = mutation_rate(config, bounds.size());
  while (next.size() < config.population_size) {
    const std::size_t p1 = select_parent(fitnesses, config.tournament_size, state.rng);
    const std::size_t p2 = select_parent(fitnesses, config.tournament_size, state.rng);
    auto [c1, c2] = crossover(pop[p1].genotype, pop[p2].genotype, config.crossover_rate, state.rng);
    next.push_back({mutate(std::move(c1), bounds, pm, state.rng), std::nullopt});
    if (next.size() < config.population_size) {
      next.push_back({mutate(std::move(c2), bounds, pm, state.rng), std::nullopt});
    }
  }

  state.population = std::move(next);
  ++state.generation;
  return state;
}

RunResult run(const Instance& instance, std::span<const PeriodicConstraint> constraints,
              const GaConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  const FitnessFunction fitness(instance, constraints);
  const GeneBounds& bounds = fitness.bounds();

  GaState state;
  state.rng.seed(config.seed);
  state.population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    state.population.push_back({random_genotype(bounds, state.rng), std::nullopt});
  }

  RunResult result;
  std::optional<double> best;
  std::size_t evaluations = 0;
  bool done = false;
  while (!done) {
    for (Individual& ind : state.population) {
      if (ind.fitness) continue;
      if (evaluations == config.max_evaluations) {
        done = true;
        break;
      }
      ind.fitness = fitness(ind.genotype.genes);
      ++evaluations;
      if (!best || *ind.fitness < *best) {
        best = ind.fitness;
        result.best_genotype = ind.genotype;
      }
      if (*ind.fitness == 0.0) {
        result.terminated_by = Termination::OptimumFound;
        done = true;
        break;
      }
    }
    if (!done && evaluations >= config.max_evaluations) done = true;
    if (!done) state = step_generation(std::move(state), bounds, config);
  }

  result.best_fitness = *best;
  result.evaluations_used = evaluations;
  result.generations = state.generation + 1;

  const EvaluationReport full =
      evaluate(decode(result.best_genotype, instance), constraints, instance.weights);
  if (full.weighted_fitness != result.best_fitness) {
    throw std::logic_error("GA fitness disagrees with the full evaluation of its best genotype");
  }
  result.hard_violations = full.violations_by_type.hard();
  result.soft_violations = full.violations_by_type.soft();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace ptt
