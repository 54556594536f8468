#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ptt/codec.hpp"
#include "ptt/model.hpp"

namespace ptt {

struct GaConfig {
  std::size_t population_size = 300;
  std::size_t max_evaluations = 1'000'000;
  double crossover_rate = 0.9;
  /// Defaults to 1 / genotype length when unset.
  std::optional<double> mutation_rate_per_gene;
  std::size_t tournament_size = 2;
  std::size_t elite_count = 1;
  std::uint64_t seed = 1;
};

/// Throws ConfigInvalid.
void validate(const GaConfig& config);
double mutation_rate(const GaConfig& config, std::size_t genotype_length);

enum class Termination { OptimumFound, EvalLimit };
const char* to_string(Termination t);

struct RunResult {
  Genotype best_genotype;
  double best_fitness = 0.0;
  std::size_t hard_violations = 0;
  std::size_t soft_violations = 0;
  std::size_t evaluations_used = 0;
  std::size_t generations = 0;
  double wall_time = 0.0;
  Termination terminated_by = Termination::EvalLimit;
};

/// The GA's fitness: weighted headway, single-track and connection
/// violations of the decoded genotype. Running and dwell constraints hold by
/// construction and are skipped.
class FitnessFunction {
 public:
  FitnessFunction(const Instance& instance, std::span<const PeriodicConstraint> constraints);

  double operator()(std::span<const Minutes> genes) const;
  const GeneBounds& bounds() const noexcept { return bounds_; }

 private:
  GeneBounds bounds_;
  CompiledConstraints compiled_;
  WeightConfig weights_;
  Minutes period_;
  mutable std::vector<Minutes> times_;
};

struct Individual {
  Genotype genotype;
  std::optional<double> fitness;
};

struct GaState {
  std::vector<Individual> population;
  std::size_t generation = 0;
  Rng rng;
};

/// Tournament without replacement; lowest fitness wins, ties go to the lower
/// index. Returns the winner's index.
std::size_t select_parent(std::span<const double> fitnesses, std::size_t tournament_size,
                          Rng& rng);

/// One-point crossover with probability `rate`, cut uniform in [1, len-1];
/// otherwise clones. Throws LengthMismatch.
std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, double rate,
                                        Rng& rng);

/// Resamples each gene uniformly within its range with probability `rate`.
Genotype mutate(Genotype g, const GeneBounds& bounds, double rate, Rng& rng);

/// Elites (by fitness, then index) keep their cached fitness; the rest is
/// filled with unevaluated offspring. Every individual must be evaluated.
GaState step_generation(GaState state, const GeneBounds& bounds, const GaConfig& config);

RunResult run(const Instance& instance, std::span<const PeriodicConstraint> constraints,
              const GaConfig& config);

}  // namespace ptt
