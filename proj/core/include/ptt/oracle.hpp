#pragma once

#include <cstddef>

#include "ptt/codec.hpp"
#include "ptt/model.hpp"

namespace ptt {

struct ExhaustiveResult {
  double min_fitness = 0.0;
  /// Lexicographically smallest genotype attaining `min_fitness`.
  Genotype witness;
  std::size_t evaluations = 0;
};

/// Number of lattice genotypes for the given stride. Each gene takes
/// lo, lo+stride, ... and always its upper endpoint.
double search_space_size(const GeneBounds& bounds, Minutes stride);

/// Exact minimum of the full weighted objective over the stride lattice.
/// Throws SpaceTooLarge when the lattice exceeds `cap`. Work is split by the
/// value of the leading gene across `workers` threads; the merge is
/// deterministic.
ExhaustiveResult exhaustive_min(const Instance& instance, Minutes stride = 1,
                                double cap = 1e8, unsigned workers = 1);

/// Second, independent evaluator. Walks the instance directly rather than
/// the derived constraint list and decides each window by trying
/// q in {-1, 0, 1}.
///
/// That trial set is complete: both event times lie in [0, T), so the raw
/// difference v lies in (-T, T), and every window satisfies -T < lo and
/// hi < T after validation. Then v + qT for |q| >= 2 lies outside (-T, T)
/// and cannot meet the window.
EvaluationReport check_independent(const Timetable& tt, const Instance& instance);

}  // namespace ptt
