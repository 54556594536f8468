#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "ptt/model.hpp"

namespace ptt {

/// Random engine used everywhere a seed is accepted.
using Rng = std::mt19937_64;

struct GeneRange {
  Minutes lo = 0;
  Minutes hi = 0;

  Minutes width() const { return hi - lo + 1; }
  friend bool operator==(const GeneRange&, const GeneRange&) = default;
};

/// Per-gene inclusive ranges plus the per-train section layout. Trains keep
/// instance order; a section is [first departure, run1, dwell1, run2, ...].
struct GeneBounds {
  std::vector<GeneRange> ranges;
  std::vector<std::size_t> section_offsets;

  std::size_t size() const noexcept { return ranges.size(); }
  friend bool operator==(const GeneBounds&, const GeneBounds&) = default;
};

struct Genotype {
  std::vector<Minutes> genes;

  std::size_t size() const noexcept { return genes.size(); }
  friend bool operator==(const Genotype&, const Genotype&) = default;
  friend auto operator<=>(const Genotype&, const Genotype&) = default;
};

GeneBounds gene_bounds(const Instance& instance);

bool within_bounds(std::span<const Minutes> genes, const GeneBounds& bounds);

/// Events in genotype order: per train D(s0), A(s1), D(s1), ..., A(sn).
/// Event k of a section is the running sum of the section's first k+1 genes.
std::vector<Event> event_order(const Instance& instance);

/// Throws OutOfBoundsGene when a gene leaves its range.
Timetable decode(const Genotype& g, const Instance& instance);

/// Writes canonical times in event_order() layout; no bounds checking.
void decode_into(std::span<const Minutes> genes, std::span<const std::size_t> section_offsets,
                 Minutes T, std::span<Minutes> times);

/// Recovers genes from a timetable as first departures plus successive
/// differences mod T, each lifted to the smallest value in its gene range.
/// decode(encode(tt)) == tt for any timetable decode() can produce, and
/// encode(decode(g)) == g whenever no gene range is wider than T.
Genotype encode(const Timetable& tt, const Instance& instance);

Genotype random_genotype(const GeneBounds& bounds, Rng& rng);

}  // namespace ptt
