#include "ptt/codec.hpp"

#include "ptt/errors.hpp"

namespace ptt {

GeneBounds gene_bounds(const Instance& instance) {
  GeneBounds b;
  for (const Train& train : instance.trains) {
    b.section_offsets.push_back(b.ranges.size());
    b.ranges.push_back({0, instance.period_T - 1});
    for (std::size_t k = 0; k < train.route.size(); ++k) {
      const Trip& trip = train.route[k];
      b.ranges.push_back({trip.running_lo, trip.running_hi});
      if (k + 1 < train.route.size()) {
        if (!trip.dwell_after_lo || !trip.dwell_after_hi) {
          throw MalformedInstance("train '" + train.id + "' is missing a dwell window at '" +
                                  trip.to + "'");
        }
        b.ranges.push_back({*trip.dwell_after_lo, *trip.dwell_after_hi});
      }
    }
  }
  return b;
}

bool within_bounds(std::span<const Minutes> genes, const GeneBounds& bounds) {
  if (genes.size() != bounds.size()) return false;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    if (genes[i] < bounds.ranges[i].lo || genes[i] > bounds.ranges[i].hi) return false;
  }
  return true;
}

std::vector<Event> event_order(const Instance& instance) {
  std::vector<Event> events;
  for (const Train& train : instance.trains) {
    events.push_back(departure(train.id, train.route.front().from));
    for (std::size_t k = 0; k < train.route.size(); ++k) {
      const StationId& to = train.route[k].to;
      events.push_back(arrival(train.id, to));
      if (k + 1 < train.route.size()) events.push_back(departure(train.id, to));
    }
  }
  return events;
}

void decode_into(std::span<const Minutes> genes, std::span<const std::size_t> section_offsets,
                 Minutes T, std::span<Minutes> times) {
  for (std::size_t s = 0; s < section_offsets.size(); ++s) {
    const std::size_t begin = section_offsets[s];
    const std::size_t end = s + 1 < section_offsets.size() ? section_offsets[s + 1] : genes.size();
    std::int64_t clock = 0;
    for (std::size_t i = begin; i < end; ++i) {
      clock += genes[i];
      times[i] = static_cast<Minutes>(clock % T);
    }
  }
}

Timetable decode(const Genotype& g, const Instance& instance) {
  const GeneBounds bounds = gene_bounds(instance);
  if (g.size() != bounds.size()) {
    throw OutOfBoundsGene("genotype has " + std::to_string(g.size()) + " genes, expected " +
                          std::to_string(bounds.size()));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const GeneRange& r = bounds.ranges[i];
    if (g.genes[i] < r.lo || g.genes[i] > r.hi) {
      throw OutOfBoundsGene("gene " + std::to_string(i) + " = " + std::to_string(g.genes[i]) +
                            " outside [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                            "]");
    }
  }
  std::vector<Minutes> times(g.size());
  decode_into(g.genes, bounds.section_offsets, instance.period_T, times);
  const std::vector<Event> events = event_order(instance);
  Timetable tt(instance.period_T);
  for (std::size_t i = 0; i < events.size(); ++i) tt.set(events[i], times[i]);
  return tt;
}

Genotype encode(const Timetable& tt, const Instance& instance) {
  const std::vector<Event> events = event_order(instance);
  const GeneBounds bounds = gene_bounds(instance);
  Genotype g;
  g.genes.resize(events.size());
  std::size_t section = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const bool starts_section =
        section < bounds.section_offsets.size() && bounds.section_offsets[section] == i;
    if (starts_section) {
      g.genes[i] = tt.at(events[i]);
      ++section;
    } else {
      Minutes step = (tt.at(events[i]) - tt.at(events[i - 1])) % instance.period_T;
      if (step < 0) step += instance.period_T;
      // Smallest representative inside the gene range; unique when the range
      // is narrower than the period.
      while (step < bounds.ranges[i].lo) step += instance.period_T;
      g.genes[i] = step;
    }
  }
  return g;
}

Genotype random_genotype(const GeneBounds& bounds, Rng& rng) {
  Genotype g;
  g.genes.reserve(bounds.size());
  for (const GeneRange& r : bounds.ranges) {
    g.genes.push_back(std::uniform_int_distribution<Minutes>(r.lo, r.hi)(rng));
  }
  return g;
}

}  // namespace ptt
