#include "ptt/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <thread>

#include "ptt/errors.hpp"

namespace ptt {
namespace {

std::vector<Minutes> lattice(const GeneRange& r, Minutes stride) {
  std::vector<Minutes> values;
  for (Minutes v = r.lo; v <= r.hi; v += stride) values.push_back(v);
  if (values.back() != r.hi) values.push_back(r.hi);
  return values;
}

struct PartialMin {
  double fitness = std::numeric_limits<double>::infinity();
  std::vector<Minutes> witness;
  std::size_t evaluations = 0;
};

// Enumerates all genotypes whose leading gene is fixed to `lead`, in
// lexicographic order, keeping the first strict minimum.
PartialMin scan(const std::vector<std::vector<Minutes>>& values, Minutes lead,
                const GeneBounds& bounds, const CompiledConstraints& compiled,
                const WeightConfig& weights, Minutes T) {
  PartialMin best;
  const std::size_t n = values.size();
  std::vector<std::size_t> digit(n, 0);
  std::vector<Minutes> genes(n);
  std::vector<Minutes> times(n);
  genes[0] = lead;
  for (std::size_t i = 1; i < n; ++i) genes[i] = values[i][0];
  while (true) {
    decode_into(genes, bounds.section_offsets, T, times);
    const double f = compiled.fitness(times, weights);
    ++best.evaluations;
    if (f < best.fitness) {
      best.fitness = f;
      best.witness = genes;
    }
    std::size_t pos = n;
    while (pos > 1) {
      --pos;
      if (++digit[pos] < values[pos].size()) {
        genes[pos] = values[pos][digit[pos]];
        break;
      }
      digit[pos] = 0;
      genes[pos] = values[pos][0];
      if (pos == 1) return best;
    }
    if (n == 1) return best;
  }
}

bool window_holds(Minutes lo, Minutes hi, Minutes v, Minutes T) {
  for (int q = -1; q <= 1; ++q) {
    const Minutes shifted = v + q * T;
    if (lo <= shifted && shifted <= hi) return true;
  }
  return false;
}

}  // namespace

double search_space_size(const GeneBounds& bounds, Minutes stride) {
  double size = 1.0;
  for (const GeneRange& r : bounds.ranges) size *= static_cast<double>(lattice(r, stride).size());
  return size;
}

ExhaustiveResult exhaustive_min(const Instance& instance, Minutes stride, double cap,
                                unsigned workers) {
  if (stride < 1) throw ConfigInvalid("stride must be positive");
  const GeneBounds bounds = gene_bounds(instance);
  const double size = search_space_size(bounds, stride);
  if (size > cap) throw SpaceTooLarge(size);

  const std::vector<PeriodicConstraint> constraints = derive_bounds(instance);
  const CompiledConstraints compiled(constraints, event_order(instance), instance.period_T);
  std::vector<std::vector<Minutes>> values;
  for (const GeneRange& r : bounds.ranges) values.push_back(lattice(r, stride));

  const std::vector<Minutes>& leads = values.front();
  std::vector<PartialMin> parts(leads.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, leads.size()));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < leads.size(); i += threads) {
      parts[i] = scan(values, leads[i], bounds, compiled, instance.weights, instance.period_T);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  // Leading values ascend, so the first strict minimum is the lexicographic one.
  ExhaustiveResult result;
  result.min_fitness = std::numeric_limits<double>::infinity();
  for (PartialMin& p : parts) {
    result.evaluations += p.evaluations;
    if (p.fitness < result.min_fitness) {
      result.min_fitness = p.fitness;
      result.witness.genes = std::move(p.witness);
    }
  }
  return result;
}

EvaluationReport check_independent(const Timetable& tt, const Instance& instance) {
  const Minutes T = instance.period_T;
  EvaluationReport report;

  auto judge = [&](ConstraintKind kind, const Event& earlier, const Event& later, Minutes lo,
                   Minutes hi) {
    if (lo > hi) throw BoundInversion("window lo > hi for " + to_string(later));
    if (hi - lo >= T) return;
    const Minutes x = tt.at(earlier);
    const Minutes y = tt.at(later);
    if (window_holds(lo, hi, y - x, T)) return;
    ++report.violations_by_type[kind];
    Minutes d = (y - x) % T;
    if (d < 0) d += T;
    report.violated.push_back(Violation{PeriodicConstraint{kind, earlier, later, lo, hi}, d, 0});
  };

  auto single_track = [&](const StationId& a, const StationId& b) {
    for (const Segment& s : instance.segments) {
      if ((s.from == a && s.to == b) || (s.from == b && s.to == a)) return s.single_track;
    }
    throw MalformedInstance("no segment between '" + a + "' and '" + b + "'");
  };

  for (const Train& train : instance.trains) {
    const std::size_t n = train.route.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Trip& trip = train.route[k];
      judge(ConstraintKind::Running, departure(train.id, trip.from), arrival(train.id, trip.to),
            trip.running_lo, trip.running_hi);
      if (k + 1 < n) {
        judge(ConstraintKind::Dwell, arrival(train.id, trip.to), departure(train.id, trip.to),
              trip.dwell_after_lo.value(), trip.dwell_after_hi.value());
      }
    }
  }

  for (const Train& i : instance.trains) {
    for (const Train& j : instance.trains) {
      if (i.id == j.id) continue;
      for (const Trip& ti : i.route) {
        for (const Trip& tj : j.route) {
          if (ti.from == tj.from && ti.to == tj.to) {
            judge(ConstraintKind::Headway, departure(j.id, ti.from), departure(i.id, ti.from),
                  std::abs(ti.running_lo - tj.running_lo) + i.basic_headway,
                  T - j.basic_headway);
          }
          if (ti.from == tj.to && ti.to == tj.from && single_track(ti.from, ti.to)) {
            judge(ConstraintKind::SingleTrack, arrival(j.id, ti.from), departure(i.id, ti.from),
                  2 * std::min(ti.running_lo, tj.running_lo) + i.basic_headway,
                  T - j.basic_headway);
          }
        }
      }
    }
  }

  for (const ConnectionSpec& c : instance.connections) {
    judge(ConstraintKind::Connection, arrival(c.feeder_train, c.station),
          departure(c.onward_train, c.station), c.conn_lo, c.conn_hi);
  }

  report.weighted_fitness = report.violations_by_type.weighted(instance.weights);
  return report;
}

}  // namespace ptt
