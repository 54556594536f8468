#include "ptt/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "ptt/errors.hpp"

namespace ptt {
namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::pair<StationId, StationId> unordered(const StationId& a, const StationId& b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

void require(bool ok, const char* invariant, const std::string& detail) {
  if (!ok) throw ValidationError(invariant, detail);
}

std::string trip_name(const Train& train, std::size_t k) {
  const Trip& trip = train.route[k];
  return "train '" + train.id + "' trip " + std::to_string(k) + " (" + trip.from + "->" +
         trip.to + ")";
}

const Trip* find_trip(const Train& train, const StationId& from, const StationId& to) {
  for (const Trip& trip : train.route) {
    if (trip.from == from && trip.to == to) return &trip;
  }
  return nullptr;
}

std::vector<const Train*> trains_by_id(const Instance& instance) {
  std::vector<const Train*> sorted;
  sorted.reserve(instance.trains.size());
  for (const Train& t : instance.trains) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Train* a, const Train* b) { return a->id < b->id; });
  return sorted;
}

}  // namespace

const Train* Instance::find_train(const TrainId& id) const {
  auto it = std::find_if(trains.begin(), trains.end(),
                         [&](const Train& t) { return t.id == id; });
  return it == trains.end() ? nullptr : &*it;
}

const Segment* Instance::find_segment(const StationId& a, const StationId& b) const {
  auto it = std::find_if(segments.begin(), segments.end(), [&](const Segment& s) {
    return (s.from == a && s.to == b) || (s.from == b && s.to == a);
  });
  return it == segments.end() ? nullptr : &*it;
}

void validate(const WeightConfig& w) {
  for (ConstraintKind k : kAllKinds) {
    require(weight_of(w, k) >= 0.0, "weights.non_negative",
            std::string("weight for ") + to_string(k) + " is negative");
  }
  require(w.w_headway > w.w_connection, "weights.hard_over_soft",
          "headway weight must exceed connection weight");
  require(w.w_single > w.w_connection, "weights.hard_over_soft",
          "single-track weight must exceed connection weight");
}

void validate(const Instance& in) {
  const Minutes T = in.period_T;
  require(T >= 2, "period.min", "period must be at least 2, got " + std::to_string(T));

  std::set<StationId> stations;
  for (const StationId& s : in.stations) {
    require(!s.empty(), "station.id", "empty station id");
    require(stations.insert(s).second, "station.unique", "duplicate station '" + s + "'");
  }

  std::set<std::pair<StationId, StationId>> pairs;
  for (const Segment& seg : in.segments) {
    const std::string name = "segment " + seg.from + "-" + seg.to;
    require(seg.from != seg.to, "segment.distinct_ends", name);
    require(stations.contains(seg.from) && stations.contains(seg.to), "segment.station_exists",
            name);
    require(pairs.insert(unordered(seg.from, seg.to)).second, "segment.unique", name);
  }

  require(!in.trains.empty(), "trains.nonempty", "instance has no trains");
  std::set<TrainId> ids;
  for (const Train& train : in.trains) {
    require(!train.id.empty(), "train.id", "empty train id");
    require(ids.insert(train.id).second, "train.unique_id", "duplicate train '" + train.id + "'");
    require(!train.route.empty(), "train.has_trips", "train '" + train.id + "' has no trips");
    require(train.basic_headway >= 1 && train.basic_headway < T, "train.basic_headway",
            "train '" + train.id + "' basic headway " + std::to_string(train.basic_headway) +
                " outside [1, period)");

    std::set<StationId> visited{train.route.front().from};
    for (std::size_t k = 0; k < train.route.size(); ++k) {
      const Trip& trip = train.route[k];
      const std::string name = trip_name(train, k);
      require(stations.contains(trip.from) && stations.contains(trip.to), "trip.station_exists",
              name);
      require(trip.from != trip.to, "trip.distinct_ends", name);
      require(in.find_segment(trip.from, trip.to) != nullptr, "trip.segment_exists", name);
      if (k + 1 < train.route.size()) {
        require(trip.to == train.route[k + 1].from, "trip.chain", name);
      }
      require(visited.insert(trip.to).second, "route.no_revisit",
              name + " revisits station '" + trip.to + "'");
      require(trip.running_lo >= 1 && trip.running_lo <= trip.running_hi &&
                  trip.running_hi < T,
              "trip.running_bounds", name);
      const bool final_trip = k + 1 == train.route.size();
      const bool has_dwell = trip.dwell_after_lo.has_value() || trip.dwell_after_hi.has_value();
      if (final_trip) {
        require(!has_dwell, "trip.final_dwell_absent", name);
      } else {
        require(trip.dwell_after_lo.has_value() && trip.dwell_after_hi.has_value(),
                "trip.dwell_present", name);
        require(*trip.dwell_after_lo >= 0 && *trip.dwell_after_lo <= *trip.dwell_after_hi &&
                    *trip.dwell_after_hi < T,
                "trip.dwell_bounds", name);
      }
    }
  }

  for (std::size_t c = 0; c < in.connections.size(); ++c) {
    const ConnectionSpec& conn = in.connections[c];
    const std::string name = "connection " + std::to_string(c) + " (" + conn.feeder_train +
                             "->" + conn.onward_train + " at " + conn.station + ")";
    require(stations.contains(conn.station), "connection.station_exists", name);
    const Train* feeder = in.find_train(conn.feeder_train);
    const Train* onward = in.find_train(conn.onward_train);
    require(feeder != nullptr, "connection.feeder_exists", name);
    require(onward != nullptr, "connection.onward_exists", name);
    require(std::any_of(feeder->route.begin(), feeder->route.end(),
                        [&](const Trip& t) { return t.to == conn.station; }),
            "connection.feeder_arrives", name);
    require(std::any_of(onward->route.begin(), onward->route.end(),
                        [&](const Trip& t) { return t.from == conn.station; }),
            "connection.onward_departs", name);
    require(conn.conn_lo >= 0 && conn.conn_lo <= conn.conn_hi && conn.conn_hi < T,
            "connection.window", name);
  }

  validate(in.weights);
}

Event arrival(TrainId train, StationId station) {
  return Event{EventKind::Arrival, std::move(train), std::move(station)};
}

Event departure(TrainId train, StationId station) {
  return Event{EventKind::Departure, std::move(train), std::move(station)};
}

std::string to_string(const Event& e) {
  return std::string(e.kind == EventKind::Arrival ? "arr(" : "dep(") + e.train + "," +
         e.station + ")";
}

void Timetable::set(const Event& e, std::int64_t t) {
  times_[e] = static_cast<Minutes>(floor_mod(t, period_));
}

Minutes Timetable::at(const Event& e) const {
  auto it = times_.find(e);
  if (it == times_.end()) throw MissingEvent("timetable has no " + to_string(e));
  return it->second;
}

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Running: return "running";
    case ConstraintKind::Dwell: return "dwell";
    case ConstraintKind::Headway: return "headway";
    case ConstraintKind::SingleTrack: return "single_track";
    case ConstraintKind::Connection: return "connection";
  }
  return "?";
}

double weight_of(const WeightConfig& w, ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Running: return w.w_running;
    case ConstraintKind::Dwell: return w.w_dwell;
    case ConstraintKind::Headway: return w.w_headway;
    case ConstraintKind::SingleTrack: return w.w_single;
    case ConstraintKind::Connection: return w.w_connection;
  }
  return 0.0;
}

bool is_hard(ConstraintKind kind) { return kind != ConstraintKind::Connection; }

std::vector<PeriodicConstraint> derive_bounds(const Instance& in,
                                              std::vector<std::string>* warnings) {
  const Minutes T = in.period_T;
  const auto sorted = trains_by_id(in);
  std::vector<PeriodicConstraint> out;

  auto emit = [&](ConstraintKind kind, Event earlier, Event later, Minutes lo, Minutes hi) {
    PeriodicConstraint c{kind, std::move(earlier), std::move(later), lo, hi};
    if (lo > hi) {
      throw BoundInversion(std::string(to_string(kind)) + " constraint " +
                           to_string(c.earlier_event) + " -> " + to_string(c.later_event) +
                           " has lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
    }
    if (hi - lo >= T) {
      if (warnings) {
        warnings->push_back(std::string("dropping vacuous ") + to_string(kind) +
                            " constraint " + to_string(c.earlier_event) + " -> " +
                            to_string(c.later_event));
      }
      return;
    }
    out.push_back(std::move(c));
  };

  for (const Train* train : sorted) {
    for (const Trip& trip : train->route) {
      emit(ConstraintKind::Running, departure(train->id, trip.from), arrival(train->id, trip.to),
           trip.running_lo, trip.running_hi);
    }
  }

  for (const Train* train : sorted) {
    for (std::size_t k = 0; k + 1 < train->route.size(); ++k) {
      const Trip& trip = train->route[k];
      if (!trip.dwell_after_lo || !trip.dwell_after_hi) {
        throw MalformedInstance("train '" + train->id + "' has no dwell window at '" + trip.to +
                                "'");
      }
      emit(ConstraintKind::Dwell, arrival(train->id, trip.to), departure(train->id, trip.to),
           *trip.dwell_after_lo, *trip.dwell_after_hi);
    }
  }

  for (const Train* i : sorted) {
    for (const Train* j : sorted) {
      if (i == j) continue;
      for (const Trip& trip : i->route) {
        const Trip* shared = find_trip(*j, trip.from, trip.to);
        if (shared == nullptr) continue;
        const Minutes lo = std::abs(trip.running_lo - shared->running_lo) + i->basic_headway;
        emit(ConstraintKind::Headway, departure(j->id, trip.from), departure(i->id, trip.from),
             lo, T - j->basic_headway);
      }
    }
  }

  for (const Train* i : sorted) {
    for (const Train* j : sorted) {
      if (i == j) continue;
      for (const Trip& trip : i->route) {
        const Segment* seg = in.find_segment(trip.from, trip.to);
        if (seg == nullptr) {
          throw MalformedInstance("no segment between '" + trip.from + "' and '" + trip.to +
                                  "'");
        }
        if (!seg->single_track) continue;
        const Trip* opposite = find_trip(*j, trip.to, trip.from);
        if (opposite == nullptr) continue;
        const Minutes lo =
            2 * std::min(trip.running_lo, opposite->running_lo) + i->basic_headway;
        emit(ConstraintKind::SingleTrack, arrival(j->id, trip.from), departure(i->id, trip.from),
             lo, T - j->basic_headway);
      }
    }
  }

  std::vector<const ConnectionSpec*> conns;
  for (const ConnectionSpec& c : in.connections) conns.push_back(&c);
  std::stable_sort(conns.begin(), conns.end(), [](const auto* a, const auto* b) {
    return std::tie(a->feeder_train, a->onward_train) < std::tie(b->feeder_train, b->onward_train);
  });
  for (const ConnectionSpec* c : conns) {
    const Train* feeder = in.find_train(c->feeder_train);
    const Train* onward = in.find_train(c->onward_train);
    if (feeder == nullptr || onward == nullptr) {
      throw MalformedInstance("connection references unknown train '" +
                              (feeder ? c->onward_train : c->feeder_train) + "'");
    }
    const bool arrives = std::any_of(feeder->route.begin(), feeder->route.end(),
                                     [&](const Trip& t) { return t.to == c->station; });
    const bool departs = std::any_of(onward->route.begin(), onward->route.end(),
                                     [&](const Trip& t) { return t.from == c->station; });
    if (!arrives || !departs) {
      throw MalformedInstance("connection " + c->feeder_train + "->" + c->onward_train +
                              " at '" + c->station + "' has no matching arrival/departure");
    }
    emit(ConstraintKind::Connection, arrival(c->feeder_train, c->station),
         departure(c->onward_train, c->station), c->conn_lo, c->conn_hi);
  }
  return out;
}

ConstraintVerdict eval_window(Minutes lo, Minutes hi, Minutes x, Minutes y, Minutes T) {
  const std::int64_t raw = static_cast<std::int64_t>(y) - x;
  const std::int64_t d = floor_mod(raw, T);
  const std::int64_t offset = floor_mod(d - lo, T);
  if (offset > static_cast<std::int64_t>(hi) - lo) {
    return {false, 0, static_cast<Minutes>(d)};
  }
  const std::int64_t value = lo + offset;
  return {true, static_cast<std::int32_t>((value - raw) / T), static_cast<Minutes>(value)};
}

ConstraintVerdict eval_constraint(const PeriodicConstraint& c, const Timetable& tt, Minutes T) {
  return eval_window(c.lo, c.hi, tt.at(c.earlier_event), tt.at(c.later_event), T);
}

std::size_t ViolationCounts::hard() const {
  return (*this)[ConstraintKind::Running] + (*this)[ConstraintKind::Dwell] +
         (*this)[ConstraintKind::Headway] + (*this)[ConstraintKind::SingleTrack];
}

double ViolationCounts::weighted(const WeightConfig& w) const {
  double sum = 0.0;
  for (ConstraintKind k : kAllKinds) sum += weight_of(w, k) * static_cast<double>((*this)[k]);
  return sum;
}

EvaluationReport evaluate(const Timetable& tt, std::span<const PeriodicConstraint> constraints,
                          const WeightConfig& weights) {
  EvaluationReport report;
  const Minutes T = tt.period();
  for (const PeriodicConstraint& c : constraints) {
    const ConstraintVerdict v = eval_constraint(c, tt, T);
    if (v.satisfied) continue;
    ++report.violations_by_type[c.kind];
    report.violated.push_back(Violation{c, v.diff, v.q});
  }
  report.weighted_fitness = report.violations_by_type.weighted(weights);
  return report;
}

Timetable shift_timetable(const Timetable& tt, Minutes delta, Minutes T) {
  Timetable shifted(T);
  for (const auto& [event, t] : tt) shifted.set(event, static_cast<std::int64_t>(t) + delta);
  return shifted;
}

std::vector<DatedEvent> expand_periods(const Timetable& tt, int k, Minutes T) {
  std::vector<DatedEvent> out;
  if (k <= 0) return out;
  out.reserve(tt.size() * static_cast<std::size_t>(k));
  for (int p = 0; p < k; ++p) {
    for (const auto& [event, t] : tt) {
      out.push_back({event, static_cast<std::int64_t>(t) + static_cast<std::int64_t>(p) * T});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DatedEvent& a, const DatedEvent& b) {
    return a.absolute < b.absolute;
  });
  return out;
}

std::string format_clock(std::int64_t minutes, std::int64_t epoch_minutes) {
  const std::int64_t m = floor_mod(minutes + epoch_minutes, 24 * 60);
  std::ostringstream os;
  os << m / 60 << ':' << (m % 60 < 10 ? "0" : "") << m % 60;
  return os.str();
}

CompiledConstraints::CompiledConstraints(std::span<const PeriodicConstraint> constraints,
                                         std::span<const Event> event_order, Minutes T,
                                         std::span<const ConstraintKind> kinds)
    : period_(T) {
  std::map<Event, std::uint32_t> index;
  for (std::size_t i = 0; i < event_order.size(); ++i) {
    index.emplace(event_order[i], static_cast<std::uint32_t>(i));
  }
  auto lookup = [&](const Event& e) {
    auto it = index.find(e);
    if (it == index.end()) throw MissingEvent("event order has no " + to_string(e));
    return it->second;
  };
  for (const PeriodicConstraint& c : constraints) {
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) continue;
    rows_.push_back(Row{lookup(c.earlier_event), lookup(c.later_event), c.lo, c.hi - c.lo, c.kind});
  }
}

ViolationCounts CompiledConstraints::count(std::span<const Minutes> times) const {
  ViolationCounts counts;
  const Minutes T = period_;
  for (const Row& r : rows_) {
    Minutes offset = (times[r.later] - times[r.earlier] - r.lo) % T;
    if (offset < 0) offset += T;
    if (offset > r.span) ++counts[r.kind];
  }
  return counts;
}

double CompiledConstraints::fitness(std::span<const Minutes> times,
                                    const WeightConfig& weights) const {
  return count(times).weighted(weights);
}

}  // namespace ptt
