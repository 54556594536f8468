#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ptt {

/// Whole minutes. All times and bounds in the model are integral.
using Minutes = std::int32_t;
using StationId = std::string;
using TrainId = std::string;

struct Segment {
  StationId from;
  StationId to;
  bool single_track = false;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// One leg of a train route. The dwell window describes the stop at `to`
/// and is absent on the final trip.
struct Trip {
  StationId from;
  StationId to;
  Minutes running_lo = 0;
  Minutes running_hi = 0;
  std::optional<Minutes> dwell_after_lo;
  std::optional<Minutes> dwell_after_hi;

  friend bool operator==(const Trip&, const Trip&) = default;
};

struct Train {
  TrainId id;
  Minutes basic_headway = 1;
  std::vector<Trip> route;

  friend bool operator==(const Train&, const Train&) = default;
};

/// Passenger transfer from `feeder_train` (arriving) to `onward_train`
/// (departing) at `station`.
struct ConnectionSpec {
  TrainId feeder_train;
  TrainId onward_train;
  StationId station;
  Minutes conn_lo = 0;
  Minutes conn_hi = 0;

  friend bool operator==(const ConnectionSpec&, const ConnectionSpec&) = default;
};

struct WeightConfig {
  double w_running = 1000.0;
  double w_dwell = 1000.0;
  double w_headway = 100.0;
  double w_single = 100.0;
  double w_connection = 1.0;

  friend bool operator==(const WeightConfig&, const WeightConfig&) = default;
};

struct Instance {
  Minutes period_T = 60;
  std::vector<StationId> stations;
  std::vector<Segment> segments;
  std::vector<Train> trains;
  std::vector<ConnectionSpec> connections;
  WeightConfig weights;
  /// Free-form provenance notes (e.g. whether the instance is synthetic).
  std::map<std::string, std::string> metadata;

  const Train* find_train(const TrainId& id) const;
  const Segment* find_segment(const StationId& a, const StationId& b) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Checks every instance invariant; throws ValidationError naming the first
/// violated rule.
void validate(const Instance& instance);
void validate(const WeightConfig& weights);

enum class EventKind : std::uint8_t { Arrival, Departure };

struct Event {
  EventKind kind = EventKind::Departure;
  TrainId train;
  StationId station;

  friend auto operator<=>(const Event&, const Event&) = default;
  friend bool operator==(const Event&, const Event&) = default;
};

Event arrival(TrainId train, StationId station);
Event departure(TrainId train, StationId station);
std::string to_string(const Event& e);

/// Canonical within-period event times.
class Timetable {
 public:
  Timetable() = default;
  explicit Timetable(Minutes period) : period_(period) {}

  Minutes period() const noexcept { return period_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool contains(const Event& e) const { return times_.contains(e); }

  /// Stores `t` reduced into [0, period).
  void set(const Event& e, std::int64_t t);
  /// Throws MissingEvent when absent.
  Minutes at(const Event& e) const;

  auto begin() const { return times_.begin(); }
  auto end() const { return times_.end(); }

  friend bool operator==(const Timetable&, const Timetable&) = default;

 private:
  Minutes period_ = 0;
  std::map<Event, Minutes> times_;
};

enum class ConstraintKind : std::uint8_t { Running, Dwell, Headway, SingleTrack, Connection };
inline constexpr std::size_t kConstraintKinds = 5;
inline constexpr std::array<ConstraintKind, kConstraintKinds> kAllKinds = {
    ConstraintKind::Running, ConstraintKind::Dwell, ConstraintKind::Headway,
    ConstraintKind::SingleTrack, ConstraintKind::Connection};

const char* to_string(ConstraintKind kind);
double weight_of(const WeightConfig& weights, ConstraintKind kind);
bool is_hard(ConstraintKind kind);

/// lo <= (time(later) - time(earlier)) + q*T <= hi for some integer q.
struct PeriodicConstraint {
  ConstraintKind kind = ConstraintKind::Running;
  Event earlier_event;
  Event later_event;
  Minutes lo = 0;
  Minutes hi = 0;

  friend bool operator==(const PeriodicConstraint&, const PeriodicConstraint&) = default;
};

/// Builds the full constraint set, ordered by kind, then train ids, then
/// station order along the route. Constraints whose window spans a whole
/// period are dropped and reported through `warnings` when given.
std::vector<PeriodicConstraint> derive_bounds(const Instance& instance,
                                              std::vector<std::string>* warnings = nullptr);

struct ConstraintVerdict {
  bool satisfied = false;
  /// Period offset used to bring the difference into the window.
  std::int32_t q = 0;
  /// The window value when satisfied, otherwise the difference mod T.
  Minutes diff = 0;
};

ConstraintVerdict eval_constraint(const PeriodicConstraint& c, const Timetable& tt, Minutes T);
/// Same rule over raw times; `x` is the earlier event's time.
ConstraintVerdict eval_window(Minutes lo, Minutes hi, Minutes x, Minutes y, Minutes T);

/// Violation counts indexed by ConstraintKind.
class ViolationCounts {
 public:
  std::size_t& operator[](ConstraintKind k) { return counts_[static_cast<std::size_t>(k)]; }
  std::size_t operator[](ConstraintKind k) const { return counts_[static_cast<std::size_t>(k)]; }
  std::size_t hard() const;
  std::size_t soft() const { return (*this)[ConstraintKind::Connection]; }
  std::size_t total() const { return hard() + soft(); }
  double weighted(const WeightConfig& w) const;

  friend bool operator==(const ViolationCounts&, const ViolationCounts&) = default;

 private:
  std::array<std::size_t, kConstraintKinds> counts_{};
};

struct Violation {
  PeriodicConstraint constraint;
  Minutes diff = 0;
  std::int32_t q = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct EvaluationReport {
  ViolationCounts violations_by_type;
  double weighted_fitness = 0.0;
  std::vector<Violation> violated;

  /// No running, dwell, headway or single-track violations.
  bool feasible() const { return violations_by_type.hard() == 0; }
  bool feasible_with_connections() const { return violations_by_type.total() == 0; }
};

EvaluationReport evaluate(const Timetable& tt, std::span<const PeriodicConstraint> constraints,
                          const WeightConfig& weights);

Timetable shift_timetable(const Timetable& tt, Minutes delta, Minutes T);

struct DatedEvent {
  Event event;
  std::int64_t absolute = 0;

  friend bool operator==(const DatedEvent&, const DatedEvent&) = default;
};

/// Repeats the canonical pattern over `k` periods, sorted by absolute time.
std::vector<DatedEvent> expand_periods(const Timetable& tt, int k, Minutes T);

/// "H:MM" clock rendering of `epoch_minutes + minutes`, wrapping at 24h.
std::string format_clock(std::int64_t minutes, std::int64_t epoch_minutes = 0);

/// Constraint set bound to a dense event numbering, for hot evaluation loops.
class CompiledConstraints {
 public:
  CompiledConstraints() = default;
  /// Keeps only constraints whose kind is in `kinds`. Throws MissingEvent if
  /// a kept constraint references an event outside `event_order`.
  CompiledConstraints(std::span<const PeriodicConstraint> constraints,
                      std::span<const Event> event_order, Minutes T,
                      std::span<const ConstraintKind> kinds = kAllKinds);

  ViolationCounts count(std::span<const Minutes> times) const;
  double fitness(std::span<const Minutes> times, const WeightConfig& weights) const;
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  struct Row {
    std::uint32_t earlier;
    std::uint32_t later;
    Minutes lo;
    Minutes span;
    ConstraintKind kind;
  };
  std::vector<Row> rows_;
  Minutes period_ = 1;
};

}  // namespace ptt
