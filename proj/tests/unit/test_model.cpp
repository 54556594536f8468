#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ptt/codec.hpp"
#include "ptt/errors.hpp"
#include "ptt/model.hpp"

using namespace ptt;
using ptt::test::trip;

namespace {

// Direct reading of lo <= v + qT <= hi over a small range of q.
bool satisfied_by_enumeration(Minutes lo, Minutes hi, Minutes x, Minutes y, Minutes T) {
  for (int q = -1; q <= 1; ++q) {
    const Minutes v = y - x + q * T;
    if (lo <= v && v <= hi) return true;
  }
  return false;
}

Timetable random_timetable(const Instance& in, std::mt19937_64& rng) {
  Timetable tt(in.period_T);
  std::uniform_int_distribution<Minutes> pick(0, in.period_T - 1);
  for (const Event& e : event_order(in)) tt.set(e, pick(rng));
  return tt;
}

}  // namespace

TEST_CASE("derive_bounds: single train with one trip yields its running constraint only") {
  const auto cs = derive_bounds(test::single_trip_instance());
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].kind == ConstraintKind::Running);
  CHECK(cs[0].earlier_event == departure("t", "s0"));
  CHECK(cs[0].later_event == arrival("t", "s1"));
  CHECK(cs[0].lo == 10);
  CHECK(cs[0].hi == 12);
}

TEST_CASE("derive_bounds: headway window from running_lo difference and basic headways") {
  // running_lo 10 and 12, basic headways 3 and 4, T = 60:
  //   i over j: lo = |10 - 12| + 3 = 5, hi = 60 - 4 = 56
  //   j over i: lo = |12 - 10| + 4 = 6, hi = 60 - 3 = 57
  const auto cs = derive_bounds(test::shared_trip_instance());
  std::vector<PeriodicConstraint> headway;
  for (const auto& c : cs) {
    if (c.kind == ConstraintKind::Headway) headway.push_back(c);
  }
  REQUIRE(headway.size() == 2);
  CHECK(headway[0].later_event == departure("i", "s"));
  CHECK(headway[0].earlier_event == departure("j", "s"));
  CHECK(headway[0].lo == 5);
  CHECK(headway[0].hi == 56);
  CHECK(headway[1].later_event == departure("j", "s"));
  CHECK(headway[1].lo == 6);
  CHECK(headway[1].hi == 57);
}

TEST_CASE("derive_bounds: single-track pairs use the smaller running_lo") {
  Instance in;
  in.period_T = 60;
  in.stations = {"s", "t"};
  in.segments = {{"s", "t", true}};
  in.trains = {{"up", 3, {trip("s", "t", 6, 8)}}, {"down", 2, {trip("t", "s", 7, 9)}}};
  const auto cs = derive_bounds(in);
  std::vector<PeriodicConstraint> single;
  for (const auto& c : cs) {
    if (c.kind == ConstraintKind::SingleTrack) single.push_back(c);
  }
  REQUIRE(single.size() == 2);
  // Sorted by train id: "down" first. down departs t; up arrives t.
  CHECK(single[0].later_event == departure("down", "t"));
  CHECK(single[0].earlier_event == arrival("up", "t"));
  CHECK(single[0].lo == 2 * 6 + 2);
  CHECK(single[0].hi == 60 - 3);
  CHECK(single[1].later_event == departure("up", "s"));
  CHECK(single[1].earlier_event == arrival("down", "s"));
  CHECK(single[1].lo == 2 * 6 + 3);
  CHECK(single[1].hi == 60 - 2);
}

TEST_CASE("derive_bounds: ordering is by kind, then train id, then route order") {
  const auto cs = derive_bounds(build_cs1());
  for (std::size_t i = 1; i < cs.size(); ++i) {
    CHECK(static_cast<int>(cs[i - 1].kind) <= static_cast<int>(cs[i].kind));
  }
  CHECK(cs == derive_bounds(build_cs1()));
  CHECK(cs.front().earlier_event == departure("L1a", "S01"));
}

TEST_CASE("derive_bounds: errors") {
  SUBCASE("bound inversion") {
    // i over j: lo = |10 - 12| + 50 = 52, hi = 60 - 55 = 5.
    Instance in = test::shared_trip_instance();
    in.trains[0].basic_headway = 50;
    in.trains[1].basic_headway = 55;
    CHECK_THROWS_AS(derive_bounds(in), BoundInversion);
  }
  SUBCASE("unknown connection train") {
    Instance in = test::shared_trip_instance();
    in.connections = {{"ghost", "j", "s", 1, 5}};
    CHECK_THROWS_AS(derive_bounds(in), MalformedInstance);
  }
  SUBCASE("vacuous window dropped with a warning") {
    // Validation rejects this window; derive_bounds alone drops it.
    Instance in = test::single_trip_instance();
    in.trains.push_back({"u", 3, {trip("s1", "s0", 10, 12)}});
    in.connections = {{"t", "u", "s1", 0, 60}};
    std::vector<std::string> warnings;
    const auto cs = derive_bounds(in, &warnings);
    CHECK(cs.size() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("connection") != std::string::npos);
  }
}

TEST_CASE("eval_constraint examples") {
  Timetable tt(60);
  const Event x = departure("a", "s");
  const Event y = departure("b", "s");
  auto check = [&](Minutes lo, Minutes hi, Minutes tx, Minutes ty) {
    tt.set(x, tx);
    tt.set(y, ty);
    return eval_constraint({ConstraintKind::Headway, x, y, lo, hi}, tt, 60);
  };
  const auto at_lower = check(3, 57, 0, 3);
  CHECK(at_lower.satisfied);
  CHECK(at_lower.q == 0);
  CHECK(at_lower.diff == 3);

  const auto wrapped = check(5, 15, 55, 5);
  CHECK(wrapped.satisfied);
  CHECK(wrapped.q == 1);
  CHECK(wrapped.diff == 10);

  const auto outside = check(5, 15, 0, 20);
  CHECK_FALSE(outside.satisfied);
  CHECK(outside.q == 0);
  CHECK(outside.diff == 20);

  Timetable empty(60);
  CHECK_THROWS_AS(eval_constraint({ConstraintKind::Running, x, y, 0, 1}, empty, 60), MissingEvent);
}

TEST_CASE("eval_window agrees with q enumeration for every tuple at T = 6") {
  const Minutes T = 6;
  std::size_t tuples = 0;
  for (Minutes lo = -T + 1; lo < T; ++lo) {
    for (Minutes hi = lo; hi < T && hi - lo < T; ++hi) {
      for (Minutes x = 0; x < T; ++x) {
        for (Minutes y = 0; y < T; ++y) {
          ++tuples;
          const auto v = eval_window(lo, hi, x, y, T);
          REQUIRE(v.satisfied == satisfied_by_enumeration(lo, hi, x, y, T));
          if (v.satisfied) {
            CHECK(lo <= y - x + v.q * T);
            CHECK(y - x + v.q * T <= hi);
            CHECK(v.diff == y - x + v.q * T);
          }
        }
      }
    }
  }
  CHECK(tuples > 0);
}

TEST_CASE("evaluate: fitness is the weighted violation count") {
  SUBCASE("all satisfied") {
    const Instance in = test::single_trip_instance();
    Timetable tt(60);
    tt.set(departure("t", "s0"), 0);
    tt.set(arrival("t", "s1"), 11);
    const auto r = evaluate(tt, derive_bounds(in), in.weights);
    CHECK(r.weighted_fitness == 0.0);
    CHECK(r.violations_by_type.total() == 0);
    CHECK(r.feasible_with_connections());
  }
  SUBCASE("two headway and three connection violations") {
    ViolationCounts counts;
    counts[ConstraintKind::Headway] = 2;
    counts[ConstraintKind::Connection] = 3;
    CHECK(counts.weighted(WeightConfig{}) == 203.0);
    CHECK(counts.hard() == 2);
    CHECK(counts.soft() == 3);
  }
}

TEST_CASE("evaluate: property checks on random cs1 timetables") {
  const Instance in = build_cs1();
  const auto cs = derive_bounds(in);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Timetable tt = random_timetable(in, rng);
    const EvaluationReport base = evaluate(tt, cs, in.weights);

    // Fitness identity.
    double dot = 0.0;
    for (ConstraintKind k : kAllKinds) {
      dot += weight_of(in.weights, k) * static_cast<double>(base.violations_by_type[k]);
    }
    CHECK(base.weighted_fitness == dot);
    CHECK(base.violated.size() == base.violations_by_type.total());

    // Shift invariance.
    const Minutes delta = std::uniform_int_distribution<Minutes>(-200, 200)(rng);
    CHECK(evaluate(shift_timetable(tt, delta, 60), cs, in.weights).violations_by_type ==
          base.violations_by_type);

    // Monotone weights.
    for (ConstraintKind k : kAllKinds) {
      WeightConfig heavier = in.weights;
      switch (k) {
        case ConstraintKind::Running: heavier.w_running += 5; break;
        case ConstraintKind::Dwell: heavier.w_dwell += 5; break;
        case ConstraintKind::Headway: heavier.w_headway += 5; break;
        case ConstraintKind::SingleTrack: heavier.w_single += 5; break;
        case ConstraintKind::Connection: heavier.w_connection += 5; break;
      }
      CHECK(evaluate(tt, cs, heavier).weighted_fitness >= base.weighted_fitness);
    }
  }
}

TEST_CASE("shift_timetable: zero and full-period shifts are identities") {
  const Instance in = build_cs1();
  std::mt19937_64 rng(3);
  const Timetable tt = random_timetable(in, rng);
  CHECK(shift_timetable(tt, 0, 60) == tt);
  CHECK(shift_timetable(tt, 60, 60) == tt);
  CHECK(shift_timetable(tt, -120, 60) == tt);
}

TEST_CASE("expand_periods and clock rendering") {
  Timetable tt(60);
  tt.set(departure("tgv", "Paris Nord"), 46);
  const auto two = expand_periods(tt, 2, 60);
  REQUIRE(two.size() == 2);
  CHECK(format_clock(two[0].absolute, 8 * 60) == "8:46");
  CHECK(format_clock(two[1].absolute, 8 * 60) == "9:46");

  Timetable zero(60);
  zero.set(departure("t", "s"), 0);
  const auto three = expand_periods(zero, 3, 60);
  REQUIRE(three.size() == 3);
  CHECK(three[0].absolute == 0);
  CHECK(three[1].absolute == 60);
  CHECK(three[2].absolute == 120);
  CHECK(format_clock(0, 0) == "0:00");

  const Instance in = build_cs1();
  std::mt19937_64 rng(1);
  const Timetable pattern = random_timetable(in, rng);
  const auto once = expand_periods(pattern, 1, 60);
  CHECK(once.size() == pattern.size());
  for (const auto& de : once) CHECK(pattern.at(de.event) == de.absolute);
}

TEST_CASE("validate: instance invariants are named") {
  auto invariant_of = [](const Instance& in) {
    try {
      validate(in);
    } catch (const ValidationError& e) {
      return e.invariant();
    }
    return std::string("ok");
  };
  CHECK(invariant_of(build_cs1()) == "ok");

  Instance in = test::two_trip_instance();
  CHECK(invariant_of(in) == "ok");

  Instance bad = in;
  bad.period_T = 1;
  CHECK(invariant_of(bad) == "period.min");

  bad = in;
  bad.trains.clear();
  CHECK(invariant_of(bad) == "trains.nonempty");

  bad = in;
  bad.trains.push_back(bad.trains[0]);
  CHECK(invariant_of(bad) == "train.unique_id");

  bad = in;
  bad.trains[0].route[1].from = "s0";
  CHECK(invariant_of(bad) == "trip.chain");

  bad = in;
  bad.trains[0].route[0].running_lo = 13;
  CHECK(invariant_of(bad) == "trip.running_bounds");

  bad = in;
  bad.trains[0].route[0].dwell_after_lo.reset();
  bad.trains[0].route[0].dwell_after_hi.reset();
  CHECK(invariant_of(bad) == "trip.dwell_present");

  bad = in;
  bad.trains[0].route[1].dwell_after_lo = 0;
  bad.trains[0].route[1].dwell_after_hi = 1;
  CHECK(invariant_of(bad) == "trip.final_dwell_absent");

  bad = in;
  bad.trains[0].basic_headway = 60;
  CHECK(invariant_of(bad) == "train.basic_headway");

  bad = in;
  bad.segments.push_back({"s1", "s0", true});
  CHECK(invariant_of(bad) == "segment.unique");

  bad = in;
  bad.weights.w_connection = 200;
  CHECK(invariant_of(bad) == "weights.hard_over_soft");

  bad = in;
  bad.connections = {{"t", "t", "s0", 1, 2}};
  CHECK(invariant_of(bad) == "connection.feeder_arrives");
}
