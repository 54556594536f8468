#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "ptt/codec.hpp"
#include "ptt/errors.hpp"
#include "ptt/instances.hpp"

namespace ptt {
namespace {

using Window = std::pair<Minutes, Minutes>;

struct LineSpec {
  std::string name;
  std::vector<StationId> stops;
  std::vector<Window> running;  // per trip
  std::vector<Window> dwell;    // per intermediate stop
  Minutes basic_headway = 3;
};

Train make_train(TrainId id, const std::vector<StationId>& stops, const std::vector<Window>& running,
                 const std::vector<Window>& dwell, Minutes basic_headway) {
  Train train{std::move(id), basic_headway, {}};
  for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
    Trip trip{stops[k], stops[k + 1], running[k].first, running[k].second, {}, {}};
    if (k + 2 < stops.size()) {
      trip.dwell_after_lo = dwell[k].first;
      trip.dwell_after_hi = dwell[k].second;
    }
    train.route.push_back(std::move(trip));
  }
  return train;
}

// Forward train "<name>a" and its mirror "<name>b".
void add_line(Instance& in, const LineSpec& line) {
  in.trains.push_back(
      make_train(line.name + "a", line.stops, line.running, line.dwell, line.basic_headway));
  std::vector<StationId> stops(line.stops.rbegin(), line.stops.rend());
  std::vector<Window> running(line.running.rbegin(), line.running.rend());
  std::vector<Window> dwell(line.dwell.rbegin(), line.dwell.rend());
  in.trains.push_back(make_train(line.name + "b", stops, running, dwell, line.basic_headway));
}

std::string station_name(std::size_t i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "N%02zu", i + 1);
  return buf;
}

std::string line_name(std::size_t i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "R%02zu", i + 1);
  return buf;
}

Minutes draw(Rng& rng, Minutes lo, Minutes hi) {
  return std::uniform_int_distribution<Minutes>(lo, hi)(rng);
}

// One randomized cs2-like candidate. Returns false if this draw cannot hit
// the census targets.
bool try_cs2_candidate(Rng& rng, Instance& out) {
  constexpr std::size_t kExtraEdges = 5;
  const std::size_t n = kCs2Stations;

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);

  // Corridor-like random tree plus a few chords.
  std::map<std::pair<std::size_t, std::size_t>, Minutes> base_running;
  std::vector<std::vector<std::size_t>> adj(n);
  auto link = [&](std::size_t a, std::size_t b) {
    auto key = std::minmax(a, b);
    if (a == b || base_running.contains({key.first, key.second})) return;
    base_running[{key.first, key.second}] = draw(rng, 3, 12);
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t back = std::min<std::size_t>(k, 3);
    link(perm[k], perm[k - 1 - static_cast<std::size_t>(draw(rng, 0, static_cast<Minutes>(back) - 1))]);
  }
  for (std::size_t e = 0; e < kExtraEdges; ++e) {
    link(static_cast<std::size_t>(draw(rng, 0, n - 1)), static_cast<std::size_t>(draw(rng, 0, n - 1)));
  }
  auto base = [&](std::size_t a, std::size_t b) {
    auto key = std::minmax(a, b);
    return base_running.at({key.first, key.second});
  };

  std::vector<LineSpec> lines;
  std::set<std::vector<std::size_t>> seen;
  std::size_t guard = 0;
  while (lines.size() < kCs2Lines) {
    if (++guard > 10'000) return false;
    const std::size_t length = static_cast<std::size_t>(draw(rng, 2, 4));
    std::vector<std::size_t> path{static_cast<std::size_t>(draw(rng, 0, n - 1))};
    while (path.size() <= length) {
      std::vector<std::size_t> options;
      for (std::size_t nb : adj[path.back()]) {
        if (std::find(path.begin(), path.end(), nb) == path.end()) options.push_back(nb);
      }
      if (options.empty()) break;
      path.push_back(options[static_cast<std::size_t>(draw(rng, 0, static_cast<Minutes>(options.size()) - 1))]);
    }
    if (path.size() < 3) continue;
    std::vector<std::size_t> rev(path.rbegin(), path.rend());
    if (seen.contains(path) || seen.contains(rev)) continue;
    seen.insert(path);

    LineSpec line;
    line.name = line_name(lines.size());
    line.basic_headway = draw(rng, 2, 3);
    for (std::size_t k = 0; k < path.size(); ++k) line.stops.push_back(station_name(path[k]));
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const Minutes lo = base(path[k], path[k + 1]) + draw(rng, 0, 1);
      line.running.emplace_back(lo, lo + draw(rng, 1, 2));
    }
    for (std::size_t k = 0; k + 2 < path.size(); ++k) {
      const Minutes lo = draw(rng, 1, 2);
      line.dwell.emplace_back(lo, lo + draw(rng, 1, 3));
    }
    lines.push_back(std::move(line));
  }

  Instance in;
  in.period_T = 60;
  for (std::size_t i = 0; i < n; ++i) in.stations.push_back(station_name(i));
  for (const auto& [key, _] : base_running) {
    in.segments.push_back({station_name(key.first), station_name(key.second), false});
  }
  for (const LineSpec& line : lines) add_line(in, line);

  // Lines per segment, and segments short enough to run as single track.
  std::map<std::pair<StationId, StationId>, std::size_t> usage;
  for (const LineSpec& line : lines) {
    for (std::size_t k = 0; k + 1 < line.stops.size(); ++k) {
      auto key = std::minmax(line.stops[k], line.stops[k + 1]);
      ++usage[{key.first, key.second}];
    }
  }

  // Connections between different lines at shared stations.
  struct Candidate {
    TrainId feeder, onward;
    StationId station;
  };
  std::vector<Candidate> candidates;
  for (const Train& f : in.trains) {
    for (const Train& o : in.trains) {
      if (f.id.substr(0, 3) == o.id.substr(0, 3)) continue;
      for (const Trip& ft : f.route) {
        for (const Trip& ot : o.route) {
          if (ft.to == ot.from) candidates.push_back({f.id, o.id, ft.to});
        }
      }
    }
  }
  if (candidates.size() < kCs2Connections) return false;
  std::shuffle(candidates.begin(), candidates.end(), rng);
  for (std::size_t c = 0; c < kCs2Connections; ++c) {
    const Minutes lo = draw(rng, 2, 4);
    in.connections.push_back(
        {candidates[c].feeder, candidates[c].onward, candidates[c].station, lo, lo + draw(rng, 5, 10)});
  }

  const std::size_t without_single = derive_bounds(in).size();
  if (without_single > kCs2Constraints) return false;
  // A single-track segment used by one line adds its two opposite-pair
  // constraints.
  const std::size_t needed = (kCs2Constraints - without_single) / 2;
  if ((kCs2Constraints - without_single) % 2 != 0) return false;
  std::vector<Segment*> single_candidates;
  for (Segment& seg : in.segments) {
    auto key = std::minmax(seg.from, seg.to);
    auto it = usage.find({key.first, key.second});
    const std::size_t from = std::stoul(seg.from.substr(1)) - 1;
    const std::size_t to = std::stoul(seg.to.substr(1)) - 1;
    if (it != usage.end() && it->second == 1 && base(from, to) <= 7) {
      single_candidates.push_back(&seg);
    }
  }
  if (single_candidates.size() < needed) return false;
  for (std::size_t s = 0; s < needed; ++s) single_candidates[s]->single_track = true;

  if (derive_bounds(in).size() != kCs2Constraints) return false;
  out = std::move(in);
  return true;
}

}  // namespace

Instance build_cs1() {
  Instance in;
  in.period_T = 60;
  for (int i = 1; i <= 10; ++i) in.stations.push_back((i < 10 ? "S0" : "S") + std::to_string(i));
  in.segments = {
      {"S01", "S02", false}, {"S02", "S03", false}, {"S03", "S04", false},
      {"S04", "S05", true},  {"S03", "S06", true},  {"S07", "S03", false},
      {"S04", "S08", false}, {"S06", "S09", false}, {"S09", "S10", true},
  };
  add_line(in, {"L1", {"S01", "S02", "S03", "S04", "S05"},
                {{12, 14}, {9, 11}, {10, 12}, {6, 7}}, {{1, 5}, {1, 5}, {1, 5}}, 3});
  add_line(in, {"L2", {"S01", "S02", "S03", "S06"}, {{11, 13}, {9, 11}, {5, 6}},
                {{1, 5}, {1, 5}}, 3});
  add_line(in, {"L3", {"S07", "S03", "S04", "S08"}, {{14, 16}, {10, 12}, {13, 15}},
                {{2, 6}, {2, 6}}, 4});
  add_line(in, {"L4", {"S06", "S09", "S10"}, {{15, 17}, {6, 7}}, {{1, 4}}, 2});
  in.connections = {
      {"L1a", "L3a", "S03", 2, 15}, {"L2a", "L3a", "S03", 2, 15}, {"L3b", "L1b", "S03", 2, 15},
      {"L3b", "L2b", "S03", 2, 15}, {"L2a", "L4a", "S06", 3, 15}, {"L4b", "L2b", "S06", 3, 15},
      {"L1a", "L3b", "S04", 2, 18},
  };
  in.metadata = {{"name", "cs1"},
                 {"source", "reconstruction: 4 lines, 8 trains, 10 stations, 7 connections"}};
  validate(in);
  return in;
}

Instance generate_cs2_like(std::uint64_t seed) {
  constexpr int kAttempts = 2000;
  Rng rng(seed);
  Instance in;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    if (!try_cs2_candidate(rng, in)) continue;
    in.metadata = {{"name", "cs2-like"},
                   {"synthetic", "true"},
                   {"seed", std::to_string(seed)},
                   {"source", "synthetic network matching 26 stations, 48 trains, "
                              "14 connections, 452 constraints"}};
    validate(in);
    return in;
  }
  throw GenerationInfeasible("no cs2-like candidate reached " +
                             std::to_string(kCs2Constraints) + " constraints for seed " +
                             std::to_string(seed));
}

}  // namespace ptt
