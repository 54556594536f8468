#pragma once

#include <filesystem>
#include <string>

#include "ptt/instances.hpp"
#include "ptt/model.hpp"

namespace ptt::test {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PTT_DATA_DIR) / name;
}

inline Trip trip(StationId from, StationId to, Minutes lo, Minutes hi) {
  return Trip{std::move(from), std::move(to), lo, hi, std::nullopt, std::nullopt};
}

inline Trip trip(StationId from, StationId to, Minutes lo, Minutes hi, Minutes dlo, Minutes dhi) {
  return Trip{std::move(from), std::move(to), lo, hi, dlo, dhi};
}

/// One train, one trip s0 -> s1.
inline Instance single_trip_instance(Minutes T = 60, Minutes lo = 10, Minutes hi = 12) {
  Instance in;
  in.period_T = T;
  in.stations = {"s0", "s1"};
  in.segments = {{"s0", "s1", false}};
  in.trains = {{"t", 3, {trip("s0", "s1", lo, hi)}}};
  return in;
}

/// Two trains sharing the directed trip s -> t.
inline Instance shared_trip_instance() {
  Instance in;
  in.period_T = 60;
  in.stations = {"s", "t"};
  in.segments = {{"s", "t", false}};
  in.trains = {{"i", 3, {trip("s", "t", 10, 14)}}, {"j", 4, {trip("s", "t", 12, 15)}}};
  return in;
}

/// One train over three stations.
inline Instance two_trip_instance(Minutes T = 60) {
  Instance in;
  in.period_T = T;
  in.stations = {"s0", "s1", "s2"};
  in.segments = {{"s0", "s1", false}, {"s1", "s2", false}};
  in.trains = {{"t", 2, {trip("s0", "s1", 5, 12, 1, 4), trip("s1", "s2", 3, 9)}}};
  return in;
}

}  // namespace ptt::test
