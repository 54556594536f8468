#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ptt/model.hpp"

namespace ptt {

/// Parses and fully validates an instance document. Throws ParseError for
/// malformed JSON and ValidationError for schema or invariant violations
/// (unknown keys included).
Instance parse_instance(std::string_view text);
std::string dump_instance(const Instance& instance);

/// Throws IoError when the file cannot be read or written.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

Timetable parse_timetable(std::string_view text);
std::string dump_timetable(const Timetable& tt);
Timetable load_timetable(const std::filesystem::path& path);
void save_timetable(const Timetable& tt, const std::filesystem::path& path);

/// Four two-direction lines over ten stations with a 60 minute period:
///
///   S01 - S02 - S03 - S04 = S05        L1: S01..S05
///                |     |               L2: S01 S02 S03 S06
///       S07 -----+     +---- S08       L3: S07 S03 S04 S08
///                |                     L4: S06 S09 S10
///               S06 - S09 = S10
///
/// ("=" marks single track, as does S03-S06.) Census: 24 running,
/// 16 dwell, 12 headway, 6 single-track and 7 connection constraints.
Instance build_cs1();

/// Synthetic network with 26 stations, 24 two-direction lines and 14
/// connections whose derived constraint set has exactly 452 members. Only
/// the published statistics are matched; line data is random. Throws
/// GenerationInfeasible if no candidate hits the target.
Instance generate_cs2_like(std::uint64_t seed);

inline constexpr std::size_t kCs2Stations = 26;
inline constexpr std::size_t kCs2Lines = 24;
inline constexpr std::size_t kCs2Connections = 14;
inline constexpr std::size_t kCs2Constraints = 452;

}  // namespace ptt
