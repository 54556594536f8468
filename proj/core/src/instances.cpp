#include "ptt/instances.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ptt/errors.hpp"

namespace ptt {
namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(line, column, e.what());
  }
}

void expect_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                 std::initializer_list<std::string_view> required, const std::string& where) {
  if (!obj.is_object()) throw ValidationError("schema.object", where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("schema.unknown_key", "unknown key '" + key + "' in " + where);
    }
  }
  for (std::string_view key : required) {
    if (!obj.contains(key)) {
      throw ValidationError("schema.missing_key",
                            "missing key '" + std::string(key) + "' in " + where);
    }
  }
}

const Json& array_at(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_array()) {
    throw ValidationError("schema.type", std::string("'") + key + "' in " + where +
                                             " must be an array");
  }
  return v;
}

Minutes as_minutes(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError("schema.type", where + " must be an integer");
  return v.get<Minutes>();
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError("schema.type", where + " must be a string");
  return v.get<std::string>();
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError("schema.type", where + " must be a number");
  return v.get<double>();
}

std::pair<Minutes, Minutes> as_window(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) {
    throw ValidationError("schema.window", where + " must be a [lo, hi] pair");
  }
  return {as_minutes(v[0], where + "[0]"), as_minutes(v[1], where + "[1]")};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  expect_keys(doc, {"period", "stations", "segments", "trains", "connections", "weights", "metadata"},
              {"period", "stations", "segments", "trains"}, "instance");

  Instance in;
  in.period_T = as_minutes(doc.at("period"), "period");
  for (const Json& s : array_at(doc, "stations", "instance")) {
    in.stations.push_back(as_string(s, "station id"));
  }
  for (const Json& s : array_at(doc, "segments", "instance")) {
    expect_keys(s, {"from", "to", "single_track"}, {"from", "to"}, "segment");
    Segment seg{as_string(s.at("from"), "segment.from"), as_string(s.at("to"), "segment.to"),
                false};
    if (s.contains("single_track")) {
      if (!s.at("single_track").is_boolean()) {
        throw ValidationError("schema.type", "segment.single_track must be a boolean");
      }
      seg.single_track = s.at("single_track").get<bool>();
    }
    in.segments.push_back(std::move(seg));
  }
  for (const Json& t : array_at(doc, "trains", "instance")) {
    expect_keys(t, {"id", "basic_headway", "route"}, {"id", "basic_headway", "route"}, "train");
    Train train;
    train.id = as_string(t.at("id"), "train.id");
    const std::string where = "train '" + train.id + "'";
    train.basic_headway = as_minutes(t.at("basic_headway"), where + " basic_headway");
    for (const Json& r : array_at(t, "route", where)) {
      expect_keys(r, {"from", "to", "running", "dwell"}, {"from", "to", "running"},
                  where + " trip");
      Trip trip;
      trip.from = as_string(r.at("from"), where + " trip.from");
      trip.to = as_string(r.at("to"), where + " trip.to");
      const std::string trip_where = where + " trip " + trip.from + "->" + trip.to;
      std::tie(trip.running_lo, trip.running_hi) = as_window(r.at("running"), trip_where + " running");
      if (r.contains("dwell")) {
        auto [lo, hi] = as_window(r.at("dwell"), trip_where + " dwell");
        trip.dwell_after_lo = lo;
        trip.dwell_after_hi = hi;
      }
      train.route.push_back(std::move(trip));
    }
    in.trains.push_back(std::move(train));
  }
  if (doc.contains("connections")) {
    for (const Json& c : array_at(doc, "connections", "instance")) {
      expect_keys(c, {"feeder", "onward", "station", "window"},
                  {"feeder", "onward", "station", "window"}, "connection");
      ConnectionSpec conn;
      conn.feeder_train = as_string(c.at("feeder"), "connection.feeder");
      conn.onward_train = as_string(c.at("onward"), "connection.onward");
      conn.station = as_string(c.at("station"), "connection.station");
      std::tie(conn.conn_lo, conn.conn_hi) = as_window(c.at("window"), "connection.window");
      in.connections.push_back(std::move(conn));
    }
  }
  if (doc.contains("weights")) {
    const Json& w = doc.at("weights");
    expect_keys(w, {"running", "dwell", "headway", "single_track", "connection"}, {}, "weights");
    auto read = [&](const char* key, double& slot) {
      if (w.contains(key)) slot = as_number(w.at(key), std::string("weights.") + key);
    };
    read("running", in.weights.w_running);
    read("dwell", in.weights.w_dwell);
    read("headway", in.weights.w_headway);
    read("single_track", in.weights.w_single);
    read("connection", in.weights.w_connection);
  }
  if (doc.contains("metadata")) {
    const Json& m = doc.at("metadata");
    if (!m.is_object()) throw ValidationError("schema.object", "metadata must be an object");
    for (const auto& [key, value] : m.items()) {
      in.metadata[key] = as_string(value, "metadata." + key);
    }
  }
  validate(in);
  return in;
}

std::string dump_instance(const Instance& in) {
  Json doc;
  doc["period"] = in.period_T;
  doc["stations"] = in.stations;
  Json segments = Json::array();
  for (const Segment& s : in.segments) {
    segments.push_back({{"from", s.from}, {"to", s.to}, {"single_track", s.single_track}});
  }
  doc["segments"] = std::move(segments);
  Json trains = Json::array();
  for (const Train& t : in.trains) {
    Json route = Json::array();
    for (const Trip& trip : t.route) {
      Json r = {{"from", trip.from},
                {"to", trip.to},
                {"running", {trip.running_lo, trip.running_hi}}};
      if (trip.dwell_after_lo && trip.dwell_after_hi) {
        r["dwell"] = {*trip.dwell_after_lo, *trip.dwell_after_hi};
      }
      route.push_back(std::move(r));
    }
    trains.push_back({{"id", t.id}, {"basic_headway", t.basic_headway}, {"route", std::move(route)}});
  }
  doc["trains"] = std::move(trains);
  Json conns = Json::array();
  for (const ConnectionSpec& c : in.connections) {
    conns.push_back({{"feeder", c.feeder_train},
                     {"onward", c.onward_train},
                     {"station", c.station},
                     {"window", {c.conn_lo, c.conn_hi}}});
  }
  doc["connections"] = std::move(conns);
  doc["weights"] = {{"running", in.weights.w_running},
                    {"dwell", in.weights.w_dwell},
                    {"headway", in.weights.w_headway},
                    {"single_track", in.weights.w_single},
                    {"connection", in.weights.w_connection}};
  if (!in.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : in.metadata) meta[k] = v;
    doc["metadata"] = std::move(meta);
  }
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_file(path, dump_instance(instance));
}

Timetable parse_timetable(std::string_view text) {
  const Json doc = parse_json(text);
  expect_keys(doc, {"period", "events"}, {"period", "events"}, "timetable");
  const Minutes T = as_minutes(doc.at("period"), "period");
  if (T < 2) throw ValidationError("period.min", "period must be at least 2");
  Timetable tt(T);
  for (const Json& e : array_at(doc, "events", "timetable")) {
    expect_keys(e, {"kind", "train", "station", "time"}, {"kind", "train", "station", "time"},
                "event");
    const std::string kind = as_string(e.at("kind"), "event.kind");
    if (kind != "arrival" && kind != "departure") {
      throw ValidationError("event.kind", "unknown event kind '" + kind + "'");
    }
    Event ev{kind == "arrival" ? EventKind::Arrival : EventKind::Departure,
             as_string(e.at("train"), "event.train"), as_string(e.at("station"), "event.station")};
    const Minutes t = as_minutes(e.at("time"), "event.time");
    if (t < 0 || t >= T) {
      throw ValidationError("event.time_range", to_string(ev) + " time outside [0, period)");
    }
    if (tt.contains(ev)) throw ValidationError("event.unique", "duplicate " + to_string(ev));
    tt.set(ev, t);
  }
  return tt;
}

std::string dump_timetable(const Timetable& tt) {
  Json doc;
  doc["period"] = tt.period();
  Json events = Json::array();
  for (const auto& [e, t] : tt) {
    events.push_back({{"kind", e.kind == EventKind::Arrival ? "arrival" : "departure"},
                      {"train", e.train},
                      {"station", e.station},
                      {"time", t}});
  }
  doc["events"] = std::move(events);
  return doc.dump(2) + "\n";
}

Timetable load_timetable(const std::filesystem::path& path) {
  return parse_timetable(read_file(path));
}

void save_timetable(const Timetable& tt, const std::filesystem::path& path) {
  write_file(path, dump_timetable(tt));
}

}  // namespace ptt
