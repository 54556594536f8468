#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ptt::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "ptt_cli_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

std::string micro(int n) {
  return ptt::test::data_path("micro/micro" + std::to_string(n) + ".json").string();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Three trains on one trip with basic headway 4 in a 10-minute period: the
// pairwise headways cannot all hold.
const char* kCrowded = R"({"period": 10, "stations": ["A", "B"],
  "segments": [{"from": "A", "to": "B", "single_track": false}],
  "trains": [
    {"id": "a", "basic_headway": 4, "route": [{"from": "A", "to": "B", "running": [2, 3]}]},
    {"id": "b", "basic_headway": 4, "route": [{"from": "A", "to": "B", "running": [2, 3]}]},
    {"id": "c", "basic_headway": 4, "route": [{"from": "A", "to": "B", "running": [2, 3]}]}]})";

}  // namespace

TEST_CASE("solve exit codes") {
  SUBCASE("optimal") {
    const auto r = cli({"solve", "--instance", micro(2), "--pop", "50", "--max-evals", "20K"});
    CHECK(r.code == ptt::cli::kExitOptimal);
    CHECK(r.out.find("fitness: 0") != std::string::npos);
    CHECK(r.out.find("terminated_by: optimum_found") != std::string::npos);
  }
  SUBCASE("soft violations only") {
    const auto r = cli({"solve", "--instance", micro(4), "--pop", "50", "--max-evals", "5000"});
    CHECK(r.code == ptt::cli::kExitSoftViolations);
    CHECK(r.out.find("violated connection arr(P,B) -> dep(Q,B)") != std::string::npos);
  }
  SUBCASE("hard infeasible") {
    const auto path = scratch("crowded.json", kCrowded);
    const auto r = cli({"solve", "--instance", path.string(), "--pop", "30", "--max-evals", "3000"});
    CHECK(r.code == ptt::cli::kExitInfeasible);
    CHECK(r.out.find("violated headway") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(cli({}).code == ptt::cli::kExitUsage);
    CHECK(cli({"solve"}).code == ptt::cli::kExitUsage);
    CHECK(cli({"solve", "--instance", micro(1), "--pop", "1"}).code == ptt::cli::kExitUsage);
    CHECK(cli({"solve", "--instance", micro(1), "--max-evals", "lots"}).code == ptt::cli::kExitUsage);
    CHECK(cli({"solve", "--instance", micro(1), "--weights", "w_c=2000"}).code ==
          ptt::cli::kExitUsage);
  }
  SUBCASE("bad instances") {
    const auto r = cli({"solve", "--instance", "/nonexistent.json"});
    CHECK(r.code == ptt::cli::kExitBadInstance);
    CHECK_FALSE(r.err.empty());
    const auto broken = scratch("broken.json", "{\"period\": 60,");
    CHECK(cli({"solve", "--instance", broken.string()}).code == ptt::cli::kExitBadInstance);
    const auto empty = scratch("empty.json",
                               R"({"period": 60, "stations": ["A"], "segments": [], "trains": []})");
    CHECK(cli({"census", "--instance", empty.string()}).code == ptt::cli::kExitBadInstance);
  }
}

TEST_CASE("solve is reproducible and writes a timetable") {
  const auto out = fs::temp_directory_path() / "ptt_cli_test" / "tt.json";
  fs::create_directories(out.parent_path());
  const std::vector<std::string> args{"solve", "--instance", micro(5), "--pop", "40",
                                      "--max-evals", "4000", "--seed", "9", "--out", out.string()};
  const auto a = cli(args);
  const auto b = cli(args);
  auto no_time = [](const std::string& s) { return s.substr(0, s.rfind("time_s")); };
  CHECK(no_time(a.out) == no_time(b.out));
  REQUIRE(fs::exists(out));
  const auto eval = cli({"evaluate", "--instance", micro(5), "--timetable", out.string()});
  CHECK(eval.code == a.code);
}

TEST_CASE("expand renders clock times") {
  const auto inst = scratch("single.json", ptt::dump_instance(ptt::test::single_trip_instance()));
  const auto tt = scratch("single_tt.json", R"({"period": 60, "events": [
      {"kind": "departure", "train": "t", "station": "s0", "time": 46},
      {"kind": "arrival", "train": "t", "station": "s1", "time": 56}]})");
  const auto r = cli({"expand", "--instance", inst.string(), "--timetable", tt.string(), "--k",
                      "4", "--epoch", "08:00"});
  REQUIRE(r.code == 0);
  for (const char* clock : {"8:46", "9:46", "10:46", "11:46", "8:56", "11:56"}) {
    CHECK(r.out.find(clock) != std::string::npos);
  }
  CHECK(r.out.find("12:46") == std::string::npos);
  CHECK(count_lines(r.out) == 5);

  const auto one = cli({"expand", "--instance", micro(2), "--timetable", tt.string(), "--k", "1"});
  CHECK(one.code == ptt::cli::kExitBadInstance);
}

TEST_CASE("expand with k=1 lists each trip once") {
  const auto out = fs::temp_directory_path() / "ptt_cli_test" / "m2.json";
  REQUIRE(cli({"solve", "--instance", micro(2), "--pop", "50", "--max-evals", "5000", "--out",
               out.string()})
              .code <= 2);
  const auto r = cli({"expand", "--instance", micro(2), "--timetable", out.string(), "--k", "1"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 1 + 4);
  CHECK(cli({"expand", "--instance", micro(2), "--timetable", out.string(), "--k", "0"}).code ==
        ptt::cli::kExitUsage);
}

TEST_CASE("census and generate") {
  const auto r = cli({"census", "--instance", ptt::test::data_path("cs1.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("connection: 7") != std::string::npos);
  CHECK(r.out.find("total: 65") != std::string::npos);

  const auto path = fs::temp_directory_path() / "ptt_cli_test" / "cs2.json";
  REQUIRE(cli({"generate", "cs2", "--seed", "4", "--out", path.string()}).code == 0);
  const auto c = cli({"census", "--instance", path.string()});
  CHECK(c.out.find("total: 452") != std::string::npos);
  CHECK(ptt::load_instance(path) == ptt::generate_cs2_like(4));
}

TEST_CASE("experiment writes both CSVs") {
  const auto detail = fs::temp_directory_path() / "ptt_cli_test" / "detail.csv";
  const auto r = cli({"experiment", "--instance", micro(5), "--pop", "20,40", "--max-evals",
                      "500,1K", "--runs", "3", "--quiet", "--detail-csv", detail.string()});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 3);
  std::ifstream in(detail);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  CHECK(count_lines(all) == 1 + 12);
  const auto per = cli({"experiment", "--instance", micro(5), "--pop", "20,40", "--max-evals",
                        "500", "--runs", "2", "--quiet", "--per-size"});
  CHECK(per.out.rfind("pop,max_evals", 0) == 0);
  CHECK(count_lines(per.out) == 3);
}
