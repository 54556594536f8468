#include <doctest.h>

#include <locale>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ptt/errors.hpp"
#include "ptt/experiment.hpp"

using namespace ptt;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.population_sizes = {20, 40};
  spec.max_evaluations = {200, 2000};
  spec.runs = 4;
  spec.base_seed = 11;
  return spec;
}

std::string strip_time(const std::string& csv) {
  std::string out;
  for (const auto& line : split(csv, '\n')) {
    out += line.substr(0, line.rfind(',')) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("spec validation") {
  ExperimentSpec spec = small_spec();
  CHECK_NOTHROW(validate(spec));
  spec.runs = 0;
  CHECK_THROWS_AS(validate(spec), ConfigInvalid);
  spec = small_spec();
  spec.population_sizes.clear();
  CHECK_THROWS_AS(validate(spec), ConfigInvalid);
  spec = small_spec();
  spec.max_evaluations = {0};
  CHECK_THROWS_AS(validate(spec), ConfigInvalid);
}

TEST_CASE("cell and seed numbering") {
  const auto records = run_experiment(test::single_trip_instance(), small_spec());
  REQUIRE(records.size() == 16);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    CHECK(r.cell == i / 4);
    CHECK(r.run == i % 4);
    CHECK(r.seed == 11 + r.cell * 4 + r.run);
    CHECK(r.population_size == (r.cell % 2 == 0 ? 20u : 40u));
    CHECK(r.max_evaluations == (r.cell < 2 ? 200u : 2000u));
  }
}

TEST_CASE("degenerate instance aggregates to all-feasible") {
  const auto records = run_experiment(test::single_trip_instance(), small_spec());
  const auto rows = aggregate(records);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.population_size == 0);
    CHECK(row.runs == 8);
    CHECK(row.avg_hard == 0.0);
    CHECK(row.avg_soft == 0.0);
    CHECK(row.pct_feasible == 100.0);
    CHECK(row.pct_feasible_conn == 100.0);
  }
  CHECK(rows[0].max_evaluations == 200);
  CHECK(aggregate(records, true).size() == 4);

  std::ostringstream os;
  write_aggregate_csv(os, rows);
  CHECK(split(os.str(), '\n')[0] ==
        "max_evals,avg_hard,avg_soft,pct_feasible,pct_feasible_conn,avg_time_s");
  std::ostringstream per;
  write_aggregate_csv(per, aggregate(records, true), true);
  CHECK(split(per.str(), '\n')[0] ==
        "pop,max_evals,avg_hard,avg_soft,pct_feasible,pct_feasible_conn,avg_time_s");
}

TEST_CASE("worker count does not change records") {
  const Instance in = load_instance(test::data_path("micro/micro5.json"));
  const auto spec = small_spec();
  std::ostringstream a, b;
  write_detail_csv(a, run_experiment(in, spec, 1));
  write_detail_csv(b, run_experiment(in, spec, 4));
  CHECK(strip_time(a.str()) == strip_time(b.str()));
}

TEST_CASE("aggregate columns are means of the detail rows") {
  const Instance in = build_cs1();
  ExperimentSpec spec = small_spec();
  spec.max_evaluations = {300, 3000};
  const auto records = run_experiment(in, spec, 2);
  std::ostringstream detail;
  write_detail_csv(detail, records);
  const auto lines = split(detail.str(), '\n');
  CHECK(lines[0] ==
        "cell,pop,max_evals,run,seed,best_fitness,hard,soft,evals_used,generations,terminated_by,time_s");
  REQUIRE(lines.size() == records.size() + 1);

  struct Acc { double hard = 0, soft = 0, feas = 0, conn = 0, n = 0; };
  std::map<long, Acc> acc;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    REQUIRE(f.size() == 12);
    auto& a = acc[std::stol(f[2])];
    const double h = std::stod(f[6]), s = std::stod(f[7]);
    a.hard += h;
    a.soft += s;
    a.feas += h == 0 ? 1 : 0;
    a.conn += h == 0 && s == 0 ? 1 : 0;
    a.n += 1;
  }
  for (const auto& row : aggregate(records)) {
    const auto& a = acc.at(static_cast<long>(row.max_evaluations));
    CHECK(row.avg_hard == doctest::Approx(a.hard / a.n));
    CHECK(row.avg_soft == doctest::Approx(a.soft / a.n));
    CHECK(row.pct_feasible == doctest::Approx(100.0 * a.feas / a.n));
    CHECK(row.pct_feasible_conn == doctest::Approx(100.0 * a.conn / a.n));
  }
}

TEST_CASE("CSV output ignores the global locale") {
  struct comma_decimal : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
  };
  const std::locale saved = std::locale::global(std::locale(std::locale::classic(), new comma_decimal));
  AggregateRow row;
  row.max_evaluations = 10;
  row.runs = 3;
  row.avg_hard = 0.5;
  std::ostringstream os;
  os.imbue(std::locale());
  write_aggregate_csv(os, {row});
  std::locale::global(saved);
  CHECK(split(os.str(), '\n')[1].substr(0, 6) == "10,0.5");
}
