#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ptt/codec.hpp"
#include "ptt/engine.hpp"
#include "ptt/errors.hpp"
#include "ptt/experiment.hpp"
#include "ptt/instances.hpp"
#include "ptt/model.hpp"

namespace ptt::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts plain integers and K/M suffixes ("30K", "5M").
std::size_t parse_count(const std::string& text) {
  if (text.empty()) throw UsageError("empty count");
  std::size_t multiplier = 1;
  std::string digits = text;
  const char last = static_cast<char>(std::toupper(static_cast<unsigned char>(text.back())));
  if (last == 'K' || last == 'M') {
    multiplier = last == 'K' ? 1'000 : 1'000'000;
    digits.pop_back();
  }
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw UsageError("not a count: '" + text + "'");
  }
  return std::stoull(digits) * multiplier;
}

std::vector<std::size_t> parse_counts(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const std::string& item : items) out.push_back(parse_count(item));
  return out;
}

// "w_h=100,w_s=100,w_c=1" over the instance's weights.
WeightConfig parse_weights(const std::string& text, WeightConfig base) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("weight '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("weight '" + item + "' has no numeric value");
    }
    if (key == "w_r") base.w_running = value;
    else if (key == "w_d") base.w_dwell = value;
    else if (key == "w_h") base.w_headway = value;
    else if (key == "w_s") base.w_single = value;
    else if (key == "w_c") base.w_connection = value;
    else throw UsageError("unknown weight '" + key + "'");
  }
  try {
    validate(base);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return base;
}

std::int64_t parse_epoch(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("epoch must be HH:MM");
  try {
    const int h = std::stoi(text.substr(0, colon));
    const int m = std::stoi(text.substr(colon + 1));
    if (h < 0 || h > 23 || m < 0 || m > 59) throw UsageError("epoch out of range");
    return h * 60 + m;
  } catch (const std::invalid_argument&) {
    throw UsageError("epoch must be HH:MM");
  }
}

struct GaFlags {
  std::string pop = "300";
  std::string max_evals = "1M";
  std::uint64_t seed = 1;
  double crossover = 0.9;
  double mutation = -1.0;
  std::size_t tournament = 2;
  std::size_t elite = 1;
};

void add_operator_flags(CLI::App* cmd, GaFlags& f) {
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--crossover", f.crossover, "Crossover rate")->capture_default_str();
  cmd->add_option("--mutation", f.mutation, "Per-gene mutation rate (default 1/length)");
  cmd->add_option("--tournament", f.tournament, "Tournament size")->capture_default_str();
  cmd->add_option("--elite", f.elite, "Elite count")->capture_default_str();
}

GaConfig to_config(const GaFlags& f) {
  GaConfig c;
  c.crossover_rate = f.crossover;
  if (f.mutation >= 0.0) c.mutation_rate_per_gene = f.mutation;
  c.tournament_size = f.tournament;
  c.elite_count = f.elite;
  c.seed = f.seed;
  return c;
}

void print_timetable(std::ostream& out, const Instance& instance, const Timetable& tt) {
  for (const Train& train : instance.trains) {
    out << "train " << train.id << "\n";
    out << "  " << std::left << std::setw(10) << "station" << std::right << std::setw(8)
        << "arrival" << std::setw(10) << "departure" << "\n";
    std::vector<StationId> stops{train.route.front().from};
    for (const Trip& trip : train.route) stops.push_back(trip.to);
    for (std::size_t k = 0; k < stops.size(); ++k) {
      const Event arr = arrival(train.id, stops[k]);
      const Event dep = departure(train.id, stops[k]);
      out << "  " << std::left << std::setw(10) << stops[k] << std::right << std::setw(8)
          << (k == 0 ? std::string("-") : std::to_string(tt.at(arr))) << std::setw(10)
          << (k + 1 == stops.size() ? std::string("-") : std::to_string(tt.at(dep))) << "\n";
    }
  }
}

void print_report(std::ostream& out, const EvaluationReport& report) {
  out << "violations:";
  for (ConstraintKind k : kAllKinds) out << ' ' << to_string(k) << '=' << report.violations_by_type[k];
  out << "\nfitness: " << report.weighted_fitness << "\n";
  for (const Violation& v : report.violated) {
    out << "violated " << to_string(v.constraint.kind) << ' '
        << to_string(v.constraint.earlier_event) << " -> " << to_string(v.constraint.later_event)
        << " window [" << v.constraint.lo << ',' << v.constraint.hi << "] diff " << v.diff << "\n";
  }
}

int cmd_solve(const std::string& instance_path, const GaFlags& flags,
              const std::string& weights, const std::string& out_path, std::ostream& out) {
  Instance instance = load_instance(instance_path);
  if (!weights.empty()) instance.weights = parse_weights(weights, instance.weights);
  const std::vector<PeriodicConstraint> constraints = derive_bounds(instance);

  GaConfig config = to_config(flags);
  config.population_size = parse_count(flags.pop);
  config.max_evaluations = parse_count(flags.max_evals);
  const RunResult result = run(instance, constraints, config);
  const Timetable tt = decode(result.best_genotype, instance);
  const EvaluationReport report = evaluate(tt, constraints, instance.weights);

  print_timetable(out, instance, tt);
  print_report(out, report);
  out << "evaluations: " << result.evaluations_used << "  generations: " << result.generations
      << "  terminated_by: " << to_string(result.terminated_by)
      << "  time_s: " << result.wall_time << "\n";
  if (!out_path.empty()) save_timetable(tt, out_path);

  if (report.feasible_with_connections()) return kExitOptimal;
  return report.feasible() ? kExitSoftViolations : kExitInfeasible;
}

struct ExperimentFlags {
  std::string instance;
  std::vector<std::string> pops{"300", "600", "900"};
  std::vector<std::string> limits{"10K", "20K", "30K", "200K", "1M", "5M"};
  std::size_t runs = 50;
  std::string weights;
  std::string detail_csv;
  std::string out;
  bool per_size = false;
  unsigned workers = 0;
  bool quiet = false;
};

int cmd_experiment(const ExperimentFlags& f, const GaFlags& ga, std::ostream& out,
                   std::ostream& err) {
  Instance instance = load_instance(f.instance);
  ExperimentSpec spec;
  spec.population_sizes = parse_counts(f.pops);
  spec.max_evaluations = parse_counts(f.limits);
  spec.runs = f.runs;
  spec.base_seed = ga.seed;
  spec.ga = to_config(ga);
  if (!f.weights.empty()) spec.weights = parse_weights(f.weights, instance.weights);
  const unsigned workers =
      f.workers > 0 ? f.workers : std::max(1u, std::thread::hardware_concurrency());

  ProgressFn progress;
  if (!f.quiet) {
    progress = [&err](std::size_t done, std::size_t total) {
      if (done == total || done % 25 == 0) err << "runs " << done << "/" << total << "\n";
    };
  }
  const std::vector<RunRecord> records = run_experiment(instance, spec, workers, progress);
  const std::vector<AggregateRow> rows = aggregate(records, f.per_size);

  if (!f.detail_csv.empty()) {
    std::ofstream detail(f.detail_csv);
    if (!detail) throw IoError("cannot write '" + f.detail_csv + "'");
    write_detail_csv(detail, records);
  }
  if (f.out.empty()) {
    write_aggregate_csv(out, rows, f.per_size);
  } else {
    std::ofstream file(f.out);
    if (!file) throw IoError("cannot write '" + f.out + "'");
    write_aggregate_csv(file, rows, f.per_size);
  }
  return 0;
}

int cmd_expand(const std::string& instance_path, const std::string& timetable_path, int k,
               const std::string& epoch, std::ostream& out) {
  if (k < 1) throw UsageError("--k must be at least 1");
  const Instance instance = load_instance(instance_path);
  const Timetable tt = load_timetable(timetable_path);
  const Minutes T = instance.period_T;
  const std::int64_t epoch_minutes = parse_epoch(epoch);
  // Every scheduled trip must be covered.
  for (const Train& train : instance.trains) {
    for (const Trip& trip : train.route) {
      tt.at(departure(train.id, trip.from));
      tt.at(arrival(train.id, trip.to));
    }
  }

  struct Row {
    std::string from, to, dep, arr, train;
  };
  std::vector<Row> rows;
  for (const DatedEvent& de : expand_periods(tt, k, T)) {
    if (de.event.kind != EventKind::Departure) continue;
    const Train* train = instance.find_train(de.event.train);
    if (train == nullptr) continue;
    auto trip = std::find_if(train->route.begin(), train->route.end(),
                             [&](const Trip& t) { return t.from == de.event.station; });
    if (trip == train->route.end()) continue;
    Minutes run = (tt.at(arrival(train->id, trip->to)) - tt.at(de.event)) % T;
    if (run < 0) run += T;
    rows.push_back({trip->from, trip->to, format_clock(de.absolute, epoch_minutes),
                    format_clock(de.absolute + run, epoch_minutes), train->id});
  }

  std::size_t wf = 4, wt = 2;
  for (const Row& r : rows) {
    wf = std::max(wf, r.from.size());
    wt = std::max(wt, r.to.size());
  }
  auto line = [&](const std::string& a, const std::string& b, const std::string& c,
                  const std::string& d, const std::string& e) {
    out << std::left << std::setw(static_cast<int>(wf) + 2) << a << std::setw(static_cast<int>(wt) + 2)
        << b << std::right << std::setw(9) << c << std::setw(9) << d << "  " << e << "\n";
  };
  line("From", "To", "Departure", "Arrival", "Train");
  for (const Row& r : rows) line(r.from, r.to, r.dep, r.arr, r.train);
  return 0;
}

int cmd_census(const std::string& instance_path, std::ostream& out) {
  const Instance instance = load_instance(instance_path);
  std::vector<std::string> warnings;
  const std::vector<PeriodicConstraint> constraints = derive_bounds(instance, &warnings);
  std::map<ConstraintKind, std::size_t> counts;
  for (const PeriodicConstraint& c : constraints) ++counts[c.kind];
  out << "stations: " << instance.stations.size() << "\ntrains: " << instance.trains.size()
      << "\ngenes: " << gene_bounds(instance).size() << "\n";
  for (ConstraintKind k : kAllKinds) out << to_string(k) << ": " << counts[k] << "\n";
  out << "total: " << constraints.size() << "\n";
  for (const std::string& w : warnings) out << "warning: " << w << "\n";
  return 0;
}

int cmd_evaluate(const std::string& instance_path, const std::string& timetable_path,
                 std::ostream& out) {
  const Instance instance = load_instance(instance_path);
  const Timetable tt = load_timetable(timetable_path);
  const EvaluationReport report = evaluate(tt, derive_bounds(instance), instance.weights);
  print_report(out, report);
  if (report.feasible_with_connections()) return kExitOptimal;
  return report.feasible() ? kExitSoftViolations : kExitInfeasible;
}

int cmd_generate(const std::string& which, std::uint64_t seed, const std::string& out_path,
                 std::ostream& out) {
  Instance instance;
  if (which == "cs1") {
    instance = build_cs1();
  } else if (which == "cs2") {
    instance = generate_cs2_like(seed);
  } else {
    throw UsageError("unknown case study '" + which + "' (expected cs1 or cs2)");
  }
  if (out_path.empty()) {
    out << dump_instance(instance);
  } else {
    save_instance(instance, out_path);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic railway timetabling with a genetic algorithm", "ptt"};
  app.require_subcommand(1);

  GaFlags ga;
  std::string instance_path;
  std::string weights;

  auto* solve = app.add_subcommand("solve", "Run the GA once and print the best timetable");
  std::string solve_out;
  solve->add_option("--instance", instance_path, "Instance JSON")->required();
  solve->add_option("--pop", ga.pop, "Population size")->capture_default_str();
  solve->add_option("--max-evals", ga.max_evals, "Evaluation budget (e.g. 30K, 5M)")
      ->capture_default_str();
  solve->add_option("--weights", weights, "Weight overrides, e.g. w_h=100,w_s=100,w_c=1");
  solve->add_option("--out", solve_out, "Write the best timetable as JSON");
  add_operator_flags(solve, ga);

  auto* experiment = app.add_subcommand("experiment", "Multi-run protocol with CSV aggregation");
  ExperimentFlags ef;
  experiment->add_option("--instance", ef.instance, "Instance JSON")->required();
  experiment->add_option("--pop", ef.pops, "Population sizes")->delimiter(',')->capture_default_str();
  experiment->add_option("--max-evals", ef.limits, "Evaluation limits")
      ->delimiter(',')
      ->capture_default_str();
  experiment->add_option("--runs", ef.runs, "Runs per cell")->capture_default_str();
  experiment->add_option("--weights", ef.weights, "Weight overrides");
  experiment->add_option("--detail-csv", ef.detail_csv, "Write per-run rows here");
  experiment->add_option("--out", ef.out, "Write the aggregate CSV here instead of stdout");
  experiment->add_flag("--per-size", ef.per_size, "One row per (population, limit)");
  experiment->add_option("--workers", ef.workers, "Concurrent runs (default: hardware threads)");
  experiment->add_flag("--quiet", ef.quiet, "No progress on stderr");
  add_operator_flags(experiment, ga);

  auto* expand = app.add_subcommand("expand", "Render k repetitions of a periodic timetable");
  std::string timetable_path;
  int k = 1;
  std::string epoch = "00:00";
  expand->add_option("--instance", instance_path, "Instance JSON")->required();
  expand->add_option("--timetable", timetable_path, "Timetable JSON")->required();
  expand->add_option("--k", k, "Number of periods")->capture_default_str();
  expand->add_option("--epoch", epoch, "Clock time of minute 0 (HH:MM)")->capture_default_str();

  auto* census = app.add_subcommand("census", "Count derived constraints by kind");
  census->add_option("--instance", instance_path, "Instance JSON")->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a timetable file");
  evaluate_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  evaluate_cmd->add_option("--timetable", timetable_path, "Timetable JSON")->required();

  auto* generate = app.add_subcommand("generate", "Write a bundled case-study instance");
  std::string which;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  generate->add_option("case", which, "cs1 or cs2")->required();
  generate->add_option("--seed", gen_seed, "Generator seed (cs2)")->capture_default_str();
  generate->add_option("--out", gen_out, "Output path (default stdout)");

  std::vector<std::string> argv_store{"ptt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(instance_path, ga, weights, solve_out, out);
    if (*experiment) return cmd_experiment(ef, ga, out, err);
    if (*expand) return cmd_expand(instance_path, timetable_path, k, epoch, out);
    if (*census) return cmd_census(instance_path, out);
    if (*evaluate_cmd) return cmd_evaluate(instance_path, timetable_path, out);
    if (*generate) return cmd_generate(which, gen_seed, gen_out, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigInvalid& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInstance;
  }
  return kExitUsage;
}

}  // namespace ptt::cli
