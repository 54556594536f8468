#include "ptt/experiment.hpp"

#include <atomic>
#include <locale>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ptt/errors.hpp"

namespace ptt {
namespace {

std::string number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  if (spec.runs < 1) throw ConfigInvalid("runs must be at least 1");
  if (spec.population_sizes.empty()) throw ConfigInvalid("no population sizes given");
  if (spec.max_evaluations.empty()) throw ConfigInvalid("no evaluation limits given");
  for (std::size_t pop : spec.population_sizes) {
    for (std::size_t limit : spec.max_evaluations) {
      GaConfig c = spec.ga;
      c.population_size = pop;
      c.max_evaluations = limit;
      validate(c);
    }
  }
  if (spec.weights) validate(*spec.weights);
}

std::vector<RunRecord> run_experiment(const Instance& instance, const ExperimentSpec& spec,
                                      unsigned workers, const ProgressFn& progress) {
  validate(spec);
  Instance working = instance;
  if (spec.weights) working.weights = *spec.weights;
  const std::vector<PeriodicConstraint> constraints = derive_bounds(working);

  std::vector<RunRecord> records;
  const std::size_t pops = spec.population_sizes.size();
  for (std::size_t li = 0; li < spec.max_evaluations.size(); ++li) {
    for (std::size_t pi = 0; pi < pops; ++pi) {
      const std::size_t cell = li * pops + pi;
      for (std::size_t r = 0; r < spec.runs; ++r) {
        RunRecord rec;
        rec.cell = cell;
        rec.population_size = spec.population_sizes[pi];
        rec.max_evaluations = spec.max_evaluations[li];
        rec.run = r;
        rec.seed = spec.base_seed + cell * spec.runs + r;
        records.push_back(rec);
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      RunRecord& rec = records[i];
      GaConfig config = spec.ga;
      config.population_size = rec.population_size;
      config.max_evaluations = rec.max_evaluations;
      config.seed = rec.seed;
      rec.result = run(working, constraints, config);
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, records.size());
      }
    }
  };
  const unsigned threads = std::max(1u, workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return records;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, bool per_size) {
  std::vector<AggregateRow> rows;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  for (const RunRecord& rec : records) {
    const std::pair key{rec.max_evaluations, per_size ? rec.population_size : 0};
    auto [it, inserted] = slot.try_emplace(key, rows.size());
    if (inserted) {
      AggregateRow row;
      row.max_evaluations = key.first;
      row.population_size = key.second;
      rows.push_back(row);
    }
    AggregateRow& row = rows[it->second];
    const RunResult& r = rec.result;
    ++row.runs;
    row.avg_hard += static_cast<double>(r.hard_violations);
    row.avg_soft += static_cast<double>(r.soft_violations);
    row.pct_feasible += r.hard_violations == 0 ? 1.0 : 0.0;
    row.pct_feasible_conn += r.hard_violations == 0 && r.soft_violations == 0 ? 1.0 : 0.0;
    row.avg_time_s += r.wall_time;
  }
  for (AggregateRow& row : rows) {
    const double n = static_cast<double>(row.runs);
    row.avg_hard /= n;
    row.avg_soft /= n;
    row.pct_feasible = 100.0 * row.pct_feasible / n;
    row.pct_feasible_conn = 100.0 * row.pct_feasible_conn / n;
    row.avg_time_s /= n;
  }
  return rows;
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows, bool per_size) {
  if (per_size) os << "pop,";
  os << "max_evals,avg_hard,avg_soft,pct_feasible,pct_feasible_conn,avg_time_s\n";
  for (const AggregateRow& row : rows) {
    if (per_size) os << row.population_size << ',';
    os << row.max_evaluations << ',' << number(row.avg_hard) << ',' << number(row.avg_soft) << ','
       << number(row.pct_feasible) << ',' << number(row.pct_feasible_conn) << ','
       << number(row.avg_time_s) << '\n';
  }
}

void write_detail_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "cell,pop,max_evals,run,seed,best_fitness,hard,soft,evals_used,generations,"
        "terminated_by,time_s\n";
  for (const RunRecord& rec : records) {
    const RunResult& r = rec.result;
    os << rec.cell << ',' << rec.population_size << ',' << rec.max_evaluations << ',' << rec.run
       << ',' << rec.seed << ',' << number(r.best_fitness) << ',' << r.hard_violations << ','
       << r.soft_violations << ',' << r.evaluations_used << ',' << r.generations << ','
       << to_string(r.terminated_by) << ',' << number(r.wall_time) << '\n';
  }
}

}  // namespace ptt
