#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ptt/engine.hpp"
#include "ptt/model.hpp"

namespace ptt {

/// Grid of (population size x evaluation limit) cells, each run `runs`
/// times. Cells are numbered limit-major: cell = limit_index * |pops| +
/// pop_index, and run r of cell c uses seed base_seed + c * runs + r.
struct ExperimentSpec {
  std::vector<std::size_t> population_sizes{300, 600, 900};
  std::vector<std::size_t> max_evaluations{10'000, 20'000, 30'000, 200'000, 1'000'000, 5'000'000};
  std::size_t runs = 50;
  std::uint64_t base_seed = 1;
  std::optional<WeightConfig> weights;
  /// Operator settings shared by every run; size, budget and seed are
  /// overwritten per run.
  GaConfig ga;
};

/// Throws ConfigInvalid.
void validate(const ExperimentSpec& spec);

struct RunRecord {
  std::size_t cell = 0;
  std::size_t population_size = 0;
  std::size_t max_evaluations = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  RunResult result;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every cell; records come back ordered by (cell, run) whatever the
/// completion order.
std::vector<RunRecord> run_experiment(const Instance& instance, const ExperimentSpec& spec,
                                      unsigned workers = 1, const ProgressFn& progress = {});

struct AggregateRow {
  std::size_t max_evaluations = 0;
  /// Zero when population sizes are pooled.
  std::size_t population_size = 0;
  std::size_t runs = 0;
  double avg_hard = 0.0;
  double avg_soft = 0.0;
  double pct_feasible = 0.0;
  double pct_feasible_conn = 0.0;
  double avg_time_s = 0.0;
};

/// One row per evaluation limit pooling all population sizes, or one row per
/// (population size, limit) when `per_size`. Rows follow first appearance.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, bool per_size = false);

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows,
                         bool per_size = false);
void write_detail_csv(std::ostream& os, const std::vector<RunRecord>& records);

}  // namespace ptt
