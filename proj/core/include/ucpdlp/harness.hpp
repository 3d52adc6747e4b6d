// Copyright 2026 The ucpdlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Benchmark suites: run both relaxation engines over seeded UC scenarios and
// summarize stage times, speed-ups and objective scores.
//
// Output directory layout:
//   runs.csv     one row per (scenario, rep, engine), appended as runs finish
//   done.txt     one "scenario<TAB>rep" line per finished pair of runs
//   report.json  rows plus aggregates, replaced atomically at the end
//
// runs.csv columns, in order:
//   scenario, division, engine, rep, seed, workers, n_units, horizon_steps,
//   status, objective, score, best_bound, nodes, presolve_ms, relaxation_ms,
//   crossover_ms, branch_and_bound_ms, total_ms, relaxation_iterations,
//   cleanup_iterations, root_relaxation_iterations, root_cleanup_iterations,
//   node_errors, error
// Empty fields mean "not available". The simplex engine is the score
// baseline; its own rows carry score 1 when it finished optimally.

#ifndef UCPDLP_HARNESS_HPP_
#define UCPDLP_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucpdlp/bnb.hpp"
#include "ucpdlp/ucgen.hpp"

namespace ucpdlp::harness {

struct Scenario {
  std::string name;
  std::string division;  // grouping label for aggregates
  ucgen::UcConfig uc_config;
  bnb::BnbParams simplex_params;
  bnb::BnbParams pdhg_params;
  int repetitions = 3;

  // Throws std::invalid_argument on an empty or non-CSV-safe name,
  // repetitions < 1 or a wrong engine in either parameter set.
  void validate() const;
};

// Suite JSON: {"scenarios": [ ... ]} or a bare array. Each entry:
//   {"name", "division" (D1/D2/D3, sets horizon unless "horizon_steps"
//    is given), "n_units", "seed", "horizon_steps", "demand_base",
//    "demand_amplitude", "reserve_fraction", "repetitions",
//    "bnb": {"rel_mip_gap", "int_tol", "node_limit", "time_limit_seconds"},
//    "pdhg": {"eps_rel", "max_iters", "classify_tol", "ruiz_iterations"}}
std::vector<Scenario> parse_suite(const std::string& json_text);
std::vector<Scenario> read_suite_file(const std::filesystem::path& path);
std::string suite_to_json(const std::vector<Scenario>& scenarios);

// 57 seeded scenarios, 19 per division, unit counts cycling over
// {2, 3, 4}. Horizons are the division lengths divided by
// `horizon_divisor`, keeping the 18:48:42 ratio.
std::vector<Scenario> default_suite(int horizon_divisor = 6,
                                    int repetitions = 1);

struct RunRow {
  std::string scenario;
  std::string division;
  std::string engine;
  int rep = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  int n_units = 0;
  int horizon_steps = 0;
  std::string status;
  std::optional<double> objective;
  std::optional<double> score;
  std::optional<double> best_bound;
  std::int64_t nodes = 0;
  double presolve_ms = 0.0;
  double relaxation_ms = 0.0;
  double crossover_ms = 0.0;
  double branch_and_bound_ms = 0.0;
  double total_ms = 0.0;
  std::int64_t relaxation_iterations = 0;
  std::int64_t cleanup_iterations = 0;
  std::int64_t root_relaxation_iterations = 0;
  std::int64_t root_cleanup_iterations = 0;
  std::int64_t node_errors = 0;
  std::string error;

  double stage_sum() const {
    return presolve_ms + relaxation_ms + crossover_ms + branch_and_bound_ms;
  }
  bool operator==(const RunRow&) const = default;
};

std::string csv_header();
std::string to_csv_line(const RunRow& row);
RunRow parse_csv_line(const std::string& line);
// Reads every data row; throws std::runtime_error on a bad header or row.
std::vector<RunRow> read_rows(const std::filesystem::path& csv_path);

struct EngineStats {
  double max_ms = 0.0;
  double mean_ms = 0.0;
  std::int64_t runs = 0;
};

struct DivisionSummary {
  EngineStats simplex;
  EngineStats pdhg;
  // mean(simplex) / mean(pdhg); 0 when the pdhg mean is 0.
  double speed_up = 0.0;
};

struct ScoreBuckets {
  std::int64_t at_least_one = 0;
  std::int64_t near_one = 0;  // 0.999 < score < 1
  std::int64_t other = 0;     // lower scores and runs without a score
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
};

struct Summary {
  std::map<std::string, DivisionSummary> divisions;
  ScoreBuckets scores;
  std::int64_t rows = 0;
  std::int64_t failed_rows = 0;
};

// Pure function of the rows. Throws std::runtime_error naming the scenario
// when a (scenario, rep) lacks either engine.
Summary aggregate(const std::vector<RunRow>& rows);
std::string summary_to_json(const Summary& summary);
std::string summary_to_text(const Summary& summary);

struct RunOptions {
  int workers = 1;
};

struct SuiteResult {
  std::vector<RunRow> rows;  // contents of runs.csv after the run
  Summary summary;
  std::int64_t solves_performed = 0;
  std::int64_t failed_rows = 0;
};

// Resumes from done.txt: finished (scenario, rep) pairs are never solved
// again, and rows of unfinished pairs are discarded before solving.
SuiteResult run_suite(const std::vector<Scenario>& scenarios,
                      const std::filesystem::path& out_dir,
                      const RunOptions& options = {});

// Solves one scenario repetition with one engine. Never throws for solver
// failures; they are reported through status "error" and the error column.
RunRow run_one(const Scenario& scenario, int rep, bnb::RelaxationEngine engine,
               int workers);

// Fills score columns of `candidate` (pdhg) and `baseline` (simplex).
void attach_scores(RunRow& candidate, RunRow& baseline);

}  // namespace ucpdlp::harness

#endif  // UCPDLP_HARNESS_HPP_
