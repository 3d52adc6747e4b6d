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

// ucpdlp command-line tool.
//
//   ucpdlp generate --config suite.json --out dir/
//   ucpdlp solve --instance file.mps --engine pdhg|simplex [--eps 1e-6]
//                [--mip-gap 1e-6] [--seed N] [--log-period K]
//                [--output sol.json] [--log pdhg.log]
//   ucpdlp bench --suite suite.json --out dir/ [--workers W]
//   ucpdlp report --dir dir/
//   ucpdlp default-suite --out suite.json [--horizon-divisor 6] [--repetitions 1]
//
// solve exits 0 when optimal, 2 on a node or time limit, 3 when infeasible
// and 1 on errors. Its stdout ends with wall-clock stage times; the files
// given by --output and --log hold only deterministic content.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ucpdlp/bnb.hpp"
#include "ucpdlp/harness.hpp"
#include "ucpdlp/mps.hpp"
#include "ucpdlp/ucgen.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ucpdlp;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

bnb::MilpProblem load_instance(const fs::path& path) {
  if (path.extension() == ".json") {
    return ucgen::to_milp(ucgen::instance_from_json(read_text(path)));
  }
  return bnb::MilpProblem::from_model(model::read_mps(read_text(path)));
}

int cmd_generate(const std::string& config, const std::string& out) {
  const auto scenarios = harness::read_suite_file(config);
  fs::create_directories(out);
  for (const harness::Scenario& s : scenarios) {
    const ucgen::UcInstance inst = ucgen::generate_instance(s.uc_config);
    write_text(fs::path(out) / (s.name + ".json"), ucgen::to_json(inst));
    write_text(fs::path(out) / (s.name + ".mps"),
               model::write_mps(ucgen::to_milp(inst).base));
  }
  fmt::print("wrote {} instances to {}\n", scenarios.size(), out);
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string engine = "pdhg";
  double eps = 1e-6;
  double mip_gap = 1e-6;
  std::uint64_t seed = 0;
  std::int64_t log_period = 100;
  std::int64_t node_limit = 100000;
  std::optional<double> time_limit;
  std::string output;
  std::string log;
};

std::string solution_json(const bnb::MilpProblem& problem,
                          const bnb::MilpSolution& sol) {
  nlohmann::ordered_json j;
  j["status"] = bnb::to_string(sol.status);
  j["objective"] = sol.objective ? nlohmann::ordered_json(*sol.objective)
                                 : nlohmann::ordered_json(nullptr);
  j["best_bound"] = sol.best_bound;
  j["nodes"] = sol.nodes_explored;
  j["relaxation_iterations"] = sol.relaxation_iterations;
  j["cleanup_iterations"] = sol.cleanup_iterations;
  nlohmann::ordered_json vars = nlohmann::ordered_json::object();
  if (sol.incumbent_x) {
    const auto& names = problem.base.var_names;
    for (std::size_t k = 0; k < sol.incumbent_x->size(); ++k) {
      const std::string name =
          k < names.size() && !names[k].empty() ? names[k] : fmt::format("x{}", k);
      vars[name] = (*sol.incumbent_x)[k];
    }
  }
  j["x"] = std::move(vars);
  return j.dump(2) + "\n";
}

int cmd_solve(const SolveArgs& a) {
  const bnb::MilpProblem problem = load_instance(a.instance);
  bnb::BnbParams params;
  params.relaxation_engine = bnb::engine_from_string(a.engine);
  params.rel_mip_gap = a.mip_gap;
  params.seed = a.seed;
  params.node_limit = a.node_limit;
  params.time_limit_seconds = a.time_limit;
  params.pdhg.eps_rel = a.eps;
  params.pdhg.seed = a.seed;
  params.pdhg.log_period = a.log_period;

  const bnb::MilpSolution sol = bnb::solve_milp(problem, params);

  const std::string log =
      params.relaxation_engine == bnb::RelaxationEngine::kPdhgCrossover
          ? pdlp::format_log(sol.root_log)
          : std::string("no PDHG log: simplex engine\n");
  const std::string solution = solution_json(problem, sol);
  if (!a.log.empty()) write_text(a.log, log);
  if (!a.output.empty()) write_text(a.output, solution);

  fmt::print("root relaxation log\n{}\n", log);
  fmt::print("status      {}\n", bnb::to_string(sol.status));
  if (sol.objective) fmt::print("objective   {:.10g}\n", *sol.objective);
  fmt::print("best bound  {:.10g}\n", sol.best_bound);
  fmt::print("nodes       {}\n", sol.nodes_explored);
  for (const std::string& w : sol.warnings) fmt::print("warning     {}\n", w);
  const bnb::StageTimes& t = sol.stage_times;
  fmt::print("\n{:<20}{:>12}\n", "stage", "ms");
  fmt::print("{:<20}{:>12.3f}\n", "presolve", t.presolve_ms);
  fmt::print("{:<20}{:>12.3f}\n", "relaxation", t.relaxation_ms);
  fmt::print("{:<20}{:>12.3f}\n", "crossover", t.crossover_ms);
  fmt::print("{:<20}{:>12.3f}\n", "branch_and_bound", t.branch_and_bound_ms);
  fmt::print("{:<20}{:>12.3f}\n", "total", sol.total_ms);

  switch (sol.status) {
    case bnb::MilpStatus::kOptimal:
      return 0;
    case bnb::MilpStatus::kNodeLimit:
    case bnb::MilpStatus::kTimeLimit:
      return 2;
    case bnb::MilpStatus::kInfeasible:
      return 3;
  }
  return 1;
}

int cmd_bench(const std::string& suite, const std::string& out, int workers) {
  const auto scenarios = harness::read_suite_file(suite);
  const harness::SuiteResult r =
      harness::run_suite(scenarios, out, {.workers = workers});
  fmt::print("{} solves performed, {} rows, {} failed\n\n", r.solves_performed,
             r.rows.size(), r.failed_rows);
  fmt::print("{}", harness::summary_to_text(r.summary));
  return r.failed_rows == 0 ? 0 : 1;
}

int cmd_report(const std::string& dir) {
  const auto rows = harness::read_rows(fs::path(dir) / "runs.csv");
  const harness::Summary s = harness::aggregate(rows);
  fmt::print("{}", harness::summary_to_text(s));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit-commitment MILP pipeline: PDHG, crossover, branch-and-bound"};
  app.require_subcommand(1);

  std::string config, out;
  auto* gen = app.add_subcommand("generate", "Write suite instances as MPS and JSON");
  gen->add_option("--config", config, "suite.json")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out, "output directory")->required();

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve one instance with branch-and-bound");
  solve->add_option("--instance", sa.instance, "MPS or JSON instance")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("--engine", sa.engine, "relaxation engine")
      ->check(CLI::IsMember({"pdhg", "pdhg_crossover", "simplex"}))
      ->capture_default_str();
  solve->add_option("--eps", sa.eps, "PDHG relative tolerance")->capture_default_str();
  solve->add_option("--mip-gap", sa.mip_gap, "relative MIP gap")->capture_default_str();
  solve->add_option("--seed", sa.seed, "seed")->capture_default_str();
  solve->add_option("--log-period", sa.log_period, "PDHG log period")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve->add_option("--node-limit", sa.node_limit, "node limit")->capture_default_str();
  solve->add_option("--time-limit", sa.time_limit, "time limit in seconds");
  solve->add_option("--output", sa.output, "write the solution as JSON");
  solve->add_option("--log", sa.log, "write the root PDHG log");

  std::string suite, bench_out;
  int workers = 1;
  auto* bench = app.add_subcommand("bench", "Run a suite with both engines");
  bench->add_option("--suite", suite, "suite.json")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "output directory")->required();
  bench->add_option("--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Aggregate runs.csv into tables");
  report->add_option("--dir", report_dir, "bench output directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  std::string default_out;
  int divisor = 6, reps = 1;
  auto* def = app.add_subcommand("default-suite", "Write the 57-scenario default suite");
  def->add_option("--out", default_out, "suite.json path")->required();
  def->add_option("--horizon-divisor", divisor, "divide division lengths by this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  def->add_option("--repetitions", reps, "repetitions per scenario")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(config, out);
    if (*solve) return cmd_solve(sa);
    if (*bench) return cmd_bench(suite, bench_out, workers);
    if (*report) return cmd_report(report_dir);
    if (*def) {
      write_text(default_out,
                 harness::suite_to_json(harness::default_suite(divisor, reps)));
      return 0;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
