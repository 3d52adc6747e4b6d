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

#include "ucpdlp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ucpdlp::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kColumns[] = {
    "scenario",          "division",
    "engine",            "rep",
    "seed",              "workers",
    "n_units",           "horizon_steps",
    "status",            "objective",
    "score",             "best_bound",
    "nodes",             "presolve_ms",
    "relaxation_ms",     "crossover_ms",
    "branch_and_bound_ms", "total_ms",
    "relaxation_iterations", "cleanup_iterations",
    "root_relaxation_iterations", "root_cleanup_iterations",
    "node_errors",       "error"};
constexpr std::size_t kNumColumns = std::size(kColumns);

bool csv_safe(const std::string& s) {
  return s.find_first_of(",\"\n\r\t") == std::string::npos;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r' || ch == '\t') {
      ch = ' ';
    }
  }
  return s;
}

std::string opt(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

template <typename T>
T parse_number(const std::string& field, const char* column) {
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error(
        fmt::format("runs.csv: bad value '{}' in column {}", field, column));
  }
  return value;
}

std::optional<double> parse_opt(const std::string& field, const char* column) {
  if (field.empty()) return std::nullopt;
  return parse_number<double>(field, column);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string pair_key(const std::string& scenario, int rep) {
  return fmt::format("{}\t{}", scenario, rep);
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

void apply_bnb(const json& j, bnb::BnbParams& p) {
  p.rel_mip_gap = j.value("rel_mip_gap", p.rel_mip_gap);
  p.int_tol = j.value("int_tol", p.int_tol);
  p.node_limit = j.value("node_limit", p.node_limit);
  if (j.contains("time_limit_seconds") && !j.at("time_limit_seconds").is_null()) {
    p.time_limit_seconds = j.at("time_limit_seconds").get<double>();
  }
}

void apply_pdhg(const json& j, bnb::BnbParams& p) {
  p.pdhg.eps_rel = j.value("eps_rel", p.pdhg.eps_rel);
  p.pdhg.max_iters = j.value("max_iters", p.pdhg.max_iters);
  p.classify_tol = j.value("classify_tol", p.classify_tol);
  p.ruiz_iterations = j.value("ruiz_iterations", p.ruiz_iterations);
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.uc_config.n_units = j.at("n_units").get<int>();
  s.uc_config.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("division")) {
    s.division = j.at("division").get<std::string>();
    s.uc_config.horizon_steps =
        ucgen::division_steps(ucgen::division_from_string(s.division));
  }
  if (j.contains("horizon_steps")) {
    s.uc_config.horizon_steps = j.at("horizon_steps").get<int>();
  } else if (!j.contains("division")) {
    throw std::invalid_argument(
        fmt::format("scenario '{}': needs division or horizon_steps", s.name));
  }
  if (s.division.empty()) s.division = fmt::format("T{}", s.uc_config.horizon_steps);
  if (j.contains("demand_base")) {
    s.uc_config.demand_base = j.at("demand_base").get<double>();
  }
  s.uc_config.demand_amplitude =
      j.value("demand_amplitude", s.uc_config.demand_amplitude);
  s.uc_config.reserve_fraction =
      j.value("reserve_fraction", s.uc_config.reserve_fraction);
  s.repetitions = j.value("repetitions", s.repetitions);

  s.simplex_params.relaxation_engine = bnb::RelaxationEngine::kSimplex;
  s.pdhg_params.relaxation_engine = bnb::RelaxationEngine::kPdhgCrossover;
  for (bnb::BnbParams* p : {&s.simplex_params, &s.pdhg_params}) {
    p->seed = s.uc_config.seed;
    if (j.contains("bnb")) apply_bnb(j.at("bnb"), *p);
  }
  if (j.contains("pdhg")) apply_pdhg(j.at("pdhg"), s.pdhg_params);
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  const auto& c = s.uc_config;
  json j = {{"name", s.name},
            {"division", s.division},
            {"n_units", c.n_units},
            {"horizon_steps", c.horizon_steps},
            {"seed", c.seed},
            {"demand_amplitude", c.demand_amplitude},
            {"reserve_fraction", c.reserve_fraction},
            {"repetitions", s.repetitions}};
  if (c.demand_base) j["demand_base"] = *c.demand_base;
  const auto& b = s.simplex_params;
  j["bnb"] = {{"rel_mip_gap", b.rel_mip_gap},
              {"int_tol", b.int_tol},
              {"node_limit", b.node_limit}};
  if (b.time_limit_seconds) j["bnb"]["time_limit_seconds"] = *b.time_limit_seconds;
  const auto& p = s.pdhg_params;
  j["pdhg"] = {{"eps_rel", p.pdhg.eps_rel},
               {"max_iters", p.pdhg.max_iters},
               {"classify_tol", p.classify_tol},
               {"ruiz_iterations", p.ruiz_iterations}};
  return j;
}

json engine_stats_json(const EngineStats& e) {
  return {{"max_ms", e.max_ms}, {"mean_ms", e.mean_ms}, {"runs", e.runs}};
}

json row_to_json(const RunRow& r) {
  auto nullable = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"scenario", r.scenario},
          {"division", r.division},
          {"engine", r.engine},
          {"rep", r.rep},
          {"seed", r.seed},
          {"workers", r.workers},
          {"n_units", r.n_units},
          {"horizon_steps", r.horizon_steps},
          {"status", r.status},
          {"objective", nullable(r.objective)},
          {"score", nullable(r.score)},
          {"best_bound", nullable(r.best_bound)},
          {"nodes", r.nodes},
          {"stage_times",
           {{"presolve_ms", r.presolve_ms},
            {"relaxation_ms", r.relaxation_ms},
            {"crossover_ms", r.crossover_ms},
            {"branch_and_bound_ms", r.branch_and_bound_ms}}},
          {"total_ms", r.total_ms},
          {"relaxation_iterations", r.relaxation_iterations},
          {"cleanup_iterations", r.cleanup_iterations},
          {"root_relaxation_iterations", r.root_relaxation_iterations},
          {"root_cleanup_iterations", r.root_cleanup_iterations},
          {"node_errors", r.node_errors},
          {"error", r.error}};
}

json summary_json(const Summary& s) {
  json divisions = json::object();
  for (const auto& [name, d] : s.divisions) {
    divisions[name] = {{"simplex", engine_stats_json(d.simplex)},
                       {"pdhg_crossover", engine_stats_json(d.pdhg)},
                       {"speed_up", d.speed_up}};
  }
  auto nullable = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"rows", s.rows},
          {"failed_rows", s.failed_rows},
          {"divisions", divisions},
          {"scores",
           {{"at_least_one", s.scores.at_least_one},
            {"between_0.999_and_1", s.scores.near_one},
            {"other", s.scores.other},
            {"mean", nullable(s.scores.mean)},
            {"min", nullable(s.scores.min)},
            {"max", nullable(s.scores.max)}}}};
}

std::string report_json(const std::vector<RunRow>& rows, const Summary& s) {
  json j = summary_json(s);
  json runs = json::array();
  for (const RunRow& r : rows) runs.push_back(row_to_json(r));
  j["runs"] = std::move(runs);
  return j.dump(2) + "\n";
}

}  // namespace

void Scenario::validate() const {
  if (name.empty() || !csv_safe(name) || !csv_safe(division)) {
    throw std::invalid_argument(
        fmt::format("scenario name '{}' must be non-empty without commas, "
                    "quotes, tabs or newlines",
                    name));
  }
  if (repetitions < 1) {
    throw std::invalid_argument(
        fmt::format("scenario '{}': repetitions must be >= 1", name));
  }
  if (simplex_params.relaxation_engine != bnb::RelaxationEngine::kSimplex ||
      pdhg_params.relaxation_engine != bnb::RelaxationEngine::kPdhgCrossover) {
    throw std::invalid_argument(
        fmt::format("scenario '{}': engine parameter sets swapped", name));
  }
  uc_config.validate();
  simplex_params.validate();
  pdhg_params.validate();
}

std::vector<Scenario> parse_suite(const std::string& json_text) {
  const json j = json::parse(json_text);
  const json& list = j.is_array() ? j : j.at("scenarios");
  std::vector<Scenario> out;
  std::set<std::string> names;
  for (const json& entry : list) {
    Scenario s = scenario_from_json(entry);
    if (!names.insert(s.name).second) {
      throw std::invalid_argument(fmt::format("duplicate scenario '{}'", s.name));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> read_suite_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

std::string suite_to_json(const std::vector<Scenario>& scenarios) {
  json list = json::array();
  for (const Scenario& s : scenarios) list.push_back(scenario_to_json(s));
  return json{{"scenarios", list}}.dump(2) + "\n";
}

std::vector<Scenario> default_suite(int horizon_divisor, int repetitions) {
  if (horizon_divisor < 1) {
    throw std::invalid_argument("default_suite: horizon_divisor must be >= 1");
  }
  constexpr int kPerDivision = 19;
  constexpr int kUnits[] = {2, 3, 4};
  // Seeds whose default-size instance (divisor 6) has no integer-feasible
  // schedule, found by exhaustive branch-and-bound. A skipped slot moves on
  // to seed + 100, + 200, ...
  constexpr std::uint64_t kSkippedSeeds[] = {1000};
  std::vector<Scenario> out;
  for (ucgen::Division d : {ucgen::Division::kD1, ucgen::Division::kD2,
                            ucgen::Division::kD3}) {
    for (int k = 0; k < kPerDivision; ++k) {
      Scenario s;
      s.division = ucgen::to_string(d);
      s.uc_config.n_units = kUnits[k % std::size(kUnits)];
      s.uc_config.horizon_steps =
          std::max(1, ucgen::division_steps(d) / horizon_divisor);
      std::uint64_t seed = 1000 * (static_cast<int>(d) + 1) + k;
      while (std::find(std::begin(kSkippedSeeds), std::end(kSkippedSeeds),
                       seed) != std::end(kSkippedSeeds)) {
        seed += 100;
      }
      s.uc_config.seed = seed;
      s.name = fmt::format("{}-N{}-S{:02}", s.division, s.uc_config.n_units, k);
      s.repetitions = repetitions;
      s.simplex_params.relaxation_engine = bnb::RelaxationEngine::kSimplex;
      s.pdhg_params.relaxation_engine = bnb::RelaxationEngine::kPdhgCrossover;
      s.simplex_params.seed = s.pdhg_params.seed = s.uc_config.seed;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    if (i) out += ',';
    out += kColumns[i];
  }
  return out;
}

std::string to_csv_line(const RunRow& r) {
  return fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
      r.scenario, r.division, r.engine, r.rep, r.seed, r.workers, r.n_units,
      r.horizon_steps, r.status, opt(r.objective), opt(r.score),
      opt(r.best_bound), r.nodes, r.presolve_ms, r.relaxation_ms,
      r.crossover_ms, r.branch_and_bound_ms, r.total_ms,
      r.relaxation_iterations, r.cleanup_iterations,
      r.root_relaxation_iterations, r.root_cleanup_iterations, r.node_errors,
      sanitize(r.error));
}

RunRow parse_csv_line(const std::string& line) {
  const std::vector<std::string> f = split(line, ',');
  if (f.size() != kNumColumns) {
    throw std::runtime_error(fmt::format(
        "runs.csv: expected {} fields, got {}", kNumColumns, f.size()));
  }
  RunRow r;
  std::size_t i = 0;
  auto next = [&]() -> const std::string& { return f[i++]; };
  auto col = [&]() { return kColumns[i]; };
  r.scenario = next();
  r.division = next();
  r.engine = next();
  r.rep = parse_number<int>(f[i], col()), ++i;
  r.seed = parse_number<std::uint64_t>(f[i], col()), ++i;
  r.workers = parse_number<int>(f[i], col()), ++i;
  r.n_units = parse_number<int>(f[i], col()), ++i;
  r.horizon_steps = parse_number<int>(f[i], col()), ++i;
  r.status = next();
  r.objective = parse_opt(f[i], col()), ++i;
  r.score = parse_opt(f[i], col()), ++i;
  r.best_bound = parse_opt(f[i], col()), ++i;
  r.nodes = parse_number<std::int64_t>(f[i], col()), ++i;
  for (double* v : {&r.presolve_ms, &r.relaxation_ms, &r.crossover_ms,
                    &r.branch_and_bound_ms, &r.total_ms}) {
    *v = parse_number<double>(f[i], col()), ++i;
  }
  for (std::int64_t* v :
       {&r.relaxation_iterations, &r.cleanup_iterations,
        &r.root_relaxation_iterations, &r.root_cleanup_iterations,
        &r.node_errors}) {
    *v = parse_number<std::int64_t>(f[i], col()), ++i;
  }
  r.error = next();
  return r;
}

std::vector<RunRow> read_rows(const fs::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", csv_path.string()));
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw std::runtime_error(
        fmt::format("{}: missing or unexpected header", csv_path.string()));
  }
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(parse_csv_line(line));
  }
  return rows;
}

void attach_scores(RunRow& candidate, RunRow& baseline) {
  candidate.score.reset();
  baseline.score.reset();
  if (baseline.status != "optimal" || !baseline.objective) return;
  try {
    baseline.score = bnb::score(*baseline.objective, *baseline.objective,
                                model::Sense::kMinimize);
    if (candidate.status == "optimal" && candidate.objective) {
      candidate.score = bnb::score(*candidate.objective, *baseline.objective,
                                   model::Sense::kMinimize);
    }
  } catch (const std::domain_error&) {
    // Zero objectives have no score.
    baseline.score.reset();
    candidate.score.reset();
  }
}

RunRow run_one(const Scenario& scenario, int rep, bnb::RelaxationEngine engine,
               int workers) {
  RunRow r;
  r.scenario = scenario.name;
  r.division = scenario.division;
  r.engine = bnb::to_string(engine);
  r.rep = rep;
  r.seed = scenario.uc_config.seed;
  r.workers = workers;
  r.n_units = scenario.uc_config.n_units;
  r.horizon_steps = scenario.uc_config.horizon_steps;
  const bnb::BnbParams& params = engine == bnb::RelaxationEngine::kSimplex
                                     ? scenario.simplex_params
                                     : scenario.pdhg_params;
  try {
    const bnb::MilpProblem problem =
        ucgen::to_milp(ucgen::generate_instance(scenario.uc_config));
    const bnb::MilpSolution sol = bnb::solve_milp(problem, params);
    r.status = bnb::to_string(sol.status);
    r.objective = sol.objective;
    if (sol.status != bnb::MilpStatus::kInfeasible) r.best_bound = sol.best_bound;
    r.nodes = sol.nodes_explored;
    r.presolve_ms = sol.stage_times.presolve_ms;
    r.relaxation_ms = sol.stage_times.relaxation_ms;
    r.crossover_ms = sol.stage_times.crossover_ms;
    r.branch_and_bound_ms = sol.stage_times.branch_and_bound_ms;
    r.total_ms = sol.total_ms;
    r.relaxation_iterations = sol.relaxation_iterations;
    r.cleanup_iterations = sol.cleanup_iterations;
    r.root_relaxation_iterations = sol.root_relaxation_iterations;
    r.root_cleanup_iterations = sol.root_cleanup_iterations;
    r.node_errors = sol.node_errors;
  } catch (const std::exception& e) {
    r.status = "error";
    r.error = e.what();
  }
  return r;
}

Summary aggregate(const std::vector<RunRow>& rows) {
  Summary s;
  s.rows = static_cast<std::int64_t>(rows.size());
  struct Pair {
    const RunRow* simplex = nullptr;
    const RunRow* pdhg = nullptr;
  };
  std::map<std::pair<std::string, int>, Pair> pairs;
  std::map<std::string, std::vector<double>> simplex_times, pdhg_times;
  for (const RunRow& r : rows) {
    if (r.status == "error") ++s.failed_rows;
    Pair& p = pairs[{r.scenario, r.rep}];
    if (r.engine == bnb::to_string(bnb::RelaxationEngine::kSimplex)) {
      p.simplex = &r;
      simplex_times[r.division].push_back(r.total_ms);
    } else if (r.engine == bnb::to_string(bnb::RelaxationEngine::kPdhgCrossover)) {
      p.pdhg = &r;
      pdhg_times[r.division].push_back(r.total_ms);
    } else {
      throw std::runtime_error(fmt::format("scenario '{}': unknown engine '{}'",
                                           r.scenario, r.engine));
    }
  }
  double score_sum = 0.0;
  std::int64_t scored = 0;
  for (const auto& [key, p] : pairs) {
    if (!p.simplex || !p.pdhg) {
      throw std::runtime_error(fmt::format(
          "scenario '{}' rep {}: missing {} row", key.first, key.second,
          p.simplex ? "pdhg_crossover" : "simplex"));
    }
    const std::optional<double>& sc = p.pdhg->score;
    if (!sc) {
      ++s.scores.other;
      continue;
    }
    if (*sc >= 1.0) {
      ++s.scores.at_least_one;
    } else if (*sc > 0.999) {
      ++s.scores.near_one;
    } else {
      ++s.scores.other;
    }
    score_sum += *sc;
    ++scored;
    s.scores.min = s.scores.min ? std::min(*s.scores.min, *sc) : *sc;
    s.scores.max = s.scores.max ? std::max(*s.scores.max, *sc) : *sc;
  }
  if (scored > 0) s.scores.mean = score_sum / static_cast<double>(scored);

  auto stats = [](const std::vector<double>& t) {
    EngineStats e;
    e.runs = static_cast<std::int64_t>(t.size());
    if (t.empty()) return e;
    double sum = 0.0;
    for (double v : t) {
      e.max_ms = std::max(e.max_ms, v);
      sum += v;
    }
    e.mean_ms = sum / static_cast<double>(t.size());
    return e;
  };
  for (const auto& [division, times] : simplex_times) {
    DivisionSummary d;
    d.simplex = stats(times);
    d.pdhg = stats(pdhg_times[division]);
    d.speed_up = d.pdhg.mean_ms > 0.0 ? d.simplex.mean_ms / d.pdhg.mean_ms : 0.0;
    s.divisions[division] = d;
  }
  return s;
}

std::string summary_to_json(const Summary& summary) {
  return summary_json(summary).dump(2) + "\n";
}

std::string summary_to_text(const Summary& s) {
  std::string out;
  out += fmt::format("Solution times (ms), {} runs, {} failed\n", s.rows,
                     s.failed_rows);
  out += fmt::format("{:<10}{:>14}{:>14}{:>14}{:>14}{:>10}\n", "division",
                     "max simplex", "max pdhg", "mean simplex", "mean pdhg",
                     "speed-up");
  for (const auto& [name, d] : s.divisions) {
    out += fmt::format("{:<10}{:>14.2f}{:>14.2f}{:>14.2f}{:>14.2f}{:>9.3f}x\n",
                       name, d.simplex.max_ms, d.pdhg.max_ms, d.simplex.mean_ms,
                       d.pdhg.mean_ms, d.speed_up);
  }
  out += "\nScores (pdhg_crossover objective vs simplex)\n";
  out += fmt::format("{:<24}{:>8}\n", "Score >= 1", s.scores.at_least_one);
  out += fmt::format("{:<24}{:>8}\n", "0.999 < Score < 1", s.scores.near_one);
  out += fmt::format("{:<24}{:>8}\n", "Other or missing", s.scores.other);
  if (s.scores.mean) {
    out += fmt::format("{:<24}{:>8.6f}\n", "Average score", *s.scores.mean);
  }
  return out;
}

SuiteResult run_suite(const std::vector<Scenario>& scenarios,
                      const fs::path& out_dir, const RunOptions& options) {
  if (options.workers < 1) {
    throw std::invalid_argument("run_suite: workers must be >= 1");
  }
  std::set<std::string> names;
  for (const Scenario& s : scenarios) {
    s.validate();
    if (!names.insert(s.name).second) {
      throw std::invalid_argument(fmt::format("duplicate scenario '{}'", s.name));
    }
  }
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / "runs.csv";
  const fs::path done_path = out_dir / "done.txt";

  std::set<std::string> done;
  if (fs::exists(done_path)) {
    std::ifstream in(done_path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) done.insert(line);
    }
  }
  // Keep only rows of finished pairs; a crash between the CSV append and the
  // done marker leaves rows that will be produced again.
  std::vector<RunRow> kept;
  if (fs::exists(csv_path)) {
    for (RunRow& r : read_rows(csv_path)) {
      if (done.count(pair_key(r.scenario, r.rep))) kept.push_back(std::move(r));
    }
  }
  {
    std::string content = csv_header() + "\n";
    for (const RunRow& r : kept) content += to_csv_line(r) + "\n";
    write_atomic(csv_path, content);
  }

  std::vector<std::pair<const Scenario*, int>> tasks;
  for (const Scenario& s : scenarios) {
    for (int rep = 0; rep < s.repetitions; ++rep) {
      if (!done.count(pair_key(s.name, rep))) tasks.emplace_back(&s, rep);
    }
  }

  std::ofstream csv(csv_path, std::ios::app);
  std::ofstream done_out(done_path, std::ios::app);
  if (!csv || !done_out) {
    throw std::runtime_error(
        fmt::format("cannot append to {}", out_dir.string()));
  }
  std::mutex writer;
  std::atomic<std::size_t> next{0};
  std::atomic<std::int64_t> solves{0};
  const int workers = options.workers;
  auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto [scenario, rep] = tasks[t];
      RunRow base =
          run_one(*scenario, rep, bnb::RelaxationEngine::kSimplex, workers);
      RunRow cand =
          run_one(*scenario, rep, bnb::RelaxationEngine::kPdhgCrossover, workers);
      solves += 2;
      attach_scores(cand, base);
      std::lock_guard<std::mutex> lock(writer);
      csv << to_csv_line(base) << '\n' << to_csv_line(cand) << '\n';
      csv.flush();
      done_out << pair_key(scenario->name, rep) << '\n';
      done_out.flush();
    }
  };
  const int threads =
      std::min<int>(workers, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  csv.close();
  done_out.close();

  SuiteResult result;
  result.rows = read_rows(csv_path);
  result.summary = aggregate(result.rows);
  result.solves_performed = solves.load();
  result.failed_rows = result.summary.failed_rows;
  write_atomic(out_dir / "report.json", report_json(result.rows, result.summary));
  return result;
}

}  // namespace ucpdlp::harness
