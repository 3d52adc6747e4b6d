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

#include "ucpdlp/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

namespace ucpdlp::bnb {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

class StageTimer {
 public:
  explicit StageTimer(double& bucket) : bucket_(bucket), start_(Clock::now()) {}
  ~StageTimer() { bucket_ += elapsed_ms(start_); }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  double& bucket_;
  Clock::time_point start_;
};

// What a child inherits from its parent.
struct WarmData {
  std::vector<double> x_original;
  std::vector<double> y_standard;
  std::vector<Index> basis;
  std::optional<double> omega;
};

struct Node {
  double bound = -std::numeric_limits<double>::infinity();  // min-sense
  std::uint64_t sequence = 0;
  std::vector<std::pair<Index, double>> fixings;
  std::shared_ptr<const WarmData> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.sequence > b.sequence;
  }
};

struct Relaxation {
  simplex::BasicSolution vertex;
  std::vector<double> y;  // standard-form duals for children
  std::optional<double> omega;
  std::int64_t relaxation_iterations = 0;
  std::int64_t cleanup_iterations = 0;
  std::vector<pdlp::LogEntry> log;
};

Relaxation relax_simplex(const model::StandardLp& lp, const WarmData* warm,
                         StageTimes& times) {
  StageTimer timer(times.relaxation_ms);
  std::optional<std::vector<Index>> start;
  if (warm != nullptr && static_cast<Index>(warm->basis.size()) == lp.num_rows()) {
    start = warm->basis;
  }
  Relaxation r;
  r.vertex = simplex::simplex_solve(lp, start);
  r.y = r.vertex.y;
  r.relaxation_iterations = r.vertex.iterations;
  return r;
}

Relaxation relax_pdhg(const model::StandardLp& lp, const GeneralLp& node_lp,
                      const WarmData* warm, const BnbParams& params,
                      StageTimes& times) {
  std::pair<model::StandardLp, model::ScalingDiagonals> scaled;
  std::optional<pdlp::WarmStart> start;
  {
    StageTimer timer(times.presolve_ms);
    scaled = model::ruiz_scale(lp, params.ruiz_iterations);
    if (warm != nullptr) {
      std::vector<double> x = warm->x_original;
      for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = std::clamp(x[j], node_lp.lower[j], node_lp.upper[j]);
      }
      pdlp::WarmStart ws;
      ws.x = model::forward_map(scaled.first, x);
      if (static_cast<Index>(warm->y_standard.size()) == lp.num_rows()) {
        ws.y.resize(warm->y_standard.size());
        for (std::size_t i = 0; i < ws.y.size(); ++i) {
          ws.y[i] = warm->y_standard[i] / scaled.second.row_scale[i];
        }
      }
      ws.omega = warm->omega;
      start = std::move(ws);
    }
  }
  Relaxation r;
  pdlp::LpSolution sol;
  {
    StageTimer timer(times.relaxation_ms);
    sol = pdlp::solve_lp(scaled.first, params.pdhg, start);
  }
  r.relaxation_iterations = sol.iterations;
  r.omega = sol.omega;
  r.log = std::move(sol.log);
  {
    StageTimer timer(times.crossover_ms);
    const std::vector<double> x = model::unscale_primal(scaled.second, sol.x);
    const std::vector<double> y = model::unscale_dual(scaled.second, sol.y);
    simplex::CrossoverResult cr =
        simplex::crossover(lp, x, y,
                           std::max(params.classify_tol, params.pdhg.eps_rel));
    r.cleanup_iterations = cr.cleanup_iterations;
    r.vertex = std::move(cr.solution);
    // Children restart PDHG from the (scaled-back) PDHG iterate, which carries
    // more information than the vertex duals.
    r.y = y;
  }
  return r;
}

}  // namespace

void MilpProblem::validate() const {
  base.validate();
  for (Index j : binary_set) {
    if (j < 0 || j >= base.num_vars()) {
      throw std::invalid_argument(
          fmt::format("MilpProblem: binary index {} out of range", j));
    }
    if (base.lower[j] < 0.0 || base.upper[j] > 1.0) {
      throw std::invalid_argument(
          fmt::format("MilpProblem: binary {} has bounds outside [0, 1]", j));
    }
  }
}

MilpProblem MilpProblem::from_model(GeneralLp lp) {
  MilpProblem p;
  for (Index j = 0; j < lp.num_vars(); ++j) {
    if (lp.var_types[j] == model::VarType::kBinary) p.binary_set.push_back(j);
  }
  p.base = std::move(lp);
  return p;
}

std::string to_string(RelaxationEngine engine) {
  return engine == RelaxationEngine::kSimplex ? "simplex" : "pdhg_crossover";
}

RelaxationEngine engine_from_string(const std::string& name) {
  if (name == "simplex") return RelaxationEngine::kSimplex;
  if (name == "pdhg" || name == "pdhg_crossover") {
    return RelaxationEngine::kPdhgCrossover;
  }
  throw std::invalid_argument(fmt::format("unknown engine '{}'", name));
}

void BnbParams::validate() const {
  if (!(rel_mip_gap > 0.0) || !(int_tol > 0.0) || int_tol >= 0.5 ||
      node_limit <= 0 || !(classify_tol > 0.0) || ruiz_iterations < 0 ||
      (time_limit_seconds && !(*time_limit_seconds > 0.0))) {
    throw std::invalid_argument("BnbParams: field out of range");
  }
  pdhg.validate();
}

std::string to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal:
      return "optimal";
    case MilpStatus::kNodeLimit:
      return "node_limit";
    case MilpStatus::kTimeLimit:
      return "time_limit";
    case MilpStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

std::optional<Index> branch_select(std::span<const double> x,
                                   std::span<const Index> binary_set,
                                   double int_tol) {
  std::optional<Index> best;
  double best_score = int_tol;
  for (Index j : binary_set) {
    const double f = x[j] - std::floor(x[j]);
    const double s = std::min(f, 1.0 - f);
    if (s > best_score || (best && s == best_score && j < *best)) {
      best = j;
      best_score = s;
    }
  }
  return best;
}

double score(double candidate, double baseline, model::Sense sense) {
  if (baseline == 0.0) {
    throw std::domain_error("score: baseline objective is zero");
  }
  if (!std::isfinite(candidate) || !std::isfinite(baseline)) {
    throw std::domain_error("score: objectives must be finite");
  }
  if (sense == model::Sense::kMaximize) return candidate / baseline;
  if (candidate == 0.0) {
    throw std::domain_error("score: candidate objective is zero");
  }
  return baseline / candidate;
}

MilpSolution solve_milp(const MilpProblem& problem, const BnbParams& params) {
  problem.validate();
  params.validate();
  const auto start = Clock::now();
  const bool maximize = problem.base.sense == model::Sense::kMaximize;
  const auto to_original = [&](double min_sense) {
    return maximize ? -min_sense : min_sense;
  };

  MilpSolution result;
  StageTimes& times = result.stage_times;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::uint64_t next_sequence = 0;
  open.push(Node{-std::numeric_limits<double>::infinity(), next_sequence++, {},
                 nullptr});

  std::optional<double> incumbent;  // min-sense
  std::optional<Node> stopped_at;
  // Smallest bound among nodes discarded by the cutoff test.
  double pruned_bound = std::numeric_limits<double>::infinity();
  const auto cutoff = [&]() {
    return *incumbent - params.rel_mip_gap * (1.0 + std::abs(*incumbent));
  };

  while (!open.empty()) {
    const auto node_start = Clock::now();
    const StageTimes before = times;
    Node node = open.top();
    open.pop();

    if (incumbent && node.bound >= cutoff()) {
      // Best-first order: every remaining node is at least as bad.
      pruned_bound = std::min(pruned_bound, node.bound);
      while (!open.empty()) open.pop();
      times.branch_and_bound_ms += elapsed_ms(node_start);
      break;
    }
    if (result.nodes_explored >= params.node_limit) {
      result.status = MilpStatus::kNodeLimit;
      stopped_at = node;
      break;
    }
    if (params.time_limit_seconds &&
        elapsed_ms(start) >= 1000.0 * *params.time_limit_seconds) {
      result.status = MilpStatus::kTimeLimit;
      stopped_at = node;
      break;
    }
    const bool is_root = result.nodes_explored == 0;
    ++result.nodes_explored;

    GeneralLp node_lp = problem.base;
    for (const auto& [var, value] : node.fixings) {
      node_lp.lower[var] = value;
      node_lp.upper[var] = value;
    }

    std::optional<Relaxation> relaxation;
    model::StandardLp lp;
    try {
      model::PresolveResult pre;
      {
        StageTimer timer(times.presolve_ms);
        pre = model::presolve(model::canonicalize(node_lp));
      }
      if (pre.status == model::PresolveStatus::kReduced) {
        lp = std::move(pre.lp);
        const WarmData* warm = node.warm.get();
        relaxation = params.relaxation_engine == RelaxationEngine::kSimplex
                         ? relax_simplex(lp, warm, times)
                         : relax_pdhg(lp, node_lp, warm, params, times);
      }
    } catch (const std::exception& e) {
      if (is_root) throw;
      ++result.node_errors;
      result.warnings.push_back(fmt::format(
          "node {} pruned after relaxation error: {}", node.sequence, e.what()));
    }

    double stage_work = times.sum() - before.sum();
    const auto finish_node = [&]() {
      times.branch_and_bound_ms +=
          std::max(elapsed_ms(node_start) - stage_work, 0.0);
    };

    if (relaxation) {
      result.relaxation_iterations += relaxation->relaxation_iterations;
      result.cleanup_iterations += relaxation->cleanup_iterations;
      if (is_root) {
        result.root_relaxation_iterations = relaxation->relaxation_iterations;
        result.root_cleanup_iterations = relaxation->cleanup_iterations;
        result.root_log = relaxation->log;
      }
    }
    if (!relaxation ||
        relaxation->vertex.status == simplex::SimplexStatus::kInfeasible) {
      finish_node();
      continue;
    }
    if (relaxation->vertex.status == simplex::SimplexStatus::kUnbounded) {
      throw std::runtime_error("solve_milp: LP relaxation is unbounded");
    }

    const double bound = relaxation->vertex.objective;
    if (is_root) result.root_bound = to_original(bound);
    if (incumbent && bound >= cutoff()) {
      pruned_bound = std::min(pruned_bound, bound);
      finish_node();
      continue;
    }
    model::PostsolveResult post = model::postsolve(lp, relaxation->vertex.x);
    const std::optional<Index> branch =
        branch_select(post.x, problem.binary_set, params.int_tol);
    if (!branch) {
      if (!incumbent || bound < *incumbent) {
        incumbent = bound;
        result.incumbent_x = std::move(post.x);
      }
      finish_node();
      continue;
    }
    auto warm = std::make_shared<WarmData>();
    warm->x_original = std::move(post.x);
    warm->y_standard = std::move(relaxation->y);
    warm->basis = relaxation->vertex.basis;
    warm->omega = relaxation->omega;
    for (double value : {0.0, 1.0}) {
      Node child{bound, next_sequence++, node.fixings, warm};
      child.fixings.emplace_back(*branch, value);
      open.push(std::move(child));
    }
    finish_node();
  }

  if (result.status != MilpStatus::kNodeLimit &&
      result.status != MilpStatus::kTimeLimit) {
    result.status = incumbent ? MilpStatus::kOptimal : MilpStatus::kInfeasible;
  }
  if (incumbent) result.objective = to_original(*incumbent);

  double bound = incumbent ? std::min(*incumbent, pruned_bound)
                           : std::numeric_limits<double>::infinity();
  if (stopped_at) {
    bound = std::min(bound, stopped_at->bound);
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
  }
  result.best_bound = to_original(bound);
  result.total_ms = elapsed_ms(start);
  return result;
}

}  // namespace ucpdlp::bnb
