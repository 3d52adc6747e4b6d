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

// Best-bound branch-and-bound over binary variables.
//
// Every node is the base model with some binaries fixed through their bounds,
// canonicalized and presolved again. Fixing a binary only changes b and the
// objective offset of the standard form, never A, so node problems share
// dimensions and parent iterates/bases carry over as warm starts.
//
// Node relaxations go through one of two engines:
//  * kPdhgCrossover: Ruiz scaling, PDHG warm-started from the parent's
//    iterates, then crossover to a vertex;
//  * kSimplex: primal simplex warm-started from the parent's basis.
// Pruning and incumbents only ever use vertex objectives.

#ifndef UCPDLP_BNB_HPP_
#define UCPDLP_BNB_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucpdlp/model.hpp"
#include "ucpdlp/pdlp.hpp"
#include "ucpdlp/simplex.hpp"

namespace ucpdlp::bnb {

using model::GeneralLp;
using sparse::Index;

struct MilpProblem {
  GeneralLp base;
  std::vector<Index> binary_set;

  // Throws std::invalid_argument if an index is invalid or a binary's bounds
  // leave [0, 1].
  void validate() const;

  // binary_set = every variable marked kBinary in `lp`.
  static MilpProblem from_model(GeneralLp lp);
};

enum class RelaxationEngine { kPdhgCrossover, kSimplex };

std::string to_string(RelaxationEngine engine);
// Accepts "pdhg", "pdhg_crossover" and "simplex".
RelaxationEngine engine_from_string(const std::string& name);

inline pdlp::PdhgParams default_node_pdhg() {
  pdlp::PdhgParams p;
  p.max_iters = 20000;
  return p;
}

struct BnbParams {
  RelaxationEngine relaxation_engine = RelaxationEngine::kSimplex;
  std::int64_t node_limit = 100000;
  double rel_mip_gap = 1e-6;
  double int_tol = 1e-6;
  std::optional<double> time_limit_seconds;
  std::uint64_t seed = 0;

  // Settings of the pdhg_crossover engine. Node solves stop at 20000
  // iterations by default: fixings often make a child infeasible, which PDHG
  // only notices at its iteration limit, and crossover certifies every node
  // anyway.
  pdlp::PdhgParams pdhg = default_node_pdhg();
  // Crossover classifies with max(classify_tol, pdhg.eps_rel): entries below
  // the PDHG accuracy are not distinguishable from zero.
  double classify_tol = 1e-6;
  int ruiz_iterations = 10;

  void validate() const;
};

enum class MilpStatus { kOptimal, kNodeLimit, kTimeLimit, kInfeasible };

std::string to_string(MilpStatus status);

// Wall time per pipeline stage, milliseconds. branch_and_bound is the tree
// search itself: node selection, bound changes, branching and incumbent
// bookkeeping.
struct StageTimes {
  double presolve_ms = 0.0;
  double relaxation_ms = 0.0;
  double crossover_ms = 0.0;
  double branch_and_bound_ms = 0.0;

  double sum() const {
    return presolve_ms + relaxation_ms + crossover_ms + branch_and_bound_ms;
  }
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  std::optional<std::vector<double>> incumbent_x;
  std::optional<double> objective;  // original sense
  double best_bound = 0.0;          // original sense
  std::int64_t nodes_explored = 0;
  StageTimes stage_times;
  double total_ms = 0.0;

  std::int64_t relaxation_iterations = 0;  // PDHG or simplex, all nodes
  std::int64_t cleanup_iterations = 0;     // crossover cleanup, all nodes
  std::int64_t root_relaxation_iterations = 0;
  std::int64_t root_cleanup_iterations = 0;
  std::optional<double> root_bound;        // original sense
  std::vector<pdlp::LogEntry> root_log;    // PDHG log of the root relaxation
  std::int64_t node_errors = 0;
  std::vector<std::string> warnings;
};

// Binary with the most fractional value (max of min(f, 1 - f)), lowest
// variable index on ties; nullopt when all are within int_tol of 0 or 1.
std::optional<Index> branch_select(std::span<const double> x,
                                   std::span<const Index> binary_set,
                                   double int_tol);

MilpSolution solve_milp(const MilpProblem& problem, const BnbParams& params);

// Greater-is-better objective ratio: candidate/baseline for maximization,
// baseline/candidate for minimization. Throws std::domain_error when the
// baseline (or, for minimization, the candidate) is zero.
double score(double candidate, double baseline, model::Sense sense);

}  // namespace ucpdlp::bnb

#endif  // UCPDLP_BNB_HPP_
