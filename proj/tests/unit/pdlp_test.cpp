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

#include "ucpdlp/pdlp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ucpdlp/simplex.hpp"

namespace ucpdlp::pdlp {
namespace {

using ::testing::ElementsAre;
using model::make_standard;
using sparse::CsrMatrix;
using sparse::Triplet;

// min x1 + 2 x2  s.t.  x1 + x2 >= 4, x >= 0; optimum x = (4, 0), y = 1.
StandardLp two_var() {
  const Triplet t[] = {{0, 0, 1.0}, {0, 1, 1.0}};
  return make_standard({1.0, 2.0}, CsrMatrix::from_triplets(1, 2, t), {4.0});
}

// Trace of HundredStepsShrinkKktError, recorded once.
constexpr double kTraceKkt100 = 3.9967042021585485e-12;
constexpr double kTracePrimal100 = 4.0000000000190399;

PdhgState state_at(const StandardLp& prob, std::vector<double> x,
                   std::vector<double> y, double norm = 0.0) {
  PdhgParams params;
  const double est = norm > 0.0 ? norm : sparse::spectral_norm_estimate(prob.a);
  return initial_state(prob, params, est, WarmStart{std::move(x), std::move(y), {}});
}

TEST(PdhgStep, OptimalPairIsFixedPoint) {
  const StandardLp prob = two_var();
  const PdhgState s0 = state_at(prob, {4.0, 0.0}, {1.0});
  const PdhgState s1 = pdhg_step(s0, prob);
  EXPECT_THAT(s1.x, ElementsAre(4.0, 0.0));
  EXPECT_THAT(s1.y, ElementsAre(1.0));
  EXPECT_EQ(s1.iter, 1);
}

TEST(PdhgStep, HandComputedStepFromZero) {
  const StandardLp prob = two_var();
  PdhgState s = state_at(prob, {0.0, 0.0}, {0.0});
  s.tau = 0.5;
  s.sigma = 0.5;
  const PdhgState next = pdhg_step(s, prob);
  EXPECT_THAT(next.x, ElementsAre(0.0, 0.0));
  EXPECT_THAT(next.y, ElementsAre(2.0));
  EXPECT_THAT(next.x_prev, ElementsAre(0.0, 0.0));
}

TEST(PdhgStep, RunningAverageIsUniform) {
  const StandardLp prob = two_var();
  PdhgState s = state_at(prob, {0.0, 0.0}, {0.0});
  std::vector<double> sum_x(2, 0.0), sum_y(1, 0.0);
  for (int k = 0; k < 5; ++k) {
    s = pdhg_step(s, prob);
    sum_x[0] += s.x[0];
    sum_x[1] += s.x[1];
    sum_y[0] += s.y[0];
  }
  EXPECT_EQ(s.avg_weight, 5);
  EXPECT_NEAR(s.avg_x[0], sum_x[0] / 5, 1e-12);
  EXPECT_NEAR(s.avg_x[1], sum_x[1] / 5, 1e-12);
  EXPECT_NEAR(s.avg_y[0], sum_y[0] / 5, 1e-12);
}

TEST(PdhgStep, RejectsMismatchedState) {
  const StandardLp prob = two_var();
  PdhgState s = state_at(prob, {0.0, 0.0}, {0.0});
  s.x.push_back(0.0);
  EXPECT_THROW(pdhg_step(s, prob), std::invalid_argument);
}

TEST(PdhgStep, NanAborts) {
  const StandardLp prob = two_var();
  PdhgState s = state_at(prob, {0.0, 0.0}, {0.0});
  s.tau = std::nan("");
  EXPECT_THROW(pdhg_step(s, prob), std::runtime_error);
}

// The literal "rel_gap below a tenth of its initial value" is vacuous here:
// at the zero start both objectives vanish, so the initial gap is 0. The KKT
// error is the meaningful progress measure.
TEST(PdhgStep, HundredStepsShrinkKktError) {
  const StandardLp prob = two_var();
  PdhgState s = state_at(prob, {0.0, 0.0}, {0.0});
  const double initial = residuals(prob, s.x, s.y).kkt_error();
  EXPECT_DOUBLE_EQ(initial, 0.8);
  for (int k = 0; k < 100; ++k) s = pdhg_step(s, prob);
  const ResidualReport r = residuals(prob, s.x, s.y);
  EXPECT_LT(r.kkt_error(), 0.1 * initial);
  // Trace recorded with seed 0.
  EXPECT_NEAR(r.kkt_error(), kTraceKkt100, 1e-14);
  EXPECT_NEAR(r.primal_obj, kTracePrimal100, 1e-12);
}

TEST(PdhgStep, FixedPointOnPlantedSuite) {
  for (const auto& p : testing::lp_suite(10, 100)) {
    const PdhgState s0 = state_at(p.lp, p.x_star, p.y_star);
    const PdhgState s1 = pdhg_step(s0, p.lp);
    for (std::size_t j = 0; j < s1.x.size(); ++j) {
      ASSERT_NEAR(s1.x[j], p.x_star[j], 1e-12 * (1 + std::abs(p.x_star[j])));
    }
    for (std::size_t i = 0; i < s1.y.size(); ++i) {
      ASSERT_NEAR(s1.y[i], p.y_star[i], 1e-12 * (1 + std::abs(p.y_star[i])));
    }
  }
}

TEST(Residuals, OptimalPairIsExact) {
  const ResidualReport r = residuals(two_var(), std::vector<double>{4.0, 0.0},
                                     std::vector<double>{1.0});
  EXPECT_EQ(r.rel_primal_res, 0.0);
  EXPECT_EQ(r.rel_dual_res, 0.0);
  EXPECT_EQ(r.rel_gap, 0.0);
  EXPECT_EQ(r.complementarity, 0.0);
  EXPECT_EQ(r.primal_obj, 4.0);
  EXPECT_EQ(r.dual_obj, 4.0);
}

TEST(Residuals, ZeroPoint) {
  const ResidualReport r = residuals(two_var(), std::vector<double>{0.0, 0.0},
                                     std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(r.rel_primal_res, 0.8);
  EXPECT_EQ(r.rel_dual_res, 0.0);
  EXPECT_EQ(r.rel_gap, 0.0);
}

TEST(Residuals, DualInfeasibilityAndGap) {
  // y = 3 gives A^T y - c = (2, 1), so rel_dual_res = 2 / (1 + 2).
  const ResidualReport r = residuals(two_var(), std::vector<double>{4.0, 0.0},
                                     std::vector<double>{3.0});
  EXPECT_DOUBLE_EQ(r.rel_dual_res, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.rel_gap, 8.0 / 17.0);
  EXPECT_DOUBLE_EQ(r.complementarity, 8.0);
}

TEST(Residuals, SimplexOptimumOnSuite) {
  for (const auto& p : testing::lp_suite(10, 200)) {
    const simplex::BasicSolution sol = simplex::simplex_solve(p.lp);
    ASSERT_EQ(sol.status, simplex::SimplexStatus::kOptimal);
    const ResidualReport r = residuals(p.lp, sol.x, sol.y);
    EXPECT_LE(r.rel_primal_res, 1e-9);
    EXPECT_LE(r.rel_dual_res, 1e-9);
    EXPECT_LE(r.rel_gap, 1e-9);
  }
}

TEST(SolveLp, TwoVariableProblem) {
  const LpSolution sol = solve_lp(two_var());
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.report.primal_obj, 4.0, 1e-5);
  EXPECT_NEAR(sol.report.dual_obj, 4.0, 1e-5);
  EXPECT_NEAR(sol.x[0], 4.0, 1e-4);
  EXPECT_NEAR(sol.x[1], 0.0, 1e-4);
  EXPECT_NEAR(sol.y[0], 1.0, 1e-4);
  const ResidualReport& last = sol.log.back().report;
  EXPECT_LE(last.rel_primal_res, 1e-6);
  EXPECT_LE(last.rel_dual_res, 1e-6);
  EXPECT_LE(last.rel_gap, 1e-6);
  EXPECT_EQ(sol.log.back().iter, sol.iterations);
}

TEST(SolveLp, InfeasibleIsNeverOptimal) {
  const StandardLp prob =
      make_standard({1.0}, CsrMatrix::from_triplets(1, 1, {}), {1.0});
  PdhgParams params;
  params.max_iters = 5000;
  const LpSolution sol = solve_lp(prob, params);
  EXPECT_NE(sol.status, LpStatus::kOptimal);
}

TEST(SolveLp, UnboundedIsNeverOptimal) {
  const Triplet t[] = {{0, 0, 1.0}};
  const StandardLp prob =
      make_standard({-1.0}, CsrMatrix::from_triplets(1, 1, t), {1.0});
  PdhgParams params;
  params.max_iters = 5000;
  const LpSolution sol = solve_lp(prob, params);
  EXPECT_NE(sol.status, LpStatus::kOptimal);
}

TEST(SolveLp, ZeroStartAlreadyOptimal) {
  const Triplet t[] = {{0, 0, 1.0}};
  const StandardLp prob =
      make_standard({1.0}, CsrMatrix::from_triplets(1, 1, t), {0.0});
  const LpSolution sol = solve_lp(prob);
  EXPECT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.iterations, 0);
}

TEST(SolveLp, MatchesPlantedOptimumWithTerminationInvariants) {
  PdhgParams params;
  for (const auto& p : testing::lp_suite(15, 300)) {
    const LpSolution sol = solve_lp(p.lp, params);
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_LE(sol.report.kkt_error(), params.eps_rel);
    EXPECT_LE(testing::relative_error(p.lp.objective(sol.x), p.objective), 1e-5);
    // Weak duality at termination.
    const ResidualReport& r = sol.report;
    EXPECT_LE(r.dual_obj, r.primal_obj + 3 * params.eps_rel *
                                            (1 + std::abs(r.primal_obj) +
                                             std::abs(r.dual_obj)));
    for (double v : sol.x) EXPECT_GE(v, 0.0);
    for (double v : sol.y) EXPECT_GE(v, 0.0);
  }
}

TEST(SolveLp, RestartMetricDecreasesGeometrically) {
  PdhgParams params;
  int with_restarts = 0;
  for (const auto& p : testing::lp_suite(15, 400)) {
    const LpSolution sol = solve_lp(p.lp, params);
    ASSERT_EQ(static_cast<std::size_t>(sol.restarts), sol.restart_gaps.size());
    if (sol.restart_gaps.empty()) continue;
    ++with_restarts;
    const double initial = sol.log.front().report.kkt_error();
    EXPECT_LE(sol.restart_gaps.front(), params.restart_trigger_ratio * initial);
    for (std::size_t k = 1; k < sol.restart_gaps.size(); ++k) {
      EXPECT_LE(sol.restart_gaps[k],
                params.restart_trigger_ratio * sol.restart_gaps[k - 1]);
    }
  }
  EXPECT_GT(with_restarts, 0);
}

TEST(SolveLp, StepBoundHoldsThroughoutIteration) {
  const auto p = testing::planted_lp(11, 30, 40);
  PdhgParams params;
  const double norm = sparse::spectral_norm_estimate(p.lp.a);
  PdhgState s = initial_state(p.lp, params, norm);
  const double bound = params.eta_safety * params.eta_safety;
  for (int k = 0; k < 500; ++k) {
    ASSERT_LE(s.tau * s.sigma * norm * norm, bound * (1 + 1e-12));
    s = pdhg_step(s, p.lp);
    for (double v : s.x) ASSERT_GE(v, 0.0);
    for (double v : s.y) ASSERT_GE(v, 0.0);
  }
  // Restarts move omega but keep tau * sigma fixed.
  const LpSolution sol = solve_lp(p.lp, params);
  const double eta = params.eta_safety / sol.norm_estimate;
  const double tau = eta * sol.omega;
  const double sigma = eta / sol.omega;
  EXPECT_LE(tau * sigma * sol.norm_estimate * sol.norm_estimate, bound * (1 + 1e-12));
}

TEST(SolveLp, Deterministic) {
  const auto p = testing::planted_lp(12, 40, 50);
  const LpSolution a = solve_lp(p.lp);
  const LpSolution b = solve_lp(p.lp);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(format_log(a), format_log(b));
}

TEST(SolveLp, TighterToleranceNeedsMoreIterations) {
  std::int64_t total[3] = {0, 0, 0};
  const double eps[3] = {1e-4, 1e-6, 1e-8};
  for (const auto& p : testing::lp_suite(8, 500)) {
    for (int k = 0; k < 3; ++k) {
      PdhgParams params;
      params.eps_rel = eps[k];
      const LpSolution sol = solve_lp(p.lp, params);
      total[k] += sol.iterations;
    }
  }
  EXPECT_LT(total[0], total[1]);
  EXPECT_LT(total[1], total[2]);
}

TEST(SolveLp, WarmStartFromOptimumStopsImmediately) {
  const auto p = testing::planted_lp(13, 20, 25);
  const LpSolution sol = solve_lp(p.lp, {}, WarmStart{p.x_star, p.y_star, {}});
  EXPECT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.iterations, 0);
}

TEST(SolveLp, WarmStartIsProjected) {
  const StandardLp prob = two_var();
  const PdhgState s = state_at(prob, {-3.0, 2.0}, {-1.0});
  EXPECT_THAT(s.x, ElementsAre(0.0, 2.0));
  EXPECT_THAT(s.y, ElementsAre(0.0));
}

TEST(PdhgParams, Validation) {
  PdhgParams p;
  EXPECT_NO_THROW(p.validate());
  p.eta_safety = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.restart_trigger_ratio = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.primal_weight_smoothing = 1.0;
  EXPECT_NO_THROW(p.validate());
  p.eps_rel = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

int count_fields(const std::string& line) {
  std::istringstream in(line);
  std::string f;
  int n = 0;
  while (in >> f) ++n;
  return n;
}

TEST(FormatLog, EmptyLogIsHeaderOnly) {
  const std::string out = format_log(std::span<const LogEntry>{});
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1);
  EXPECT_EQ(count_fields(out), 7);
  EXPECT_THAT(out, ::testing::HasSubstr("complementarity"));
}

TEST(FormatLog, SingleRowHasSevenColumns) {
  LogEntry e;
  e.iter = 42;
  e.report = residuals(two_var(), std::vector<double>{0.0, 0.0},
                       std::vector<double>{0.0});
  const std::string out = format_log(std::span<const LogEntry>(&e, 1));
  std::istringstream in(out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.size(), row.size());
  EXPECT_EQ(count_fields(row), 7);
  EXPECT_THAT(row, ::testing::HasSubstr("8.00e-01"));
  EXPECT_THAT(row, ::testing::StartsWith("      42"));
}

TEST(FormatLog, LogPeriodControlsRows) {
  PdhgParams params;
  params.log_period = 10;
  const LpSolution sol = solve_lp(two_var(), params);
  for (std::size_t k = 1; k + 1 < sol.log.size(); ++k) {
    EXPECT_EQ(sol.log[k].iter % 10, 0);
  }
  EXPECT_EQ(sol.log.front().iter, 0);
}

}  // namespace
}  // namespace ucpdlp::pdlp
