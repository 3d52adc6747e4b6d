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

// Primal-dual hybrid gradient for LPs in standard form
//
//     min c^T x  s.t.  A x >= b, x >= 0      max b^T y  s.t.  A^T y <= c, y >= 0
//
// through the saddle function L(x, y) = c^T x - y^T A x + b^T y. One step is
//
//     x+ = proj_{x>=0}(x + tau (A^T y - c))
//     y+ = proj_{y>=0}(y - sigma A (2 x+ - x) + sigma b)
//
// with tau = eta * omega, sigma = eta / omega, eta = eta_safety / ||A||_2, so
// tau * sigma * ||A||^2 = eta_safety^2 < 1 at all times. The primal weight
// omega only changes at restarts. Restart candidates are uniform averages of
// the iterates since the last restart.

#ifndef UCPDLP_PDLP_HPP_
#define UCPDLP_PDLP_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucpdlp/model.hpp"

namespace ucpdlp::pdlp {

using model::StandardLp;

struct PdhgParams {
  double eps_rel = 1e-6;
  std::int64_t max_iters = 200000;
  double eta_safety = 0.9;
  std::int64_t restart_check_period = 64;
  double restart_trigger_ratio = 0.5;
  double primal_weight_smoothing = 0.5;
  std::int64_t log_period = 100;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a field is outside its range.
  void validate() const;
};

struct PdhgState {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> x_prev;
  double tau = 0.0;
  double sigma = 0.0;
  double omega = 1.0;
  std::int64_t iter = 0;
  std::vector<double> avg_x;
  std::vector<double> avg_y;
  std::int64_t avg_weight = 0;
  double last_restart_gap = 0.0;
};

struct ResidualReport {
  double primal_obj = 0.0;  // c^T x
  double dual_obj = 0.0;    // b^T y
  double rel_primal_res = 0.0;
  double rel_dual_res = 0.0;
  double rel_gap = 0.0;
  double complementarity = 0.0;

  // max(rel_primal_res, rel_dual_res, rel_gap); the quantity compared against
  // eps_rel for termination and against the trigger ratio for restarts.
  double kkt_error() const;
};

enum class LpStatus { kOptimal, kIterationLimit, kInfeasibleOrUnboundedSuspected };

std::string to_string(LpStatus status);

struct LogEntry {
  std::int64_t iter = 0;
  ResidualReport report;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  std::vector<double> y;
  ResidualReport report;
  std::int64_t iterations = 0;
  std::int64_t restarts = 0;
  std::vector<LogEntry> log;
  double omega = 1.0;
  double norm_estimate = 0.0;
  // Gap metric at each restart, in order.
  std::vector<double> restart_gaps;
  bool returned_average = false;
};

struct WarmStart {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<double> omega;
};

// Relative residuals with infinity norms:
//   rel_primal_res = ||(b - Ax)+||_inf / (1 + ||b||_inf)
//   rel_dual_res   = ||(A^T y - c)+||_inf / (1 + ||c||_inf)
//   rel_gap        = |c^T x - b^T y| / (1 + |c^T x| + |b^T y|)
//   complementarity = |x^T (c - A^T y)| + |y^T (A x - b)|
ResidualReport residuals(const StandardLp& prob, std::span<const double> x,
                         std::span<const double> y);

// State at (x0, y0) (projected onto the nonnegative orthants) with step sizes
// tau = eta * omega, sigma = eta / omega for eta = eta_safety / norm_estimate.
PdhgState initial_state(const StandardLp& prob, const PdhgParams& params,
                        double norm_estimate,
                        const std::optional<WarmStart>& warm = std::nullopt);

// One PDHG iteration; also folds the new iterate into the running averages.
// Throws std::runtime_error if the step produces NaN.
PdhgState pdhg_step(const PdhgState& state, const StandardLp& prob);

LpSolution solve_lp(const StandardLp& prob, const PdhgParams& params = {},
                    const std::optional<WarmStart>& warm = std::nullopt);

// Fixed-width table: iter, primal_obj, dual_obj, rel_primal_res, rel_dual_res,
// rel_gap, complementarity. Reals in scientific notation, 3 significant digits.
std::string format_log(const LpSolution& solution);
std::string format_log(std::span<const LogEntry> log);

}  // namespace ucpdlp::pdlp

#endif  // UCPDLP_PDLP_HPP_
