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
#include <stdexcept>

#include <fmt/format.h>

#include "ucpdlp/sparse.hpp"

namespace ucpdlp::pdlp {

namespace {

constexpr double kDivergenceNorm = 1e12;

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

double distance2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> project(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i], 0.0);
  return out;
}

// Scratch buffers reused across iterations.
struct Workspace {
  std::vector<double> aty;
  std::vector<double> extrapolated;
  std::vector<double> ax;
};

void step_in_place(PdhgState& s, const StandardLp& prob, Workspace& w) {
  const std::size_t n = s.x.size();
  const std::size_t m = s.y.size();
  w.aty.resize(n);
  w.extrapolated.resize(n);
  w.ax.resize(m);

  sparse::spmv_transpose(prob.a, s.y, w.aty);
  s.x_prev.swap(s.x);
  s.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.x[j] = std::max(s.x_prev[j] + s.tau * (w.aty[j] - prob.c[j]), 0.0);
    w.extrapolated[j] = 2.0 * s.x[j] - s.x_prev[j];
  }
  sparse::spmv(prob.a, w.extrapolated, w.ax);
  for (std::size_t i = 0; i < m; ++i) {
    s.y[i] = std::max(s.y[i] - s.sigma * w.ax[i] + s.sigma * prob.b[i], 0.0);
  }

  bool finite = true;
  for (double v : s.x) finite = finite && std::isfinite(v);
  for (double v : s.y) finite = finite && std::isfinite(v);
  if (!finite) {
    throw std::runtime_error(fmt::format(
        "pdhg_step: non-finite iterate at iteration {} (tau={:.3e}, "
        "sigma={:.3e}, ||x_prev||={:.3e}, ||y||={:.3e})",
        s.iter + 1, s.tau, s.sigma, norm2(s.x_prev), norm2(s.y)));
  }

  const double weight = 1.0 / static_cast<double>(s.avg_weight + 1);
  for (std::size_t j = 0; j < n; ++j) s.avg_x[j] += (s.x[j] - s.avg_x[j]) * weight;
  for (std::size_t i = 0; i < m; ++i) s.avg_y[i] += (s.y[i] - s.avg_y[i]) * weight;
  ++s.avg_weight;
  ++s.iter;
}

void check_dims(const PdhgState& s, const StandardLp& prob) {
  if (static_cast<sparse::Index>(s.x.size()) != prob.num_cols() ||
      static_cast<sparse::Index>(s.y.size()) != prob.num_rows() ||
      s.avg_x.size() != s.x.size() || s.avg_y.size() != s.y.size()) {
    throw std::invalid_argument("pdhg_step: state does not match problem");
  }
}

}  // namespace

void PdhgParams::validate() const {
  const bool ok = eps_rel > 0.0 && max_iters >= 0 && eta_safety > 0.0 &&
                  eta_safety < 1.0 && restart_check_period > 0 &&
                  restart_trigger_ratio > 0.0 && restart_trigger_ratio < 1.0 &&
                  primal_weight_smoothing > 0.0 &&
                  primal_weight_smoothing <= 1.0 && log_period > 0;
  if (!ok) throw std::invalid_argument("PdhgParams: field out of range");
}

double ResidualReport::kkt_error() const {
  return std::max({rel_primal_res, rel_dual_res, rel_gap});
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
    case LpStatus::kInfeasibleOrUnboundedSuspected:
      return "infeasible_or_unbounded_suspected";
  }
  return "unknown";
}

ResidualReport residuals(const StandardLp& prob, std::span<const double> x,
                         std::span<const double> y) {
  const std::vector<double> ax = sparse::spmv(prob.a, x);
  const std::vector<double> aty = sparse::spmv_transpose(prob.a, y);
  ResidualReport r;
  r.primal_obj = dot(prob.c, x);
  r.dual_obj = dot(prob.b, y);

  double primal_violation = 0.0;
  double slack_dot = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    primal_violation = std::max(primal_violation, prob.b[i] - ax[i]);
    slack_dot += y[i] * (ax[i] - prob.b[i]);
  }
  double dual_violation = 0.0;
  double reduced_dot = 0.0;
  for (std::size_t j = 0; j < aty.size(); ++j) {
    dual_violation = std::max(dual_violation, aty[j] - prob.c[j]);
    reduced_dot += x[j] * (prob.c[j] - aty[j]);
  }
  r.rel_primal_res = primal_violation / (1.0 + norm_inf(prob.b));
  r.rel_dual_res = dual_violation / (1.0 + norm_inf(prob.c));
  r.rel_gap = std::abs(r.primal_obj - r.dual_obj) /
              (1.0 + std::abs(r.primal_obj) + std::abs(r.dual_obj));
  r.complementarity = std::abs(reduced_dot) + std::abs(slack_dot);
  return r;
}

PdhgState initial_state(const StandardLp& prob, const PdhgParams& params,
                        double norm_estimate,
                        const std::optional<WarmStart>& warm) {
  const std::size_t n = prob.num_cols();
  const std::size_t m = prob.num_rows();
  PdhgState s;
  if (warm && warm->x.size() == n) {
    s.x = project(warm->x);
  } else {
    s.x.assign(n, 0.0);
  }
  if (warm && warm->y.size() == m) {
    s.y = project(warm->y);
  } else {
    s.y.assign(m, 0.0);
  }
  s.x_prev = s.x;
  s.omega = warm && warm->omega && *warm->omega > 0.0 ? *warm->omega : 1.0;
  // A matrix without nonzeros admits any step; use eta = eta_safety.
  const double eta =
      params.eta_safety / (norm_estimate > 0.0 ? norm_estimate : 1.0);
  s.tau = eta * s.omega;
  s.sigma = eta / s.omega;
  s.avg_x = s.x;
  s.avg_y = s.y;
  s.avg_weight = 0;
  s.last_restart_gap = residuals(prob, s.x, s.y).kkt_error();
  return s;
}

PdhgState pdhg_step(const PdhgState& state, const StandardLp& prob) {
  check_dims(state, prob);
  PdhgState next = state;
  Workspace w;
  step_in_place(next, prob, w);
  return next;
}

LpSolution solve_lp(const StandardLp& prob, const PdhgParams& params,
                    const std::optional<WarmStart>& warm) {
  params.validate();
  LpSolution sol;
  sol.norm_estimate = sparse::spectral_norm_estimate(
      prob.a, {.max_iters = 200, .tol = 1e-6, .seed = params.seed});
  PdhgState s = initial_state(prob, params, sol.norm_estimate, warm);
  const double eta = s.tau / s.omega;

  std::vector<double> anchor_x = s.x;
  std::vector<double> anchor_y = s.y;
  Workspace w;

  auto finish = [&](LpStatus status, std::span<const double> x,
                    std::span<const double> y, const ResidualReport& report,
                    bool average) {
    sol.status = status;
    sol.x.assign(x.begin(), x.end());
    sol.y.assign(y.begin(), y.end());
    sol.report = report;
    sol.iterations = s.iter;
    sol.omega = s.omega;
    sol.returned_average = average;
    if (sol.log.empty() || sol.log.back().iter != s.iter) {
      sol.log.push_back({s.iter, report});
    }
    return sol;
  };

  {
    const ResidualReport start = residuals(prob, s.x, s.y);
    sol.log.push_back({0, start});
    if (start.kkt_error() <= params.eps_rel) {
      return finish(LpStatus::kOptimal, s.x, s.y, start, false);
    }
  }

  // Best point seen at a check, returned on the iteration limit.
  std::vector<double> best_x = s.x;
  std::vector<double> best_y = s.y;
  ResidualReport best_report = residuals(prob, s.x, s.y);
  bool best_average = false;

  while (s.iter < params.max_iters) {
    step_in_place(s, prob, w);
    const bool log_now = s.iter % params.log_period == 0;
    const bool check_now = s.iter % params.restart_check_period == 0 ||
                           s.iter == params.max_iters;
    if (!log_now && !check_now) continue;

    const ResidualReport current = residuals(prob, s.x, s.y);
    if (log_now) sol.log.push_back({s.iter, current});
    if (!check_now) continue;

    const ResidualReport average = residuals(prob, s.avg_x, s.avg_y);
    if (current.kkt_error() <= params.eps_rel) {
      return finish(LpStatus::kOptimal, s.x, s.y, current, false);
    }
    if (average.kkt_error() <= params.eps_rel) {
      return finish(LpStatus::kOptimal, s.avg_x, s.avg_y, average, true);
    }
    if (current.kkt_error() < best_report.kkt_error()) {
      best_x = s.x;
      best_y = s.y;
      best_report = current;
      best_average = false;
    }
    if (average.kkt_error() < best_report.kkt_error()) {
      best_x = s.avg_x;
      best_y = s.avg_y;
      best_report = average;
      best_average = true;
    }
    if (norm2(s.x) > kDivergenceNorm || norm2(s.y) > kDivergenceNorm) {
      return finish(LpStatus::kInfeasibleOrUnboundedSuspected, s.x, s.y,
                    current, false);
    }

    const double candidate_gap = average.kkt_error();
    if (candidate_gap <= params.restart_trigger_ratio * s.last_restart_gap) {
      const double dx = distance2(s.avg_x, anchor_x);
      const double dy = distance2(s.avg_y, anchor_y);
      if (dx > 0.0 && dy > 0.0) {
        const double theta = params.primal_weight_smoothing;
        s.omega = std::exp(theta * std::log(dx / dy) +
                           (1.0 - theta) * std::log(s.omega));
        s.tau = eta * s.omega;
        s.sigma = eta / s.omega;
      }
      s.x = s.avg_x;
      s.y = s.avg_y;
      s.x_prev = s.x;
      anchor_x = s.x;
      anchor_y = s.y;
      s.avg_weight = 0;
      s.last_restart_gap = candidate_gap;
      sol.restart_gaps.push_back(candidate_gap);
      ++sol.restarts;
    }
  }
  return finish(LpStatus::kIterationLimit, best_x, best_y, best_report,
                best_average);
}

std::string format_log(std::span<const LogEntry> log) {
  std::string out =
      fmt::format("{:>8}{:>16}{:>16}{:>16}{:>16}{:>16}{:>16}\n", "iter",
                  "primal_obj", "dual_obj", "rel_primal_res", "rel_dual_res",
                  "rel_gap", "complementarity");
  for (const LogEntry& e : log) {
    const ResidualReport& r = e.report;
    out += fmt::format(
        "{:>8}{:>16.2e}{:>16.2e}{:>16.2e}{:>16.2e}{:>16.2e}{:>16.2e}\n",
        e.iter, r.primal_obj, r.dual_obj, r.rel_primal_res, r.rel_dual_res,
        r.rel_gap, r.complementarity);
  }
  return out;
}

std::string format_log(const LpSolution& solution) {
  return format_log(solution.log);
}

}  // namespace ucpdlp::pdlp
