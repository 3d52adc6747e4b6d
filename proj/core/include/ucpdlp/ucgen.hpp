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

// Seeded single-zone DC unit-commitment instances and their MILP encoding.
//
// Variables, unit-major then time-minor, four per (unit g, step t) at index
// 4 * (g * T + t) + k:
//   k = 0  u  on/off (binary)        k = 2  w  shutdown (binary)
//   k = 1  v  startup (binary)       k = 3  p  output in MW (continuous, >= 0)
//
// Rows, seven per (g, t) in unit-major/time-minor order:
//   logic     u_t - u_{t-1} - v_t + w_t = 0                (u_{-1} = 0)
//   min-up    u_t - sum_{s=t-UT+1..t} v_s >= 0
//   min-down  u_t + sum_{s=t-DT+1..t} w_s <= 1
//   cap-low   p_t - p_min u_t >= 0
//   cap-high  p_t - p_max u_t <= 0
//   ramp-up   p_t - p_{t-1} - p_max v_t <= ramp_up        (p_{-1} = 0)
//   ramp-down p_{t-1} - p_t - p_max w_t <= ramp_down
// followed by two system rows per step t:
//   demand    sum_g p_{g,t} = d_t
//   reserve   sum_g p_max_g u_{g,t} >= d_t (1 + reserve_fraction)
//
// Objective: minimize sum of marginal * p + noload * u + startup * v.
// Counts: 3NT binaries, NT continuous, 7NT + 2T rows, all proportional to T.

#ifndef UCPDLP_UCGEN_HPP_
#define UCPDLP_UCGEN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucpdlp/bnb.hpp"

namespace ucpdlp::ucgen {

enum class Division { kD1, kD2, kD3 };

// 18, 48 and 42 steps.
int division_steps(Division division);
std::string to_string(Division division);
Division division_from_string(const std::string& name);

struct UcConfig {
  int n_units = 1;
  int horizon_steps = 18;
  // Unset means "as high as the feasibility cap allows".
  std::optional<double> demand_base;
  double demand_amplitude = 0.2;
  double reserve_fraction = 0.1;
  std::uint64_t seed = 0;

  static UcConfig for_division(int n_units, Division division,
                               std::uint64_t seed = 0);
  void validate() const;
};

struct UnitParams {
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;
  double ramp_down = 0.0;
  int min_up = 1;
  int min_down = 1;
  double cost_marginal = 0.0;
  double cost_noload = 0.0;
  double cost_startup = 0.0;

  friend bool operator==(const UnitParams&, const UnitParams&) = default;
};

struct UcInstance {
  UcConfig config;
  std::vector<UnitParams> units;
  std::vector<double> demand;
  double reserve_fraction = 0.1;
  double demand_base = 0.0;  // after capping
};

UcInstance generate_instance(const UcConfig& config);

bnb::MilpProblem to_milp(const UcInstance& instance);

struct CountProfile {
  std::int64_t binaries = 0;
  std::int64_t continuous = 0;
  std::int64_t constraints = 0;

  friend bool operator==(const CountProfile&, const CountProfile&) = default;
};

CountProfile count_profile(const UcConfig& config);

// JSON instance format: {"seed", "reserve_fraction", "demand_base", "demand":
// [...], "units": [{...}], "config": {...}}.
std::string to_json(const UcInstance& instance);
UcInstance instance_from_json(const std::string& text);

}  // namespace ucpdlp::ucgen

#endif  // UCPDLP_UCGEN_HPP_
