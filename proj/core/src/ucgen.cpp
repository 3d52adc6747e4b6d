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

#include "ucpdlp/ucgen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include <nlohmann/json.hpp>
#include "ucpdlp/random.hpp"

namespace ucpdlp::ucgen {

namespace {

using model::Relation;
using sparse::Index;
using nlohmann::json;

// Parameters are rounded to cents/centi-MW so instances read like data.
double round2(double v) { return std::round(v * 100.0) / 100.0; }

Index var(int unit, int step, int kind, int horizon) {
  return 4 * (static_cast<Index>(unit) * horizon + step) + kind;
}

json config_to_json(const UcConfig& c) {
  json j = {{"n_units", c.n_units},
            {"horizon_steps", c.horizon_steps},
            {"demand_amplitude", c.demand_amplitude},
            {"reserve_fraction", c.reserve_fraction},
            {"seed", c.seed}};
  if (c.demand_base) j["demand_base"] = *c.demand_base;
  return j;
}

UcConfig config_from_json(const json& j) {
  UcConfig c;
  c.n_units = j.at("n_units").get<int>();
  c.horizon_steps = j.at("horizon_steps").get<int>();
  c.demand_amplitude = j.value("demand_amplitude", c.demand_amplitude);
  c.reserve_fraction = j.value("reserve_fraction", c.reserve_fraction);
  c.seed = j.value("seed", c.seed);
  if (j.contains("demand_base")) c.demand_base = j.at("demand_base").get<double>();
  return c;
}

}  // namespace

int division_steps(Division division) {
  switch (division) {
    case Division::kD1:
      return 18;
    case Division::kD2:
      return 48;
    case Division::kD3:
      return 42;
  }
  return 0;
}

std::string to_string(Division division) {
  switch (division) {
    case Division::kD1:
      return "D1";
    case Division::kD2:
      return "D2";
    case Division::kD3:
      return "D3";
  }
  return "?";
}

Division division_from_string(const std::string& name) {
  if (name == "D1") return Division::kD1;
  if (name == "D2") return Division::kD2;
  if (name == "D3") return Division::kD3;
  throw std::invalid_argument(fmt::format("unknown division '{}'", name));
}

UcConfig UcConfig::for_division(int n_units, Division division,
                                std::uint64_t seed) {
  UcConfig c;
  c.n_units = n_units;
  c.horizon_steps = division_steps(division);
  c.seed = seed;
  return c;
}

void UcConfig::validate() const {
  const auto fraction = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (n_units < 1 || horizon_steps < 1 || !fraction(demand_amplitude) ||
      !fraction(reserve_fraction) || (demand_base && !(*demand_base > 0.0))) {
    throw std::invalid_argument("UcConfig: field out of range");
  }
}

UcInstance generate_instance(const UcConfig& config) {
  config.validate();
  Rng rng(config.seed);
  UcInstance inst;
  inst.config = config;
  inst.reserve_fraction = config.reserve_fraction;
  double capacity = 0.0;
  for (int g = 0; g < config.n_units; ++g) {
    UnitParams u;
    u.p_max = round2(rng.uniform(50.0, 500.0));
    u.p_min = round2(rng.uniform(0.2, 0.5) * u.p_max);
    u.ramp_up = round2(rng.uniform(0.2, 0.6) * u.p_max);
    u.ramp_down = round2(rng.uniform(0.2, 0.6) * u.p_max);
    u.min_up = static_cast<int>(rng.integer(1, 3));
    u.min_down = static_cast<int>(rng.integer(1, 3));
    u.cost_marginal = round2(rng.uniform(10.0, 50.0));
    u.cost_noload = round2(rng.uniform(100.0, 500.0));
    u.cost_startup = round2(rng.uniform(500.0, 5000.0));
    capacity += u.p_max;
    inst.units.push_back(u);
  }
  // Peak demand plus reserve stays at or below 70% of installed capacity.
  const double cap = 0.7 * capacity /
                     ((1.0 + config.reserve_fraction) *
                      (1.0 + config.demand_amplitude));
  inst.demand_base = config.demand_base ? std::min(*config.demand_base, cap) : cap;
  const int horizon = config.horizon_steps;
  inst.demand.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    const double phase = 2.0 * std::numbers::pi * t / horizon;
    inst.demand[t] =
        inst.demand_base * (1.0 + config.demand_amplitude * std::sin(phase));
  }
  return inst;
}

bnb::MilpProblem to_milp(const UcInstance& inst) {
  const int n = static_cast<int>(inst.units.size());
  const int horizon = static_cast<int>(inst.demand.size());
  model::GeneralLpBuilder builder(
      fmt::format("UC{}X{}S{}", n, horizon, inst.config.seed));
  for (int g = 0; g < n; ++g) {
    const UnitParams& u = inst.units[g];
    for (int t = 0; t < horizon; ++t) {
      builder.add_variable(u.cost_noload, 0.0, 1.0, model::VarType::kBinary,
                           fmt::format("U{}T{}", g, t));
      builder.add_variable(u.cost_startup, 0.0, 1.0, model::VarType::kBinary,
                           fmt::format("V{}T{}", g, t));
      builder.add_variable(0.0, 0.0, 1.0, model::VarType::kBinary,
                           fmt::format("W{}T{}", g, t));
      builder.add_variable(u.cost_marginal, 0.0, model::kInfinity,
                           model::VarType::kContinuous,
                           fmt::format("P{}T{}", g, t));
    }
  }
  std::vector<Index> cols;
  std::vector<double> coefs;
  auto term = [&](Index col, double coef) {
    cols.push_back(col);
    coefs.push_back(coef);
  };
  auto row = [&](Relation rel, double rhs, std::string name) {
    builder.add_row(cols, coefs, rel, rhs, std::move(name));
    cols.clear();
    coefs.clear();
  };
  for (int g = 0; g < n; ++g) {
    const UnitParams& u = inst.units[g];
    for (int t = 0; t < horizon; ++t) {
      const Index on = var(g, t, 0, horizon);
      const Index start = var(g, t, 1, horizon);
      const Index stop = var(g, t, 2, horizon);
      const Index p = var(g, t, 3, horizon);

      term(on, 1.0);
      if (t > 0) term(var(g, t - 1, 0, horizon), -1.0);
      term(start, -1.0);
      term(stop, 1.0);
      row(Relation::kEqual, 0.0, fmt::format("LG{}T{}", g, t));

      term(on, 1.0);
      for (int s = std::max(0, t - u.min_up + 1); s <= t; ++s) {
        term(var(g, s, 1, horizon), -1.0);
      }
      row(Relation::kGreaterEqual, 0.0, fmt::format("MU{}T{}", g, t));

      term(on, 1.0);
      for (int s = std::max(0, t - u.min_down + 1); s <= t; ++s) {
        term(var(g, s, 2, horizon), 1.0);
      }
      row(Relation::kLessEqual, 1.0, fmt::format("MD{}T{}", g, t));

      term(on, -u.p_min);
      term(p, 1.0);
      row(Relation::kGreaterEqual, 0.0, fmt::format("CL{}T{}", g, t));

      term(on, -u.p_max);
      term(p, 1.0);
      row(Relation::kLessEqual, 0.0, fmt::format("CU{}T{}", g, t));

      term(start, -u.p_max);
      term(p, 1.0);
      if (t > 0) term(var(g, t - 1, 3, horizon), -1.0);
      row(Relation::kLessEqual, u.ramp_up, fmt::format("RU{}T{}", g, t));

      term(stop, -u.p_max);
      term(p, -1.0);
      if (t > 0) term(var(g, t - 1, 3, horizon), 1.0);
      row(Relation::kLessEqual, u.ramp_down, fmt::format("RD{}T{}", g, t));
    }
  }
  for (int t = 0; t < horizon; ++t) {
    for (int g = 0; g < n; ++g) term(var(g, t, 3, horizon), 1.0);
    row(Relation::kEqual, inst.demand[t], fmt::format("DM{}", t));
    for (int g = 0; g < n; ++g) term(var(g, t, 0, horizon), inst.units[g].p_max);
    row(Relation::kGreaterEqual, inst.demand[t] * (1.0 + inst.reserve_fraction),
        fmt::format("RS{}", t));
  }
  return bnb::MilpProblem::from_model(std::move(builder).build());
}

CountProfile count_profile(const UcConfig& config) {
  config.validate();
  const std::int64_t nt =
      static_cast<std::int64_t>(config.n_units) * config.horizon_steps;
  return {3 * nt, nt, 7 * nt + 2 * static_cast<std::int64_t>(config.horizon_steps)};
}

std::string to_json(const UcInstance& inst) {
  json units = json::array();
  for (const UnitParams& u : inst.units) {
    units.push_back({{"p_min", u.p_min},
                     {"p_max", u.p_max},
                     {"ramp_up", u.ramp_up},
                     {"ramp_down", u.ramp_down},
                     {"min_up", u.min_up},
                     {"min_down", u.min_down},
                     {"cost_marginal", u.cost_marginal},
                     {"cost_noload", u.cost_noload},
                     {"cost_startup", u.cost_startup}});
  }
  json j = {{"seed", inst.config.seed},
            {"reserve_fraction", inst.reserve_fraction},
            {"demand_base", inst.demand_base},
            {"demand", inst.demand},
            {"units", units},
            {"config", config_to_json(inst.config)}};
  return j.dump(2) + "\n";
}

UcInstance instance_from_json(const std::string& text) {
  const json j = json::parse(text);
  UcInstance inst;
  inst.config = config_from_json(j.at("config"));
  inst.reserve_fraction = j.at("reserve_fraction").get<double>();
  inst.demand_base = j.at("demand_base").get<double>();
  inst.demand = j.at("demand").get<std::vector<double>>();
  for (const json& u : j.at("units")) {
    UnitParams p;
    p.p_min = u.at("p_min").get<double>();
    p.p_max = u.at("p_max").get<double>();
    p.ramp_up = u.at("ramp_up").get<double>();
    p.ramp_down = u.at("ramp_down").get<double>();
    p.min_up = u.at("min_up").get<int>();
    p.min_down = u.at("min_down").get<int>();
    p.cost_marginal = u.at("cost_marginal").get<double>();
    p.cost_noload = u.at("cost_noload").get<double>();
    p.cost_startup = u.at("cost_startup").get<double>();
    inst.units.push_back(p);
  }
  return inst;
}

}  // namespace ucpdlp::ucgen
