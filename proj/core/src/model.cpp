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

#include "ucpdlp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace ucpdlp::model {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Canonicalization* find_canonicalization(const TransformLog& log) {
  for (const Transform& t : log) {
    if (const auto* c = std::get_if<Canonicalization>(&t)) return c;
  }
  return nullptr;
}

}  // namespace

double GeneralLp::objective(std::span<const double> x) const {
  double value = constant;
  for (std::size_t j = 0; j < costs.size(); ++j) value += costs[j] * x[j];
  return value;
}

void GeneralLp::validate() const {
  const Index n = num_vars();
  const Index m = num_rows();
  if (matrix.ncols() != n || matrix.nrows() != m ||
      static_cast<Index>(relations.size()) != m ||
      static_cast<Index>(lower.size()) != n ||
      static_cast<Index>(upper.size()) != n ||
      static_cast<Index>(var_types.size()) != n) {
    throw std::invalid_argument("GeneralLp: inconsistent dimensions");
  }
  if (!var_names.empty() && static_cast<Index>(var_names.size()) != n) {
    throw std::invalid_argument("GeneralLp: var_names must be empty or full");
  }
  if (!row_names.empty() && static_cast<Index>(row_names.size()) != m) {
    throw std::invalid_argument("GeneralLp: row_names must be empty or full");
  }
  for (Index j = 0; j < n; ++j) {
    const double l = lower[j];
    const double u = upper[j];
    if (std::isnan(l) || std::isnan(u) || l > u || l == kInfinity ||
        u == -kInfinity) {
      throw std::invalid_argument(
          fmt::format("GeneralLp: variable {} has invalid bounds [{}, {}]", j,
                      l, u));
    }
    if (var_types[j] == VarType::kBinary && (l < 0.0 || u > 1.0)) {
      throw std::invalid_argument(fmt::format(
          "GeneralLp: binary variable {} has bounds [{}, {}] outside [0, 1]",
          j, l, u));
    }
  }
}

GeneralLpBuilder::GeneralLpBuilder(std::string name) {
  lp_.name = std::move(name);
}

Index GeneralLpBuilder::add_variable(double cost, double lower, double upper,
                                     VarType type, std::string name) {
  lp_.costs.push_back(cost);
  lp_.lower.push_back(lower);
  lp_.upper.push_back(upper);
  lp_.var_types.push_back(type);
  any_var_name_ = any_var_name_ || !name.empty();
  lp_.var_names.push_back(std::move(name));
  return lp_.num_vars() - 1;
}

Index GeneralLpBuilder::add_row(std::span<const Index> cols,
                                std::span<const double> coefs,
                                Relation relation, double rhs,
                                std::string name) {
  if (cols.size() != coefs.size()) {
    throw std::invalid_argument("add_row: cols/coefs length mismatch");
  }
  const Index row = lp_.num_rows();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    triplets_.push_back({row, cols[k], coefs[k]});
  }
  lp_.relations.push_back(relation);
  lp_.rhs.push_back(rhs);
  any_row_name_ = any_row_name_ || !name.empty();
  lp_.row_names.push_back(std::move(name));
  return row;
}

Index GeneralLpBuilder::add_row(
    std::initializer_list<std::pair<Index, double>> terms, Relation relation,
    double rhs, std::string name) {
  std::vector<Index> cols;
  std::vector<double> coefs;
  for (const auto& [c, v] : terms) {
    cols.push_back(c);
    coefs.push_back(v);
  }
  return add_row(cols, coefs, relation, rhs, std::move(name));
}

GeneralLp GeneralLpBuilder::build() && {
  lp_.matrix = CsrMatrix::from_triplets(lp_.num_rows(), lp_.num_vars(),
                                        triplets_);
  if (!any_var_name_) lp_.var_names.clear();
  if (!any_row_name_) lp_.row_names.clear();
  lp_.validate();
  return std::move(lp_);
}

double StandardLp::objective(std::span<const double> x) const {
  double value = objective_offset;
  for (std::size_t j = 0; j < c.size(); ++j) value += c[j] * x[j];
  return value;
}

Sense StandardLp::original_sense() const {
  const Canonicalization* canon = find_canonicalization(log);
  return canon == nullptr ? Sense::kMinimize : canon->sense;
}

double StandardLp::to_original_objective(double standard_objective) const {
  return original_sense() == Sense::kMaximize ? -standard_objective
                                              : standard_objective;
}

StandardLp make_standard(std::vector<double> c, CsrMatrix a,
                         std::vector<double> b) {
  if (static_cast<Index>(c.size()) != a.ncols() ||
      static_cast<Index>(b.size()) != a.nrows()) {
    throw std::invalid_argument("make_standard: dimension mismatch");
  }
  StandardLp lp;
  lp.c = std::move(c);
  lp.a = std::move(a);
  lp.b = std::move(b);
  return lp;
}

StandardLp canonicalize(const GeneralLp& lp) {
  lp.validate();
  const Index n = lp.num_vars();
  const Index m = lp.num_rows();
  for (Index j = 0; j < n; ++j) {
    if (!std::isfinite(lp.costs[j])) {
      throw std::invalid_argument(
          fmt::format("canonicalize: cost of variable {} is not finite", j));
    }
  }
  if (!std::isfinite(lp.constant)) {
    throw std::invalid_argument("canonicalize: objective constant not finite");
  }
  for (Index i = 0; i < m; ++i) {
    if (!std::isfinite(lp.rhs[i])) {
      throw std::invalid_argument(
          fmt::format("canonicalize: row {} has no finite rhs", i));
    }
    for (double v : lp.matrix.row_values(i)) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument(fmt::format(
            "canonicalize: row {} has a non-finite coefficient", i));
      }
    }
  }

  const double sign = lp.sense == Sense::kMaximize ? -1.0 : 1.0;
  Canonicalization canon;
  canon.sense = lp.sense;
  canon.original_costs = lp.costs;
  canon.original_constant = lp.constant;
  canon.columns.resize(n);

  StandardLp out;
  out.objective_offset = sign * lp.constant;
  Index next_col = 0;
  for (Index j = 0; j < n; ++j) {
    const double l = lp.lower[j];
    const double u = lp.upper[j];
    const double cj = sign * lp.costs[j];
    ColumnMap& map = canon.columns[j];
    map.column = next_col;
    if (std::isfinite(l)) {
      map.kind = ColumnKind::kShifted;
      map.offset = l;
      out.c.push_back(cj);
      out.objective_offset += cj * l;
      next_col += 1;
    } else if (std::isfinite(u)) {
      map.kind = ColumnKind::kReflected;
      map.offset = u;
      out.c.push_back(-cj);
      out.objective_offset += cj * u;
      next_col += 1;
    } else {
      map.kind = ColumnKind::kFree;
      out.c.push_back(cj);
      out.c.push_back(-cj);
      next_col += 2;
    }
  }
  canon.num_standard_cols = next_col;

  std::vector<sparse::Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * lp.matrix.nnz() + n));
  Index row = 0;
  std::vector<Index> cols;
  std::vector<double> vals;
  auto emit = [&](double factor, double rhs, RowKind kind, Index source) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      triplets.push_back({row, cols[k], factor * vals[k]});
    }
    out.b.push_back(factor * rhs);
    canon.rows.push_back({kind, source});
    ++row;
  };
  for (Index i = 0; i < m; ++i) {
    cols.clear();
    vals.clear();
    double rhs = lp.rhs[i];
    const auto rc = lp.matrix.row_cols(i);
    const auto rv = lp.matrix.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const ColumnMap& map = canon.columns[rc[k]];
      const double a = rv[k];
      switch (map.kind) {
        case ColumnKind::kShifted:
          rhs -= a * map.offset;
          cols.push_back(map.column);
          vals.push_back(a);
          break;
        case ColumnKind::kReflected:
          rhs -= a * map.offset;
          cols.push_back(map.column);
          vals.push_back(-a);
          break;
        case ColumnKind::kFree:
          cols.push_back(map.column);
          vals.push_back(a);
          cols.push_back(map.column + 1);
          vals.push_back(-a);
          break;
      }
    }
    switch (lp.relations[i]) {
      case Relation::kGreaterEqual:
        emit(1.0, rhs, RowKind::kOriginal, i);
        break;
      case Relation::kLessEqual:
        emit(-1.0, rhs, RowKind::kNegatedOriginal, i);
        break;
      case Relation::kEqual:
        emit(1.0, rhs, RowKind::kOriginal, i);
        emit(-1.0, rhs, RowKind::kNegatedOriginal, i);
        break;
    }
  }
  for (Index j = 0; j < n; ++j) {
    const ColumnMap& map = canon.columns[j];
    if (map.kind == ColumnKind::kShifted && std::isfinite(lp.upper[j])) {
      triplets.push_back({row, map.column, -1.0});
      out.b.push_back(-(lp.upper[j] - lp.lower[j]));
      canon.rows.push_back({RowKind::kUpperBound, j});
      ++row;
    }
  }
  out.a = CsrMatrix::from_triplets(row, next_col, triplets);
  out.log.emplace_back(std::move(canon));
  return out;
}

std::pair<StandardLp, ScalingDiagonals> ruiz_scale(const StandardLp& lp,
                                                   int iterations) {
  const Index m = lp.num_rows();
  const Index n = lp.num_cols();
  ScalingDiagonals diag{std::vector<double>(m, 1.0),
                        std::vector<double>(n, 1.0)};
  if (iterations <= 0) return {lp, diag};

  const auto starts = lp.a.row_starts();
  const auto cols = lp.a.col_indices();
  std::vector<double> values(lp.a.values().begin(), lp.a.values().end());
  std::vector<double> row_max(m);
  std::vector<double> col_max(n);
  for (int pass = 0; pass < iterations; ++pass) {
    std::fill(row_max.begin(), row_max.end(), 0.0);
    std::fill(col_max.begin(), col_max.end(), 0.0);
    for (Index r = 0; r < m; ++r) {
      for (Index k = starts[r]; k < starts[r + 1]; ++k) {
        const double v = std::abs(values[k]);
        row_max[r] = std::max(row_max[r], v);
        col_max[cols[k]] = std::max(col_max[cols[k]], v);
      }
    }
    for (Index r = 0; r < m; ++r) {
      row_max[r] = row_max[r] > 0.0 ? 1.0 / std::sqrt(row_max[r]) : 1.0;
      diag.row_scale[r] *= row_max[r];
    }
    for (Index j = 0; j < n; ++j) {
      col_max[j] = col_max[j] > 0.0 ? 1.0 / std::sqrt(col_max[j]) : 1.0;
      diag.col_scale[j] *= col_max[j];
    }
    for (Index r = 0; r < m; ++r) {
      for (Index k = starts[r]; k < starts[r + 1]; ++k) {
        values[k] *= row_max[r] * col_max[cols[k]];
      }
    }
  }

  StandardLp out;
  out.a = CsrMatrix(m, n, {starts.begin(), starts.end()},
                    {cols.begin(), cols.end()}, std::move(values));
  out.c.resize(n);
  out.b.resize(m);
  for (Index j = 0; j < n; ++j) out.c[j] = lp.c[j] * diag.col_scale[j];
  for (Index r = 0; r < m; ++r) out.b[r] = lp.b[r] * diag.row_scale[r];
  out.objective_offset = lp.objective_offset;
  out.log = lp.log;
  out.log.emplace_back(Scaling{diag.row_scale, diag.col_scale});
  return {std::move(out), std::move(diag)};
}

std::vector<double> unscale_primal(const ScalingDiagonals& d,
                                   std::span<const double> x_scaled) {
  std::vector<double> x(x_scaled.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = x_scaled[j] * d.col_scale[j];
  return x;
}

std::vector<double> unscale_dual(const ScalingDiagonals& d,
                                 std::span<const double> y_scaled) {
  std::vector<double> y(y_scaled.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y_scaled[i] * d.row_scale[i];
  return y;
}

PresolveResult presolve(const StandardLp& lp) {
  const Index m = lp.num_rows();
  const Index n = lp.num_cols();
  const CsrMatrix& a = lp.a;
  PresolveResult result;

  std::vector<bool> drop_row(m, false);
  for (Index r = 0; r < m; ++r) {
    if (a.row_cols(r).empty()) {
      if (lp.b[r] > 0.0) {
        result.status = PresolveStatus::kInfeasible;
        result.infeasible_row = r;
        return result;
      }
      drop_row[r] = true;
    }
  }

  // Duplicate rows: sort nonempty rows by content, then merge runs.
  std::vector<double> b = lp.b;
  std::vector<Index> order;
  for (Index r = 0; r < m; ++r) {
    if (!drop_row[r]) order.push_back(r);
  }
  auto row_less = [&](Index lhs, Index rhs) {
    const auto lc = a.row_cols(lhs);
    const auto rc = a.row_cols(rhs);
    if (lc.size() != rc.size()) return lc.size() < rc.size();
    const auto lv = a.row_values(lhs);
    const auto rv = a.row_values(rhs);
    for (std::size_t k = 0; k < lc.size(); ++k) {
      if (lc[k] != rc[k]) return lc[k] < rc[k];
      if (lv[k] != rv[k]) return lv[k] < rv[k];
    }
    return lhs < rhs;
  };
  auto row_equal = [&](Index lhs, Index rhs) {
    return std::ranges::equal(a.row_cols(lhs), a.row_cols(rhs)) &&
           std::ranges::equal(a.row_values(lhs), a.row_values(rhs));
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k + 1;
    // Within a run the smallest index sorts first and is the one kept.
    while (end < order.size() && row_equal(order[k], order[end])) {
      b[order[k]] = std::max(b[order[k]], b[order[end]]);
      drop_row[order[end]] = true;
      ++end;
    }
    k = end;
  }

  std::vector<bool> col_used(n, false);
  for (Index col : a.col_indices()) col_used[col] = true;
  std::vector<bool> drop_col(n, false);
  for (Index j = 0; j < n; ++j) {
    drop_col[j] = !col_used[j] && lp.c[j] == 0.0;
  }

  std::vector<Index> new_col(n, -1);
  RemovedColumns removed_cols{{}, n};
  Index kept_cols = 0;
  for (Index j = 0; j < n; ++j) {
    if (drop_col[j]) {
      removed_cols.indices.push_back(j);
    } else {
      new_col[j] = kept_cols++;
    }
  }
  RemovedRows removed_rows;
  std::vector<sparse::Triplet> triplets;
  StandardLp& out = result.lp;
  Index kept_rows = 0;
  for (Index r = 0; r < m; ++r) {
    if (drop_row[r]) {
      removed_rows.indices.push_back(r);
      continue;
    }
    const auto rc = a.row_cols(r);
    const auto rv = a.row_values(r);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      triplets.push_back({kept_rows, new_col[rc[k]], rv[k]});
    }
    out.b.push_back(b[r]);
    ++kept_rows;
  }
  out.a = CsrMatrix::from_triplets(kept_rows, kept_cols, triplets);
  out.c.reserve(kept_cols);
  for (Index j = 0; j < n; ++j) {
    if (!drop_col[j]) out.c.push_back(lp.c[j]);
  }
  out.objective_offset = lp.objective_offset;
  out.log = lp.log;
  if (!removed_rows.indices.empty()) out.log.emplace_back(std::move(removed_rows));
  if (!removed_cols.indices.empty()) out.log.emplace_back(std::move(removed_cols));
  return result;
}

PostsolveResult postsolve(const StandardLp& lp,
                          std::span<const double> x_standard) {
  if (static_cast<Index>(x_standard.size()) != lp.num_cols()) {
    throw std::invalid_argument(
        fmt::format("postsolve: expected {} values, got {}", lp.num_cols(),
                    x_standard.size()));
  }
  std::vector<double> x(x_standard.begin(), x_standard.end());
  PostsolveResult result;
  bool canonical = false;
  for (auto it = lp.log.rbegin(); it != lp.log.rend(); ++it) {
    std::visit(
        Overloaded{
            [&](const Scaling& s) {
              for (std::size_t j = 0; j < x.size(); ++j) x[j] *= s.col_scale[j];
            },
            [&](const RemovedRows&) {},
            [&](const RemovedColumns& rc) {
              std::vector<double> full(rc.num_cols_before, 0.0);
              std::size_t next = 0;
              std::size_t removed = 0;
              for (Index j = 0; j < rc.num_cols_before; ++j) {
                if (removed < rc.indices.size() && rc.indices[removed] == j) {
                  ++removed;
                } else {
                  full[j] = x[next++];
                }
              }
              x = std::move(full);
            },
            [&](const Canonicalization& canon) {
              std::vector<double> orig(canon.columns.size());
              for (std::size_t j = 0; j < orig.size(); ++j) {
                const ColumnMap& map = canon.columns[j];
                switch (map.kind) {
                  case ColumnKind::kShifted:
                    orig[j] = map.offset + x[map.column];
                    break;
                  case ColumnKind::kReflected:
                    orig[j] = map.offset - x[map.column];
                    break;
                  case ColumnKind::kFree:
                    orig[j] = x[map.column] - x[map.column + 1];
                    break;
                }
              }
              double obj = canon.original_constant;
              for (std::size_t j = 0; j < orig.size(); ++j) {
                obj += canon.original_costs[j] * orig[j];
              }
              result.objective = obj;
              x = std::move(orig);
              canonical = true;
            }},
        *it);
  }
  if (!canonical) result.objective = lp.objective(x_standard);
  result.x = std::move(x);
  return result;
}

std::vector<double> forward_map(const StandardLp& lp,
                                std::span<const double> x_original) {
  std::vector<double> x(x_original.begin(), x_original.end());
  for (const Transform& t : lp.log) {
    std::visit(
        Overloaded{
            [&](const Canonicalization& canon) {
              if (x.size() != canon.columns.size()) {
                throw std::invalid_argument(
                    "forward_map: point length does not match model");
              }
              std::vector<double> std_x(canon.num_standard_cols, 0.0);
              for (std::size_t j = 0; j < canon.columns.size(); ++j) {
                const ColumnMap& map = canon.columns[j];
                switch (map.kind) {
                  case ColumnKind::kShifted:
                    std_x[map.column] = x[j] - map.offset;
                    break;
                  case ColumnKind::kReflected:
                    std_x[map.column] = map.offset - x[j];
                    break;
                  case ColumnKind::kFree:
                    std_x[map.column] = std::max(x[j], 0.0);
                    std_x[map.column + 1] = std::max(-x[j], 0.0);
                    break;
                }
              }
              x = std::move(std_x);
            },
            [&](const RemovedRows&) {},
            [&](const RemovedColumns& rc) {
              std::vector<double> kept;
              kept.reserve(x.size() - rc.indices.size());
              std::size_t removed = 0;
              for (Index j = 0; j < rc.num_cols_before; ++j) {
                if (removed < rc.indices.size() && rc.indices[removed] == j) {
                  ++removed;
                } else {
                  kept.push_back(x[j]);
                }
              }
              x = std::move(kept);
            },
            [&](const Scaling& s) {
              for (std::size_t j = 0; j < x.size(); ++j) x[j] /= s.col_scale[j];
            }},
        t);
  }
  if (static_cast<Index>(x.size()) != lp.num_cols()) {
    throw std::invalid_argument(
        "forward_map: point length does not match model");
  }
  return x;
}

}  // namespace ucpdlp::model
