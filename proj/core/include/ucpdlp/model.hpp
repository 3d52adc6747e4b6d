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

// LP/MILP model representations.
//
// GeneralLp is the user-facing model: either objective sense, <=/=/>= rows,
// two-sided variable bounds and binary marks. StandardLp is the form every
// solver in this library works on:
//
//     minimize c^T x + offset   subject to   A x >= b,  x >= 0
//
// together with a TransformLog that maps any standard-form point back to the
// originating GeneralLp (postsolve) and original points forward (warm starts).
//
// Standard-form layout produced by canonicalize():
//  * columns: one per original variable in order, except free variables which
//    take two consecutive columns (positive part, negative part);
//  * rows: for each original row in order, one row (>= or negated <=) or two
//    rows (= split into >= followed by negated >=); then one upper-bound row
//    per variable with both bounds finite, in variable order.

#ifndef UCPDLP_MODEL_HPP_
#define UCPDLP_MODEL_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ucpdlp/sparse.hpp"

namespace ucpdlp::model {

using sparse::CsrMatrix;
using sparse::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class VarType { kContinuous, kBinary };

struct GeneralLp {
  std::string name;
  Sense sense = Sense::kMinimize;
  std::vector<double> costs;
  double constant = 0.0;
  CsrMatrix matrix;  // rows x variables
  std::vector<Relation> relations;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<VarType> var_types;
  // Optional; empty or one name per variable / row.
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;

  Index num_vars() const { return static_cast<Index>(costs.size()); }
  Index num_rows() const { return static_cast<Index>(rhs.size()); }

  // Objective value sense-free: c^T x + constant.
  double objective(std::span<const double> x) const;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

// Incremental construction of a GeneralLp, row by row.
class GeneralLpBuilder {
 public:
  explicit GeneralLpBuilder(std::string name = {});

  void set_sense(Sense sense) { lp_.sense = sense; }
  void set_constant(double c) { lp_.constant = c; }

  Index add_variable(double cost, double lower, double upper,
                     VarType type = VarType::kContinuous,
                     std::string name = {});
  Index add_row(std::span<const Index> cols, std::span<const double> coefs,
                Relation relation, double rhs, std::string name = {});
  Index add_row(std::initializer_list<std::pair<Index, double>> terms,
                Relation relation, double rhs, std::string name = {});

  // Validates and returns the model.
  GeneralLp build() &&;

 private:
  GeneralLp lp_;
  std::vector<sparse::Triplet> triplets_;
  bool any_var_name_ = false;
  bool any_row_name_ = false;
};

// --- Transform log ---------------------------------------------------------

enum class ColumnKind {
  kShifted,   // x = lower + x'
  kReflected, // x = upper - x'
  kFree,      // x = x+ - x-, two columns
};

struct ColumnMap {
  ColumnKind kind = ColumnKind::kShifted;
  Index column = 0;  // first standard-form column
  double offset = 0.0;  // lower for kShifted, upper for kReflected
};

enum class RowKind { kOriginal, kNegatedOriginal, kUpperBound };

struct RowOrigin {
  RowKind kind = RowKind::kOriginal;
  Index source = 0;  // original row index, or variable index for kUpperBound
};

// Mapping produced by canonicalize(); first entry of every log.
struct Canonicalization {
  Sense sense = Sense::kMinimize;
  std::vector<double> original_costs;
  double original_constant = 0.0;
  std::vector<ColumnMap> columns;  // one per original variable
  std::vector<RowOrigin> rows;     // one per standard-form row
  Index num_standard_cols = 0;
};

// Rows removed by presolve, as indices into the rows before removal.
struct RemovedRows {
  std::vector<Index> indices;
};

// Columns fixed to zero and removed by presolve, as indices before removal.
struct RemovedColumns {
  std::vector<Index> indices;
  Index num_cols_before = 0;
};

// Equilibration: scaled A = diag(row_scale) * A * diag(col_scale), so
// x = col_scale .* x_scaled and y = row_scale .* y_scaled.
struct Scaling {
  std::vector<double> row_scale;
  std::vector<double> col_scale;
};

using Transform =
    std::variant<Canonicalization, RemovedRows, RemovedColumns, Scaling>;
using TransformLog = std::vector<Transform>;

struct StandardLp {
  std::vector<double> c;
  CsrMatrix a;
  std::vector<double> b;
  double objective_offset = 0.0;
  TransformLog log;

  Index num_rows() const { return a.nrows(); }
  Index num_cols() const { return a.ncols(); }

  // c^T x + offset: the minimize-sense objective of the originating model.
  double objective(std::span<const double> x) const;
  // Converts a standard-form objective value to the originating model's sense.
  double to_original_objective(double standard_objective) const;
  Sense original_sense() const;
};

// Builds a StandardLp from its parts with a trivial (identity) log. Intended
// for tests and synthetic problems already in standard form.
StandardLp make_standard(std::vector<double> c, CsrMatrix a,
                         std::vector<double> b);

// --- Operations ------------------------------------------------------------

// Rewrites `lp` into standard form. Binary marks are ignored. Throws
// std::invalid_argument on NaN/infinite coefficients or non-finite rhs.
StandardLp canonicalize(const GeneralLp& lp);

struct ScalingDiagonals {
  std::vector<double> row_scale;
  std::vector<double> col_scale;
};

// Ruiz equilibration. Each pass divides every row and every column by the
// square root of its current max |entry|; all-zero rows/columns keep factor 1.
// A Scaling transform is appended to the log when iterations > 0.
std::pair<StandardLp, ScalingDiagonals> ruiz_scale(const StandardLp& lp,
                                                   int iterations = 10);

// Maps scaled-problem iterates back to the unscaled problem.
std::vector<double> unscale_primal(const ScalingDiagonals& d,
                                   std::span<const double> x_scaled);
std::vector<double> unscale_dual(const ScalingDiagonals& d,
                                 std::span<const double> y_scaled);

enum class PresolveStatus { kReduced, kInfeasible };

struct PresolveResult {
  PresolveStatus status = PresolveStatus::kReduced;
  StandardLp lp;  // meaningful when status == kReduced
  // Witness for kInfeasible: an empty row with b > 0 (input numbering).
  std::optional<Index> infeasible_row;
};

// Four reductions only: drop empty rows with b <= 0, report empty rows with
// b > 0 as infeasible, drop empty zero-cost columns, merge duplicate rows
// keeping the largest b.
PresolveResult presolve(const StandardLp& lp);

struct PostsolveResult {
  std::vector<double> x;
  double objective = 0.0;  // original sense, including the constant
};

// Replays the log in reverse. Throws std::invalid_argument if x_std does not
// have the standard-form length.
PostsolveResult postsolve(const StandardLp& lp,
                          std::span<const double> x_standard);

// Inverse of postsolve on the primal side: maps an original-space point into
// this StandardLp's column space (values are not projected onto x >= 0).
std::vector<double> forward_map(const StandardLp& lp,
                                std::span<const double> x_original);

}  // namespace ucpdlp::model

#endif  // UCPDLP_MODEL_HPP_
