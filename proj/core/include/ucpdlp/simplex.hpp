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

// Primal simplex on the surplus-augmented standard form
//
//     A x - s = b,  x >= 0,  s >= 0
//
// Column j < n is structural variable j; column n + i is the surplus of row i
// (its column is -e_i). A basis is a list of m such column indices.
//
// Phase 1 minimizes the sum of infeasibilities of the current basis directly
// (no artificial columns), so any nonsingular starting basis can be used,
// feasible or not. Pricing is Dantzig's rule, with a switch to Bland's rule
// after 3m consecutive degenerate pivots. The basis is kept as a dense LU
// factorization plus product-form eta updates, refactored every 50 pivots.

#ifndef UCPDLP_SIMPLEX_HPP_
#define UCPDLP_SIMPLEX_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucpdlp/model.hpp"

namespace ucpdlp::simplex {

using model::StandardLp;
using sparse::Index;

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(SimplexStatus status);

class SimplexError : public std::runtime_error {
 public:
  SimplexError(std::int64_t pivot, const std::string& message);
  std::int64_t pivot() const { return pivot_; }

 private:
  std::int64_t pivot_;
};

struct BasicSolution {
  SimplexStatus status = SimplexStatus::kInfeasible;
  std::vector<double> x;      // structural values, length n
  std::vector<double> slack;  // surplus values A x - b, length m
  std::vector<double> y;      // row duals c_B^T B^-1 (optimal status only)
  std::vector<Index> basis;   // sorted column indices, length m
  double objective = 0.0;     // c^T x + objective_offset
  std::int64_t iterations = 0;
  std::int64_t phase1_iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_period = 50;
  std::int64_t max_iterations = 0;  // 0: 50 * (m + n) + 1000
};

BasicSolution simplex_solve(
    const StandardLp& prob,
    const std::optional<std::vector<Index>>& start_basis = std::nullopt,
    const SimplexOptions& options = {});

// Makes `basis` a valid nonsingular basis: drops out-of-range and repeated
// columns, keeps a maximal linearly independent prefix (in the given order)
// and fills the remaining positions with surplus columns. Result is sorted.
std::vector<Index> repair_basis(const StandardLp& prob,
                                std::span<const Index> basis);

struct CrossoverResult {
  BasicSolution solution;
  std::vector<Index> start_basis;   // basis handed to the cleanup simplex
  std::int64_t cleanup_iterations = 0;
};

// Converts an approximate primal-dual pair into a basic solution:
//  1. classify: structural j is nonbasic if x_j <= tol (1 + ||x||_inf) or its
//     reduced cost (c - A^T y)_j > tol (1 + ||c||_inf); row i is active
//     (surplus nonbasic) if y_i > tol;
//  2. build a basis greedily from the remaining columns by decreasing value,
//     rank-checked by incremental elimination, padded with surplus columns;
//  3. clean up with simplex_solve warm-started from that basis.
// Negative input entries are projected to zero first.
CrossoverResult crossover(const StandardLp& prob,
                          std::span<const double> x_approx,
                          std::span<const double> y_approx,
                          double classify_tol = 1e-6,
                          const SimplexOptions& options = {});

}  // namespace ucpdlp::simplex

#endif  // UCPDLP_SIMPLEX_HPP_
