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

#include "ucpdlp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "ucpdlp/sparse.hpp"

namespace ucpdlp::simplex {

namespace {

constexpr double kSingularTol = 1e-11;
constexpr double kRankTol = 1e-9;

// Column access to A (CSR of A^T) plus the surplus columns -e_i.
class Columns {
 public:
  explicit Columns(const StandardLp& prob)
      : n_(prob.num_cols()), m_(prob.num_rows()) {
    std::vector<sparse::Triplet> t;
    t.reserve(prob.a.nnz());
    for (Index r = 0; r < m_; ++r) {
      const auto cols = prob.a.row_cols(r);
      const auto vals = prob.a.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        t.push_back({cols[k], r, vals[k]});
      }
    }
    at_ = sparse::CsrMatrix::from_triplets(n_, m_, t);
  }

  Index n() const { return n_; }
  Index m() const { return m_; }

  void scatter(Index col, std::span<double> dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    if (col < n_) {
      const auto rows = at_.row_cols(col);
      const auto vals = at_.row_values(col);
      for (std::size_t k = 0; k < rows.size(); ++k) dense[rows[k]] = vals[k];
    } else {
      dense[col - n_] = -1.0;
    }
  }

  // a_col^T v.
  double dot(Index col, std::span<const double> v) const {
    if (col >= n_) return -v[col - n_];
    double s = 0.0;
    const auto rows = at_.row_cols(col);
    const auto vals = at_.row_values(col);
    for (std::size_t k = 0; k < rows.size(); ++k) s += vals[k] * v[rows[k]];
    return s;
  }

 private:
  Index n_;
  Index m_;
  sparse::CsrMatrix at_;
};

// Dense LU with partial pivoting: P B = L U, stored row-major in one array.
class DenseLu {
 public:
  // Returns the first column without an acceptable pivot, or -1.
  Index factor(std::vector<double> matrix, Index m) {
    m_ = m;
    lu_ = std::move(matrix);
    perm_.resize(m);
    std::iota(perm_.begin(), perm_.end(), Index{0});
    for (Index k = 0; k < m; ++k) {
      Index pivot = k;
      double best = std::abs(lu_[k * m + k]);
      for (Index r = k + 1; r < m; ++r) {
        const double v = std::abs(lu_[r * m + k]);
        if (v > best) {
          best = v;
          pivot = r;
        }
      }
      if (best <= kSingularTol) return k;
      if (pivot != k) {
        for (Index c = 0; c < m; ++c) std::swap(lu_[k * m + c], lu_[pivot * m + c]);
        std::swap(perm_[k], perm_[pivot]);
      }
      const double inv = 1.0 / lu_[k * m + k];
      for (Index r = k + 1; r < m; ++r) {
        double& l = lu_[r * m + k];
        if (l == 0.0) continue;
        l *= inv;
        const double f = l;
        for (Index c = k + 1; c < m; ++c) lu_[r * m + c] -= f * lu_[k * m + c];
      }
    }
    return -1;
  }

  // B x = rhs, in place.
  void solve(std::span<double> rhs) const {
    std::vector<double> t(m_);
    for (Index i = 0; i < m_; ++i) t[i] = rhs[perm_[i]];
    for (Index i = 0; i < m_; ++i) {
      double s = t[i];
      for (Index k = 0; k < i; ++k) s -= lu_[i * m_ + k] * t[k];
      t[i] = s;
    }
    for (Index i = m_ - 1; i >= 0; --i) {
      double s = t[i];
      for (Index k = i + 1; k < m_; ++k) s -= lu_[i * m_ + k] * t[k];
      t[i] = s / lu_[i * m_ + i];
    }
    std::copy(t.begin(), t.end(), rhs.begin());
  }

  // B^T x = rhs, in place.
  void solve_transpose(std::span<double> rhs) const {
    std::vector<double> t(rhs.begin(), rhs.end());
    for (Index i = 0; i < m_; ++i) {
      double s = t[i];
      for (Index k = 0; k < i; ++k) s -= lu_[k * m_ + i] * t[k];
      t[i] = s / lu_[i * m_ + i];
    }
    for (Index i = m_ - 1; i >= 0; --i) {
      double s = t[i];
      for (Index k = i + 1; k < m_; ++k) s -= lu_[k * m_ + i] * t[k];
      t[i] = s;
    }
    for (Index i = 0; i < m_; ++i) rhs[perm_[i]] = t[i];
  }

 private:
  Index m_ = 0;
  std::vector<double> lu_;
  std::vector<Index> perm_;
};

// B^-1 as a fresh LU times a product of eta matrices.
class BasisFactor {
 public:
  explicit BasisFactor(const Columns& cols) : cols_(cols) {}

  Index refactor(std::span<const Index> basis) {
    const Index m = cols_.m();
    std::vector<double> dense(static_cast<std::size_t>(m * m), 0.0);
    std::vector<double> col(m);
    for (Index k = 0; k < m; ++k) {
      cols_.scatter(basis[k], col);
      for (Index r = 0; r < m; ++r) dense[r * m + k] = col[r];
    }
    etas_.clear();
    return lu_.factor(std::move(dense), m);
  }

  void ftran(std::span<double> v) const {
    lu_.solve(v);
    for (const Eta& e : etas_) {
      const double pivot = v[e.row] / e.column[e.row];
      if (pivot != 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= e.column[i] * pivot;
      }
      v[e.row] = pivot;
    }
  }

  void btran(std::span<double> u) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = u[it->row];
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (static_cast<Index>(i) != it->row) s -= u[i] * it->column[i];
      }
      u[it->row] = s / it->column[it->row];
    }
    lu_.solve_transpose(u);
  }

  void update(Index row, std::vector<double> alpha) {
    etas_.push_back({row, std::move(alpha)});
  }

  std::size_t num_updates() const { return etas_.size(); }

 private:
  struct Eta {
    Index row;
    std::vector<double> column;  // ftran'd entering column
  };
  const Columns& cols_;
  DenseLu lu_;
  std::vector<Eta> etas_;
};

// Incremental column elimination used to pick linearly independent columns.
class RankChecker {
 public:
  explicit RankChecker(Index m) : m_(m), pivoted_(m, false) {}

  bool try_add(std::vector<double> v) {
    double scale = 0.0;
    for (double e : v) scale = std::max(scale, std::abs(e));
    if (scale == 0.0) return false;
    for (std::size_t k = 0; k < accepted_.size(); ++k) {
      const double f = v[pivots_[k]];
      if (f == 0.0) continue;
      const std::vector<double>& l = accepted_[k];
      for (Index i = 0; i < m_; ++i) v[i] -= f * l[i];
    }
    Index pivot = -1;
    double best = 0.0;
    for (Index i = 0; i < m_; ++i) {
      if (!pivoted_[i] && std::abs(v[i]) > best) {
        best = std::abs(v[i]);
        pivot = i;
      }
    }
    if (pivot < 0 || best <= kRankTol * std::max(1.0, scale)) return false;
    const double inv = 1.0 / v[pivot];
    for (double& e : v) e *= inv;
    pivoted_[pivot] = true;
    pivots_.push_back(pivot);
    accepted_.push_back(std::move(v));
    return true;
  }

  std::size_t rank() const { return accepted_.size(); }
  bool pivoted(Index row) const { return pivoted_[row]; }

 private:
  Index m_;
  std::vector<bool> pivoted_;
  std::vector<Index> pivots_;
  std::vector<std::vector<double>> accepted_;
};

// Greedy independent selection from `candidates`, padded with surplus
// columns of rows that have no pivot yet.
std::vector<Index> select_basis(const Columns& cols,
                                std::span<const Index> candidates) {
  const Index m = cols.m();
  const Index n = cols.n();
  RankChecker checker(m);
  std::vector<bool> used(static_cast<std::size_t>(n + m), false);
  std::vector<Index> basis;
  std::vector<double> dense(m);
  for (Index col : candidates) {
    if (static_cast<Index>(basis.size()) == m) break;
    if (col < 0 || col >= n + m || used[col]) continue;
    cols.scatter(col, dense);
    if (checker.try_add(dense)) {
      basis.push_back(col);
      used[col] = true;
    }
  }
  for (Index r = 0; r < m && static_cast<Index>(basis.size()) < m; ++r) {
    if (checker.pivoted(r) || used[n + r]) continue;
    cols.scatter(n + r, dense);
    if (checker.try_add(dense)) {
      basis.push_back(n + r);
      used[n + r] = true;
    }
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace

std::string to_string(SimplexStatus status) {
  switch (status) {
    case SimplexStatus::kOptimal:
      return "optimal";
    case SimplexStatus::kInfeasible:
      return "infeasible";
    case SimplexStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

SimplexError::SimplexError(std::int64_t pivot, const std::string& message)
    : std::runtime_error(fmt::format("simplex pivot {}: {}", pivot, message)),
      pivot_(pivot) {}

std::vector<Index> repair_basis(const StandardLp& prob,
                                std::span<const Index> basis) {
  const Columns cols(prob);
  return select_basis(cols, basis);
}

BasicSolution simplex_solve(const StandardLp& prob,
                            const std::optional<std::vector<Index>>& start_basis,
                            const SimplexOptions& options) {
  const Columns cols(prob);
  const Index n = cols.n();
  const Index m = cols.m();
  const Index total = n + m;
  const std::int64_t max_iters = options.max_iterations > 0
                                     ? options.max_iterations
                                     : 50 * total + 1000;

  std::vector<Index> basis;
  if (start_basis) {
    basis = select_basis(cols, *start_basis);
  } else {
    basis.resize(m);
    std::iota(basis.begin(), basis.end(), n);
  }
  std::vector<Index> position(total, -1);
  for (Index k = 0; k < m; ++k) position[basis[k]] = k;

  const double feas_tol = options.feasibility_tol * std::max(1.0, norm_inf(prob.b));
  const double cost_scale = std::max(1.0, norm_inf(prob.c));

  BasisFactor factor(cols);
  std::vector<double> xb(m);
  std::int64_t iter = 0;
  auto refactor = [&]() {
    if (const Index bad = factor.refactor(basis); bad >= 0) {
      throw SimplexError(iter, fmt::format("basis singular at position {} "
                                           "(column {})", bad, basis[bad]));
    }
    std::copy(prob.b.begin(), prob.b.end(), xb.begin());
    factor.ftran(xb);
  };
  refactor();

  BasicSolution sol;
  std::vector<double> cost_b(m);
  std::vector<double> y(m);
  std::vector<double> aty(n);
  std::vector<double> alpha(m);
  std::int64_t degenerate_run = 0;
  bool bland = false;
  bool verified = false;

  while (true) {
    bool infeasible = false;
    for (Index k = 0; k < m; ++k) infeasible = infeasible || xb[k] < -feas_tol;
    const bool phase1 = infeasible;
    for (Index k = 0; k < m; ++k) {
      if (phase1) {
        cost_b[k] = xb[k] < -feas_tol ? -1.0 : 0.0;
      } else {
        cost_b[k] = basis[k] < n ? prob.c[basis[k]] : 0.0;
      }
    }
    std::copy(cost_b.begin(), cost_b.end(), y.begin());
    factor.btran(y);
    sparse::spmv_transpose(prob.a, y, aty);

    const double dtol = options.optimality_tol * (phase1 ? 1.0 : cost_scale);
    Index entering = -1;
    double best = -dtol;
    for (Index j = 0; j < total; ++j) {
      if (position[j] >= 0) continue;
      const double d = j < n ? (phase1 ? 0.0 : prob.c[j]) - aty[j] : y[j - n];
      if (d < best) {
        entering = j;
        if (bland) break;
        best = d;
      }
    }

    if (entering < 0) {
      // Refactor once before declaring a verdict so that it rests on a fresh
      // factorization rather than accumulated updates.
      if (!verified && factor.num_updates() > 0) {
        refactor();
        verified = true;
        continue;
      }
      sol.status = phase1 ? SimplexStatus::kInfeasible : SimplexStatus::kOptimal;
      if (!phase1) sol.y = y;
      break;
    }
    verified = false;
    if (iter >= max_iters) {
      throw SimplexError(iter, "iteration limit reached");
    }

    cols.scatter(entering, alpha);
    factor.ftran(alpha);

    Index leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    double leave_alpha = 0.0;
    for (Index k = 0; k < m; ++k) {
      const double a = alpha[k];
      double ratio;
      if (xb[k] >= -feas_tol) {
        if (a <= options.pivot_tol) continue;
        ratio = std::max(xb[k], 0.0) / a;
      } else {
        if (!phase1 || a >= -options.pivot_tol) continue;
        ratio = xb[k] / a;
      }
      bool take = false;
      if (leave < 0 || ratio < theta - 1e-12 * std::max(1.0, theta)) {
        take = true;
      } else if (ratio <= theta + 1e-12 * std::max(1.0, theta)) {
        take = bland ? basis[k] < basis[leave]
                     : std::abs(a) > std::abs(leave_alpha);
      }
      if (take) {
        leave = k;
        theta = ratio;
        leave_alpha = a;
      }
    }
    if (leave < 0) {
      if (phase1) throw SimplexError(iter, "phase 1 ratio test found no row");
      sol.status = SimplexStatus::kUnbounded;
      break;
    }

    for (Index k = 0; k < m; ++k) xb[k] -= theta * alpha[k];
    xb[leave] = theta;
    position[basis[leave]] = -1;
    basis[leave] = entering;
    position[entering] = leave;
    factor.update(leave, alpha);
    ++iter;
    if (phase1) ++sol.phase1_iterations;

    if (theta <= 1e-12) {
      if (++degenerate_run > 3 * m) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    if (static_cast<int>(factor.num_updates()) >= options.refactor_period) {
      refactor();
    }
  }

  sol.iterations = iter;
  sol.x.assign(n, 0.0);
  sol.slack.assign(m, 0.0);
  for (Index k = 0; k < m; ++k) {
    const double v = std::max(xb[k], 0.0);
    if (basis[k] < n) {
      sol.x[basis[k]] = v;
    } else {
      sol.slack[basis[k] - n] = v;
    }
  }
  // Report the basis sorted; y stays indexed by row.
  sol.basis = basis;
  std::sort(sol.basis.begin(), sol.basis.end());
  sol.objective = prob.objective(sol.x);
  return sol;
}

CrossoverResult crossover(const StandardLp& prob,
                          std::span<const double> x_approx,
                          std::span<const double> y_approx, double classify_tol,
                          const SimplexOptions& options) {
  const Index n = prob.num_cols();
  const Index m = prob.num_rows();
  if (static_cast<Index>(x_approx.size()) != n ||
      static_cast<Index>(y_approx.size()) != m) {
    throw std::invalid_argument("crossover: point does not match problem");
  }
  std::vector<double> x(n);
  std::vector<double> y(m);
  for (Index j = 0; j < n; ++j) x[j] = std::max(x_approx[j], 0.0);
  for (Index i = 0; i < m; ++i) y[i] = std::max(y_approx[i], 0.0);

  const std::vector<double> aty = sparse::spmv_transpose(prob.a, y);
  const std::vector<double> ax = sparse::spmv(prob.a, x);
  const double x_tol = classify_tol * (1.0 + norm_inf(x));
  const double rc_tol = classify_tol * (1.0 + norm_inf(prob.c));

  struct Candidate {
    double value;
    Index column;
  };
  std::vector<Candidate> candidates;
  for (Index j = 0; j < n; ++j) {
    const bool at_zero = x[j] <= x_tol || prob.c[j] - aty[j] > rc_tol;
    if (!at_zero) candidates.push_back({x[j], j});
  }
  for (Index i = 0; i < m; ++i) {
    if (y[i] <= classify_tol) {
      candidates.push_back({std::max(ax[i] - prob.b[i], 0.0), n + i});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.value != b.value) return a.value > b.value;
                     return a.column < b.column;
                   });
  std::vector<Index> order;
  order.reserve(candidates.size());
  for (const Candidate& c : candidates) order.push_back(c.column);

  const Columns cols(prob);
  CrossoverResult result;
  result.start_basis = select_basis(cols, order);
  result.solution = simplex_solve(prob, result.start_basis, options);
  result.cleanup_iterations = result.solution.iterations;
  return result;
}

}  // namespace ucpdlp::simplex
