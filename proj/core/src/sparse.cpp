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

#include "ucpdlp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "ucpdlp/random.hpp"

namespace ucpdlp::sparse {

CsrMatrix::CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_starts,
                     std::vector<Index> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_starts_(std::move(row_starts)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (nrows_ < 0 || ncols_ < 0) {
    throw std::invalid_argument("CsrMatrix: negative dimension");
  }
  if (static_cast<Index>(row_starts_.size()) != nrows_ + 1 ||
      row_starts_.front() != 0 ||
      row_starts_.back() != static_cast<Index>(values_.size()) ||
      col_indices_.size() != values_.size()) {
    throw std::invalid_argument("CsrMatrix: inconsistent array lengths");
  }
  for (Index r = 0; r < nrows_; ++r) {
    if (row_starts_[r + 1] < row_starts_[r]) {
      throw std::invalid_argument(
          fmt::format("CsrMatrix: row_starts decreases at row {}", r));
    }
    for (Index k = row_starts_[r]; k < row_starts_[r + 1]; ++k) {
      if (col_indices_[k] < 0 || col_indices_[k] >= ncols_ ||
          (k > row_starts_[r] && col_indices_[k] <= col_indices_[k - 1])) {
        throw std::invalid_argument(
            fmt::format("CsrMatrix: bad column order in row {}", r));
      }
      if (values_[k] == 0.0) {
        throw std::invalid_argument(
            fmt::format("CsrMatrix: explicit zero in row {}", r));
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index nrows, Index ncols,
                                   std::span<const Triplet> entries) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Triplet& t = entries[k];
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw std::out_of_range(fmt::format(
          "from_triplets: entry {} at ({}, {}) outside {}x{} matrix", k, t.row,
          t.col, nrows, ncols));
    }
  }
  // Stable sort keeps duplicates in input order, so their sum is
  // deterministic.
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     const Triplet& a = entries[lhs];
                     const Triplet& b = entries[rhs];
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  std::vector<Index> row_starts(nrows + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  std::size_t k = 0;
  while (k < order.size()) {
    const Triplet& head = entries[order[k]];
    double sum = 0.0;
    std::size_t end = k;
    while (end < order.size() && entries[order[end]].row == head.row &&
           entries[order[end]].col == head.col) {
      sum += entries[order[end]].value;
      ++end;
    }
    if (sum != 0.0) {
      cols.push_back(head.col);
      vals.push_back(sum);
      ++row_starts[head.row + 1];
    }
    k = end;
  }
  std::partial_sum(row_starts.begin(), row_starts.end(), row_starts.begin());
  return CsrMatrix(nrows, ncols, std::move(row_starts), std::move(cols),
                   std::move(vals));
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> dense(static_cast<std::size_t>(nrows_ * ncols_), 0.0);
  for (Index r = 0; r < nrows_; ++r) {
    for (Index k = row_starts_[r]; k < row_starts_[r + 1]; ++k) {
      dense[r * ncols_ + col_indices_[k]] = values_[k];
    }
  }
  return dense;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (static_cast<Index>(x.size()) != a.ncols() ||
      static_cast<Index>(y.size()) != a.nrows()) {
    throw std::invalid_argument(
        fmt::format("spmv: {}x{} matrix with x of length {} and y of length {}",
                    a.nrows(), a.ncols(), x.size(), y.size()));
  }
  const auto starts = a.row_starts();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index r = 0; r < a.nrows(); ++r) {
    double sum = 0.0;
    for (Index k = starts[r]; k < starts[r + 1]; ++k) {
      sum += vals[k] * x[cols[k]];
    }
    y[r] = sum;
  }
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.nrows());
  spmv(a, x, y);
  return y;
}

void spmv_transpose(const CsrMatrix& a, std::span<const double> y,
                    std::span<double> x) {
  if (static_cast<Index>(y.size()) != a.nrows() ||
      static_cast<Index>(x.size()) != a.ncols()) {
    throw std::invalid_argument(fmt::format(
        "spmv_transpose: {}x{} matrix with y of length {} and x of length {}",
        a.nrows(), a.ncols(), y.size(), x.size()));
  }
  std::fill(x.begin(), x.end(), 0.0);
  const auto starts = a.row_starts();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index r = 0; r < a.nrows(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (Index k = starts[r]; k < starts[r + 1]; ++k) {
      x[cols[k]] += vals[k] * yr;
    }
  }
}

std::vector<double> spmv_transpose(const CsrMatrix& a,
                                   std::span<const double> y) {
  std::vector<double> x(a.ncols());
  spmv_transpose(a, y, x);
  return x;
}

namespace {

double norm2(std::span<const double> v) {
  double sum = 0.0;
  for (double e : v) sum += e * e;
  return std::sqrt(sum);
}

}  // namespace

double spectral_norm_estimate(const CsrMatrix& a,
                              const PowerIterationOptions& options) {
  if (a.nnz() == 0) return 0.0;
  Rng rng(options.seed);
  std::vector<double> v(a.ncols());
  for (double& e : v) e = rng.uniform(-1.0, 1.0);
  double vnorm = norm2(v);
  if (vnorm == 0.0) {
    std::fill(v.begin(), v.end(), 1.0);
    vnorm = norm2(v);
  }
  for (double& e : v) e /= vnorm;

  std::vector<double> av(a.nrows());
  std::vector<double> atav(a.ncols());
  double estimate = 0.0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    spmv(a, v, av);
    spmv_transpose(a, av, atav);
    // v has unit norm, so the Rayleigh quotient v^T A^T A v is ||Av||^2.
    const double rayleigh = std::inner_product(av.begin(), av.end(),
                                               av.begin(), 0.0);
    estimate = std::sqrt(rayleigh);
    // ||A^T A v - rho v|| bounds the eigenvalue error of rho; the change
    // between iterates does not when convergence is slow.
    double residual = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double r = atav[j] - rayleigh * v[j];
      residual += r * r;
    }
    if (std::sqrt(residual) <= options.tol * rayleigh) break;
    const double n = norm2(atav);
    if (n == 0.0) break;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = atav[j] / n;
  }
  return estimate;
}

}  // namespace ucpdlp::sparse
