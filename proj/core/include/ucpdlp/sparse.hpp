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

// Compressed sparse row storage and the three kernels every solver stage is
// built from: A*x, A^T*y and a power-iteration estimate of ||A||_2.
//
// All kernels accumulate in a fixed order (row by row, left to right within a
// row) so results are bit-reproducible run to run.

#ifndef UCPDLP_SPARSE_HPP_
#define UCPDLP_SPARSE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ucpdlp::sparse {

using Index = std::int64_t;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Immutable CSR matrix. Invariants (checked on construction):
//  * row_starts has nrows+1 nondecreasing entries, row_starts[0] == 0 and
//    row_starts[nrows] == values.size();
//  * column indices within a row are strictly increasing and < ncols;
//  * no stored value is zero.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_starts,
            std::vector<Index> col_indices, std::vector<double> values);

  // Builds a matrix from unordered (row, col, value) entries. Duplicates are
  // summed and entries that cancel to exactly zero are dropped. Throws
  // std::out_of_range naming the first entry whose index is out of range.
  static CsrMatrix from_triplets(Index nrows, Index ncols,
                                 std::span<const Triplet> entries);

  Index nrows() const { return nrows_; }
  Index ncols() const { return ncols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_starts() const { return row_starts_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(Index row) const {
    return {col_indices_.data() + row_starts_[row],
            static_cast<std::size_t>(row_starts_[row + 1] - row_starts_[row])};
  }
  std::span<const double> row_values(Index row) const {
    return {values_.data() + row_starts_[row],
            static_cast<std::size_t>(row_starts_[row + 1] - row_starts_[row])};
  }

  // Row-major dense copy, nrows*ncols entries. Meant for tests and tiny
  // problems only.
  std::vector<double> to_dense() const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_starts_ = {0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

// y = A x. Throws std::invalid_argument on a dimension mismatch.
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

// x = A^T y without forming A^T: rows are scattered in increasing row order,
// so each output slot sees its contributions in a fixed order.
std::vector<double> spmv_transpose(const CsrMatrix& a,
                                   std::span<const double> y);
void spmv_transpose(const CsrMatrix& a, std::span<const double> y,
                    std::span<double> x);

struct PowerIterationOptions {
  int max_iters = 200;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

// Power iteration on A^T A from a seeded random start; returns the square root
// of the final Rayleigh quotient. Returns 0 for a matrix without nonzeros.
double spectral_norm_estimate(const CsrMatrix& a,
                              const PowerIterationOptions& options = {});

}  // namespace ucpdlp::sparse

#endif  // UCPDLP_SPARSE_HPP_
