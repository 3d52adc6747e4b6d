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

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace ucpdlp::sparse {
namespace {

template <typename T>
std::vector<std::remove_const_t<T>> vec(std::span<T> s) {
  return {s.begin(), s.end()};
}

using ::testing::ElementsAre;
using ::testing::HasSubstr;

CsrMatrix diag34() {
  const Triplet t[] = {{0, 0, 3.0}, {1, 1, 4.0}};
  return CsrMatrix::from_triplets(2, 2, t);
}

CsrMatrix row11() {
  const Triplet t[] = {{0, 0, 1.0}, {0, 1, 1.0}};
  return CsrMatrix::from_triplets(1, 2, t);
}

CsrMatrix upper112() {
  const Triplet t[] = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 2.0}};
  return CsrMatrix::from_triplets(2, 2, t);
}

CsrMatrix random_matrix(std::uint64_t seed, Index m, Index n, double density) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-5.0, 5.0);
  std::vector<Triplet> t;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (u(gen) < density) t.push_back({i, j, v(gen)});
    }
  }
  return CsrMatrix::from_triplets(m, n, t);
}

Eigen::MatrixXd dense(const CsrMatrix& a) {
  const std::vector<double> d = a.to_dense();
  Eigen::MatrixXd out(a.nrows(), a.ncols());
  for (Index i = 0; i < a.nrows(); ++i) {
    for (Index j = 0; j < a.ncols(); ++j) out(i, j) = d[i * a.ncols() + j];
  }
  return out;
}

TEST(FromTriplets, Diagonal) {
  const CsrMatrix a = diag34();
  EXPECT_EQ(a.nrows(), 2);
  EXPECT_EQ(a.ncols(), 2);
  EXPECT_THAT(vec(a.row_starts()), ElementsAre(0, 1, 2));
  EXPECT_THAT(vec(a.col_indices()), ElementsAre(0, 1));
  EXPECT_THAT(vec(a.values()), ElementsAre(3.0, 4.0));
}

TEST(FromTriplets, SingleRow) {
  const CsrMatrix a = row11();
  EXPECT_THAT(vec(a.row_starts()), ElementsAre(0, 2));
  EXPECT_THAT(vec(a.col_indices()), ElementsAre(0, 1));
  EXPECT_THAT(vec(a.values()), ElementsAre(1.0, 1.0));
}

TEST(FromTriplets, CancellingDuplicatesLeaveNoEntry) {
  const Triplet t[] = {{0, 0, 2.0}, {0, 0, -2.0}};
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, t);
  EXPECT_EQ(a.nnz(), 0);
  EXPECT_TRUE(a.values().empty());
  EXPECT_THAT(vec(a.row_starts()), ElementsAre(0, 0, 0));
}

TEST(FromTriplets, UnsortedDuplicatesAreSummed) {
  const Triplet t[] = {{1, 2, 1.0}, {0, 1, 5.0}, {1, 0, -1.0}, {1, 2, 2.5}};
  const CsrMatrix a = CsrMatrix::from_triplets(2, 3, t);
  EXPECT_THAT(vec(a.row_starts()), ElementsAre(0, 1, 3));
  EXPECT_THAT(vec(a.col_indices()), ElementsAre(1, 0, 2));
  EXPECT_THAT(vec(a.values()), ElementsAre(5.0, -1.0, 3.5));
}

TEST(FromTriplets, OutOfRangeNamesEntry) {
  const Triplet t[] = {{0, 0, 1.0}, {0, 7, 2.0}};
  try {
    CsrMatrix::from_triplets(2, 2, t);
    FAIL() << "expected std::out_of_range";
  } catch (const std::out_of_range& e) {
    EXPECT_THAT(e.what(), HasSubstr("(0, 7)"));
  }
  const Triplet neg[] = {{-1, 0, 1.0}};
  EXPECT_THROW(CsrMatrix::from_triplets(2, 2, neg), std::out_of_range);
}

TEST(FromTriplets, DenseExpansionEqualsSumOfTriplets) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<Index> row(0, 6), col(0, 8);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Triplet> t;
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(7, 9);
    for (int k = 0; k < 40; ++k) {
      Triplet e{row(gen), col(gen), std::round(val(gen) * 4.0) / 4.0};
      expect(e.row, e.col) += e.value;
      t.push_back(e);
    }
    const CsrMatrix a = CsrMatrix::from_triplets(7, 9, t);
    EXPECT_EQ(dense(a), expect);
    for (double v : a.values()) EXPECT_NE(v, 0.0);
  }
}

TEST(CsrMatrix, ConstructorRejectsBrokenInvariants) {
  EXPECT_THROW(CsrMatrix(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(CsrMatrix(1, 2, {0, 1}, {0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(CsrMatrix(1, 2, {0, 1}, {2}, {1.0}), std::invalid_argument);
  EXPECT_THROW(CsrMatrix(2, 2, {0, 1}, {0}, {1.0}), std::invalid_argument);
  EXPECT_NO_THROW(CsrMatrix(1, 2, {0, 2}, {0, 1}, {1.0, 1.0}));
}

TEST(Spmv, HandExamples) {
  EXPECT_THAT(spmv(diag34(), std::vector<double>{1, 1}), ElementsAre(3.0, 4.0));
  EXPECT_THAT(spmv(row11(), std::vector<double>{2, 3}), ElementsAre(5.0));
  EXPECT_THAT(spmv(upper112(), std::vector<double>{1, 2}), ElementsAre(3.0, 4.0));
}

TEST(Spmv, DimensionMismatchThrows) {
  EXPECT_THROW(spmv(diag34(), std::vector<double>{1, 1, 1}), std::invalid_argument);
  std::vector<double> y(3);
  EXPECT_THROW(spmv(diag34(), std::vector<double>{1, 1}, y), std::invalid_argument);
}

TEST(SpmvTranspose, HandExamples) {
  EXPECT_THAT(spmv_transpose(diag34(), std::vector<double>{1, 1}),
              ElementsAre(3.0, 4.0));
  EXPECT_THAT(spmv_transpose(row11(), std::vector<double>{2}), ElementsAre(2.0, 2.0));
  EXPECT_THAT(spmv_transpose(upper112(), std::vector<double>{1, 1}),
              ElementsAre(1.0, 3.0));
}

TEST(SpmvTranspose, DimensionMismatchThrows) {
  EXPECT_THROW(spmv_transpose(diag34(), std::vector<double>{1}), std::invalid_argument);
  std::vector<double> x(1);
  EXPECT_THROW(spmv_transpose(diag34(), std::vector<double>{1, 1}, x),
               std::invalid_argument);
}

TEST(Spmv, MatchesDenseProductsAndAdjointIdentity) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> v(-1e6, 1e6);
  for (int trial = 0; trial < 10; ++trial) {
    const CsrMatrix a = random_matrix(100 + trial, 30, 45, 0.2);
    Eigen::VectorXd x(45), y(30);
    for (auto& e : x) e = v(gen);
    for (auto& e : y) e = v(gen);
    const std::vector<double> ax = spmv(a, std::vector<double>(x.data(), x.data() + 45));
    const std::vector<double> aty =
        spmv_transpose(a, std::vector<double>(y.data(), y.data() + 30));
    const Eigen::VectorXd ax_ref = dense(a) * x;
    const Eigen::VectorXd aty_ref = dense(a).transpose() * y;
    for (int i = 0; i < 30; ++i) {
      EXPECT_NEAR(ax[i], ax_ref(i), 1e-12 * (1.0 + std::abs(ax_ref(i))) * 45);
    }
    for (int j = 0; j < 45; ++j) {
      EXPECT_NEAR(aty[j], aty_ref(j), 1e-12 * (1.0 + std::abs(aty_ref(j))) * 30);
    }
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < 30; ++i) lhs += y(i) * ax[i];
    for (int j = 0; j < 45; ++j) rhs += aty[j] * x(j);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(std::abs(lhs), std::abs(rhs)));
  }
}

TEST(Spmv, RepeatedCallsAreBitIdentical) {
  const CsrMatrix a = random_matrix(3, 40, 40, 0.3);
  const std::vector<double> x(40, 0.1);
  EXPECT_EQ(spmv(a, x), spmv(a, x));
  EXPECT_EQ(spmv_transpose(a, x), spmv_transpose(a, x));
}

TEST(SpectralNorm, Diagonal) {
  EXPECT_NEAR(spectral_norm_estimate(diag34()), 4.0, 1e-6);
}

TEST(SpectralNorm, SingleRow) {
  EXPECT_NEAR(spectral_norm_estimate(row11()), std::sqrt(2.0), 1e-6);
}

TEST(SpectralNorm, ZeroMatrixIsZero) {
  EXPECT_EQ(spectral_norm_estimate(CsrMatrix::from_triplets(3, 3, {})), 0.0);
}

TEST(SpectralNorm, MatchesDenseSvdOracle) {
  const CsrMatrix a = random_matrix(0, 50, 80, 0.3);
  const double exact =
      Eigen::JacobiSVD<Eigen::MatrixXd>(dense(a)).singularValues()(0);
  const double est = spectral_norm_estimate(a);
  EXPECT_LE(std::abs(est - exact) / exact, 1e-4);
  EXPECT_LE(est, exact * (1.0 + 1e-12));
}

TEST(SpectralNorm, ReproducibleForSameSeed) {
  const CsrMatrix a = random_matrix(4, 20, 25, 0.4);
  const PowerIterationOptions opts{.max_iters = 50, .tol = 1e-9, .seed = 9};
  EXPECT_EQ(spectral_norm_estimate(a, opts), spectral_norm_estimate(a, opts));
}

}  // namespace
}  // namespace ucpdlp::sparse
