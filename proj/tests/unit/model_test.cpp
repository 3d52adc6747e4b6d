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

#include <cmath>
#include <random>
#include <variant>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ucpdlp/simplex.hpp"

namespace ucpdlp::model {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;
using sparse::CsrMatrix;
using sparse::Triplet;

std::vector<double> dense_of(const StandardLp& lp) { return lp.a.to_dense(); }

double solve_original(const GeneralLp& lp) {
  const StandardLp s = canonicalize(lp);
  const simplex::BasicSolution sol = simplex::simplex_solve(s);
  EXPECT_EQ(sol.status, simplex::SimplexStatus::kOptimal);
  const PostsolveResult post = postsolve(s, sol.x);
  EXPECT_NEAR(post.objective, lp.objective(post.x), 1e-9 * (1 + std::abs(post.objective)));
  return post.objective;
}

TEST(Canonicalize, LessEqualRowIsNegated) {
  GeneralLpBuilder b;
  b.add_variable(1.0, 0.0, kInfinity);
  b.add_row({{0, 1.0}}, Relation::kLessEqual, 5.0);
  const StandardLp s = canonicalize(std::move(b).build());
  EXPECT_THAT(s.c, ElementsAre(1.0));
  EXPECT_THAT(dense_of(s), ElementsAre(-1.0));
  EXPECT_THAT(s.b, ElementsAre(-5.0));
}

TEST(Canonicalize, EqualityIsSplitIntoTwoRows) {
  GeneralLpBuilder b;
  b.add_variable(1.0, 0.0, kInfinity);
  b.add_variable(2.0, 0.0, kInfinity);
  b.add_row({{0, 1.0}, {1, 1.0}}, Relation::kEqual, 4.0);
  const StandardLp s = canonicalize(std::move(b).build());
  EXPECT_EQ(s.num_rows(), 2);
  EXPECT_THAT(dense_of(s), ElementsAre(1.0, 1.0, -1.0, -1.0));
  EXPECT_THAT(s.b, ElementsAre(4.0, -4.0));
}

TEST(Canonicalize, MaximizeWithUpperBoundPostsolves) {
  GeneralLpBuilder b;
  b.set_sense(Sense::kMaximize);
  b.add_variable(3.0, 0.0, 2.0);
  const GeneralLp lp = std::move(b).build();
  const StandardLp s = canonicalize(lp);
  EXPECT_THAT(s.c, ElementsAre(-3.0));
  const simplex::BasicSolution sol = simplex::simplex_solve(s);
  ASSERT_EQ(sol.status, simplex::SimplexStatus::kOptimal);
  const PostsolveResult post = postsolve(s, sol.x);
  EXPECT_THAT(post.x, ElementsAre(2.0));
  EXPECT_DOUBLE_EQ(post.objective, 6.0);
}

TEST(Canonicalize, BoundKinds) {
  GeneralLpBuilder b;
  b.add_variable(1.0, 2.0, 5.0);        // shifted, upper-bound row
  b.add_variable(1.0, -kInfinity, 4.0); // reflected
  b.add_variable(1.0, -kInfinity, kInfinity);  // split
  b.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Relation::kGreaterEqual, 1.0);
  const StandardLp s = canonicalize(std::move(b).build());
  EXPECT_EQ(s.num_cols(), 4);
  EXPECT_EQ(s.num_rows(), 2);
  const auto& canon = std::get<Canonicalization>(s.log.front());
  EXPECT_EQ(canon.columns[0].kind, ColumnKind::kShifted);
  EXPECT_EQ(canon.columns[1].kind, ColumnKind::kReflected);
  EXPECT_EQ(canon.columns[2].kind, ColumnKind::kFree);
  EXPECT_EQ(canon.rows[1].kind, RowKind::kUpperBound);
  // x0 = 2 + x0', x1 = 4 - x1', x2 = x2+ - x2-: row becomes
  // x0' - x1' + x2+ - x2- >= 1 - 2 - 4, bound row -x0' >= -3.
  EXPECT_THAT(dense_of(s), ElementsAre(1.0, -1.0, 1.0, -1.0, -1.0, 0.0, 0.0, 0.0));
  EXPECT_THAT(s.b, ElementsAre(-5.0, -3.0));
  EXPECT_DOUBLE_EQ(s.objective_offset, 6.0);
}

TEST(Canonicalize, RejectsNonFiniteData) {
  GeneralLp lp;
  lp.costs = {std::nan("")};
  lp.matrix = CsrMatrix::from_triplets(0, 1, {});
  lp.lower = {0.0};
  lp.upper = {1.0};
  lp.var_types = {VarType::kContinuous};
  EXPECT_THROW(canonicalize(lp), std::invalid_argument);

  GeneralLpBuilder b;
  b.add_variable(1.0, 0.0, 1.0);
  b.add_row({{0, 1.0}}, Relation::kGreaterEqual, kInfinity);
  EXPECT_THROW(canonicalize(std::move(b).build()), std::invalid_argument);
}

TEST(GeneralLp, ValidateRejectsBadBounds) {
  GeneralLpBuilder b;
  b.add_variable(1.0, 2.0, 1.0);
  EXPECT_THROW(std::move(b).build(), std::invalid_argument);
  GeneralLpBuilder c;
  c.add_variable(1.0, 0.0, 2.0, VarType::kBinary);
  EXPECT_THROW(std::move(c).build(), std::invalid_argument);
}

// Random bounded models with every bound and relation kind; the dense vertex
// enumeration supplies the reference optimum.
GeneralLp random_general(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 3), rel(0, 2);
  const int n = 3, m = 3;
  GeneralLpBuilder b;
  if (seed % 2) b.set_sense(Sense::kMaximize);
  b.set_constant(std::round(10 * u(gen)));
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    x0[j] = 4.0 * u(gen);
    double lo = -kInfinity, hi = kInfinity;
    switch (kind(gen)) {
      case 0:
        lo = x0[j] - 2.0;
        hi = x0[j] + 1.5;
        break;
      case 1:
        lo = x0[j] - 1.0;
        break;
      case 2:
        hi = x0[j] + 1.0;
        break;
      default:
        break;
    }
    b.add_variable(5.0 * u(gen), lo, hi);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<sparse::Index> cols;
    std::vector<double> coefs;
    double at = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = std::round(4.0 * u(gen));
      if (a == 0.0) continue;
      cols.push_back(j);
      coefs.push_back(a);
      at += a * x0[j];
    }
    const Relation r = static_cast<Relation>(rel(gen));
    const double rhs = r == Relation::kEqual          ? at
                       : r == Relation::kLessEqual ? at + 1.0
                                                   : at - 1.0;
    b.add_row(cols, coefs, r, rhs);
  }
  for (int j = 0; j < n; ++j) {
    b.add_row({{j, 1.0}}, Relation::kLessEqual, 10.0);
    b.add_row({{j, 1.0}}, Relation::kGreaterEqual, -10.0);
  }
  return std::move(b).build();
}

TEST(Canonicalize, PreservesOptimumOnRandomModels) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GeneralLp lp = random_general(seed);
    const auto oracle = testing::brute_force_lp(lp);
    ASSERT_TRUE(oracle.has_value()) << "seed " << seed;
    const double got = solve_original(lp);
    EXPECT_LE(testing::relative_error(got, oracle->objective), 1e-9)
        << "seed " << seed;
  }
}

TEST(RuizScale, DiagonalBecomesIdentity) {
  const Triplet t[] = {{0, 0, 100.0}, {1, 1, 0.01}};
  const StandardLp lp =
      make_standard({1.0, 1.0}, CsrMatrix::from_triplets(2, 2, t), {1.0, 1.0});
  const auto [scaled, d] = ruiz_scale(lp, 10);
  EXPECT_THAT(dense_of(scaled),
              Pointwise(DoubleNear(1e-15), {1.0, 0.0, 0.0, 1.0}));
  EXPECT_DOUBLE_EQ(d.row_scale[0], 1.0 / std::sqrt(100.0));
  EXPECT_DOUBLE_EQ(d.col_scale[0], 1.0 / std::sqrt(100.0));
  EXPECT_DOUBLE_EQ(d.row_scale[1], 1.0 / std::sqrt(0.01));
  EXPECT_DOUBLE_EQ(d.col_scale[1], 1.0 / std::sqrt(0.01));
  EXPECT_TRUE(std::holds_alternative<Scaling>(scaled.log.back()));
}

TEST(RuizScale, IdentityIsFixedPoint) {
  const Triplet t[] = {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
  const StandardLp lp = make_standard({1, 2, 3}, CsrMatrix::from_triplets(3, 3, t),
                                      {1, 1, 1});
  const auto [scaled, d] = ruiz_scale(lp, 10);
  EXPECT_EQ(scaled.a, lp.a);
  EXPECT_THAT(d.row_scale, ElementsAre(1.0, 1.0, 1.0));
  EXPECT_THAT(d.col_scale, ElementsAre(1.0, 1.0, 1.0));
}

TEST(RuizScale, ZeroIterationsReturnsInput) {
  const auto p = testing::planted_lp(1, 8, 9);
  const auto [scaled, d] = ruiz_scale(p.lp, 0);
  EXPECT_EQ(scaled.a, p.lp.a);
  EXPECT_EQ(scaled.b, p.lp.b);
  EXPECT_EQ(scaled.c, p.lp.c);
  EXPECT_EQ(scaled.log.size(), p.lp.log.size());
  EXPECT_EQ(d.row_scale, std::vector<double>(8, 1.0));
  EXPECT_EQ(d.col_scale, std::vector<double>(9, 1.0));
}

TEST(RuizScale, ZeroRowAndColumnKeepUnitScale) {
  const Triplet t[] = {{0, 0, 4.0}};
  const StandardLp lp =
      make_standard({1, 1}, CsrMatrix::from_triplets(2, 2, t), {1, 0});
  const auto [scaled, d] = ruiz_scale(lp, 5);
  EXPECT_EQ(d.row_scale[1], 1.0);
  EXPECT_EQ(d.col_scale[1], 1.0);
  for (double v : d.row_scale) EXPECT_GT(v, 0.0);
}

TEST(RuizScale, MaxMagnitudesApproachOne) {
  const auto p = testing::planted_lp(2, 30, 40);
  const auto [scaled, d] = ruiz_scale(p.lp, 10);
  std::vector<double> row_max(30, 0.0), col_max(40, 0.0);
  for (sparse::Index i = 0; i < 30; ++i) {
    const auto cols = scaled.a.row_cols(i);
    const auto vals = scaled.a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      row_max[i] = std::max(row_max[i], std::abs(vals[k]));
      col_max[cols[k]] = std::max(col_max[cols[k]], std::abs(vals[k]));
    }
  }
  for (double v : row_max) EXPECT_NEAR(v, 1.0, 1e-2);
  for (double v : col_max) EXPECT_NEAR(v, 1.0, 1e-2);
}

TEST(RuizScale, ScaledOptimumMatchesAfterUnscaling) {
  for (const auto& p : testing::lp_suite(10, 7)) {
    const auto [scaled, d] = ruiz_scale(p.lp, 10);
    const simplex::BasicSolution sol = simplex::simplex_solve(scaled);
    ASSERT_EQ(sol.status, simplex::SimplexStatus::kOptimal);
    const std::vector<double> x = unscale_primal(d, sol.x);
    EXPECT_LE(testing::relative_error(p.lp.objective(x), p.objective), 1e-6);
    const PostsolveResult post = postsolve(scaled, sol.x);
    EXPECT_LE(testing::relative_error(post.objective, p.objective), 1e-6);
  }
}

TEST(Presolve, EmptyRowWithNonpositiveRhsIsRemoved) {
  const Triplet t[] = {{1, 0, 1.0}};
  const StandardLp lp =
      make_standard({1.0}, CsrMatrix::from_triplets(2, 1, t), {-1.0, 2.0});
  const PresolveResult r = presolve(lp);
  ASSERT_EQ(r.status, PresolveStatus::kReduced);
  EXPECT_EQ(r.lp.num_rows(), 1);
  EXPECT_THAT(r.lp.b, ElementsAre(2.0));
}

TEST(Presolve, EmptyRowWithPositiveRhsIsInfeasible) {
  const Triplet t[] = {{0, 0, 1.0}};
  const StandardLp lp =
      make_standard({1.0}, CsrMatrix::from_triplets(2, 1, t), {0.0, 1.0});
  const PresolveResult r = presolve(lp);
  EXPECT_EQ(r.status, PresolveStatus::kInfeasible);
  EXPECT_EQ(r.infeasible_row, 1);
}

TEST(Presolve, DuplicateRowsCollapse) {
  const Triplet t[] = {{0, 0, 1.0}, {1, 0, 1.0}};
  const StandardLp lp =
      make_standard({1.0}, CsrMatrix::from_triplets(2, 1, t), {1.0, 1.0});
  const PresolveResult r = presolve(lp);
  ASSERT_EQ(r.status, PresolveStatus::kReduced);
  EXPECT_EQ(r.lp.num_rows(), 1);
  EXPECT_THAT(r.lp.b, ElementsAre(1.0));
}

TEST(Presolve, DuplicateRowsKeepLargestRhs) {
  const Triplet t[] = {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 2.0}, {1, 1, 1.0}};
  const StandardLp lp =
      make_standard({1.0, 1.0}, CsrMatrix::from_triplets(2, 2, t), {1.0, 3.0});
  const PresolveResult r = presolve(lp);
  ASSERT_EQ(r.status, PresolveStatus::kReduced);
  EXPECT_THAT(r.lp.b, ElementsAre(3.0));
}

TEST(Presolve, EmptyZeroCostColumnIsRemovedAndRestored) {
  const Triplet t[] = {{0, 0, 1.0}};
  const StandardLp lp =
      make_standard({1.0, 0.0}, CsrMatrix::from_triplets(1, 2, t), {2.0});
  const PresolveResult r = presolve(lp);
  ASSERT_EQ(r.status, PresolveStatus::kReduced);
  EXPECT_EQ(r.lp.num_cols(), 1);
  const PostsolveResult post = postsolve(r.lp, std::vector<double>{2.0});
  EXPECT_THAT(post.x, ElementsAre(2.0, 0.0));
  EXPECT_DOUBLE_EQ(post.objective, 2.0);
}

TEST(Presolve, NeverChangesOptimum) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::planted_lp(500 + trial, 12, 10);
    // Append an empty row, a duplicate of row 0 with smaller rhs, and an
    // empty zero-cost column.
    std::vector<Triplet> t;
    for (sparse::Index i = 0; i < 12; ++i) {
      const auto cols = p.lp.a.row_cols(i);
      const auto vals = p.lp.a.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({i, cols[k], vals[k]});
    }
    for (std::size_t k = 0; k < p.lp.a.row_cols(0).size(); ++k) {
      t.push_back({13, p.lp.a.row_cols(0)[k], p.lp.a.row_values(0)[k]});
    }
    std::vector<double> b = p.lp.b;
    b.push_back(-3.0);
    b.push_back(p.lp.b[0] - 1.0);
    std::vector<double> c = p.lp.c;
    c.push_back(0.0);
    const StandardLp lp =
        make_standard(c, CsrMatrix::from_triplets(14, 11, t), b);
    const PresolveResult r = presolve(lp);
    ASSERT_EQ(r.status, PresolveStatus::kReduced);
    EXPECT_EQ(r.lp.num_rows(), 12);
    EXPECT_EQ(r.lp.num_cols(), 10);
    const simplex::BasicSolution sol = simplex::simplex_solve(r.lp);
    ASSERT_EQ(sol.status, simplex::SimplexStatus::kOptimal);
    const PostsolveResult post = postsolve(r.lp, sol.x);
    EXPECT_EQ(post.x.size(), 11u);
    EXPECT_LE(testing::relative_error(post.objective, p.objective), 1e-9);
  }
}

TEST(Postsolve, IdentityLogReturnsInput) {
  const auto p = testing::planted_lp(4, 5, 6);
  const PostsolveResult post = postsolve(p.lp, p.x_star);
  EXPECT_EQ(post.x, p.x_star);
  EXPECT_NEAR(post.objective, p.objective, 1e-12 * std::abs(p.objective));
}

TEST(Postsolve, ShiftedVariable) {
  GeneralLpBuilder b;
  b.add_variable(1.0, 2.0, kInfinity);
  const StandardLp s = canonicalize(std::move(b).build());
  const PostsolveResult post = postsolve(s, std::vector<double>{1.0});
  EXPECT_THAT(post.x, ElementsAre(3.0));
  EXPECT_DOUBLE_EQ(post.objective, 3.0);
}

TEST(Postsolve, MaximizeFlipsSign) {
  GeneralLpBuilder b;
  b.set_sense(Sense::kMaximize);
  b.add_variable(3.0, 0.0, kInfinity);
  const StandardLp s = canonicalize(std::move(b).build());
  EXPECT_DOUBLE_EQ(s.to_original_objective(-6.0), 6.0);
  EXPECT_DOUBLE_EQ(postsolve(s, std::vector<double>{2.0}).objective, 6.0);
  EXPECT_EQ(s.original_sense(), Sense::kMaximize);
}

TEST(Postsolve, LengthMismatchThrows) {
  const auto p = testing::planted_lp(4, 5, 6);
  EXPECT_THROW(postsolve(p.lp, std::vector<double>(5)), std::invalid_argument);
}

TEST(ForwardMap, InvertsPostsolve) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GeneralLp lp = random_general(seed);
    const StandardLp s = presolve(canonicalize(lp)).lp;
    const auto [scaled, d] = ruiz_scale(s, 3);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<double> xs(scaled.num_cols());
    for (double& v : xs) v = u(gen);
    const PostsolveResult post = postsolve(scaled, xs);
    const std::vector<double> back = forward_map(scaled, post.x);
    // Free columns come back as the (x+ - x-) split with one side zero, so
    // compare through a second postsolve.
    const PostsolveResult again = postsolve(scaled, back);
    ASSERT_EQ(again.x.size(), post.x.size());
    for (std::size_t j = 0; j < post.x.size(); ++j) {
      EXPECT_NEAR(again.x[j], post.x[j], 1e-12 * (1.0 + std::abs(post.x[j])));
    }
    EXPECT_NEAR(scaled.objective(back), scaled.objective(xs),
                1e-9 * (1.0 + std::abs(scaled.objective(xs))));
  }
}

}  // namespace
}  // namespace ucpdlp::model
