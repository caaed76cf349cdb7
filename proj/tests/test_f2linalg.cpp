#include "charclass/f2linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "charclass/errors.hpp"
#include "test_support.hpp"

using namespace charclass;
using charclass::testing::random_matrix;
using charclass::testing::rng;

namespace {

// Every vector x of length n with m x = 0, by enumeration.
std::vector<F2Vector> brute_force_kernel(const F2Matrix& m) {
  std::vector<F2Vector> out;
  const std::size_t n = m.cols();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    F2Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x.set(i, ((bits >> i) & 1U) != 0);
    if (multiply(m, x).is_zero()) out.push_back(x);
  }
  return out;
}

std::vector<std::size_t> shuffled(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng());
  return p;
}

}  // namespace

TEST(F2Linalg, RankSmallCases) {
  EXPECT_EQ(rank(F2Matrix::identity(3)), 3U);
  EXPECT_EQ(rank(F2Matrix{{1, 1}, {1, 1}}), 1U);
  EXPECT_EQ(rank(F2Matrix(0, 0)), 0U);
  EXPECT_EQ(rank(F2Matrix(0, 5)), 0U);
  EXPECT_EQ(rank(F2Matrix(4, 0)), 0U);
}

TEST(F2Linalg, RankOfProductOfRankRFactors) {
  // A = [I_r; *] has full column rank, B = [I_r | *] full row rank, so AB
  // has rank exactly r; random row/column permutations keep that.
  for (std::size_t r = 0; r <= 20; ++r) {
    F2Matrix a = random_matrix(20, r);
    F2Matrix b = random_matrix(r, 20);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        a.set(i, j, i == j);
        b.set(i, j, i == j);
      }
    }
    const F2Matrix prod = multiply(a, b);
    const auto rp = shuffled(20);
    const auto cp = shuffled(20);
    F2Matrix permuted(20, 20);
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = 0; j < 20; ++j) permuted.set(rp[i], cp[j], prod.get(i, j));
    }
    EXPECT_EQ(rank(permuted), r);
  }
}

TEST(F2Linalg, KernelExamples) {
  auto k = kernel_basis(F2Matrix(2, 3));
  ASSERT_EQ(k.size(), 3U);
  EXPECT_EQ(k[0], F2Vector({1, 0, 0}));
  EXPECT_EQ(k[1], F2Vector({0, 1, 0}));
  EXPECT_EQ(k[2], F2Vector({0, 0, 1}));

  EXPECT_TRUE(kernel_basis(F2Matrix::identity(5)).empty());

  // Brute force over all 8 vectors leaves exactly {0, (1,1,1)}.
  const F2Matrix m{{1, 1, 0}, {0, 1, 1}};
  const auto brute = brute_force_kernel(m);
  ASSERT_EQ(brute.size(), 2U);
  k = kernel_basis(m);
  ASSERT_EQ(k.size(), 1U);
  EXPECT_EQ(k[0], F2Vector({1, 1, 1}));
}

TEST(F2Linalg, SolveExamples) {
  const F2Vector b{1, 0, 1};
  EXPECT_EQ(solve(F2Matrix::identity(3), b), b);
  EXPECT_FALSE(solve(F2Matrix(3, 3), b).has_value());
  // [[1,1],[0,1]] x = (0,1): the only solution among the 4 vectors is (1,1).
  EXPECT_EQ(solve(F2Matrix{{1, 1}, {0, 1}}, F2Vector{0, 1}), F2Vector({1, 1}));
  EXPECT_THROW(solve(F2Matrix(2, 2), F2Vector(3)), ContractViolation);
  // Empty system: the empty vector solves it.
  EXPECT_EQ(solve(F2Matrix(0, 0), F2Vector(0)), F2Vector(0));
}

TEST(F2Linalg, SolveFreeVariablesAreZero) {
  const F2Matrix m{{1, 1, 0, 1}, {0, 0, 1, 1}};
  const auto x = solve(m, F2Vector{1, 1});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, F2Vector({1, 0, 1, 0}));
}

TEST(F2Linalg, WordBoundaries) {
  // Columns straddling the 64-bit word boundary.
  F2Matrix m(3, 130);
  m.set(0, 63);
  m.set(0, 64);
  m.set(1, 64);
  m.set(1, 129);
  m.set(2, 63);
  m.set(2, 129);
  EXPECT_EQ(rank(m), 2U);
  const auto k = kernel_basis(m);
  EXPECT_EQ(k.size(), 128U);
  for (const auto& v : k) EXPECT_TRUE(multiply(m, v).is_zero());
}

TEST(F2LinalgProperty, RankEqualsTransposeRank) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = static_cast<std::size_t>(charclass::testing::uniform(0, 90));
    const auto cols = static_cast<std::size_t>(charclass::testing::uniform(0, 90));
    const F2Matrix m = random_matrix(rows, cols);
    EXPECT_EQ(rank(m), rank(transpose(m)));
  }
}

TEST(F2LinalgProperty, RankNullity) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = static_cast<std::size_t>(charclass::testing::uniform(0, 70));
    const auto cols = static_cast<std::size_t>(charclass::testing::uniform(0, 140));
    const F2Matrix m = random_matrix(rows, cols);
    const auto k = kernel_basis(m);
    EXPECT_EQ(cols, rank(m) + k.size());
    for (const auto& v : k) EXPECT_TRUE(multiply(m, v).is_zero());
    EXPECT_EQ(rank(F2Matrix::from_rows(cols, k)), k.size());
  }
}

TEST(F2LinalgProperty, KernelMatchesBruteForceCount) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = static_cast<std::size_t>(charclass::testing::uniform(1, 8));
    const auto cols = static_cast<std::size_t>(charclass::testing::uniform(1, 10));
    const F2Matrix m = random_matrix(rows, cols);
    const auto brute = brute_force_kernel(m);
    EXPECT_EQ(brute.size(), std::size_t{1} << kernel_basis(m).size());
  }
}

TEST(F2LinalgProperty, SolveIsExactAndComplete) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = static_cast<std::size_t>(charclass::testing::uniform(0, 40));
    const auto cols = static_cast<std::size_t>(charclass::testing::uniform(0, 40));
    const F2Matrix m = random_matrix(rows, cols);
    // A consistent right-hand side: b = m y.
    F2Vector y(cols);
    for (std::size_t i = 0; i < cols; ++i) y.set(i, charclass::testing::coin());
    const F2Vector b = multiply(m, y);
    const auto x = solve(m, b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(multiply(m, *x), b);

    F2Vector r(rows);
    for (std::size_t i = 0; i < rows; ++i) r.set(i, charclass::testing::coin());
    if (const auto z = solve(m, r)) EXPECT_EQ(multiply(m, *z), r);
  }
}

TEST(F2LinalgProperty, PureAndDeterministic) {
  const F2Matrix m = random_matrix(30, 70);
  const F2Matrix copy = m;
  const auto k1 = kernel_basis(m);
  const auto k2 = kernel_basis(m);
  EXPECT_EQ(k1, k2);
  EXPECT_EQ(m, copy);
  const auto e1 = echelon(m);
  const auto e2 = echelon(m);
  EXPECT_EQ(e1.reduced, e2.reduced);
  EXPECT_EQ(e1.pivots, e2.pivots);
}

TEST(F2LinalgProperty, EchelonIsReduced) {
  for (int trial = 0; trial < 50; ++trial) {
    const F2Matrix m = random_matrix(25, 40);
    const auto e = echelon(m);
    for (std::size_t i = 0; i < e.rank(); ++i) {
      if (i > 0) EXPECT_LT(e.pivots[i - 1], e.pivots[i]);
      for (std::size_t j = 0; j < e.rank(); ++j) EXPECT_EQ(e.reduced.get(j, e.pivots[i]), i == j);
      // leftmost pivot: nothing before it in its row
      for (std::size_t c = 0; c < e.pivots[i]; ++c) EXPECT_FALSE(e.reduced.get(i, c));
    }
    for (std::size_t r = 0; r < m.rows(); ++r) EXPECT_TRUE(e.in_row_space(m.row(r)));
  }
}
