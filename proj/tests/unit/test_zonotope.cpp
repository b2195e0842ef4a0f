#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/zonotope.hpp"

using namespace zonovol;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(64, 32), 1832624140942590534ull);
}

TEST(DeterminantCount, MatchesBinomial) {
  EXPECT_EQ(determinant_count(8, 3), 56u);
  EXPECT_EQ(determinant_count(16, 3), 560u);
  EXPECT_EQ(determinant_count(32, 3), 4960u);
  EXPECT_EQ(determinant_count(5, 5), 1u);
  EXPECT_EQ(determinant_count(10, 4), 210u);
  EXPECT_EQ(determinant_count(12, 3), 220u);
  EXPECT_THROW(determinant_count(2, 3), ArgumentError);
}

TEST(SubsetRange, LexicographicAndComplete) {
  std::vector<IndexTuple> seen;
  for (const IndexTuple& t : enumerate_subsets(1, 5, 3)) seen.push_back(t);
  ASSERT_EQ(seen.size(), 10u);
  EXPECT_EQ(seen.front(), (IndexTuple{1, 2, 3}));
  EXPECT_EQ(seen.back(), (IndexTuple{3, 4, 5}));
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  EXPECT_EQ(std::set<IndexTuple>(seen.begin(), seen.end()).size(), seen.size());
}

TEST(SubsetRange, EmptySubsetYieldsOneTuple) {
  const SubsetRange r = enumerate_subsets(1, 4, 0);
  EXPECT_EQ(r.size(), 1u);
  EXPECT_TRUE(r.begin()->empty());
}

TEST(SubsetRange, SlicesPartitionTheEnumeration) {
  const SubsetRange all = enumerate_subsets(0, 9, 4);
  std::vector<IndexTuple> joined;
  for (std::uint64_t lo = 0; lo < all.size(); lo += 37) {
    for (const IndexTuple& t : all.slice(lo, std::min(all.size(), lo + 37))) joined.push_back(t);
  }
  std::vector<IndexTuple> direct;
  for (const IndexTuple& t : all) direct.push_back(t);
  EXPECT_EQ(joined, direct);
  EXPECT_EQ(all.unrank(0), (IndexTuple{0, 1, 2, 3}));
  EXPECT_EQ(all.unrank(all.size() - 1), (IndexTuple{6, 7, 8, 9}));
}

TEST(LuDeterminant, MatchesEigen) {
  oracle::Rng rng(1);
  for (int n = 1; n <= 6; ++n) {
    Matrix M = oracle::random_matrix(rng, n, n);
    const double ref = M.determinant();
    Matrix work = M;
    EXPECT_NEAR(lu_determinant(work), ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(UnitCubeVolume, SquareAndParallelogram) {
  Matrix I = Matrix::Identity(2, 2);
  EXPECT_DOUBLE_EQ(unit_cube_volume(I), 1.0);
  Matrix Z(2, 3);
  Z << 1, 0, 1, 0, 1, 1;
  // hexagon: |det| over the three column pairs
  EXPECT_DOUBLE_EQ(unit_cube_volume(Z), 3.0);
  EXPECT_DOUBLE_EQ(symmetric_volume(Z), 12.0);
}

TEST(UnitCubeVolume, FewerGeneratorsThanDimensionIsZero) {
  EXPECT_EQ(unit_cube_volume(Matrix::Ones(3, 2)), 0.0);
}

TEST(UnitCubeVolume, MatchesIndependentOracle) {
  oracle::Rng rng(2);
  for (int c = 0; c < 30; ++c) {
    const int n = oracle::uniform_int(rng, 1, 4);
    const int m = oracle::uniform_int(rng, n, 9);
    const Matrix Z = oracle::random_matrix(rng, n, m);
    EXPECT_NEAR(unit_cube_volume(Z), oracle::det_sum(Z), 1e-12 * oracle::det_sum(Z));
  }
}

TEST(UnitCubeVolume, ThreadCountDoesNotChangeResult) {
  oracle::Rng rng(3);
  const Matrix Z = oracle::random_matrix(rng, 3, 40);
  const double one = unit_cube_volume(Z, {1, 0});
  EXPECT_EQ(unit_cube_volume(Z, {4, 0}), one);
}

TEST(UnitCubeVolume, BudgetRefusal) {
  const Matrix Z = Matrix::Ones(3, 40);
  EXPECT_THROW(unit_cube_volume(Z, {1, 100}), ArgumentError);
}

TEST(UnitCubeVolume, PermutationAndSignInvariant) {
  oracle::Rng rng(4);
  Matrix Z = oracle::random_matrix(rng, 3, 7);
  const double v = unit_cube_volume(Z);
  Matrix P = Z;
  P.col(0).swap(P.col(5));
  P.col(2) *= -1.0;
  EXPECT_NEAR(unit_cube_volume(P), v, 1e-12 * v);
}
