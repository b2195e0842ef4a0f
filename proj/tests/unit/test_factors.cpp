#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "zonovol/analytic.hpp"
#include "zonovol/factors.hpp"

using namespace zonovol;
using V = std::vector<double>;

TEST(ShapeFactor, HandValues) {
  EXPECT_EQ(shape_factor(V{0.5}, TimeDomain::Discrete).F1, 1.0);
  EXPECT_NEAR(shape_factor(V{0.3, 0.7}, TimeDomain::Discrete).F1, 0.4 / 0.79, 1e-15);
  EXPECT_NEAR(shape_factor(V{-2, -1}, TimeDomain::Continuous).F1, 1.0 / 3.0, 1e-15);
}

TEST(ShapeFactor, PartitionProductAndSymmetry) {
  const ShapeFactor f = shape_factor(V{0.3, 0.6, 1.5, 3.0}, TimeDomain::Discrete);
  EXPECT_EQ(f.partition.minus, (IndexTuple{1, 2}));
  EXPECT_EQ(f.partition.plus, (IndexTuple{3, 4}));
  EXPECT_NEAR(f.F1, f.F1_plus * f.F1_minus, 1e-15);
  EXPECT_NEAR(f.F1_minus, 0.3 / 0.82, 1e-15);
  EXPECT_NEAR(f.F1_plus, 1.5 / 3.5, 1e-15);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(f.pairs(i, j), f.pairs(j, i));
      if (i != j) EXPECT_GT(f.pairs(i, j), 0.0);
    }
  }
}

TEST(ShapeFactor, SingularCases) {
  EXPECT_THROW(shape_factor(V{0.5, 1.0}, TimeDomain::Discrete), SingularFactorError);
  EXPECT_THROW(shape_factor(V{0.0, 1.0}, TimeDomain::Continuous), SingularFactorError);
  // straddling pair with l_i l_j = 1 is allowed and reported as inf
  const ShapeFactor f = shape_factor(V{0.5, 2.0}, TimeDomain::Discrete);
  EXPECT_TRUE(std::isinf(f.pairs(0, 1)));
  EXPECT_EQ(f.F1, 1.0);
}

TEST(CrossFactor, Values) {
  EXPECT_EQ(cross_factor({}, {1, 2}, V{0.3, 0.7}), 1.0);
  EXPECT_NEAR(cross_factor({1}, {2}, V{0.3, 0.7}), 1.975, 1e-15);
  EXPECT_THROW(cross_factor({1}, {1, 2}, V{0.3, 0.7}), ArgumentError);
}

TEST(CrossFactor, RegroupsExpansionTerms) {
  // Phi_J Phi_{n\J} = Phi_{1..n} F_J^{n\J} up to the orientation sign
  const V l{0.2, 0.5, 0.9};
  const double all = phi_factor(l, PhiMode::DiscretePositive);
  for (int mask = 0; mask < 8; ++mask) {
    IndexTuple in, out;
    V lin, lout;
    for (int k = 1; k <= 3; ++k) {
      if (mask & (1 << (k - 1))) in.push_back(k), lin.push_back(l[k - 1]);
      else out.push_back(k), lout.push_back(l[k - 1]);
    }
    const double split = phi_factor(lin, PhiMode::DiscretePositive) * phi_factor(lout, PhiMode::DiscretePositive);
    EXPECT_NEAR(std::abs(split), std::abs(all * cross_factor(in, out, l)), 1e-12);
  }
}

TEST(SideLengths, HandValues) {
  const EigenStructure e = EigenStructure::from_spectrum({0.5}, {1.0});
  EXPECT_NEAR(side_lengths(e, Horizon::infinite())[0], 2.0, 1e-15);
  EXPECT_NEAR(side_lengths(e, Horizon::finite(3))[0], 1.75, 1e-15);
  const EigenStructure c = EigenStructure::from_spectrum({-1.0}, {1.0});
  EXPECT_NEAR(side_lengths(c, Horizon::continuous(1.0))[0], 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_THROW(side_lengths(EigenStructure::from_spectrum({1.5}, {1.0}), Horizon::infinite()), DomainError);
  EXPECT_THROW(side_lengths(EigenStructure::from_spectrum({0.0}, {1.0}), Horizon::continuous(1.0)),
               DomainError);
}

TEST(SideLengths, FiniteConvergesToInfinite) {
  const EigenStructure e = EigenStructure::from_spectrum({0.3, -0.6, 0.9}, {1.0, 2.0, 0.5});
  const auto inf = side_lengths(e, Horizon::infinite());
  const auto fin = side_lengths(e, Horizon::finite(2000));
  for (std::size_t i = 0; i < inf.size(); ++i) EXPECT_NEAR(fin[i], inf[i], 1e-12 * inf[i]);
}

TEST(SideLengths, NarrowIsMagnitude) {
  const EigenStructure e = EigenStructure::from_spectrum({2.0}, {1.0});
  EXPECT_NEAR(side_lengths(e, Horizon::narrow(2))[0], 0.75, 1e-15);
}

TEST(ModalControllability, Diagonal) {
  EXPECT_EQ(modal_controllability(EigenStructure::from_spectrum({0.2, 0.4}, {1, 1})), (V{1, 1}));
  const EigenStructure e = EigenStructure::from_spectrum({0.2, 0.4}, {0, 1});
  EXPECT_EQ(modal_controllability(e), (V{0, 1}));
  // an uncontrollable mode collapses the zonotope
  EXPECT_EQ(full_volume(e, 5, Route::Direct).volume, 0.0);
}

TEST(ModalControllability, CompanionModel) {
  Matrix A(2, 2);
  A << 0, 1, -0.12, 0.7;
  Matrix B(2, 1);
  B << 0, 1;
  const auto f3 = modal_controllability(*diagonalize(StateSpaceModel(A, B)).structure);
  EXPECT_GT(f3[0], 0.0);
  EXPECT_GT(f3[1], 0.0);
}

TEST(CapabilityFactors, ShapeIgnoresInputAndScaling) {
  const FactorReport a = capability_factors(EigenStructure::from_spectrum({0.2, 0.5, 0.7}, {1, 1, 1}),
                                            Horizon::finite(6));
  const FactorReport b = capability_factors(EigenStructure::from_spectrum({0.2, 0.5, 0.7}, {3, -2, 0.1}),
                                            Horizon::finite(6));
  EXPECT_EQ(a.shape.F1, b.shape.F1);
  EXPECT_EQ(b.F3, (V{3, 2, 0.1}));
  EXPECT_FALSE(a.normalization.empty());
}

TEST(DominantSubset, EigenvaluesAboveOne) {
  oracle::Rng rng(31);
  for (int c = 0; c < 30; ++c) {
    const int n = oracle::uniform_int(rng, 1, 4);
    V l = oracle::spectrum(rng, n, 0.1, 3.0, 0.1);
    bool near_unit = false;
    for (double x : l) near_unit = near_unit || std::abs(x - 1.0) < 0.1;
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t k = i + 1; k < l.size(); ++k) near_unit = near_unit || std::abs(l[i] * l[k] - 1.0) < 0.05;
    if (near_unit) continue;
    IndexTuple expected;
    for (int i = 0; i < n; ++i) {
      if (l[static_cast<std::size_t>(i)] > 1.0) expected.push_back(i + 1);
    }
    EXPECT_EQ(dominant_subset(l, 60 * n), expected);
  }
}
