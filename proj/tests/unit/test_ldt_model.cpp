#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/ldt_model.hpp"

using namespace zonovol;

namespace {

Matrix diag(std::initializer_list<double> l) {
  Matrix D = Matrix::Zero(static_cast<Eigen::Index>(l.size()), static_cast<Eigen::Index>(l.size()));
  Eigen::Index i = 0;
  for (double x : l) D(i, i) = x, ++i;
  return D;
}

}  // namespace

TEST(StateSpaceModel, RejectsBadShapes) {
  EXPECT_THROW(StateSpaceModel(Matrix::Ones(2, 3), Matrix::Ones(2, 1)), ArgumentError);
  EXPECT_THROW(StateSpaceModel(Matrix::Ones(2, 2), Matrix::Ones(3, 1)), ArgumentError);
  Matrix A = Matrix::Identity(2, 2);
  A(0, 1) = std::nan("");
  EXPECT_THROW(StateSpaceModel(A, Matrix::Ones(2, 1)), ArgumentError);
}

TEST(ClassifySpectrum, Classes) {
  const auto D = TimeDomain::Discrete;
  EXPECT_EQ(classify_spectrum(std::vector<double>{0.2, 0.5}, D), SpectrumClass::AllPositiveDistinct);
  EXPECT_EQ(classify_spectrum(std::vector<double>{-0.5, -0.2}, D), SpectrumClass::AllNegativeDistinct);
  EXPECT_EQ(classify_spectrum(std::vector<double>{-0.5, 0.2}, D), SpectrumClass::MixedSign);
  EXPECT_EQ(classify_spectrum(std::vector<double>{0.5, 0.5}, D), SpectrumClass::Degenerate);
  EXPECT_EQ(classify_spectrum(std::vector<double>{0.5, 2.0}, D), SpectrumClass::NearSingularFactor);
  EXPECT_EQ(classify_spectrum(std::vector<double>{0.0, 0.5}, D), SpectrumClass::MixedSign);
}

TEST(ReachabilityGenerators, Columns) {
  Matrix A(2, 2);
  A << 0.5, 1, 0, 0.8;
  Matrix B(2, 1);
  B << 1, 1;
  const Matrix P = reachability_generators(StateSpaceModel(A, B), 3);
  ASSERT_EQ(P.cols(), 3);
  EXPECT_TRUE(P.col(0).isApprox(B));
  EXPECT_TRUE(P.col(2).isApprox(A * A * B));
}

TEST(NarrowGenerators, InversePowersAndSingularRefusal) {
  const StateSpaceModel m(diag({2.0, 4.0}), Matrix::Ones(2, 1));
  const Matrix G = narrow_generators(m, 2);
  EXPECT_NEAR(G(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(G(1, 1), 0.25, 1e-15);
  EXPECT_THROW(narrow_generators(StateSpaceModel(diag({0.0, 1.0}), Matrix::Ones(2, 1)), 2),
               DomainError);
}

TEST(Diagonalize, RecoversSpectrumAndPrefactor) {
  oracle::Rng rng(7);
  Matrix W = Matrix::Identity(3, 3) + oracle::random_matrix(rng, 3, 3, 0.3);
  const Matrix A = W.inverse() * diag({0.2, 0.5, 0.9}) * W;
  const Matrix B = oracle::random_matrix(rng, 3, 1);
  const Diagonalization d = diagonalize(StateSpaceModel(A, B));
  ASSERT_TRUE(d.structure);
  EXPECT_EQ(d.spectrum, SpectrumClass::AllPositiveDistinct);
  const EigenStructure& e = *d.structure;
  EXPECT_NEAR(e.lambdas[0], 0.2, 1e-12);
  EXPECT_NEAR(e.lambdas[2], 0.9, 1e-12);
  // Rows are left eigenvectors, unit norm
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE((e.Wd.row(i) * A).isApprox(e.lambdas[static_cast<std::size_t>(i)] * e.Wd.row(i), 1e-10));
    EXPECT_NEAR(e.Wd.row(i).norm(), 1.0, 1e-12);
  }
  const Eigen::VectorXd beta = e.Wd * B;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(beta(i), e.betas[static_cast<std::size_t>(i)], 1e-12);
  EXPECT_NEAR(e.det_wd_inv_abs, std::abs(e.Wd.inverse().determinant()), 1e-12);
}

TEST(Diagonalize, ComplexAndDegenerateHaveNoStructure) {
  Matrix R(2, 2);
  R << 0, -1, 1, 0;
  const Diagonalization c = diagonalize(StateSpaceModel(R, Matrix::Ones(2, 1)));
  EXPECT_FALSE(c.structure);
  EXPECT_EQ(c.spectrum, SpectrumClass::Complex);
  Matrix J(2, 2);
  J << 0.5, 1, 0, 0.5;
  const Diagonalization j = diagonalize(StateSpaceModel(J, Matrix::Ones(2, 1)));
  EXPECT_FALSE(j.structure);
  EXPECT_EQ(j.spectrum, SpectrumClass::Degenerate);
}

TEST(Diagonalize, MultiInputRejected) {
  EXPECT_THROW(diagonalize(StateSpaceModel(diag({0.1, 0.2}), Matrix::Ones(2, 2))), ArgumentError);
}

TEST(TransformModel, VolumeScalesByDeterminant) {
  oracle::Rng rng(8);
  const StateSpaceModel m(oracle::random_matrix(rng, 2, 2), oracle::random_matrix(rng, 2, 1));
  Matrix W(2, 2);
  W << 2, 1, 0, 3;
  const double v = oracle::symmetric_det_sum(reachability_generators(m, 5));
  const double w = oracle::symmetric_det_sum(reachability_generators(transform_model(m, W), 5));
  EXPECT_NEAR(w, volume_under_transform(v, W), 1e-10 * w);
  EXPECT_NEAR(volume_under_transform(v, W), 6.0 * v, 1e-12 * v);
  EXPECT_THROW(volume_under_transform(1.0, Matrix::Ones(2, 2)), ArgumentError);
}

TEST(InverseModel, InvertsA) {
  const StateSpaceModel m(diag({2.0, 4.0}), Matrix::Ones(2, 1));
  EXPECT_TRUE(inverse_model(m).A().isApprox(diag({0.5, 0.25})));
  EXPECT_THROW(inverse_model(StateSpaceModel(diag({0.0, 1.0}), Matrix::Ones(2, 1))), DomainError);
}

TEST(EigenStructure, FromSpectrumSortsPairs) {
  const EigenStructure e = EigenStructure::from_spectrum({0.8, 0.5}, {2.0, 3.0});
  EXPECT_EQ(e.lambdas, (std::vector<double>{0.5, 0.8}));
  EXPECT_EQ(e.betas, (std::vector<double>{3.0, 2.0}));
  EXPECT_DOUBLE_EQ(e.prefactor(), 6.0);
  EXPECT_THROW(EigenStructure::from_spectrum({0.1}, {}), ArgumentError);
}

TEST(IsNumericallySingular, Basic) {
  EXPECT_TRUE(is_numerically_singular(Matrix::Ones(2, 2), 1e-12));
  EXPECT_FALSE(is_numerically_singular(Matrix::Identity(2, 2), 1e-12));
}
