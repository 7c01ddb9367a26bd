#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pacslab/fock.hpp"

using namespace pacslab;

TEST(Ladder, MatrixEntries) {
  const OperatorMatrix a = annihilation_matrix(6);
  for (std::size_t n = 1; n < 6; ++n) EXPECT_DOUBLE_EQ(a(n - 1, n).real(), std::sqrt(double(n)));
  EXPECT_EQ(a(0, 0), cplx(0.0));
  EXPECT_TRUE(number_matrix(6).is_hermitian());
  EXPECT_LE(((creation_matrix(6) * a).entries() - number_matrix(6).entries()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Ladder, CommutatorOnInteriorBlock) {
  const std::size_t dim = 20;
  const OperatorMatrix a = annihilation_matrix(dim);
  const Eigen::MatrixXcd c = (a * a.adjoint() - a.adjoint() * a).entries();
  const auto k = static_cast<Eigen::Index>(dim - 1);
  EXPECT_LE((c.topLeftCorner(k, k) - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-12);
  // The truncation edge breaks the identity in the last diagonal entry.
  EXPECT_NEAR(c(k, k).real(), -double(k), 1e-12);
}

TEST(Ladder, ZeroDimensionRejected) {
  EXPECT_THROW(annihilation_matrix(0), InvalidDimension);
  EXPECT_THROW(OperatorMatrix::identity(0), InvalidDimension);
  EXPECT_THROW(FockVector(Eigen::VectorXcd()), InvalidDimension);
}

TEST(OperatorMatrix, MismatchThrows) {
  EXPECT_THROW(annihilation_matrix(3) * annihilation_matrix(4), DimensionMismatch);
  EXPECT_THROW(OperatorMatrix(Eigen::MatrixXcd::Zero(2, 3)), InvalidDimension);
}

TEST(Coherent, NormAndTail) {
  const FockVector c = coherent_state({0.8, 0.3}, 32);
  EXPECT_NEAR(c.norm_sq(), 1.0, 1e-12);
  EXPECT_TRUE(c.normalized());
  EXPECT_NEAR(coherent_tail_mass(0.8, 1), 1.0 - std::exp(-0.64), 1e-15);
  EXPECT_EQ(coherent_tail_mass(0.0, 1), 0.0);
}

TEST(Coherent, InsufficientDimensionThrows) {
  try {
    coherent_state(3.0, 8);
    FAIL();
  } catch (const TruncationInsufficient& e) {
    EXPECT_GT(e.tail_mass(), 1e-12);
  }
}

TEST(Coherent, EigenvectorOfLowering) {
  const cplx alpha(0.6, -0.4);
  const FockVector c = coherent_state(alpha, 40);
  const FockVector ac = apply_operator(annihilation_matrix(40), c);
  const auto k = static_cast<Eigen::Index>(39);
  EXPECT_LE((ac.amp().head(k) - alpha * c.amp().head(k)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Coherent, PoissonMoments) {
  const auto [mean, var] = photon_number_moments(coherent_state(1.2, 48));
  EXPECT_NEAR(mean, 1.44, 1e-12);
  EXPECT_NEAR(var, 1.44, 1e-11);
}

TEST(Fidelity, Properties) {
  const FockVector a = coherent_state(0.8, 32);
  const FockVector b = coherent_state({0.0, 0.8}, 32);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
  EXPECT_NEAR(fidelity(a, b), std::exp(-std::norm(cplx(0.8, -0.8))), 1e-12);
  EXPECT_NEAR(fidelity(FockVector::basis(4, 1), FockVector::basis(4, 2)), 0.0, 0.0);
  EXPECT_THROW(fidelity(a, FockVector(Eigen::VectorXcd::Zero(32))), EmptyBranch);
  EXPECT_THROW(inner_product(a, coherent_state(0.8, 33)), DimensionMismatch);
}

TEST(FockVector, NormalizedFlagValidated) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(3);
  EXPECT_THROW(FockVector(v, true), NumericalFailure);
  EXPECT_NEAR(FockVector(v).unit().norm_sq(), 1.0, 1e-15);
  v(1) = std::nan("");
  EXPECT_THROW(FockVector{v}, NumericRangeError);
  EXPECT_THROW(FockVector::basis(3, 3), InvalidDimension);
}

TEST(Expm, PhaseRotationOfCoherentState) {
  const double theta = 1.3;
  const FockVector out = expm_apply(cplx(0.0, -theta) * number_matrix(40), coherent_state(0.9, 40), 1e-12);
  EXPECT_GE(fidelity(out, coherent_state(0.9 * std::polar(1.0, -theta), 40)), 1.0 - 1e-12);
}

TEST(Expm, DisplacementAgreesWithCoherentState) {
  // D(beta)|0> = |beta> up to truncation effects at the top of the space.
  const std::size_t dim = 60;
  const cplx beta(0.7, 0.2);
  const OperatorMatrix gen = beta * creation_matrix(dim) - std::conj(beta) * annihilation_matrix(dim);
  const FockVector out = expm_apply(gen, FockVector::basis(dim, 0), 1e-13);
  EXPECT_GE(fidelity(out, coherent_state(beta, dim)), 1.0 - 1e-12);
  EXPECT_NEAR(out.norm_sq(), 1.0, 1e-11);
}

TEST(Expm, ZeroGeneratorIsIdentity) {
  const FockVector c = coherent_state(0.5, 16);
  EXPECT_EQ(expm_apply(OperatorMatrix::zero(16), c, 1e-10).amp(), c.amp());
}

TEST(Expm, RejectsBadOptions) {
  const FockVector c = coherent_state(0.5, 16);
  EXPECT_THROW(expm_apply(number_matrix(16), c, 0.0), DomainError);
  EXPECT_THROW(expm_apply(number_matrix(16), c, 1e-10, 2), NumericalFailure);
}

TEST(TwoMode, TensorFlattenAndProjection) {
  const FockVector a = coherent_state(0.4, 24);
  const FockVector b = coherent_state(0.3, 20);
  const TwoModeState s = tensor(a, b);
  EXPECT_EQ(s.dim_a(), 24u);
  EXPECT_EQ(s.dim_b(), 20u);
  const Eigen::VectorXcd flat = flatten(s);
  EXPECT_EQ(flat(3 * 20 + 2), a[3] * b[2]);
  EXPECT_EQ(unflatten(flat, 24, 20).amp(), s.amp());
  EXPECT_THROW(unflatten(flat, 24, 21), DimensionMismatch);

  const Projection p = project_b(s, 2);
  EXPECT_NEAR(p.probability, std::norm(b[2]), 1e-15);
  EXPECT_GE(fidelity(p.state, a), 1.0 - 1e-14);
  EXPECT_THROW(project_b(s, 20), InvalidDimension);
  EXPECT_THROW(project_b(tensor(a, FockVector::basis(20, 0)), 1), EmptyBranch);
}

TEST(TwoMode, FidelityIgnoresGlobalPhase) {
  const TwoModeState s = tensor(coherent_state(0.4, 24), coherent_state(0.3, 20));
  const TwoModeState t(std::polar(1.0, 0.7) * s.amp());
  EXPECT_NEAR(fidelity(s, t), 1.0, 1e-14);
}

TEST(DefaultDim, GrowsWithAmplitude) {
  EXPECT_EQ(default_dim(0.0), 32u);
  EXPECT_EQ(default_dim(0.8), 32u);
  EXPECT_EQ(default_dim(3.0), 49u);
  EXPECT_LE(coherent_tail_mass(3.0, default_dim(3.0)), 1e-14);
}
