#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pacslab/jaynes_cummings.hpp"

using namespace pacslab;

namespace {

double joint_fidelity(const JointAtomFieldState& x, const JointAtomFieldState& y) {
  const cplx ov = inner_product(x.field_e, y.field_e) + inner_product(x.field_g, y.field_g);
  return std::norm(ov) / (x.norm_sq() * y.norm_sq());
}

}  // namespace

TEST(JcExact, ZeroTimeIsInitialState) {
  const JointAtomFieldState s = jc_evolve_exact({0.8, 0.0, 0});
  EXPECT_EQ(s.field_e.amp(), coherent_state(0.8, jc_dim({0.8, 0.0, 0})).amp());
  EXPECT_EQ(s.field_g.norm_sq(), 0.0);
}

TEST(JcExact, Unitary) {
  for (double bt : {0.01, 0.5, 3.0, 30.0}) EXPECT_NEAR(jc_evolve_exact({0.8, bt, 0}).norm_sq(), 1.0, 1e-12) << bt;
}

TEST(JcExact, VacuumRabiOscillation) {
  // |0>|e> couples only to |1>|g> with frequency 1.
  for (double bt : {0.3, 1.0, 2.2}) {
    const auto s = jc_evolve_exact({0.0, bt, 8});
    EXPECT_NEAR(s.field_g.norm_sq(), std::sin(bt) * std::sin(bt), 1e-14);
    EXPECT_NEAR(std::abs(s.field_g[1]), std::abs(std::sin(bt)), 1e-14);
  }
}

TEST(JcExact, RejectsNegativeTime) {
  EXPECT_THROW(jc_evolve_exact({0.8, -0.1, 0}), DomainError);
  EXPECT_THROW(jc_evolve_exact({0.8, std::nan(""), 0}), DomainError);
}

TEST(JcExact, GroundProbabilityShortTime) {
  const double bt = 0.01;
  const double prob = jc_conditional_ground(jc_evolve_exact({0.8, bt, 0})).probability;
  // Second order alone is off by (bt)^4 (x^2 + 3x + 1) / 3 ~ 1.1e-8 here.
  const double x = 0.64;
  const double fourth = std::pow(bt, 4) * (x * x + 3 * x + 1) / 3.0;
  EXPECT_NEAR(prob, bt * bt * (1 + x) - fourth, 1e-11);
  EXPECT_NEAR(prob, 1.64e-4, 2e-8);
}

TEST(JcExact, ConditionalGroundOnEmptyBranchThrows) {
  EXPECT_THROW(jc_conditional_ground(jc_evolve_exact({0.8, 0.0, 0})), EmptyBranch);
}

TEST(JcSeries, MatchesExact) {
  for (double bt : {0.1, 1.0, 5.0}) {
    const JcParams p{0.8, bt, 0};
    EXPECT_GE(joint_fidelity(jc_evolve_series(p, 40), jc_evolve_exact(p)), 1.0 - 1e-12) << bt;
  }
}

TEST(JcSeries, LoweringFirstOrderingMissesExactBranch) {
  // sum_n tau^{2n+1}/(2n+1)! (a a^dag)^n a^dag |alpha> is not the g-branch.
  const JcParams p{0.8, 1.0, 0};
  const std::size_t dim = jc_dim(p);
  const Eigen::MatrixXcd ad = creation_matrix(dim).entries();
  const Eigen::MatrixXcd lower_raise = (annihilation_matrix(dim) * creation_matrix(dim)).entries();
  const cplx tau(0.0, -p.beta_t);
  Eigen::VectorXcd term = tau * (ad * coherent_state(p.alpha, dim).amp());
  Eigen::VectorXcd sum = term;
  for (unsigned n = 1; n < 40; ++n) {
    term = (tau * tau / (2.0 * n * (2.0 * n + 1.0))) * (lower_raise * term);
    sum += term;
  }
  const double f = fidelity(FockVector(sum), jc_evolve_exact(p).field_g);
  EXPECT_LT(f, 1.0 - 1e-4);
  EXPECT_GE(fidelity(jc_evolve_series(p, 40).field_g, jc_evolve_exact(p).field_g), 1.0 - 1e-12);
}

TEST(JcSeries, TooFewTermsDetected) {
  EXPECT_THROW(jc_evolve_series({0.8, 5.0, 0}, 4), NumericalFailure);
  EXPECT_THROW(jc_evolve_series({0.8, 1.0, 0}, 0), DomainError);
}

TEST(JcShortTime, DeviationIsSecondOrder) {
  for (double bt : {0.01, 0.005}) {
    const auto ex = jc_evolve_exact({0.8, bt, 0});
    const auto st = jc_short_time({0.8, bt, 0});
    const double dev = std::sqrt((ex.field_e.amp() - st.field_e.amp()).squaredNorm() +
                                 (ex.field_g.amp() - st.field_g.amp()).squaredNorm());
    EXPECT_LE(dev, 5.0 * bt * bt);
    EXPECT_GT(dev, 0.1 * bt * bt);
  }
}

TEST(Mpacs, BCoefficientSmallCase) {
  // B(1, 1, alpha) = sqrt(1 + |alpha|^2).
  EXPECT_NEAR(std::abs(mpacs_b_coefficient(1, 1, 0.8)), std::sqrt(1.64), 1e-14);
  EXPECT_EQ(mpacs_b_coefficient(3, 0, 0.8), cplx(0.0));
  // Normal ordering: (a^dag a) a^dag = a^dag + (a^dag)^2 a, so on |alpha>
  // the coefficients of |alpha,1> and |alpha,2> are 1 and alpha.
  EXPECT_NEAR(std::abs(mpacs_normal_ordered_coefficient(1, 1, 0.8) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mpacs_normal_ordered_coefficient(1, 2, 0.8) - 0.8), 0.0, 1e-15);
}

TEST(Mpacs, ExpansionPicksNormalOrdering) {
  const MpacsExpansion ex = mpacs_expansion({0.8, 0.5, 0}, 20);
  EXPECT_EQ(ex.matching, MpacsConvention::normal_ordered);
  EXPECT_GE(ex.matching_fidelity, 1.0 - 1e-8);
  ASSERT_EQ(ex.fidelities.size(), 3u);
  for (const auto& [conv, f] : ex.fidelities) {
    if (conv != MpacsConvention::normal_ordered) {
      EXPECT_LT(f, ex.matching_fidelity);
    }
  }
  EXPECT_EQ(ex.b_table.rows(), 21);
  EXPECT_EQ(ex.b_table.cols(), 22);
  EXPECT_EQ(ex.b_table(0, 3), cplx(0.0));
}

TEST(Mpacs, ReconstructionRejectsLargeOrder) {
  EXPECT_THROW(mpacs_reconstruct({0.8, 0.5, 0}, 65, 4, MpacsConvention::normal_ordered), DomainError);
}

TEST(OverlapCurve, ShortTimeAnchors) {
  const std::vector<double> grid = {1e-6};
  const std::vector<unsigned> ms = {1, 2, 3};
  const auto c = jc_overlap_curve(0.8, grid, ms);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(*c[0].overlap_modulus, 1.0, 1e-4);
  EXPECT_NEAR(*c[1].overlap_modulus, 0.73980, 1e-4);
  EXPECT_NEAR(*c[2].overlap_modulus, 0.39261, 1e-4);
  EXPECT_NEAR(*c[1].overlap_sq, 0.73980 * 0.73980, 2e-4);
}

TEST(OverlapCurve, OrderingNearOrigin) {
  const std::vector<double> grid = {0.01, 0.1, 0.2};
  const std::vector<unsigned> ms = {1, 2, 3};
  const auto c = jc_overlap_curve(0.8, grid, ms);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    EXPECT_GT(*c[3 * g].overlap_modulus, *c[3 * g + 1].overlap_modulus);
    EXPECT_GT(*c[3 * g + 1].overlap_modulus, *c[3 * g + 2].overlap_modulus);
  }
}

TEST(OverlapCurve, ZeroTimeHasNoOverlap) {
  const std::vector<double> grid = {0.0, 0.5};
  const std::vector<unsigned> ms = {2};
  const auto c = jc_overlap_curve(0.8, grid, ms);
  EXPECT_FALSE(c[0].overlap_modulus.has_value());
  EXPECT_EQ(c[0].ground_prob, 0.0);
  EXPECT_TRUE(c[1].overlap_modulus.has_value());
  EXPECT_GT(c[1].ground_prob, 0.0);
}

TEST(OverlapCurve, FullGridRuns) {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.1 * i);
  const std::vector<unsigned> ms = {1, 2, 3};
  const auto c = jc_overlap_curve(0.8, grid, ms);
  EXPECT_EQ(c.size(), 183u);
  for (std::size_t i = 3; i < c.size(); ++i) {
    ASSERT_TRUE(c[i].overlap_modulus.has_value());
    EXPECT_LE(*c[i].overlap_modulus, 1.0 + 1e-12);
  }
}

TEST(OverlapCurve, EmptyInputsRejected) {
  const std::vector<double> none;
  const std::vector<double> one = {0.1};
  const std::vector<unsigned> ms = {1};
  const std::vector<unsigned> no_m;
  EXPECT_THROW(jc_overlap_curve(0.8, none, ms), DomainError);
  EXPECT_THROW(jc_overlap_curve(0.8, one, no_m), DomainError);
}
