#include <gtest/gtest.h>

#include <cmath>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"
#include "banditvn/estimator.hpp"
#include "eigen_oracle.hpp"
#include "test_util.hpp"

using namespace banditvn;
using namespace banditvn::estimator;
using banditvn::testing::rel_err;
using banditvn::testing::unit;

TEST(EstimatorState, FreshState) {
  EstimatorState s(2, 2.0, 0.1);
  EXPECT_EQ(s.design(), linalg::SymMat::identity(2, 2.0));
  EXPECT_EQ(s.eig().eigenvalues, (linalg::Vec{2.0, 2.0}));
  EXPECT_EQ(s.theta_tilde(), (linalg::Vec{0.0, 0.0}));
  EXPECT_EQ(s.response(), (linalg::Vec{0.0, 0.0}));
  EXPECT_EQ(s.steps(), 0u);
}

TEST(EstimatorState, FreshLogdet) {
  EstimatorState s(3, 2.0, 0.05);
  EXPECT_NEAR(s.logdet(), 3.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(s.logdet_v0(), 3.0 * std::log(2.0), 1e-14);
}

TEST(EstimatorState, RejectsBadParameters) {
  EXPECT_THROW(EstimatorState(2, 2.0, 0.0), ConfigError);
  EXPECT_THROW(EstimatorState(2, 2.0, 1.0), ConfigError);
  EXPECT_THROW(EstimatorState(2, 0.0, 0.1), ConfigError);
}

TEST(Beta, FreshStateValue) {
  const double want = std::pow(std::sqrt(2.0) + std::sqrt(2.0 * std::log(10.0)), 2);
  EXPECT_NEAR(EstimatorState(2, 2.0, 0.1).beta(), want, 1e-12);
  EXPECT_NEAR(want, 12.675, 1e-3);
}

TEST(Beta, AfterDesignGrowsToDiag44) {
  EstimatorState s(2, 2.0, 0.1);
  s.absorb(unit(2, 0), 0.0, 2.0);
  s.absorb(unit(2, 1), 0.0, 2.0);
  const double want = std::pow(std::sqrt(2 * std::log(10.0) + 2 * std::log(2.0)) + std::sqrt(2.0), 2);
  EXPECT_NEAR(s.beta(), want, 1e-12);
  // (sqrt(5.9915) + sqrt(2))^2 = 3.8620^2
  EXPECT_NEAR(want, 14.915, 1e-3);
}

TEST(Absorb, SingleObservation) {
  EstimatorState s(2, 2.0, 0.1);
  s.absorb(unit(2, 0), 0.5, 1.0);
  const double diag[] = {3.0, 2.0};
  EXPECT_EQ(s.design(), linalg::SymMat::diagonal(diag));
  EXPECT_NEAR(s.theta_tilde()[0], 1.0 / 6.0, 1e-15);
  EXPECT_EQ(s.theta_tilde()[1], 0.0);
  EXPECT_EQ(s.steps(), 1u);
  EXPECT_FALSE(s.eig_current());
  EXPECT_THROW(s.eig(), InvariantError);
  s.refresh_eig();
  EXPECT_EQ(s.eig().eigenvalues, (linalg::Vec{2.0, 3.0}));
}

TEST(Absorb, TwoAxisObservations) {
  EstimatorState s(2, 1.0, 0.1);
  s.absorb(unit(2, 0), 1.0, 1.0);
  s.absorb(unit(2, 1), 1.0, 1.0);
  EXPECT_EQ(s.design(), linalg::SymMat::identity(2, 2.0));
  EXPECT_NEAR(s.theta_tilde()[0], 0.5, 1e-15);
  EXPECT_NEAR(s.theta_tilde()[1], 0.5, 1e-15);
}

TEST(Absorb, RejectsZeroWeightAndNonUnitAction) {
  EstimatorState s(2, 2.0, 0.1);
  EXPECT_THROW(s.absorb(unit(2, 0), 1.0, 0.0), PreconditionError);
  EXPECT_THROW(s.absorb(linalg::Vec{2.0, 0.0}, 1.0, 1.0), PreconditionError);
}

TEST(ConfidenceReport, Examples) {
  EstimatorState s(2, 2.0, 0.1);
  const auto fresh = s.confidence_report(linalg::Vec{0.6, 0.8});
  EXPECT_NEAR(fresh.mahalanobis2, 2.0, 1e-14);
  EXPECT_TRUE(fresh.member);

  // w r / (lambda0 + w) = 1 puts the estimate on the sphere at e1.
  s.absorb(unit(2, 0), 3.0, 1.0);
  ASSERT_NEAR(s.theta_tilde()[0], 1.0, 1e-15);
  const auto at_estimate = s.confidence_report(s.theta_tilde());
  EXPECT_EQ(at_estimate.mahalanobis2, 0.0);
  EXPECT_TRUE(at_estimate.member);

  // Heavy weight on e1 pins the estimate near e1; -e1 is far outside.
  EstimatorState t(2, 2.0, 0.1);
  t.absorb(unit(2, 0), 1.0, 1e4);
  const auto far = t.confidence_report(linalg::Vec{-1.0, 0.0});
  EXPECT_GT(far.mahalanobis2, far.beta);
  EXPECT_FALSE(far.member);
}

TEST(EstimatorProperty, IncrementalMatchesOneShotClosedForm) {
  Rng rng(314);
  for (int trace = 0; trace < 1000; ++trace) {
    const std::size_t d = 2 + static_cast<std::size_t>(trace % 4);
    const std::size_t len = 1 + static_cast<std::size_t>(rng() % 200);
    const double lambda0 = 0.5 + 3.0 * rng.uniform();
    EstimatorState s(d, lambda0, 0.05);
    Eigen::MatrixXd v = lambda0 * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    double prev_beta = s.beta();
    double prev_logdet = s.logdet();
    for (std::size_t k = 0; k < len; ++k) {
      const auto a = env::random_unit_vector(d, rng);
      const double r = rng.normal();
      const double w = std::exp(4.0 * rng.uniform() - 2.0);
      s.absorb(a, r, w);
      const Eigen::VectorXd ea = banditvn::testing::to_eigen(a);
      v += w * ea * ea.transpose();
      b += w * r * ea;
      ASSERT_GE(s.beta(), prev_beta);
      ASSERT_GE(s.logdet(), prev_logdet - 1e-12);
      prev_beta = s.beta();
      prev_logdet = s.logdet();
    }
    const Eigen::VectorXd want = v.ldlt().solve(b);
    const double scale = std::max(1.0, want.norm());
    for (std::size_t i = 0; i < d; ++i) {
      ASSERT_LE(std::abs(s.theta_tilde()[i] - want(static_cast<Eigen::Index>(i))), 1e-8 * scale)
          << "trace " << trace;
    }
    s.refresh_eig();
    ASSERT_GE(s.eig().min(), lambda0 - 1e-9);
    ASSERT_LE(rel_err(s.logdet(), std::log(v.determinant())), 1e-9);
  }
}

TEST(ConfidenceRadius, ClampsNegativeRatio) {
  EXPECT_EQ(confidence_radius(2.0, 0.1, -1e-15), confidence_radius(2.0, 0.1, 0.0));
}
