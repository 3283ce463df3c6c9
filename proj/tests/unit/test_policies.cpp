#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"
#include "banditvn/policies.hpp"
#include "banditvn/verify.hpp"
#include "test_util.hpp"

using namespace banditvn;
using namespace banditvn::policies;
using banditvn::testing::unit;

namespace {

linalg::EigenDecomp decomp(linalg::Vec values, std::vector<linalg::Vec> vectors) {
  linalg::EigenDecomp e;
  e.eigenvalues = std::move(values);
  e.eigenvectors = std::move(vectors);
  return e;
}

// Best objective over an n-point angular grid, d = 2.
double brute_force_2d(const linalg::Vec& tilde, const linalg::EigenDecomp& eig, double beta,
                      std::size_t n) {
  double best = -1e300;
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const linalg::Vec a = {std::cos(phi), std::sin(phi)};
    best = std::max(best, ucb_objective(tilde, eig, beta, a));
  }
  return best;
}

PolicyConfig vn_config(std::size_t d) {
  PolicyConfig c;
  c.dim = d;
  c.delta = 0.01;
  return c;
}

}  // namespace

TEST(ComputeLambda0, Examples) {
  EXPECT_EQ(compute_lambda0(2), 2.0);
  EXPECT_EQ(compute_lambda0(5), 2.0);
  const double second_d2 = std::sqrt(2.0 / 3.0) / 3.0 + 2.0 / 3.0;
  EXPECT_NEAR(second_d2, 0.9388, 1e-4);
  const double second_d5 = std::sqrt(1.0 / 6.0) * 5.0 / 12.0 + 1.0 / 6.0;
  EXPECT_NEAR(second_d5, 0.337, 1e-3);
  EXPECT_THROW(compute_lambda0(1), ConfigError);
}

TEST(ComputeLambda0, MatchesConstraintWithOmegaConstant) {
  // 2dC with C = 1/(12 sqrt(d-1)) is d/(6 sqrt(d-1)).
  for (std::size_t d = 2; d <= 64; ++d) {
    const double c = verify::omega_constant(d);
    const double dm1 = static_cast<double>(d - 1);
    const double bound = std::sqrt(2.0 / (3.0 * dm1)) * 2.0 * static_cast<double>(d) * c +
                         2.0 / (3.0 * dm1);
    EXPECT_NEAR(compute_lambda0(d), std::max(2.0, bound), 1e-15);
  }
}

TEST(PolicyConfig, RejectsLambda0BelowBound) {
  PolicyConfig c = vn_config(2);
  c.lambda0 = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.lambda0 = 3.0;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.resolved_lambda0(), 3.0);
}

TEST(Omega, PlugIn) { EXPECT_DOUBLE_EQ(omega(144.0, 1.0, 2), 1.0); }

TEST(Omega, UnitModeIsOne) {
  PolicyConfig c = vn_config(3);
  c.omega_mode = OmegaMode::UnitWeights;
  estimator::EstimatorState s(3, 2.0, 0.01);
  EXPECT_EQ(batch_weight(c, s, 1), 1.0);
  EXPECT_EQ(batch_weight(c, s, 17), 1.0);
}

TEST(Omega, FirstBatchWeightSelection) {
  PolicyConfig c = vn_config(2);
  estimator::EstimatorState s(2, 2.0, 0.01);
  EXPECT_DOUBLE_EQ(batch_weight(c, s, 1), omega(2.0, s.beta(), 2));
  c.first_batch = FirstBatchWeight::Unit;
  EXPECT_EQ(batch_weight(c, s, 1), 1.0);
}

TEST(OmegaProperty, BoundedByHypothesisWhenBetaAtLeastOne) {
  Rng rng(17);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 20);
    const double lmax = std::pow(10.0, 8.0 * rng.uniform());
    const double beta = std::pow(10.0, 4.0 * rng.uniform());
    ASSERT_LE(omega(lmax, beta, d),
              verify::omega_constant(d) * std::sqrt(lmax) * (1.0 + 1e-15));
  }
}

TEST(BuildActions, HandExample) {
  const auto eig = decomp({4.0, 9.0}, {{0.0, 1.0}, {1.0, 0.0}});
  const auto actions = build_actions(linalg::Vec{1.0, 0.0}, eig);
  ASSERT_EQ(actions.size(), 2u);
  const double n = std::sqrt(1.25);
  EXPECT_NEAR(actions[0][0], 1.0 / n, 1e-15);
  EXPECT_NEAR(actions[0][1], 0.5 / n, 1e-15);
  EXPECT_NEAR(actions[1][0], 1.0 / n, 1e-15);
  EXPECT_NEAR(actions[1][1], -0.5 / n, 1e-15);
  EXPECT_NEAR(actions[0][0], 0.8944, 1e-4);
  EXPECT_NEAR(actions[0][1], 0.4472, 1e-4);
}

TEST(BuildActions, OrderAndCountUseAllButTopEigenvector) {
  const auto eig = linalg::eigh(linalg::SymMat::diagonal(linalg::Vec{5.0, 3.0, 9.0, 4.0}));
  const linalg::Vec c = linalg::normalized(linalg::Vec{1.0, 1.0, 1.0, 1.0});
  const auto actions = build_actions(c, eig);
  ASSERT_EQ(actions.size(), 6u);
  const double s = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i < 3; ++i) {
    linalg::Vec plus(4), minus(4);
    for (std::size_t k = 0; k < 4; ++k) {
      plus[k] = c[k] + s * eig.eigenvectors[i][k];
      minus[k] = c[k] - s * eig.eigenvectors[i][k];
    }
    EXPECT_EQ(actions[2 * i], linalg::normalized(plus));
    EXPECT_EQ(actions[2 * i + 1], linalg::normalized(minus));
  }
}

TEST(BuildBatchProperty, ActionsAreUnitAndNearCenter) {
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 6);
    estimator::EstimatorState s(d, 2.0, 0.05);
    const std::size_t n = rng() % 30;
    for (std::size_t k = 0; k < n; ++k) {
      s.absorb(env::random_unit_vector(d, rng), rng.normal(), 0.1 + 5.0 * rng.uniform());
    }
    s.refresh_eig();
    const auto prev = env::random_unit_vector(d, rng);
    const auto plan = build_batch(s, prev, 0.5);
    ASSERT_EQ(plan.actions.size(), 2 * (d - 1));
    EXPECT_EQ(plan.weight, 0.5);
    for (const auto& a : plan.actions) {
      ASSERT_NEAR(linalg::norm(a), 1.0, 1e-9);
      ASSERT_LE(linalg::squared_distance(a, plan.center), 2.0 / s.eig().min() + 1e-9);
    }
  }
}

TEST(BuildBatch, ZeroEstimateCarriesCenterForward) {
  estimator::EstimatorState s(2, 2.0, 0.1);
  const linalg::Vec prev = linalg::normalized(linalg::Vec{0.3, -0.7});
  const auto plan = build_batch(s, prev, 1.0);
  EXPECT_EQ(plan.center, prev);
}

TEST(BuildBatch, StaleEigenDataIsAnInvariantError) {
  estimator::EstimatorState s(2, 2.0, 0.1);
  s.absorb(unit(2, 0), 1.0, 1.0);
  EXPECT_THROW(build_batch(s, unit(2, 0), 1.0), InvariantError);
}

TEST(LinUcbVn, UnitFirstBatchAddsBothActionsWithWeightOne) {
  PolicyConfig c = vn_config(2);
  c.first_batch = FirstBatchWeight::Unit;
  Rng rng(4);
  LinUcbVnPolicy p(c, rng);
  const auto plan = p.plan_batch();
  EXPECT_EQ(plan.weight, 1.0);
  EXPECT_EQ(plan.center, p.center());
  linalg::SymMat want = linalg::SymMat::identity(2, 2.0);
  for (const auto& a : plan.actions) linalg::rank_one_add_inplace(want, 1.0, a);
  p.observe(plan, std::vector<double>{0.1, 0.2});
  const auto& got = p.estimator().design();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(got(i, j), want(i, j), 1e-15);
  }
  EXPECT_EQ(p.batches(), 1u);
}

// A unit-weight first batch from V0 = 2I puts Tr(V1) = 6 above the trace
// bound d(d/144 + sqrt(d lambda0)/6 + lambda0) ~ 4.69 at t = 1 (d = 2).
TEST(LinUcbVn, UnitFirstBatchBreaksTraceBound) {
  PolicyConfig c = vn_config(2);
  c.first_batch = FirstBatchWeight::Unit;
  Rng rng(4);
  LinUcbVnPolicy p(c, rng);
  const auto plan = p.plan_batch();
  p.observe(plan, std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(p.estimator().design().trace(), 6.0, 1e-12);
  EXPECT_GT(p.estimator().design().trace(), verify::trace_bound(2, 2.0, 1));

  PolicyConfig d = vn_config(2);
  Rng rng2(4);
  LinUcbVnPolicy q(d, rng2);
  const auto plan2 = q.plan_batch();
  q.observe(plan2, std::vector<double>{0.0, 0.0});
  EXPECT_LE(q.estimator().design().trace(), verify::trace_bound(2, 2.0, 1));
}

TEST(LinUcbVn, ObserveRequiresOneRewardPerAction) {
  Rng rng(4);
  LinUcbVnPolicy p(vn_config(3), rng);
  const auto plan = p.plan_batch();
  EXPECT_THROW(p.observe(plan, std::vector<double>{0.0}), PreconditionError);
}

TEST(Maximizer, IsotropicDesignPicksEstimateDirection) {
  Rng rng(1);
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto eig = linalg::eigh(linalg::SymMat::identity(d, 3.0));
    const auto tilde = [&] {
      linalg::Vec t = env::random_unit_vector(d, rng);
      for (double& x : t) x *= 0.4;
      return t;
    }();
    const auto a = maximize_ucb(tilde, eig, 2.0, MaximizerSettings{}, rng);
    const auto want = linalg::normalized(tilde);
    for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(a[k], want[k], 1e-6) << "d=" << d;
  }
}

TEST(Maximizer, ZeroEstimateTieIsDeterministic) {
  const auto eig = linalg::eigh(linalg::SymMat::identity(2, 3.0));
  Rng r1(5), r2(5);
  const linalg::Vec zero = {0.0, 0.0};
  const auto a = maximize_ucb(zero, eig, 2.0, MaximizerSettings{}, r1);
  const auto b = maximize_ucb(zero, eig, 2.0, MaximizerSettings{}, r2);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(linalg::norm(a), 1.0, 1e-12);
}

TEST(Maximizer, FixtureMatchesBruteForceGrid) {
  const auto eig = linalg::eigh(linalg::SymMat::diagonal(linalg::Vec{1.0, 4.0}));
  const linalg::Vec tilde = {1.0, 0.0};
  Rng rng(2);
  const auto a = maximize_ucb(tilde, eig, 1.0, MaximizerSettings{}, rng);
  const double got = ucb_objective(tilde, eig, 1.0, a);
  EXPECT_GE(got, brute_force_2d(tilde, eig, 1.0, 1000000) - 1e-6);
}

TEST(MaximizerProperty, RandomStatesMatchBruteForceGrid) {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    estimator::EstimatorState s(2, 2.0, 0.05);
    const std::size_t n = 1 + rng() % 50;
    for (std::size_t k = 0; k < n; ++k) {
      s.absorb(env::random_unit_vector(2, rng), rng.normal(), 1.0 + 20.0 * rng.uniform());
    }
    s.refresh_eig();
    const auto a = maximize_ucb(s.theta_tilde(), s.eig(), s.beta(), MaximizerSettings{}, rng);
    const double got = ucb_objective(s.theta_tilde(), s.eig(), s.beta(), a);
    const double want = brute_force_2d(s.theta_tilde(), s.eig(), s.beta(), 1000000);
    ASSERT_GE(got, want - 1e-6) << "state " << i;
  }
}

TEST(MaximizerProperty, HigherDimensionsBeatRandomSearch) {
  Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 3 + static_cast<std::size_t>(i % 3);
    estimator::EstimatorState s(d, 2.0, 0.05);
    for (int k = 0; k < 40; ++k) {
      s.absorb(env::random_unit_vector(d, rng), rng.normal(), 1.0 + 10.0 * rng.uniform());
    }
    s.refresh_eig();
    const auto a = maximize_ucb(s.theta_tilde(), s.eig(), s.beta(), MaximizerSettings{}, rng);
    ASSERT_NEAR(linalg::norm(a), 1.0, 1e-12);
    const double got = ucb_objective(s.theta_tilde(), s.eig(), s.beta(), a);
    double best = -1e300;
    for (int k = 0; k < 20000; ++k) {
      best = std::max(best, ucb_objective(s.theta_tilde(), s.eig(), s.beta(),
                                          env::random_unit_vector(d, rng)));
    }
    ASSERT_GE(got, best - 1e-9) << "state " << i;
  }
}

TEST(FixedOracle, ZeroRegretAndDeterministicRewards) {
  Rng rng(3);
  env::EnvironmentSpec spec;
  spec.dim = 3;
  spec.theta = env::random_unit_vector(3, rng);
  FixedOraclePolicy p(vn_config(3), spec.theta);
  double regret = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto plan = p.plan_batch();
    std::vector<double> rewards;
    for (const auto& a : plan.actions) {
      const auto r = env::sample_reward(spec, a, rng);
      EXPECT_EQ(r.noise_std, 0.0);
      rewards.push_back(r.value);
      regret += env::instantaneous_regret(spec, a);
    }
    p.observe(plan, rewards);
  }
  EXPECT_EQ(regret, 0.0);
}

TEST(FixedOracle, FloorModeStillZeroRegretButNoisy) {
  Rng rng(3);
  env::EnvironmentSpec spec;
  spec.dim = 2;
  spec.theta = {0.6, 0.8};
  spec.noise_mode = env::NoiseMode::VanishingPlusFloor;
  spec.floor_sigma2 = 0.1;
  FixedOraclePolicy p(vn_config(2), spec.theta);
  const auto plan = p.plan_batch();
  EXPECT_EQ(env::instantaneous_regret(spec, plan.actions[0]), 0.0);
  EXPECT_GT(env::sample_reward(spec, plan.actions[0], rng).noise_std, 0.0);
}

TEST(MakePolicy, BuildsEachKind) {
  Rng rng(1);
  const linalg::Vec theta = {1.0, 0.0};
  for (auto kind : {PolicyKind::LinUcbVn, PolicyKind::LinUcbBaseline, PolicyKind::FixedOracle}) {
    PolicyConfig c = vn_config(2);
    c.kind = kind;
    const auto p = make_policy(c, theta, rng);
    const auto plan = p->plan_batch();
    EXPECT_EQ(plan.actions.size(), kind == PolicyKind::LinUcbVn ? 2u : 1u);
  }
  EXPECT_THROW(parse_policy_kind("thompson"), ConfigError);
  EXPECT_EQ(parse_policy_kind("linucb-vn"), PolicyKind::LinUcbVn);
}
