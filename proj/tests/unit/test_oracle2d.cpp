#include <gtest/gtest.h>

#include <cmath>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"
#include "banditvn/linalg.hpp"
#include "banditvn/oracle2d.hpp"
#include "test_util.hpp"

using namespace banditvn;
using namespace banditvn::oracle2d;

namespace {

// Smallest eigenvalue of [[a, b], [b, c]] from the characteristic polynomial.
double min_eig_2x2(double a, double b, double c) {
  return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
}

}  // namespace

TEST(Oracle2d, HandExample) {
  const auto t = overlap_terms(2.0, 0.0);
  EXPECT_NEAR(t.x, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.z, 0.0, 1e-15);
  EXPECT_NEAR(exact_min_eigenvalue_2d({2.0, 3.0, 1.0, 0.0}), 8.0 / 3.0, 1e-14);
}

TEST(Oracle2d, ZeroWeightIsNoUpdate) {
  EXPECT_DOUBLE_EQ(exact_min_eigenvalue_2d({2.5, 7.0, 0.0, 0.3}), 2.5);
}

TEST(Oracle2d, RejectsInvalidInput) {
  EXPECT_THROW(exact_min_eigenvalue_2d({0.5, 1.0, 1.0, 0.0}), PreconditionError);
  EXPECT_THROW(exact_min_eigenvalue_2d({2.0, 1.0, 1.0, 0.0}), PreconditionError);
  EXPECT_THROW(exact_min_eigenvalue_2d({2.0, 3.0, -1.0, 0.0}), PreconditionError);
  EXPECT_THROW(exact_min_eigenvalue_2d({2.0, 3.0, 1.0, 1.5}), PreconditionError);
}

// Builds the update from explicit vectors: V = diag(lmin, lmax) in the
// (v_min, v_max) basis, center c = (alpha, sqrt(1 - alpha^2)).
TEST(Oracle2dProperty, ClosedFormMatchesExplicitUpdate) {
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const double lmin = std::pow(10.0, 4.0 * rng.uniform());
    const double lmax = lmin * std::pow(10.0, 3.0 * rng.uniform());
    const double w = 5.0 * rng.uniform();
    const double alpha = 2.0 * rng.uniform() - 1.0;
    const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
    const linalg::Vec c = {alpha, side * std::sqrt(1.0 - alpha * alpha)};
    const double s = 1.0 / std::sqrt(lmin);
    linalg::SymMat m = linalg::SymMat::diagonal(linalg::Vec{lmin, lmax});
    for (double sign : {1.0, -1.0}) {
      const linalg::Vec a = linalg::normalized(linalg::Vec{c[0] + sign * s, c[1]});
      linalg::rank_one_add_inplace(m, w, a);
    }
    const double want = min_eig_2x2(m(0, 0), m(0, 1), m(1, 1));
    const double got = exact_min_eigenvalue_2d({lmin, lmax, w, alpha});
    ASSERT_LE(banditvn::testing::rel_err(got, want), 1e-9) << "trial " << i;
    const double via_eigh = linalg::eigh(assembled_update_2d({lmin, lmax, w, alpha})).min();
    ASSERT_LE(banditvn::testing::rel_err(got, via_eigh), 1e-9) << "trial " << i;
  }
}

TEST(DistanceLemma, OrthogonalExample) {
  const linalg::Vec c = {1.0, 0.0}, v = {0.0, 1.0};
  EXPECT_TRUE(check_distance_lemma(c, v, 4.0));
  const double want = 2.0 * (1.0 - 1.0 / std::sqrt(1.25));
  EXPECT_NEAR(distance_lemma_excess(c, v, 4.0), want - 0.5, 1e-15);
  EXPECT_NEAR(want, 0.2111, 1e-4);
}

TEST(DistanceLemma, WorstCaseOverlapIsNearTight) {
  for (double lambda : {1.5, 4.0, 100.0, 1e6}) {
    const double a = 1.0 / std::sqrt(lambda);
    const linalg::Vec c = {1.0, 0.0}, v = {a, std::sqrt(1.0 - a * a)};
    EXPECT_TRUE(check_distance_lemma(c, v, lambda));
    const linalg::Vec minus = linalg::normalized(linalg::Vec{1.0 - a / std::sqrt(lambda),
                                                             -v[1] / std::sqrt(lambda)});
    EXPECT_NEAR(linalg::squared_distance(minus, c), 2.0 * (1.0 - std::sqrt(1.0 - 1.0 / lambda)),
                1e-12);
    EXPECT_LE(distance_lemma_excess(c, v, lambda), 0.0);
  }
}

TEST(DistanceLemma, RejectsLambdaAtMostOne) {
  const linalg::Vec c = {1.0, 0.0}, v = {0.0, 1.0};
  EXPECT_THROW(check_distance_lemma(c, v, 1.0), PreconditionError);
  EXPECT_THROW(check_distance_lemma(c, linalg::Vec{0.0, 2.0}, 4.0), PreconditionError);
}

TEST(DistanceLemmaProperty, RandomInputsNeverViolate) {
  Rng rng(55);
  for (int i = 0; i < 100000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 5);
    const auto c = env::random_unit_vector(d, rng);
    const auto v = env::random_unit_vector(d, rng);
    // Log-uniform on (1, 1e6].
    const double lambda = std::exp(std::log(1e6) * (1.0 - rng.uniform()));
    if (!(lambda > 1.0)) continue;
    ASSERT_TRUE(check_distance_lemma(c, v, lambda)) << "trial " << i;
  }
}
