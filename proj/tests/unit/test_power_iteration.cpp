#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "isac/error.hpp"
#include "isac/power_iteration.hpp"
#include "test_util.hpp"

using namespace isac;

namespace {

CMat random_hermitian(testutil::Gen& g, int n) {
  CMat A(n, n);
  for (int j = 0; j < n; ++j) A.col(j) = g.cvec(n);
  return 0.5 * (A + A.adjoint());
}

}  // namespace

TEST(PowerIteration, MatchesEigensolverWithShift) {
  testutil::Gen g(40);
  for (int t = 0; t < 20; ++t) {
    const int n = g.integer(2, 12);
    const CMat H = random_hermitian(g, n);
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    const double lo = es.eigenvalues().minCoeff();
    PowerIterationOptions o;
    o.shift = -lo + 1.0;
    o.tol = 1e-14;
    o.max_iters = 200000;
    const auto r = power_iteration([&](const CVec& v) -> CVec { return H * v; }, n, o);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, es.eigenvalues().maxCoeff(), 1e-6 * (1 + std::abs(lo)));
  }
}

TEST(PowerIteration, ZeroOperatorConverges) {
  const auto r = power_iteration([](const CVec& v) -> CVec { return CVec::Zero(v.size()); }, 5, {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.value, 0.0);
}

TEST(PowerIteration, StrictThrowsWhenCapped) {
  // A small spectral gap needs far more than five steps.
  CMat H = CMat::Zero(2, 2);
  H(0, 0) = 1.0;
  H(1, 1) = 0.9;
  PowerIterationOptions o;
  o.max_iters = 5;
  o.tol = 1e-300;
  try {
    power_iteration([&](const CVec& v) -> CVec { return H * v; }, 2, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::power_iteration_no_converge);
  }
  o.strict = false;
  EXPECT_FALSE(power_iteration([&](const CVec& v) -> CVec { return H * v; }, 2, o).converged);
}
