#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "jscc/tilted_family.hpp"
#include "chains.hpp"
#include "reference.hpp"

using namespace jscc;

namespace {

TiltedFamily example_family(FamilyVariant v = FamilyVariant::up()) {
  return TiltedFamily(fixtures::example_source(), fixtures::example_channel(), 0.75, v);
}

}  // namespace

TEST(TiltedFamily, UIsScaledLogEigenvalueForAdditiveChannel) {
  for (auto v : {FamilyVariant::down(), FamilyVariant::up()}) {
    const auto f = example_family(v);
    for (double t : {-2.0, -0.5, 0.0, 0.25, 0.5, 0.9})
      EXPECT_NEAR(f.U(t), 1.75 * ref::log_lambda(0.1, 0.2, t), 1e-12) << t;
  }
}

TEST(TiltedFamily, SlopeAtZeroIsWeightedEntropyRate) {
  const auto f = example_family();
  EXPECT_NEAR(f.u(0.0), ref::kU0, 1e-9);
  EXPECT_NEAR(f.u(0.0), 1.75 * ref::kEntropyRate, 1e-9);
}

TEST(TiltedFamily, SlopeMatchesClosedFormDerivative) {
  const auto f = example_family();
  for (double t : {-1.0, 0.1, 0.6}) {
    const double h = 1e-4;
    const double d = 1.75 * (ref::log_lambda(0.1, 0.2, t + h) - ref::log_lambda(0.1, 0.2, t - h)) / (2 * h);
    EXPECT_NEAR(f.u(t), d, 1e-7) << t;
  }
}

TEST(TiltedFamily, ThetaOfRAtLog2) {
  const auto f = example_family();
  const double t = f.theta_of_R(std::log(2.0));
  EXPECT_NEAR(t, ref::kThetaStar, 1e-9);
  EXPECT_NEAR(f.a_of_R(std::log(2.0)), ref::kACrit, 1e-9);
}

TEST(TiltedFamily, CriticalRate) { EXPECT_NEAR(example_family().critical_rate(), ref::kCriticalRate, 1e-9); }

TEST(TiltedFamily, InversesRoundTrip) {
  const auto f = example_family();
  for (double t : {-3.0, -0.4, 0.0, 0.3, 0.8}) {
    const double a = f.u(t);
    EXPECT_NEAR(f.theta_of_a(a), t, 1e-7) << t;
    const double R = f.rate_at(t);
    EXPECT_NEAR(f.theta_of_R(R), t, 1e-7) << t;
    EXPECT_NEAR(f.R_of_a(a), R, 1e-10) << t;
  }
}

TEST(TiltedFamily, SlopeIsIncreasing) {
  const auto f = example_family();
  double prev = f.u(-3.0);
  for (double t = -2.75; t < 0.99; t += 0.25) {
    const double cur = f.u(t);
    EXPECT_GT(cur, prev) << t;
    prev = cur;
  }
}

TEST(TiltedFamily, OutOfRangeInverses) {
  const auto f = example_family();
  EXPECT_THROW(f.theta_of_a(f.a_upper() + 1.0), OutOfRange);
  EXPECT_THROW(f.theta_of_a(f.a_lower() - 1.0), OutOfRange);
  EXPECT_THROW(f.theta_of_R(f.rate_at(TiltedFamily::kThetaMin) - 0.1), OutOfRange);
  EXPECT_THROW(f.theta_of_R(100.0), OutOfRange);
}

TEST(TiltedFamily, DomainErrors) {
  EXPECT_THROW(TiltedFamily(fixtures::example_source(), fixtures::example_channel(), 0.0), DomainError);
  EXPECT_THROW(TiltedFamily(fixtures::example_source(), fixtures::example_channel(), -1.0), DomainError);
  const auto f = example_family();
  EXPECT_THROW(f.U(1.0), DomainError);
  EXPECT_THROW(f.U(1.5), DomainError);
  EXPECT_THROW(f.with_rate(0.0), DomainError);
  EXPECT_THROW(f.with_variant(FamilyVariant::fixed(1.0)), DomainError);
}

TEST(TiltedFamily, FixedVariantReducesToUpAtDiagonal) {
  const TiltedFamily f(fixtures::example_source(), fixtures::side_info_chain(), 0.5, FamilyVariant::up());
  for (double t : {-0.5, 0.3, 0.7}) {
    const auto g = f.with_variant(FamilyVariant::fixed(t));
    EXPECT_NEAR(g.U(t), f.U(t), 1e-10) << t;
  }
}

TEST(TiltedFamily, AssumptionViolatedForHiddenChannel) {
  // z copies x', so the z-marginal transition depends on x'
  SquareMatrix m(4);
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int zp = 0; zp < 2; ++zp)
        for (int xp = 0; xp < 2; ++xp) m(z * 2 + x, zp * 2 + xp) = (z == xp ? 1.0 : 0.0) * (x == 0 ? 0.7 : 0.3);
  const JointChannelChain c(2, 2, StochasticMatrix(m));
  EXPECT_FALSE(static_cast<bool>(check_assumption1(c)));
  EXPECT_THROW(TiltedFamily(fixtures::example_source(), c, 0.5, FamilyVariant::down()), AssumptionViolated);
}

TEST(TiltedFamily, SharedCacheIsThreadSafeAndDeterministic) {
  const auto f = example_family();
  std::vector<double> thetas;
  for (int i = 0; i < 200; ++i) thetas.push_back(-2.0 + 0.0145 * i);
  std::vector<std::vector<double>> results(4, std::vector<double>(thetas.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = 0; i < thetas.size(); ++i) results[w][i] = f.u(thetas[(i + 37 * w) % thetas.size()]);
    });
  for (auto& t : pool) t.join();
  const auto g = example_family();
  for (int w = 0; w < 4; ++w)
    for (std::size_t i = 0; i < thetas.size(); ++i)
      EXPECT_EQ(results[w][i], g.u(thetas[(i + 37 * w) % thetas.size()]));
}

TEST(TiltedFamily, CriticalRateIncreasesWithR) {
  const auto f = example_family();
  double prev = f.with_rate(0.25).critical_rate();
  for (double r : {0.5, 0.75, 1.0, 1.5}) {
    const double cur = f.with_rate(r).critical_rate();
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}
