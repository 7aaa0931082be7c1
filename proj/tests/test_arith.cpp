#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "wreathcycle/arith.hpp"
#include "wreathcycle/integral_solvers.hpp"
#include "wreathcycle/rng.hpp"

namespace wreathcycle {
namespace {

std::uint64_t trial_smallest_factor(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return d;
  }
  return n;
}

TEST(Spf, SmallValues) {
  const SpfTable t = build_spf(100);
  EXPECT_EQ(t.smallest_factor(12), 2u);
  EXPECT_EQ(t.smallest_factor(97), 97u);
  EXPECT_TRUE(t.is_prime(97));
  EXPECT_FALSE(t.is_prime(91));
  EXPECT_EQ(t.smallest_factor(91), 7u);
}

TEST(Spf, RejectsTinyLimit) { EXPECT_THROW(build_spf(1), std::invalid_argument); }

TEST(Spf, MatchesTrialDivisionUpTo10000) {
  const SpfTable t(10'000);
  for (std::uint64_t n = 2; n <= 10'000; ++n) {
    const auto spf = t.smallest_factor(n);
    ASSERT_EQ(spf, trial_smallest_factor(n)) << n;
    ASSERT_TRUE(spf == n || spf * spf <= n);
    std::uint64_t product = 1;
    for (auto [p, e] : t.factorize(n)) {
      for (unsigned i = 0; i < e; ++i) product *= p;
    }
    ASSERT_EQ(product, n);
  }
}

TEST(ArithmeticFunctions, HandValues) {
  EXPECT_EQ(divisor_count(1), 1u);
  EXPECT_EQ(divisor_count(6), 4u);
  EXPECT_EQ(divisor_count(36), 9u);
  EXPECT_EQ(totient(1), 1u);
  EXPECT_EQ(totient(2), 1u);
  EXPECT_EQ(totient(12), 4u);
  EXPECT_EQ(totient(97), 96u);
  EXPECT_EQ(gcd(12, 18), 6u);
  EXPECT_EQ(gcd(0, 5), 5u);
}

TEST(ArithmeticFunctions, TotientsOverDivisorsSumToN) {
  for (std::uint64_t n = 1; n <= 200; ++n) {
    std::uint64_t sum = 0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) sum += totient(d);
    }
    EXPECT_EQ(sum, n);
  }
}

class MultiplicativeMean : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { rho_ = new GridFunction(solve_dickman(3, 1.0 / 1024)); }
  static void TearDownTestSuite() {
    delete rho_;
    rho_ = nullptr;
  }
  static GridFunction* rho_;
};

GridFunction* MultiplicativeMean::rho_ = nullptr;

TEST_F(MultiplicativeMean, ExactlyOneWhenUAtMostOne) {
  EXPECT_EQ(multiplicative_mean(1000, 1.0, *rho_), 1.0);
  EXPECT_EQ(multiplicative_mean(50, 0.5, *rho_), 1.0);
}

TEST_F(MultiplicativeMean, CloseToPiAtTwo) {
  const double pi2 = 1 - 0.5 * std::log(2.0) * std::log(2.0);
  const double mean = multiplicative_mean(1000, 2.0, *rho_);
  EXPECT_GE(mean, 0.0);
  EXPECT_LE(mean, 1.0);
  EXPECT_NEAR(mean, pi2, 0.1);
}

TEST_F(MultiplicativeMean, ErrorShrinksAlongX) {
  const double pi2 = 1 - 0.5 * std::log(2.0) * std::log(2.0);
  const double e100 = std::abs(multiplicative_mean(100, 2.0, *rho_) - pi2);
  const double e1000 = std::abs(multiplicative_mean(1000, 2.0, *rho_) - pi2);
  EXPECT_LE(e1000, e100);
}

TEST_F(MultiplicativeMean, CapacityEnforced) {
  MeanOptions options;
  options.capacity = 1000;
  EXPECT_THROW(multiplicative_mean(100, 2.0, *rho_, options), std::out_of_range);
}

TEST_F(MultiplicativeMean, SameResultForAnyWorkerCount) {
  const SpfTable table(1'000'000);
  const double one = multiplicative_mean(1000, 2.0, *rho_, table, 1);
  const double four = multiplicative_mean(1000, 2.0, *rho_, table, 4);
  EXPECT_EQ(one, four);
}

TEST_F(MultiplicativeMean, WeightIsTotallyMultiplicative) {
  const SpfTable table(1'000'000);
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t a = 1 + rng.below(1000);
    const std::uint64_t b = 1 + rng.below(1000);
    const double x = 30;
    EXPECT_NEAR(multiplicative_weight(a * b, x, *rho_, table),
                multiplicative_weight(a, x, *rho_, table) * multiplicative_weight(b, x, *rho_, table), 1e-15);
  }
}

TEST_F(MultiplicativeMean, WeightOfLargePrimeReadsRho) {
  const SpfTable table(10'000);
  // log 9973 / log 100 is just under 2.
  const double v = std::log(9973.0) / std::log(100.0);
  EXPECT_DOUBLE_EQ(multiplicative_weight(9973, 100, *rho_, table), (*rho_)(v));
  EXPECT_EQ(multiplicative_weight(97, 100, *rho_, table), 1.0);
}

}  // namespace
}  // namespace wreathcycle
