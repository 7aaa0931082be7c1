#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "wreathcycle/couplings.hpp"
#include "wreathcycle/experiments.hpp"

namespace wreathcycle {
namespace {

constexpr double kEulerGamma = 0.57721566490153286;

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double sum_of(const Partition& p) {
  return std::accumulate(p.parts().begin(), p.parts().end(), 0.0);
}

TEST(Feller, DegreeOneIsASingleFixedPoint) {
  Rng rng(3);
  const FellerDraw d = sample_feller(1, rng);
  EXPECT_EQ(d.bits, (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(d.counts, (std::vector<std::uint32_t>{1}));
  EXPECT_THROW(sample_feller(0, rng), std::invalid_argument);
}

TEST(Feller, DegreeThreeIsOneThreeCycleWithProbabilityOneThird) {
  Rng rng(5);
  const int draws = 60'000;
  int three_cycles = 0;
  for (int i = 0; i < draws; ++i) three_cycles += sample_feller(3, rng).counts[2];
  EXPECT_NEAR(three_cycles / static_cast<double>(draws), 1.0 / 3, 3 * std::sqrt(2.0 / 9 / draws));
}

TEST(Feller, CountsAccountForEveryPointAndFixedPointsAverageOne) {
  Rng rng(7);
  const int draws = 20'000;
  const std::size_t n = 50;
  double fixed = 0;
  for (int i = 0; i < draws; ++i) {
    const FellerDraw d = sample_feller(n, rng);
    std::size_t total = 0;
    for (std::size_t k = 1; k <= n; ++k) total += k * d.counts[k - 1];
    ASSERT_EQ(total, n);
    fixed += d.counts[0];
  }
  // Var(C_1) = 1 for n >= 2.
  EXPECT_NEAR(fixed / draws, 1.0, 3 / std::sqrt(static_cast<double>(draws)));
}

TEST(LogPoisson, ArrivalsAreDecreasingAndAboveCutoff) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const ArrivalSet a = sample_log_poisson(1e-3, rng);
    for (std::size_t j = 0; j < a.times.size(); ++j) {
      EXPECT_GT(a.times[j], 1e-3);
      EXPECT_LE(a.times[j], 1.0);
      if (j > 0) {
        EXPECT_LT(a.times[j], a.times[j - 1]);
      }
    }
  }
  EXPECT_THROW(sample_log_poisson(0.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_log_poisson(1.0, rng), std::invalid_argument);
}

TEST(LogPoisson, EmptyUpperHalfWithProbabilityOneHalf) {
  Rng rng(13);
  const int draws = 100'000;
  int empty = 0;
  for (int i = 0; i < draws; ++i) {
    const ArrivalSet a = sample_log_poisson(1e-6, rng);
    empty += (a.times.empty() || a.times.front() < 0.5) ? 1 : 0;
  }
  EXPECT_NEAR(empty / static_cast<double>(draws), 0.5, 3 * std::sqrt(0.25 / draws));
}

TEST(LogPoisson, FirstGapIsUniform) {
  Rng rng(17);
  std::vector<double> gaps;
  for (int i = 0; i < 100'000; ++i) {
    const ArrivalSet a = sample_log_poisson(1e-6, rng);
    gaps.push_back(1 - (a.times.empty() ? a.cutoff : a.times.front()));
  }
  EXPECT_LE(ks_distance(gaps, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.01);
}

TEST(Rounding, SureBoundAndUnitMass) {
  Rng rng(19);
  for (std::size_t n : {1u, 7u, 100u, 1000u}) {
    const double cutoff = default_cutoff(1e-6, n);
    for (int i = 0; i < 2000; ++i) {
      const auto [discrete, continuous] = round_coupling(sample_log_poisson(cutoff, rng), n);
      EXPECT_NEAR(sum_of(discrete), 1.0, 1e-12);
      EXPECT_EQ(discrete.tail_mass(), 0.0);
      for (double x : discrete.parts()) {
        const double units = x * static_cast<double>(n);
        EXPECT_NEAR(units, std::round(units), 1e-9);
      }
      EXPECT_LE(partition_distance(discrete, continuous, Norm::LInf), 1.0 / n + cutoff + 1e-15);
    }
  }
}

TEST(Rounding, AlignedPiecesDifferByLessThanOneUnit) {
  Rng rng(23);
  const std::size_t n = 64;
  for (int i = 0; i < 1000; ++i) {
    const AlignedPieces p = round_aligned(sample_log_poisson(default_cutoff(1e-6, n), rng), n);
    ASSERT_EQ(p.discrete.size(), p.continuous.size());
    for (std::size_t j = 0; j < p.discrete.size(); ++j) {
      EXPECT_LT(std::abs(p.discrete[j] - p.continuous[j]), 1.0 / n);
    }
  }
}

TEST(Rounding, MeanL1DistanceShrinksLikeLogNOverN) {
  Rng rng(29);
  const int draws = 20'000;
  for (std::size_t n : {10u, 100u, 1000u}) {
    double total = 0;
    const double cutoff = default_cutoff(1e-6, n);
    for (int i = 0; i < draws; ++i) {
      const auto [discrete, continuous] = round_coupling(sample_log_poisson(cutoff, rng), n);
      total += partition_distance(discrete, continuous, Norm::L1);
    }
    const double nd = static_cast<double>(n);
    EXPECT_LE(total / draws, 3 * (std::log(nd) + kEulerGamma) / nd) << n;
    EXPECT_GT(total / draws, 0.0);
  }
}

TEST(Rounding, RejectsCutoffAboveOneUnit) {
  const ArrivalSet a{{0.5}, 0.2};
  EXPECT_THROW(round_aligned(a, 10), std::invalid_argument);
  EXPECT_THROW(round_aligned(a, 0), std::invalid_argument);
}

TEST(Pairing, HandValues) {
  EXPECT_EQ(pairing_index(1, 1), 1u);
  EXPECT_EQ(pairing_index(2, 1), 2u);
  EXPECT_EQ(pairing_index(1, 2), 3u);
  EXPECT_EQ(pairing_index(3, 2), 12u);
  EXPECT_EQ(pairing_index(1, 3), 5u);
  EXPECT_EQ(pairing_index(64, 1), std::uint64_t{1} << 63);
  EXPECT_EQ(pairing_index(1, std::uint64_t{1} << 63), ~std::uint64_t{0});
}

TEST(Pairing, BijectiveOntoInitialSegment) {
  constexpr std::uint64_t kLimit = 1 << 16;
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 1; i <= 17; ++i) {
    for (std::uint64_t j = 1; pairing_index(i, j) <= kLimit; ++j) {
      ASSERT_TRUE(seen.insert(pairing_index(i, j)).second) << i << "," << j;
    }
  }
  EXPECT_EQ(seen.size(), kLimit);
  EXPECT_EQ(*seen.begin(), 1u);
  EXPECT_EQ(*seen.rbegin(), kLimit);
}

TEST(Pairing, Errors) {
  EXPECT_THROW(pairing_index(0, 1), std::invalid_argument);
  EXPECT_THROW(pairing_index(1, 0), std::invalid_argument);
  EXPECT_THROW(pairing_index(65, 1), std::overflow_error);
  EXPECT_THROW(pairing_index(64, 2), std::overflow_error);
  EXPECT_THROW(pairing_index(2, std::uint64_t{1} << 63), std::overflow_error);
  EXPECT_THROW(pairing_index(1, (std::uint64_t{1} << 63) + 1), std::overflow_error);
}

TEST(CombineF, HandExample) {
  const Partition a({0.5, 0.5}, 0.0);
  const std::vector<Partition> bs{Partition({0.5, 0.5}, 0.0), Partition()};
  const Partition f = combine_f(a, bs);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f.largest(1), 0.5);
  EXPECT_EQ(f.largest(2), 0.25);
  EXPECT_EQ(f.largest(3), 0.25);
  EXPECT_THROW(combine_f(a, std::span<const Partition>(bs).first(1)), std::invalid_argument);
}

TEST(CombineF, TailMassIsCarried) {
  const Partition a({0.75}, 0.25);
  const std::vector<Partition> bs{Partition({0.5}, 0.5)};
  const Partition f = combine_f(a, bs);
  EXPECT_DOUBLE_EQ(f.largest(), 0.375);
  EXPECT_DOUBLE_EQ(f.tail_mass(), 0.625);
}

TEST(CombineF, StickBreakingOfStickBreakingIsSquareCutting) {
  Rng rng(31);
  const int draws = 50'000;
  std::vector<double> combined(draws), direct(draws);
  for (int i = 0; i < draws; ++i) {
    const Partition outer = sample_stick_breaking(1e-6, rng);
    std::vector<Partition> inner;
    for (std::size_t j = 0; j < outer.size(); ++j) inner.push_back(sample_stick_breaking(1e-6, rng));
    combined[i] = combine_f(outer, inner).largest();
    direct[i] = sample_square_cutting(1e-6, rng).largest();
  }
  EXPECT_LE(two_sample_ks(combined, direct), 0.015);
}

TEST(PartitionDistance, HandValues) {
  const Partition halves({0.5, 0.5}, 0.0);
  const Partition whole;
  EXPECT_DOUBLE_EQ(partition_distance(halves, whole, Norm::L1), 1.0);
  EXPECT_DOUBLE_EQ(partition_distance(halves, whole, Norm::LInf), 0.5);
  EXPECT_EQ(partition_distance(whole, whole, Norm::L1), 0.0);
  const Partition truncated({0.5}, 0.5);
  EXPECT_DOUBLE_EQ(partition_distance(truncated, whole, Norm::L1), 1.0);
  EXPECT_DOUBLE_EQ(partition_distance(truncated, whole, Norm::LInf), 1.0);
}

TEST(PartitionDistance, TriangleInequality) {
  Rng rng(37);
  for (int i = 0; i < 2000; ++i) {
    const auto p = sample_stick_breaking(1e-3, rng);
    const auto q = sample_stick_breaking(1e-3, rng);
    const auto r = sample_square_cutting(1e-3, rng);
    for (Norm norm : {Norm::L1, Norm::LInf}) {
      EXPECT_NEAR(partition_distance(p, q, norm), partition_distance(q, p, norm), 1e-15);
      EXPECT_LE(partition_distance(p, r, norm),
                partition_distance(p, q, norm) + partition_distance(q, r, norm) + 1e-12);
    }
  }
}

TEST(CoupledPair, WreathRoundingStaysWithinSureBound) {
  Rng rng(41);
  const double eps = 1e-6;
  for (auto [k, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 5}, {20, 20}, {50, 50}}) {
    const double bound = 1.0 / k + 1.0 / n + 2 * eps;
    for (int i = 0; i < 500; ++i) {
      const CoupledPair pair = sample_coupled_pair(k, n, eps, rng);
      EXPECT_NEAR(sum_of(pair.discrete), 1.0, 1e-12);
      EXPECT_LE(pair.linf, bound);
      EXPECT_LE(pair.linf, pair.l1 + 1e-15);
    }
  }
  EXPECT_THROW(sample_coupled_pair(0, 5, eps, rng), std::invalid_argument);
  EXPECT_THROW(sample_coupled_pair(5, 5, 0.0, rng), std::invalid_argument);
}

TEST(CoupledPair, BlockGroupSidesShareBlocks) {
  Rng rng(43);
  const double eps = 1e-6;
  for (const auto& spec : {BlockGroupSpec::full(1), BlockGroupSpec::cyclic(4), BlockGroupSpec::full(3)}) {
    for (std::size_t n : {1u, 10u, 100u}) {
      for (int i = 0; i < 300; ++i) {
        const CoupledPair pair = sample_coupled_pair(spec, n, eps, rng);
        EXPECT_NEAR(sum_of(pair.discrete), 1.0, 1e-12);
        EXPECT_LE(pair.linf, 1.0 / n + eps + 1e-15);
      }
    }
  }
}

TEST(CoupledLcm, SandwichHolds) {
  const SpfTable table(4 * 200);
  Rng rng(47);
  struct Case {
    BlockGroupSpec spec;
    double exponent;
  };
  for (const auto& c : {Case{BlockGroupSpec::full(1), 1}, Case{BlockGroupSpec::cyclic(4), 4},
                        Case{BlockGroupSpec::full(3), 6}}) {
    for (int i = 0; i < 500; ++i) {
      const LcmPair p = sample_coupled_lcm(c.spec, 200, rng, table);
      EXPECT_GE(p.log_o, p.log_p - 1e-9);
      EXPECT_LE(p.log_o, p.log_p + std::log(c.exponent) + 1e-9);
      if (c.exponent == 1) {
        EXPECT_NEAR(p.log_o, p.log_p, 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace wreathcycle
