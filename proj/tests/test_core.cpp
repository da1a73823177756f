#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcover/core.hpp"
#include "mcover/random.hpp"

using namespace mcover;

TEST(RankStats, SortsAndSuffixSums) {
  const RankStats s = rank_stats(make_instance(2, {3, 1, 2}));
  EXPECT_EQ(s.P, (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(s.L, (std::vector<double>{6, 3, 1}));
  EXPECT_EQ(s.l(4), 0.0);

  const RankStats single = rank_stats(make_instance(1, {5}));
  EXPECT_EQ(single.P, (std::vector<double>{5}));
  EXPECT_EQ(single.L, (std::vector<double>{5}));
}

TEST(RankStats, TiesKeepOriginalIndexOrder) {
  const RankStats s = rank_stats(make_instance(3, {2, 2, 2}));
  EXPECT_EQ(s.L, (std::vector<double>{6, 4, 2}));
  EXPECT_EQ(s.job_of_rank, (std::vector<std::size_t>{0, 1, 2}));
  const RankStats mixed = rank_stats(make_instance(3, {1, 4, 1, 4}));
  EXPECT_EQ(mixed.job_of_rank, (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(RankStats, PermutationInvariantAndTotal) {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> sizes(1 + rng.below(40));
    for (double& x : sizes) x = std::floor(rng.uniform(0, 20));
    const RankStats a = rank_stats(make_instance(3, sizes));
    shuffle(std::span<double>(sizes), rng);
    const RankStats b = rank_stats(make_instance(3, sizes));
    EXPECT_EQ(a.P, b.P);
    EXPECT_EQ(a.L, b.L);
    EXPECT_DOUBLE_EQ(a.l(1), std::accumulate(sizes.begin(), sizes.end(), 0.0));
    for (std::size_t i = 1; i <= a.n(); ++i) EXPECT_EQ(a.l(i), a.p(i) + a.l(i + 1));
  }
}

TEST(RoundDownPow2, Examples) {
  EXPECT_EQ(round_down_pow2(5.0), 4.0);
  EXPECT_EQ(round_down_pow2(0.75), 0.5);
  EXPECT_EQ(round_down_pow2(0.0), 0.0);
  EXPECT_EQ(round_down_pow2(1.0), 1.0);
  EXPECT_EQ(round_down_pow2(1e-300), std::ldexp(1.0, -997));
}

TEST(RoundDownPow2, BracketsInput) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::exp(rng.uniform(-40, 40));
    const double r = round_down_pow2(x);
    int e = 0;
    EXPECT_EQ(std::frexp(r, &e), 0.5);
    EXPECT_LE(r, x);
    EXPECT_GT(2 * r, x);
  }
}

TEST(Harmonic, Values) {
  EXPECT_EQ(harmonic(1), 1.0);
  EXPECT_NEAR(harmonic(4), 25.0 / 12.0, 1e-15);
  double forward = 0.0;
  for (int i = 1; i <= 100; ++i) forward += 1.0 / i;
  EXPECT_NEAR(harmonic(100), forward, 1e-12);
  EXPECT_NEAR(harmonic(100), 5.18738, 1e-5);
}

TEST(Instance, Validation) {
  EXPECT_THROW(make_instance(0, {1}), std::invalid_argument);
  EXPECT_THROW(make_instance(2, {-1}), std::invalid_argument);
  EXPECT_THROW(make_instance(2, {NAN}), std::invalid_argument);
  EXPECT_NO_THROW(make_instance(2, {0, 0}));
  EXPECT_NO_THROW(make_instance(2, {-5.0}, true));
}

TEST(Order, UniformIsPermutation) {
  Rng rng(11);
  for (std::size_t n : {0u, 1u, 2u, 17u, 500u}) {
    const Order o = Order::uniform(n, rng, 11);
    EXPECT_TRUE(is_permutation_of_n(o.perm));
    EXPECT_EQ(o.provenance, OrderProvenance::uniform_random);
  }
  EXPECT_FALSE(is_permutation_of_n(std::vector<std::size_t>{0, 0}));
  EXPECT_THROW(Order::given({1, 2}), std::invalid_argument);
}

TEST(Order, UniformFirstPositionIsUniform) {
  Rng rng(5);
  std::vector<int> count(4, 0);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) ++count[Order::uniform(4, rng).perm[0]];
  double chi2 = 0.0;
  for (int c : count) chi2 += (c - draws / 4.0) * (c - draws / 4.0) / (draws / 4.0);
  EXPECT_LT(chi2, 16.27);  // 3 dof, p = 0.001
}

TEST(Schedule, LoadsAndMinLoad) {
  Schedule s(3, 4);
  EXPECT_EQ(s.min_load(), 0.0);
  s.assign(0, 0, 2.0);
  s.assign(1, 1, 1.5);
  EXPECT_EQ(s.min_load(), 0.0);
  s.assign(2, 2, 0.5);
  EXPECT_EQ(s.min_load(), 0.5);
  s.assign(3, 2, 4.0);
  EXPECT_EQ(s.min_load(), 1.5);
  EXPECT_EQ(s.assignment(), (std::vector<int>{0, 1, 2, 2}));
  EXPECT_THROW(s.assign(3, 0, 1.0), std::logic_error);
  Schedule fresh(2, 1);
  EXPECT_THROW(fresh.assign(0, 5, 1.0), std::out_of_range);
  EXPECT_EQ(fresh.assignment()[0], Schedule::kUnassigned);
}

TEST(Schedule, MinLoadNeverDecreasesAndMatchesRecompute) {
  Rng rng(9);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 1 + static_cast<int>(rng.below(6));
    std::vector<double> sizes(rng.below(30));
    for (double& x : sizes) x = rng.uniform01();
    const Instance inst = make_instance(m, sizes);
    const Order order = Order::uniform(inst.n(), rng);
    Schedule s(m, inst.n());
    double last = s.min_load();
    for (std::size_t pos = 0; pos < inst.n(); ++pos) {
      s.assign(pos, static_cast<int>(rng.below(static_cast<std::uint64_t>(m))), inst.sizes[order.perm[pos]]);
      EXPECT_GE(s.min_load(), last);
      last = s.min_load();
    }
    const auto loads = recompute_loads(inst, order, s);
    for (int i = 0; i < m; ++i) EXPECT_NEAR(loads[static_cast<std::size_t>(i)], s.load(i), 1e-12 * (1 + loads[static_cast<std::size_t>(i)]));
  }
}

TEST(LogDomain, AddExp) {
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
  EXPECT_EQ(log_add_exp(zero_load(true), 1.5), 1.5);
  EXPECT_EQ(log_add_exp(1000.0, 0.0), 1000.0);
  Schedule s(1, 2, true);
  s.assign(0, 0, std::log(2.0));
  s.assign(1, 0, std::log(6.0));
  EXPECT_NEAR(s.min_load(), std::log(8.0), 1e-15);
}

TEST(Random, DerivedSeedsAreStable) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
  Rng a(derive_seed(4, 4)), b(derive_seed(4, 4));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Random, BelowIsUniform) {
  Rng rng(1);
  std::vector<int> count(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) ++count[rng.below(7)];
  double chi2 = 0.0;
  for (int c : count) chi2 += (c - draws / 7.0) * (c - draws / 7.0) / (draws / 7.0);
  EXPECT_LT(chi2, 22.46);  // 6 dof, p = 0.001
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Random, ShuffleMatchesPlainFisherYates) {
  for (std::size_t n : {0u, 1u, 2u, 3u, 8u, 9u, 10u, 11u, 17u, 100u}) {
    std::vector<std::size_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = b[i] = i;
    mcover::Rng r1(99 + n), r2(99 + n);
    mcover::shuffle(std::span<std::size_t>(a), r1);
    for (std::size_t i = n; i > 1; --i) std::swap(b[i - 1], b[r2.below(i)]);
    EXPECT_EQ(a, b) << "n=" << n;
    EXPECT_EQ(r1.below(1000000), r2.below(1000000));
  }
}
