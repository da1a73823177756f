#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mcover/opt.hpp"
#include "mcover/rom.hpp"
#include "oracles.hpp"

using namespace mcover;

namespace {

std::vector<double> random_sizes(Rng& rng, std::size_t n, bool integral) {
  std::vector<double> sizes(n);
  for (double& x : sizes) x = integral ? static_cast<double>(rng.below(10)) : rng.uniform(0, 10);
  return sizes;
}

double witness_min_load(const OptResult& r) { return r.witness->min_load(); }

}  // namespace

TEST(OptExact, Examples) {
  EXPECT_EQ(opt_exact(make_instance(2, {3, 3, 2, 2, 2})).value, 6.0);
  EXPECT_EQ(oracle::naive_opt(2, {3, 3, 2, 2, 2}), 6.0);
  EXPECT_EQ(opt_exact(make_instance(3, {1, 1})).value, 0.0);
  EXPECT_EQ(opt_exact(make_instance(3, {1, 1, 1, 3, 3})).value, 3.0);
  EXPECT_EQ(opt_exact(make_instance(1, {})).value, 0.0);
  EXPECT_EQ(opt_exact(make_instance(1, {2, 5})).value, 7.0);
}

TEST(OptExact, MatchesFullEnumeration) {
  Rng rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const int m = 1 + static_cast<int>(rng.below(4));
    const std::size_t n = rng.below(m == 4 ? 9 : 10);
    const std::vector<double> sizes = random_sizes(rng, n, rep % 2 == 0);
    const OptResult r = opt_exact(make_instance(m, sizes));
    ASSERT_EQ(r.method, OptMethod::exact);
    const double expected = oracle::naive_opt(m, sizes);
    EXPECT_NEAR(r.value, expected, 1e-9 * std::max(1.0, expected)) << "m=" << m << " n=" << n;
    if (rep % 2 == 0) EXPECT_EQ(r.value, expected);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_NEAR(witness_min_load(r), r.value, 1e-9 * std::max(1.0, r.value));
  }
}

TEST(OptExact, PermutationInvariantAndBelowUpperBound) {
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 2 + static_cast<int>(rng.below(4));
    std::vector<double> sizes = random_sizes(rng, 4 + rng.below(12), false);
    const double a = opt_exact(make_instance(m, sizes)).value;
    shuffle(std::span<double>(sizes), rng);
    const Instance shuffled = make_instance(m, sizes);
    EXPECT_EQ(opt_exact(shuffled).value, a);
    EXPECT_LE(a, opt_upper_bound(shuffled) * (1 + 1e-12));
  }
}

TEST(OptExact, BudgetExhaustionFallsBackToUpperBound) {
  Rng rng(8);
  const Instance inst = make_instance(5, random_sizes(rng, 30, false));
  const OptResult r = opt_exact(inst, 10);
  EXPECT_EQ(r.method, OptMethod::upper_bound_only);
  EXPECT_DOUBLE_EQ(r.value, opt_upper_bound(inst));
  EXPECT_FALSE(r.witness.has_value());
}

TEST(OptExact, RoundingLosesAtMostHalf) {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 1 + static_cast<int>(rng.below(3));
    std::vector<double> sizes = random_sizes(rng, rng.below(10), false);
    const double opt = opt_exact(make_instance(m, sizes)).value;
    for (double& x : sizes) x = round_down_pow2(x);
    EXPECT_GE(opt_exact(make_instance(m, sizes)).value, opt / 2);
  }
}

TEST(OptUpperBound, Examples) {
  EXPECT_EQ(opt_upper_bound(make_instance(2, {3, 3, 2, 2, 2})), 6.0);
  EXPECT_EQ(opt_upper_bound(make_instance(3, {1, 1, 1, 3, 3})), 3.0);
  EXPECT_EQ(opt_upper_bound(make_instance(1, {})), 0.0);
}

TEST(GreedyLowerBounds, Examples) {
  EXPECT_EQ(greedy_lower_bounds(rank_stats(make_instance(3, {1, 1, 1, 3, 3})), 3), 1.0);
  EXPECT_EQ(greedy_lower_bounds(rank_stats(make_instance(2, {4, 4})), 2), 4.0);
  EXPECT_EQ(greedy_lower_bounds(rank_stats(make_instance(2, {10, 1, 1, 1, 1})), 2), 1.0);
  EXPECT_EQ(oracle::naive_greedy(2, {10, 1, 1, 1, 1}), (std::vector<int>{0, 1, 1, 1, 1}));
  EXPECT_EQ(greedy_lower_bounds(rank_stats(make_instance(3, {5})), 3), 0.0);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(make_instance(4, {1, 2, 3}), 0.0).reason, SimpleReason::fewer_jobs_than_machines);

  std::vector<double> sizes(16, 100.0);
  sizes.insert(sizes.end(), 100, 1e-6);
  const Taxonomy many = classify(make_instance(16, sizes), 100.0);
  EXPECT_EQ(many.k, 16u);
  EXPECT_EQ(many.reason, SimpleReason::many_large_jobs);
  EXPECT_DOUBLE_EQ(many.large_threshold, 0.5);

  std::vector<double> few(14, 10.0);
  few.insert(few.end(), 200, 0.001);
  const Taxonomy t = classify(make_instance(16, few), 1.0);
  EXPECT_EQ(t.k, 14u);
  EXPECT_EQ(t.kind, InstanceKind::simple);
  EXPECT_EQ(t.reason, SimpleReason::few_large_jobs);

  EXPECT_THROW(classify(make_instance(2, {1}), -1.0), std::invalid_argument);
}

TEST(Classify, ProperDegree) {
  // 255 large jobs on 256 machines: 255 > 256 - 64/50.
  std::vector<double> sizes(255, 1.5);
  sizes.insert(sizes.end(), 4000, 1e-4);
  const Taxonomy t = classify(make_instance(256, sizes), 0.1);
  EXPECT_TRUE(t.proper());
  EXPECT_EQ(t.k, 255u);
  EXPECT_EQ(t.d, 0);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(5), 3);
  EXPECT_EQ(ceil_log2(8), 3);
  EXPECT_EQ(max_degree(16), 3);
  EXPECT_EQ(max_degree(2), 1);
  EXPECT_EQ(max_degree(10000), 10);
}

TEST(Classify, SmallJobsCoverTheFreeMachines) {
  // L_{k+1} >= (m - k) OPT whenever k < m.
  Rng rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 2 + static_cast<int>(rng.below(3));
    const Instance inst = make_instance(m, random_sizes(rng, m + rng.below(6), false));
    const double opt = opt_exact(inst).value;
    const Taxonomy t = classify(inst, opt);
    if (t.k >= static_cast<std::size_t>(m)) continue;
    EXPECT_GE(rank_stats(inst).l(t.k + 1), (m - static_cast<double>(t.k)) * opt * (1 - 1e-12));
  }
}

TEST(ExactRom, GreedyExamples) {
  const SchedulerSpec greedy{Algo::greedy, std::nullopt};
  EXPECT_EQ(exact_rom_value(make_instance(2, {1, 1}), greedy).value, 1.0);
  // Orders with the 2 last end at loads {3, 1}; the other four give {2, 2}.
  const RomValue v = exact_rom_value(make_instance(2, {2, 1, 1}), greedy);
  EXPECT_DOUBLE_EQ(v.value, 10.0 / 6.0);
  EXPECT_EQ(v.orders, 6u);
  EXPECT_TRUE(v.exact);
  EXPECT_EQ(exact_rom_value(make_instance(1, {1, 2, 4}), greedy).value, 7.0);
  EXPECT_EQ(exact_rom_value(make_instance(1, {1, 2, 4}), {Algo::alg1, std::nullopt}).value, 7.0);
  EXPECT_THROW(exact_rom_value(make_instance(2, std::vector<double>(9, 1.0)), greedy),
               std::invalid_argument);
}

TEST(ExactRom, GreedyMatchesHandEnumeration) {
  // m=2, sizes {3,1,1}: the 3 is alone unless it arrives first... enumerate.
  const std::vector<double> sizes{3, 1, 1};
  std::vector<std::size_t> perm{0, 1, 2};
  double sum = 0.0;
  int count = 0;
  do {
    std::vector<double> arriving;
    for (auto j : perm) arriving.push_back(sizes[j]);
    const auto machine = oracle::naive_greedy(2, arriving);
    double load[2] = {0, 0};
    for (std::size_t i = 0; i < 3; ++i) load[machine[i]] += arriving[i];
    sum += std::min(load[0], load[1]);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_DOUBLE_EQ(exact_rom_value(make_instance(2, sizes), {Algo::greedy, std::nullopt}).value,
                   sum / count);
}

TEST(ExactRom, Algorithm1EnumerationAgreesWithSampling) {
  const Instance inst = make_instance(3, {5, 3, 2, 2, 1, 1, 0.5});
  const RomValue exact = exact_rom_value(inst, {Algo::alg1, std::nullopt});
  ASSERT_TRUE(exact.exact);
  double sum = 0.0;
  const int trials = 200000;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(77, static_cast<std::uint64_t>(i)));
    const Order order = Order::uniform(inst.n(), rng);
    const auto r = oracle::naive_alg1(3, oracle::arriving_sizes(inst, order), rng);
    sum += *std::min_element(r.load.begin(), r.load.end());
  }
  // Loose: the sample mean is within ~4 standard errors (sd <= 5).
  EXPECT_NEAR(sum / trials, exact.value, 4 * 5 / std::sqrt(double(trials)));
}
