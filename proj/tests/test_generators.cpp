#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcover/generators.hpp"
#include "mcover/schedulers.hpp"
#include "oracles.hpp"

using namespace mcover;

namespace {

// Loads of the witness assignment, summed independently of Schedule.
std::vector<double> witness_loads(const GeneratedInstance& g) {
  const bool log = g.instance.log_domain;
  std::vector<double> load(static_cast<std::size_t>(g.instance.m), log ? -INFINITY : 0.0);
  for (std::size_t j = 0; j < g.instance.n(); ++j) {
    double& l = load[static_cast<std::size_t>((*g.witness)[j])];
    const double s = g.instance.sizes[j];
    if (!log) {
      l += s;
    } else if (std::isinf(l)) {
      l = s;
    } else {
      const double hi = std::max(l, s), lo = std::min(l, s);
      l = hi + std::log1p(std::exp(lo - hi));
    }
  }
  return load;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

TEST(Figure1, Shape) {
  const GeneratedInstance g3 = gen_figure1(3);
  EXPECT_EQ(g3.instance.sizes, (std::vector<double>{1, 1, 1, 3, 3}));
  EXPECT_EQ(*g3.known_opt, 3.0);
  const GeneratedInstance g2 = gen_figure1(2);
  EXPECT_EQ(g2.instance.sizes, (std::vector<double>{1, 1, 2}));
  EXPECT_EQ(*g2.known_opt, 2.0);
  EXPECT_THROW(gen_figure1(1), std::invalid_argument);
}

TEST(Figure1, OptConfirmedAndGreedyGetsOne) {
  for (int m = 2; m <= 5; ++m) {
    const GeneratedInstance g = gen_figure1(m);
    EXPECT_EQ(oracle::naive_opt(m, g.instance.sizes), *g.known_opt);
    EXPECT_EQ(min_of(witness_loads(g)), *g.known_opt);
  }
  for (int m = 2; m <= 64; ++m) {
    const GeneratedInstance g = gen_figure1(m);
    EXPECT_EQ(greedy_schedule(g.instance, *g.given_order).min_load(), 1.0);
  }
}

TEST(Proper, RejectsSimpleParameters) {
  EXPECT_THROW(gen_proper(16, 2, 1000, 1), std::invalid_argument);
  EXPECT_THROW(gen_proper(256, 0, 100, 1), std::invalid_argument);  // n < 8k
  EXPECT_THROW(gen_proper(256, 5, 100000, 1), std::invalid_argument);
}

TEST(Proper, RoundTripsAndWitnessReachesOpt) {
  struct Case { int m, d; std::size_t n; };
  for (Case c : {Case{256, 0, 4096}, Case{1024, 1, 10000}, Case{4096, 3, 40000}, Case{10000, 3, 80000}}) {
    const GeneratedInstance g = gen_proper(c.m, c.d, c.n, 42);
    const Taxonomy t = classify(g.instance, *g.known_opt);
    EXPECT_TRUE(t.proper());
    EXPECT_EQ(t.d, c.d);
    EXPECT_EQ(t.k, static_cast<std::size_t>(c.m - (1 << c.d)));
    EXPECT_EQ(g.instance.n(), c.n);
    EXPECT_NEAR(min_of(witness_loads(g)), *g.known_opt, 1e-9);
    // Some machine holds no large job, so OPT <= L_small / 2^d = OPT_0.
    const RankStats st = rank_stats(g.instance);
    EXPECT_GE(st.p(t.k), *g.known_opt);
    EXPECT_NEAR(st.l(t.k + 1), (1 << c.d) * *g.known_opt, 1e-9);
  }
}

TEST(Proper, DeterministicBySeed) {
  EXPECT_EQ(gen_proper(256, 0, 4096, 9).instance.sizes, gen_proper(256, 0, 4096, 9).instance.sizes);
  EXPECT_NE(gen_proper(256, 0, 4096, 9).instance.sizes, gen_proper(256, 0, 4096, 10).instance.sizes);
}

TEST(Proper, SmallJobsCannotLiftOpt) {
  const GeneratedInstance g = gen_proper(256, 0, 4096, 1);
  const double opt0 = *g.known_opt;
  const Taxonomy t = classify(g.instance, opt0);
  EXPECT_LE(rank_stats(g.instance).l(t.k + 1) / (g.instance.m - t.k), opt0 + 1e-12);
}

TEST(Simple, EachReasonClassifies) {
  for (int m : {4, 16, 64}) {
    for (SimpleReason r : {SimpleReason::fewer_jobs_than_machines, SimpleReason::many_large_jobs,
                           SimpleReason::few_large_jobs}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GeneratedInstance g = gen_simple(m, r, seed);
        EXPECT_EQ(g.taxonomy_hint->reason, r);
        if (g.witness) EXPECT_NEAR(min_of(witness_loads(g)), *g.known_opt, 1e-9);
      }
    }
  }
}

TEST(Simple, KnownOptMatchesExactOracle) {
  // Tiny cases where enumeration is feasible.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GeneratedInstance g = gen_simple(3, SimpleReason::fewer_jobs_than_machines, seed);
    EXPECT_EQ(oracle::naive_opt(3, g.instance.sizes), 0.0);
  }
}

TEST(Uniform, Basics) {
  EXPECT_EQ(gen_uniform(0, 3, 1).instance.n(), 0u);
  EXPECT_EQ(gen_uniform(10, 3, 5).instance.sizes, gen_uniform(10, 3, 5).instance.sizes);
  for (double s : gen_uniform(1000, 2, 3).instance.sizes) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_FALSE(gen_uniform(10, 3, 5).known_opt.has_value());
}

TEST(Steep, SingleCandidateAndGaps) {
  EXPECT_EQ(gen_lambda_steep(1, 2.0, 0.1, 1).exponents.size(), 1u);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SteepValuations v = gen_lambda_steep(6, 3.0, 0.1, seed);
    std::vector<double> e = v.exponents;
    std::sort(e.begin(), e.end());
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_GE(e[i] - e[i - 1], std::log(3.0));
  }
  EXPECT_TRUE(is_lambda_steep({0.0, 1.0, 2.0}, std::exp(1.0)));
  EXPECT_FALSE(is_lambda_steep({0.0, 0.5}, std::exp(1.0)));
  EXPECT_FALSE(is_lambda_steep({1.0, 1.0}, 1.0));
}

TEST(Steep, FailureRateBelowEpsPrime) {
  Rng rng(4);
  int failures = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    if (!is_lambda_steep(draw_steep_candidates(5, 2.0, 0.1, rng).exponents, 2.0)) ++failures;
  }
  EXPECT_LT(failures / double(draws), 0.1);
}

TEST(Reduction, Shapes) {
  const GeneratedInstance g = gen_reduction_instance(3, 2, 10.0, 7);
  EXPECT_EQ(g.instance.m, 5);
  EXPECT_TRUE(g.instance.log_domain);
  const auto& roles = g.reduction->roles;
  EXPECT_EQ(std::count(roles.begin(), roles.end(), JobRole::large), 4);
  EXPECT_EQ(std::count(roles.begin(), roles.end(), JobRole::medium), 2);

  const GeneratedInstance two = gen_reduction_instance(2, 1, 2.0, 1, 2);
  EXPECT_EQ(two.instance.m, 2);
  EXPECT_EQ(std::count(two.reduction->roles.begin(), two.reduction->roles.end(), JobRole::large), 1);
  EXPECT_DOUBLE_EQ(*two.known_opt, two.reduction->medium_log_size);

  EXPECT_THROW(gen_reduction_instance(3, 2, 2.0, 1), std::invalid_argument);
  EXPECT_THROW(gen_reduction_instance(1, 2, 10.0, 1), std::invalid_argument);
}

TEST(Reduction, WitnessAndLemmaQuantities) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const GeneratedInstance g = gen_reduction_instance(3 + seed % 3, 1 + static_cast<int>(seed % 4), 10.0, seed);
    const ReductionLayout& r = *g.reduction;
    const double opt = *g.known_opt;
    EXPECT_NEAR(min_of(witness_loads(g)), opt, 1e-9);
    // Medium job at most OPT/T; small total at most OPT/(lambda - 1).
    EXPECT_LE(r.medium_log_size, opt - std::log(static_cast<double>(r.T)) + 1e-12);
    if (!std::isinf(r.small_log_total)) EXPECT_LE(r.small_log_total, opt - std::log(r.lambda - 1.0));
    // Job j is arrival j of the contest.
    for (std::size_t j = 0; j < g.instance.n(); ++j) {
      EXPECT_EQ(g.instance.sizes[j], r.contest.valuations[r.contest.arrivals[j].candidate]);
    }
  }
  EXPECT_EQ(gen_reduction_instance(3, 2, 10.0, 5).instance.sizes,
            gen_reduction_instance(3, 2, 10.0, 5).instance.sizes);
}

TEST(Family, Names) {
  for (Family f : {Family::figure1, Family::proper, Family::simple, Family::reduction, Family::uniform}) {
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  EXPECT_THROW(parse_family("nope"), std::invalid_argument);
}
