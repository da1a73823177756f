#include "mcover/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mcover/random.hpp"

namespace mcover {

std::string to_string(Family family) {
  switch (family) {
    case Family::figure1: return "figure1";
    case Family::proper: return "proper";
    case Family::simple: return "simple";
    case Family::reduction: return "reduction";
    case Family::uniform: return "uniform";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::figure1, Family::proper, Family::simple, Family::reduction, Family::uniform}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

GeneratedInstance gen_figure1(int m) {
  if (m < 2) throw std::invalid_argument("figure1 family needs m >= 2");
  std::vector<double> sizes(static_cast<std::size_t>(m), 1.0);
  sizes.insert(sizes.end(), static_cast<std::size_t>(m - 1), static_cast<double>(m));
  GeneratedInstance g;
  g.instance = make_instance(m, std::move(sizes));
  g.known_opt = m;
  // Each large job alone, all unit jobs together on the last machine.
  std::vector<int> witness(g.instance.n(), m - 1);
  for (int i = 0; i < m - 1; ++i) witness[static_cast<std::size_t>(m + i)] = i;
  g.witness = std::move(witness);
  g.taxonomy_hint = classify(g.instance, m);
  g.family = Family::figure1;
  g.params = {{"m", m}};
  g.given_order = Order::identity(g.instance.n());
  return g;
}

namespace {

struct Packed {
  std::vector<double> sizes;
  std::vector<int> machine;
};

// `count` positive sizes summing to `total`, log-uniform weights in [1, 2].
std::vector<double> split_total(double total, std::size_t count, Rng& rng) {
  std::vector<double> w(count);
  for (double& x : w) x = std::exp(rng.uniform(0.0, std::log(2.0)));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  double used = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    w[i] = total * w[i] / sum;
    used += w[i];
  }
  w[count - 1] = total - used;  // top-up so the group sums to total
  return w;
}

// k large jobs (one per machine 0..k-1) plus `groups` groups of small jobs,
// group g on machine k+g, each group summing to group_total.
void add_small_groups(Packed& out, int first_machine, int groups, std::size_t small_jobs,
                      double group_total, Rng& rng) {
  const auto ug = static_cast<std::size_t>(groups);
  for (std::size_t g = 0; g < ug; ++g) {
    const std::size_t count = small_jobs / ug + (g < small_jobs % ug ? 1 : 0);
    for (double s : split_total(group_total, count, rng)) {
      out.sizes.push_back(s);
      out.machine.push_back(first_machine + static_cast<int>(g));
    }
  }
}

GeneratedInstance finish(Packed packed, int m, double opt, Family family, Rng& rng) {
  // Shuffle the listing so the instance carries no structure in its order.
  std::vector<std::size_t> perm(packed.sizes.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(perm), rng);
  std::vector<double> sizes(perm.size());
  std::vector<int> witness(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    sizes[i] = packed.sizes[perm[i]];
    witness[i] = packed.machine[perm[i]];
  }
  GeneratedInstance g;
  g.instance = make_instance(m, std::move(sizes));
  g.known_opt = opt;
  g.witness = std::move(witness);
  g.taxonomy_hint = classify(g.instance, opt);
  g.family = family;
  return g;
}

double max_small_for(int m, double opt) { return large_job_threshold(m, opt); }

void check_small_sizes(const Packed& packed, std::size_t first_small, double limit) {
  for (std::size_t i = first_small; i < packed.sizes.size(); ++i) {
    if (!(packed.sizes[i] > 0.0) || packed.sizes[i] > limit) {
      throw std::invalid_argument(
          "too few small jobs per group: small sizes would exceed OPT/(100 m^(1/4))");
    }
  }
}

}  // namespace

GeneratedInstance gen_proper(int m, int d, std::size_t n, std::uint64_t seed, double opt0) {
  if (m < 2) throw std::invalid_argument("proper instances need m >= 2");
  if (d < 0 || d > max_degree(m)) throw std::invalid_argument("degree out of range");
  if (!(opt0 > 0.0)) throw std::invalid_argument("opt0 must be positive");
  const long long groups = 1LL << d;
  if (groups >= m) throw std::invalid_argument("2^d must be below m");
  const auto k = static_cast<std::size_t>(m - groups);
  const double few_large_limit = m - std::pow(static_cast<double>(m), 0.75) / 50.0;
  if (static_cast<double>(k) <= few_large_limit) {
    throw std::invalid_argument("k = m - 2^d is at most m - m^(3/4)/50, which is simple: m too small "
                                "for this degree");
  }
  if (n < 8 * k) throw std::invalid_argument("proper family needs n >= 8k");

  Rng rng(seed);
  Packed packed;
  for (std::size_t i = 0; i < k; ++i) {
    packed.sizes.push_back(rng.uniform(opt0, 2.0 * opt0));
    packed.machine.push_back(static_cast<int>(i));
  }
  add_small_groups(packed, static_cast<int>(k), static_cast<int>(groups), n - k, opt0, rng);
  check_small_sizes(packed, k, max_small_for(m, opt0));

  GeneratedInstance g = finish(std::move(packed), m, opt0, Family::proper, rng);
  if (!g.taxonomy_hint->proper() || g.taxonomy_hint->d != d) {
    throw std::logic_error("generated instance does not classify as proper(d)");
  }
  g.params = {{"m", m}, {"d", d}, {"n", n}, {"seed", seed}, {"opt0", opt0}};
  return g;
}

GeneratedInstance gen_simple(int m, SimpleReason reason, std::uint64_t seed, double opt0) {
  if (m < 1) throw std::invalid_argument("simple instances need m >= 1");
  Rng rng(seed);
  const double quarter = std::pow(static_cast<double>(m), 0.25);
  GeneratedInstance g;
  switch (reason) {
    case SimpleReason::fewer_jobs_than_machines: {
      const std::size_t n = m > 1 ? rng.below(static_cast<std::uint64_t>(m)) : 0;
      std::vector<double> sizes(n);
      for (double& s : sizes) s = rng.uniform(0.0, opt0);
      g.instance = make_instance(m, std::move(sizes));
      g.known_opt = 0.0;
      g.taxonomy_hint = classify(g.instance, 0.0);
      g.family = Family::simple;
      break;
    }
    case SimpleReason::many_large_jobs: {
      // m equal large jobs plus m equal-sum small groups: OPT = large + group.
      const double large = rng.uniform(opt0, 2.0 * opt0);
      const double group = rng.uniform(0.05, 1.0) * opt0;
      const double opt = large + group;
      const auto per_group =
          static_cast<std::size_t>(std::ceil(2.0 * 100.0 * quarter * group / opt)) + 1;
      Packed packed;
      for (int i = 0; i < m; ++i) {
        packed.sizes.push_back(large);
        packed.machine.push_back(i);
      }
      add_small_groups(packed, 0, m, per_group * static_cast<std::size_t>(m), group, rng);
      check_small_sizes(packed, static_cast<std::size_t>(m), max_small_for(m, opt));
      g = finish(std::move(packed), m, opt, Family::simple, rng);
      break;
    }
    case SimpleReason::few_large_jobs: {
      const double limit = m - std::pow(static_cast<double>(m), 0.75) / 50.0;
      const auto k_max = static_cast<std::size_t>(std::max(0.0, std::floor(limit)));
      const std::size_t k = std::min<std::size_t>(rng.below(k_max + 1), static_cast<std::size_t>(m - 1));
      const int groups = m - static_cast<int>(k);
      const auto per_group = static_cast<std::size_t>(std::ceil(200.0 * quarter)) + 1;
      Packed packed;
      for (std::size_t i = 0; i < k; ++i) {
        packed.sizes.push_back(rng.uniform(opt0, 2.0 * opt0));
        packed.machine.push_back(static_cast<int>(i));
      }
      add_small_groups(packed, static_cast<int>(k), groups,
                       per_group * static_cast<std::size_t>(groups), opt0, rng);
      check_small_sizes(packed, k, max_small_for(m, opt0));
      g = finish(std::move(packed), m, opt0, Family::simple, rng);
      break;
    }
    case SimpleReason::none:
      throw std::invalid_argument("gen_simple needs a simple reason");
  }
  if (g.taxonomy_hint->kind != InstanceKind::simple || g.taxonomy_hint->reason != reason) {
    throw std::logic_error("generated instance does not classify with the requested reason");
  }
  g.params = {{"m", m}, {"reason", to_string(reason)}, {"seed", seed}, {"opt0", opt0}};
  return g;
}

GeneratedInstance gen_uniform(std::size_t n, int m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> sizes(n);
  for (double& s : sizes) s = rng.uniform01();
  GeneratedInstance g;
  g.instance = make_instance(m, std::move(sizes));
  g.family = Family::uniform;
  g.params = {{"n", n}, {"m", m}, {"seed", seed}};
  return g;
}

SteepValuations draw_steep_candidates(std::size_t n, double lambda, double eps_prime, Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one candidate");
  if (!(lambda >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
  if (!(eps_prime > 0.0 && eps_prime < 1.0)) throw std::invalid_argument("eps' must lie in (0, 1)");
  SteepValuations out;
  out.lambda = lambda;
  // lambda = 1 makes steepness vacuous; any positive log(mu) keeps values distinct.
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  out.log_mu = lambda > 1.0 && n > 1 ? pairs / eps_prime * std::log(lambda) : 1.0;
  out.exponents.resize(n);
  for (double& e : out.exponents) e = -rng.uniform(0.0, static_cast<double>(n)) * out.log_mu;
  out.attempts = 1;
  return out;
}

bool is_lambda_steep(const std::vector<double>& exponents, double lambda) {
  std::vector<double> sorted = exponents;
  std::sort(sorted.begin(), sorted.end());
  const double gap = std::log(lambda);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) return false;  // valuations must be distinct
    if (sorted[i] - sorted[i - 1] < gap) return false;
  }
  return true;
}

SteepValuations gen_lambda_steep(std::size_t n, double lambda, double eps_prime, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t attempt = 1; attempt <= 100; ++attempt) {
    SteepValuations v = draw_steep_candidates(n, lambda, eps_prime, rng);
    if (is_lambda_steep(v.exponents, lambda)) {
      v.attempts = attempt;
      return v;
    }
  }
  throw std::runtime_error("no lambda-steep valuation after 100 attempts");
}

GeneratedInstance gen_reduction_instance(std::size_t K, int T, double lambda, std::uint64_t seed,
                                         std::size_t n_candidates, double eps_prime) {
  if (K < 2) throw std::invalid_argument("reduction needs K >= 2");
  if (T < 1) throw std::invalid_argument("reduction needs T >= 1");
  if (!(lambda > T)) throw std::invalid_argument("reduction needs lambda > T");
  if (n_candidates == 0) n_candidates = K + 2;
  if (n_candidates < K) throw std::invalid_argument("need at least K candidates");

  const SteepValuations steep =
      gen_lambda_steep(n_candidates, lambda, eps_prime, derive_seed(seed, 0));
  Rng rng(derive_seed(seed, 1));

  ReductionLayout layout;
  layout.K = K;
  layout.T = T;
  layout.lambda = lambda;
  layout.contest.n = n_candidates;
  layout.contest.T = T;
  layout.contest.K = K;
  layout.contest.valuations = steep.exponents;
  layout.contest.arrivals = random_arrivals(n_candidates, T, rng);
  layout.contest.validate();

  const std::vector<std::size_t> rank = layout.contest.ranks();
  const std::size_t jobs = layout.contest.arrivals.size();
  std::vector<double> sizes(jobs);
  layout.roles.resize(jobs);
  layout.rank_of.resize(jobs);
  layout.small_log_total = zero_load(true);
  for (std::size_t j = 0; j < jobs; ++j) {
    const std::size_t c = layout.contest.arrivals[j].candidate;
    sizes[j] = steep.exponents[c];
    layout.rank_of[j] = rank[c];
    if (rank[c] < K) {
      layout.roles[j] = JobRole::large;
    } else if (rank[c] == K) {
      layout.roles[j] = JobRole::medium;
    } else {
      layout.roles[j] = JobRole::small;
      layout.small_log_total = log_add_exp(layout.small_log_total, sizes[j]);
    }
  }
  layout.medium_log_size = steep.exponents[layout.contest.target()];
  const double weakest_large = steep.exponents[layout.contest.candidate_of_rank(K - 1)];

  // Witness: one large job per machine, mediums and smalls together on the
  // last machine. No schedule can do better: some machine gets no large job.
  const double cover = log_add_exp(std::log(static_cast<double>(T)) + layout.medium_log_size,
                                   layout.small_log_total);
  if (weakest_large < cover) {
    throw std::invalid_argument("valuations not steep enough for the one-large-job-per-machine witness");
  }
  const int m = static_cast<int>((K - 1) * static_cast<std::size_t>(T) + 1);
  std::vector<int> witness(jobs, m - 1);
  int next_machine = 0;
  for (std::size_t j = 0; j < jobs; ++j) {
    if (layout.roles[j] == JobRole::large) witness[j] = next_machine++;
  }

  GeneratedInstance g;
  g.instance = make_instance(m, std::move(sizes), true);
  g.known_opt = cover;
  g.witness = std::move(witness);
  g.family = Family::reduction;
  g.params = {{"K", K},           {"T", T},         {"lambda", lambda},       {"seed", seed},
              {"n_candidates", n_candidates}, {"eps_prime", eps_prime}, {"log_mu", steep.log_mu}};
  g.given_order = Order::identity(jobs);
  g.reduction = std::move(layout);
  return g;
}

}  // namespace mcover
