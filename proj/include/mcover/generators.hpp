#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcover/core.hpp"
#include "mcover/opt.hpp"
#include "mcover/talent.hpp"

namespace mcover {

enum class Family { figure1, proper, simple, reduction, uniform };

std::string to_string(Family family);
Family parse_family(const std::string& name);

enum class JobRole : std::uint8_t { large, medium, small };

// Bookkeeping for instances built from a Talent Contest arrival sequence: job j
// is arrival j, so the given order of the instance is the contest order.
struct ReductionLayout {
  std::size_t K = 2;
  int T = 1;
  double lambda = 2.0;
  TalentInstance contest;
  std::vector<JobRole> roles;        // by job index
  std::vector<std::size_t> rank_of;  // candidate rank (1 = best) by job index
  double medium_log_size = 0.0;      // log of one medium job
  double small_log_total = 0.0;      // log of all small jobs together (-inf if none)
};

struct GeneratedInstance {
  Instance instance;
  // In the instance's domain: a logarithm for log-domain instances.
  std::optional<double> known_opt;
  // Machine per job reaching known_opt, when the generator builds one.
  std::optional<std::vector<int>> witness;
  std::optional<Taxonomy> taxonomy_hint;
  Family family = Family::uniform;
  nlohmann::json params = nlohmann::json::object();
  // The family's adversarial arrival order (identity for the listed order).
  std::optional<Order> given_order;
  std::optional<ReductionLayout> reduction;
};

// m unit jobs followed by m-1 jobs of size m; OPT = m.
GeneratedInstance gen_figure1(int m);

// Proper instance of degree d: k = m - 2^d large jobs in [opt0, 2 opt0] and
// n - k small jobs packed into 2^d groups of total exactly opt0 each, so
// OPT = opt0. Throws std::invalid_argument when the parameters cannot yield a
// proper instance (too few machines for the degree, n < 8k, n too small for the
// small-job bound).
GeneratedInstance gen_proper(int m, int d, std::size_t n, std::uint64_t seed, double opt0 = 1.0);

// Simple instance with known OPT for the given reason.
GeneratedInstance gen_simple(int m, SimpleReason reason, std::uint64_t seed, double opt0 = 1.0);

// n i.i.d. uniform [0, 1] sizes.
GeneratedInstance gen_uniform(std::size_t n, int m, std::uint64_t seed);

struct SteepValuations {
  std::vector<double> exponents;  // valuation_i = exp(exponents[i])
  double lambda = 1.0;
  double log_mu = 1.0;
  std::size_t attempts = 0;
};

// One raw draw: v_i uniform on [0, n], exponent -v_i log(mu) with
// mu = lambda^(n(n-1)/eps').
SteepValuations draw_steep_candidates(std::size_t n, double lambda, double eps_prime, Rng& rng);
// Distinct exponents pairwise at least log(lambda) apart.
bool is_lambda_steep(const std::vector<double>& exponents, double lambda);
// Redraws until steep; throws std::runtime_error after 100 attempts.
SteepValuations gen_lambda_steep(std::size_t n, double lambda, double eps_prime, std::uint64_t seed);

// Lemma-9 style instance: m = (K-1)T + 1 machines, each candidate's T
// arrivals become T jobs of its valuation (log domain). The top K-1
// candidates give the large jobs, the K-th the medium ones, the rest are small.
// Throws std::invalid_argument for lambda <= T or n_candidates < K.
GeneratedInstance gen_reduction_instance(std::size_t K, int T, double lambda, std::uint64_t seed,
                                         std::size_t n_candidates = 0, double eps_prime = 0.1);

}  // namespace mcover
