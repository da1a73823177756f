#include "mcover/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mcover/random.hpp"

namespace mcover {

void Instance::validate() const {
  if (m < 1) throw std::invalid_argument("instance needs at least one machine");
  for (double s : sizes) {
    if (std::isnan(s)) throw std::invalid_argument("job size is NaN");
    if (!log_domain && s < 0.0) {
      throw std::invalid_argument("job size must be non-negative, got " + std::to_string(s));
    }
  }
}

Instance make_instance(int m, std::vector<double> sizes, bool log_domain) {
  Instance instance{m, std::move(sizes), log_domain};
  instance.validate();
  return instance;
}

Order Order::identity(std::size_t n) {
  Order order;
  order.perm.resize(n);
  std::iota(order.perm.begin(), order.perm.end(), std::size_t{0});
  return order;
}

Order Order::uniform(std::size_t n, Rng& rng, std::uint64_t seed) {
  Order order = identity(n);
  shuffle(std::span<std::size_t>(order.perm), rng);
  order.provenance = OrderProvenance::uniform_random;
  order.seed = seed;
  return order;
}

Order Order::given(std::vector<std::size_t> perm) {
  if (!is_permutation_of_n(perm)) throw std::invalid_argument("order is not a permutation");
  Order order;
  order.perm = std::move(perm);
  return order;
}

bool is_permutation_of_n(std::span<const std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t j : perm) {
    if (j >= perm.size() || seen[j]) return false;
    seen[j] = true;
  }
  return true;
}

double RankStats::l(std::size_t i) const {
  if (i == L.size() + 1) return zero_load(log_domain);
  return L.at(i - 1);
}

std::vector<std::size_t> ranked_jobs(std::span<const double> sizes) {
  std::vector<std::size_t> idx(sizes.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  return idx;
}

RankStats rank_stats(const Instance& instance) {
  RankStats stats;
  stats.log_domain = instance.log_domain;
  stats.job_of_rank = ranked_jobs(instance.sizes);
  const std::size_t n = instance.n();
  stats.P.resize(n);
  stats.L.resize(n);
  for (std::size_t r = 0; r < n; ++r) stats.P[r] = instance.sizes[stats.job_of_rank[r]];
  double suffix = zero_load(instance.log_domain);
  for (std::size_t r = n; r-- > 0;) {
    suffix = add_load(suffix, stats.P[r], instance.log_domain);
    stats.L[r] = suffix;
  }
  return stats;
}

double round_down_pow2(double size) {
  if (!(size > 0.0)) return 0.0;
  if (std::isinf(size)) return size;
  if (size >= std::numeric_limits<double>::min()) {
    // Normal numbers: clearing the mantissa leaves the leading power of two.
    return std::bit_cast<double>(std::bit_cast<std::uint64_t>(size) & 0xFFF0'0000'0000'0000ULL);
  }
  int exponent = 0;
  std::frexp(size, &exponent);  // size = f * 2^exponent, f in [0.5, 1)
  return std::ldexp(1.0, exponent - 1);
}

double harmonic(int m) {
  if (m < 1) throw std::invalid_argument("harmonic number needs m >= 1");
  double h = 0.0;
  for (int i = m; i >= 1; --i) h += 1.0 / i;
  return h;
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(b) && b < 0) return a;
  return a + std::log1p(std::exp(b - a));
}

double add_load(double load, double size, bool log_domain) {
  return log_domain ? log_add_exp(load, size) : load + size;
}

Schedule::Schedule(int m, std::size_t arrivals, bool log_domain)
    : assignment_(arrivals, kUnassigned),
      loads_(static_cast<std::size_t>(m), zero_load(log_domain)),
      log_domain_(log_domain) {}

void Schedule::assign(std::size_t position, int machine, double size) {
  auto& slot = assignment_.at(position);
  if (slot != kUnassigned) throw std::logic_error("arrival scheduled twice");
  if (machine < 0 || machine >= machines()) throw std::out_of_range("no such machine");
  slot = machine;
  auto& load = loads_[static_cast<std::size_t>(machine)];
  load = add_load(load, size, log_domain_);
}

double Schedule::min_load() const {
  if (loads_.empty()) return zero_load(log_domain_);
  return *std::min_element(loads_.begin(), loads_.end());
}

std::vector<double> recompute_loads(const Instance& instance, const Order& order,
                                    const Schedule& schedule) {
  std::vector<double> loads(static_cast<std::size_t>(schedule.machines()),
                            zero_load(instance.log_domain));
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int machine = schedule.assignment().at(pos);
    if (machine == Schedule::kUnassigned) continue;
    auto& load = loads[static_cast<std::size_t>(machine)];
    load = add_load(load, instance.sizes[order.perm[pos]], instance.log_domain);
  }
  return loads;
}

}  // namespace mcover
