#include "mcover/schedulers.hpp"

#include <cmath>
#include <stdexcept>

#include "mcover/detail/alg1_core.hpp"

namespace mcover {

std::string to_string(Algo algo) { return algo == Algo::greedy ? "greedy" : "alg1"; }

Algo parse_algo(const std::string& name) {
  if (name == "greedy") return Algo::greedy;
  if (name == "alg1") return Algo::alg1;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

long long lemma5_upper_rank(std::size_t k, int m, int d) {
  const double x = static_cast<double>(k) - 8.0 * std::sqrt(static_cast<double>(m)) -
                   std::ldexp(1.0, d);
  return static_cast<long long>(std::ceil(x));
}

Alg1Reference make_alg1_reference(const Instance& instance, const Taxonomy& taxonomy) {
  Alg1Reference ref;
  ref.taxonomy = taxonomy;
  ref.is_large.resize(instance.n());
  for (std::size_t j = 0; j < instance.n(); ++j) {
    ref.is_large[j] = taxonomy.is_large(instance.sizes[j]) ? 1 : 0;
  }
  if (taxonomy.k == 0) return ref;
  const RankStats stats = rank_stats(instance);
  ref.fatal_floor = round_down_pow2(stats.p(taxonomy.k));
  ref.window_lower = stats.p(taxonomy.k);
  if (taxonomy.proper()) {
    const long long upper = lemma5_upper_rank(taxonomy.k, instance.m, taxonomy.d);
    if (upper >= 1) {
      ref.window_upper_rank = static_cast<std::size_t>(upper);
      ref.window_upper = stats.p(ref.window_upper_rank);
    }
  }
  return ref;
}

Schedule greedy_schedule(const Instance& instance, const Order& order) {
  if (order.size() != instance.n()) throw std::invalid_argument("order length differs from n");
  Schedule schedule(instance.m, order.size(), instance.log_domain);
  detail::MachinePool pool(0, instance.m, instance.log_domain);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const double size = instance.sizes[order.perm[pos]];
    schedule.assign(pos, pool.add(size), size);
  }
  return schedule;
}

int guess_range(int m) {
  if (m < 2) throw std::invalid_argument("guess range needs m >= 2");
  return max_degree(m) + 2;
}

int guess_t(int m, Rng& rng) { return detail::draw_guess(m, rng); }

std::size_t p_up_rank(int m, int t, std::size_t n) {
  const std::size_t cap = n / 8;
  if (cap < 1) throw std::invalid_argument("sampling phase needs at least 8 arrivals");
  const double x = (m - std::ldexp(1.0, t)) / 8.0 - std::sqrt(static_cast<double>(m)) / 2.0;
  const double rounded = std::floor(x + 0.5);
  if (rounded < 1.0) return 1;
  if (rounded > static_cast<double>(cap)) return cap;
  return static_cast<std::size_t>(rounded);
}

double tau_probability(int m, int t) {
  return 1.0 / (9.0 * std::ldexp(1.0, t) * std::sqrt(static_cast<double>(m)));
}

Alg1Result algorithm1_schedule(const Instance& instance, const Order& order, Rng& rng,
                               std::optional<int> forced_t, const Alg1Reference* reference) {
  if (order.size() != instance.n()) throw std::invalid_argument("order length differs from n");
  detail::PlacingSink sink(instance.m, order.size(), instance.log_domain);
  TrialReport report = detail::run_alg1(instance, order, rng, forced_t, reference, sink);
  report.min_load = sink.schedule().min_load();
  return {std::move(sink.schedule()), report};
}

TrialReport algorithm1_route(const Instance& instance, const Order& order, Rng& rng,
                             std::optional<int> forced_t, const Alg1Reference* reference) {
  if (order.size() != instance.n()) throw std::invalid_argument("order length differs from n");
  detail::RoutingSink sink;
  return detail::run_alg1(instance, order, rng, forced_t, reference, sink);
}

TrialReport run_scheduler(const SchedulerSpec& spec, const Instance& instance, const Order& order,
                          Rng& rng, const Alg1Reference* reference, Schedule* schedule_out) {
  if (spec.algo == Algo::greedy) {
    Schedule schedule = greedy_schedule(instance, order);
    TrialReport report;
    report.min_load = schedule.min_load();
    report.has_reference = reference != nullptr;
    if (schedule_out) *schedule_out = std::move(schedule);
    return report;
  }
  Alg1Result result = algorithm1_schedule(instance, order, rng, spec.forced_t, reference);
  if (schedule_out) *schedule_out = std::move(result.schedule);
  return result.report;
}

}  // namespace mcover
