#include "mcover/rom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcover/detail/alg1_core.hpp"
#include "mcover/random.hpp"

namespace mcover {

namespace {

// Replays a fixed prefix of choices and takes the first option for any choice
// beyond it, recording the probability of the path taken.
class ScriptSource {
 public:
  struct Choice {
    std::uint64_t value = 0;
    std::uint64_t arity = 1;
    double p_true = 0.0;  // bernoulli choices only
    bool bernoulli = false;
  };

  explicit ScriptSource(std::vector<Choice> script) : script_(std::move(script)) {}

  std::uint64_t below(std::uint64_t bound) {
    Choice& c = next({0, bound, 0.0, false});
    weight_ /= static_cast<double>(bound);
    return c.value;
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    Choice& c = next({0, 2, p, true});
    weight_ *= c.value == 1 ? p : 1.0 - p;
    return c.value == 1;
  }

  double weight() const { return weight_; }
  std::vector<Choice>& script() { return script_; }

 private:
  Choice& next(Choice fresh) {
    if (cursor_ == script_.size()) script_.push_back(fresh);
    return script_[cursor_++];
  }

  std::vector<Choice> script_;
  std::size_t cursor_ = 0;
  double weight_ = 1.0;
};

// Advances to the next unexplored leaf in depth-first order.
bool advance(std::vector<ScriptSource::Choice>& script) {
  while (!script.empty()) {
    auto& last = script.back();
    if (last.value + 1 < last.arity) {
      ++last.value;
      return true;
    }
    script.pop_back();
  }
  return false;
}

// Expected min load over the scheduler's choices for one order, or nullopt if
// the support exceeds the enumeration limit.
std::optional<double> expected_over_choices(const Instance& instance, const Order& order,
                                            const SchedulerSpec& spec, std::uint64_t& leaves) {
  std::vector<ScriptSource::Choice> script;
  double expectation = 0.0;
  std::uint64_t count = 0;
  do {
    ScriptSource source(script);
    detail::PlacingSink sink(instance.m, order.size(), instance.log_domain);
    detail::run_alg1(instance, order, source, spec.forced_t, nullptr, sink);
    expectation += source.weight() * sink.schedule().min_load();
    script = std::move(source.script());
    if (++count > kMaxEnumeratedOutcomes) return std::nullopt;
  } while (advance(script));
  leaves += count;
  return expectation;
}

}  // namespace

RomValue exact_rom_value(const Instance& instance, const SchedulerSpec& scheduler,
                         std::uint64_t inner_seed, std::uint64_t inner_trials) {
  instance.validate();
  const std::size_t n = instance.n();
  if (n > kMaxExactRomJobs) {
    throw std::invalid_argument("exact random-order value needs n <= " +
                                std::to_string(kMaxExactRomJobs) + " (got " + std::to_string(n) +
                                "); use the Monte Carlo estimator");
  }
  RomValue result;
  Order order = Order::identity(n);
  double total = 0.0;
  std::vector<double> per_order;
  bool enumerable = true;

  do {
    ++result.orders;
    if (scheduler.algo == Algo::greedy) {
      total += greedy_schedule(instance, order).min_load();
      ++result.outcomes;
      continue;
    }
    if (enumerable) {
      if (auto value = expected_over_choices(instance, order, scheduler, result.outcomes)) {
        per_order.push_back(*value);
        continue;
      }
      enumerable = false;
      break;
    }
  } while (std::next_permutation(order.perm.begin(), order.perm.end()));

  if (scheduler.algo == Algo::greedy) {
    result.value = total / static_cast<double>(result.orders);
    return result;
  }
  if (enumerable) {
    result.value = std::accumulate(per_order.begin(), per_order.end(), 0.0) /
                   static_cast<double>(per_order.size());
    return result;
  }

  // Inner Monte Carlo: every order, inner_trials runs each.
  result.exact = false;
  result.outcomes = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t order_index = 0;
  order = Order::identity(n);
  do {
    for (std::uint64_t r = 0; r < inner_trials; ++r) {
      Rng rng(derive_seed(inner_seed, order_index * inner_trials + r));
      const double value =
          algorithm1_schedule(instance, order, rng, scheduler.forced_t).schedule.min_load();
      sum += value;
      sum_sq += value * value;
      ++samples;
    }
    ++order_index;
  } while (std::next_permutation(order.perm.begin(), order.perm.end()));
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
  result.value = mean;
  result.ci95 = 1.96 * std::sqrt(var / static_cast<double>(samples));
  return result;
}

}  // namespace mcover
