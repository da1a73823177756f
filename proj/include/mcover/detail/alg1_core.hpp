#pragma once

// Shared implementation of the online schedulers, templated on the source of
// random choices so the same code path serves sampled runs (Rng) and exact
// enumeration of the algorithm's internal randomness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mcover/core.hpp"
#include "mcover/schedulers.hpp"

namespace mcover::detail {

inline constexpr std::size_t kPadJob = std::numeric_limits<std::size_t>::max();

// Min-heap over a contiguous block of machine ids keyed by (load, id), so the
// root is always the least loaded machine with the lowest id.
class MachinePool {
 public:
  MachinePool() = default;
  MachinePool(int first_id, int count, bool log_domain) : log_domain_(log_domain) {
    heap_.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) heap_.emplace_back(zero_load(log_domain), first_id + i);
  }

  bool empty() const { return heap_.empty(); }

  // Adds `size` to the least loaded machine and returns its id.
  int add(double size) {
    auto& top = heap_.front();
    const int id = top.second;
    top.first = add_load(top.first, size, log_domain_);
    sift_down();
    return id;
  }

 private:
  void sift_down() {
    const std::size_t n = heap_.size();
    std::size_t i = 0;
    const auto item = heap_[0];
    while (true) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && heap_[child + 1] < heap_[child]) ++child;
      if (!(heap_[child] < item)) break;
      heap_[i] = heap_[child];
      i = child;
    }
    heap_[i] = item;
  }

  std::vector<std::pair<double, int>> heap_;
  bool log_domain_ = false;
};

// Sink that builds a full schedule.
class PlacingSink {
 public:
  PlacingSink(int m, std::size_t arrivals, bool log_domain)
      : schedule_(m, arrivals, log_domain), m_(m), log_domain_(log_domain) {}

  void begin_greedy() { large_ = MachinePool(0, m_, log_domain_); }
  void begin_split(int small_count) {
    small_ = MachinePool(0, small_count, log_domain_);
    large_ = MachinePool(small_count, m_ - small_count, log_domain_);
  }
  void to_large(std::size_t position, double size) { schedule_.assign(position, large_.add(size), size); }
  void to_small(std::size_t position, double size) { schedule_.assign(position, small_.add(size), size); }

  Schedule& schedule() { return schedule_; }

 private:
  Schedule schedule_;
  MachinePool small_;
  MachinePool large_;
  int m_;
  bool log_domain_;
};

// Sink that only observes routing.
struct RoutingSink {
  void begin_greedy() {}
  void begin_split(int) {}
  void to_large(std::size_t, double) {}
  void to_small(std::size_t, double) {}
};

template <class Source>
int draw_guess(int m, Source& source) {
  return static_cast<int>(source.below(static_cast<std::uint64_t>(guess_range(m)))) - 1;
}

// Arrival sequence with up to 7 zero-size jobs inserted at uniform positions so
// the length is a multiple of 8. Pads carry kPadJob. Pad p is inserted at a
// uniform slot of the sequence built so far; the pad slots are tracked first
// and the sequence is written in one pass.
template <class Source>
std::vector<std::size_t> padded_arrivals(const Order& order, Source& source) {
  const std::size_t n = order.size();
  const std::size_t pads = (8 - n % 8) % 8;
  std::vector<std::size_t> slots;
  for (std::size_t p = 0; p < pads; ++p) {
    const std::size_t at = source.below(n + p + 1);
    for (std::size_t& s : slots) {
      if (s >= at) ++s;
    }
    slots.push_back(at);
  }
  std::vector<std::size_t> arrivals(n + pads, kPadJob);
  std::sort(slots.begin(), slots.end());
  std::size_t next_slot = 0, job = 0;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    if (next_slot < slots.size() && slots[next_slot] == i) {
      ++next_slot;
    } else {
      arrivals[i] = order.perm[job++];
    }
  }
  return arrivals;
}

template <class Source, class Sink>
TrialReport run_alg1(const Instance& instance, const Order& order, Source& source,
                     std::optional<int> forced_t, const Alg1Reference* reference, Sink& sink) {
  const int m = instance.m;
  TrialReport report;
  report.has_reference = reference != nullptr;

  int t = -1;
  if (forced_t) {
    t = *forced_t;
  } else if (m >= 2) {
    t = draw_guess(m, source);
  }
  report.t_guessed = t;
  // A split into 2^t small machines needs at least one large machine.
  const bool split = t >= 0 && t < 31 && (std::int64_t{1} << t) < m && !instance.sizes.empty();

  if (!split) {
    sink.begin_greedy();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      sink.to_large(pos, instance.sizes[order.perm[pos]]);
    }
    if (reference) report.orderly = false;
    return report;
  }

  const int small_count = 1 << t;
  sink.begin_split(small_count);
  const std::vector<std::size_t> arrivals = padded_arrivals(order, source);
  report.padding = arrivals.size() - order.size();
  const std::size_t n = arrivals.size();
  const std::size_t sample = n / 8;

  auto raw_size = [&](std::size_t job) { return job == kPadJob ? 0.0 : instance.sizes[job]; };
  // Sizes are read in arrival order, i.e. at random; fetch a few arrivals ahead.
  constexpr std::size_t kAhead = 16;
  auto prefetch = [&](std::size_t a) {
    if (a + kAhead < n && arrivals[a + kAhead] != kPadJob) {
      __builtin_prefetch(&instance.sizes[arrivals[a + kAhead]]);
      if (reference) __builtin_prefetch(&reference->is_large[arrivals[a + kAhead]]);
    }
  };

  // Sampling phase: everything to the large machines.
  std::size_t position = 0;  // index into the caller's order (pads excluded)
  std::vector<std::pair<double, std::size_t>> sampled;
  sampled.reserve(sample);
  for (std::size_t a = 0; a < sample; ++a) {
    prefetch(a);
    const std::size_t job = arrivals[a];
    // Pads rank after every real job of equal size.
    sampled.emplace_back(raw_size(job), job == kPadJob ? instance.n() + a : job);
    if (job == kPadJob) continue;
    sink.to_large(position++, instance.sizes[job]);
  }

  const std::size_t rank = p_up_rank(m, t, n);
  auto by_rank = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::nth_element(sampled.begin(), sampled.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sampled.end(), by_rank);
  const double p_up_raw = sampled[rank - 1].first;
  const double p_up = round_down_pow2(p_up_raw);
  report.p_up_rank = rank;
  report.p_up_raw = p_up_raw;
  report.p_up = p_up;

  const double q = tau_probability(m, t);
  double tau = 0.0;
  for (std::size_t a = sample; a < n; ++a) {
    prefetch(a);
    const std::size_t job = arrivals[a];
    if (job == kPadJob) continue;  // size 0: never above tau, adds nothing
    const double size = instance.sizes[job];
    const double p = round_down_pow2(size);
    const bool large = reference && reference->is_large[job];
    const std::size_t pos = position++;
    if (p >= p_up) {
      sink.to_large(pos, size);
      continue;
    }
    if (p > tau && source.bernoulli(q)) {
      tau = p;
      ++report.events.tau_updates_total;
      if (reference && p >= reference->fatal_floor) ++report.events.tau_updates_fatal;
    }
    if (p <= tau) {
      sink.to_small(pos, size);
      if (reference) {
        if (large) {
          ++report.events.large_jobs_misrouted_to_small;
        } else {
          ++report.events.small_jobs_routed_to_small;
          report.events.small_size_routed_to_small += size;
        }
      }
    } else {
      sink.to_large(pos, size);
    }
  }
  report.final_tau = tau;

  if (reference) {
    report.lemma5_event = reference->window_upper.has_value() &&
                          *reference->window_upper >= p_up_raw &&
                          p_up_raw >= reference->window_lower;
    report.orderly = report.lemma5_event && report.events.tau_updates_fatal == 0;
  }
  return report;
}

}  // namespace mcover::detail
