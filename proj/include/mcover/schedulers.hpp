#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcover/core.hpp"
#include "mcover/opt.hpp"
#include "mcover/random.hpp"

namespace mcover {

enum class Algo { greedy, alg1 };

std::string to_string(Algo algo);
Algo parse_algo(const std::string& name);

struct SchedulerSpec {
  Algo algo = Algo::greedy;
  std::optional<int> forced_t;
};

struct TrialEvents {
  std::uint64_t large_jobs_misrouted_to_small = 0;
  std::uint64_t small_jobs_routed_to_small = 0;
  double small_size_routed_to_small = 0.0;
  std::uint64_t tau_updates_total = 0;
  std::uint64_t tau_updates_fatal = 0;
};

struct TrialReport {
  double min_load = std::numeric_limits<double>::quiet_NaN();
  int t_guessed = -1;
  // Threshold used in comparisons (power of two) and the raw size it came from.
  double p_up = std::numeric_limits<double>::quiet_NaN();
  double p_up_raw = std::numeric_limits<double>::quiet_NaN();
  std::size_t p_up_rank = 0;
  std::size_t padding = 0;
  double final_tau = 0.0;
  TrialEvents events;
  // Only meaningful when a reference taxonomy was attached.
  bool has_reference = false;
  bool lemma5_event = false;
  bool orderly = false;
  bool all_large_correct() const { return events.large_jobs_misrouted_to_small == 0; }
};

// Per-instance data derived from a reference taxonomy, computed once and shared
// read-only by every trial on that instance.
struct Alg1Reference {
  Taxonomy taxonomy;
  std::vector<std::uint8_t> is_large;  // by job index
  // Rounded size of the smallest large job; a threshold update reaching it is fatal.
  double fatal_floor = std::numeric_limits<double>::infinity();
  // Lemma-5 window on raw sizes: P_upper >= P^up >= P_lower, where
  // P_upper = P_{ceil(k - 8 sqrt(m) - 2^d)} and P_lower = P_k.
  std::optional<double> window_upper;
  double window_lower = 0.0;
  std::size_t window_upper_rank = 0;
};

Alg1Reference make_alg1_reference(const Instance& instance, const Taxonomy& taxonomy);

// ceil(k - 8 sqrt(m) - 2^d); may be < 1 when m is too small for the lemma.
long long lemma5_upper_rank(std::size_t k, int m, int d);

// Graham's list scheduling: each arrival onto a least loaded machine, ties to
// the lowest machine id. Works for log-domain instances too.
Schedule greedy_schedule(const Instance& instance, const Order& order);

// Number of values in {-1, 0, ..., ceil(3/4 log2 m)}.
int guess_range(int m);
int guess_t(int m, Rng& rng);

// round_half_up((m - 2^t)/8 - sqrt(m)/2) clamped to [1, n/8]. Throws
// std::invalid_argument when n/8 < 1.
std::size_t p_up_rank(int m, int t, std::size_t n);

double tau_probability(int m, int t);

struct Alg1Result {
  Schedule schedule;
  TrialReport report;
};

// The sampling + threshold-partition algorithm with the outer guess of t. When
// forced_t is set it replaces the guess. `reference` only feeds diagnostics.
Alg1Result algorithm1_schedule(const Instance& instance, const Order& order, Rng& rng,
                               std::optional<int> forced_t = std::nullopt,
                               const Alg1Reference* reference = nullptr);

// Same decisions and the same random stream as algorithm1_schedule, but only
// the small/large routing is simulated (no per-machine placement). Used for
// routing statistics at large n.
TrialReport algorithm1_route(const Instance& instance, const Order& order, Rng& rng,
                             std::optional<int> forced_t = std::nullopt,
                             const Alg1Reference* reference = nullptr);

// Runs either scheduler; optionally hands back the schedule.
TrialReport run_scheduler(const SchedulerSpec& spec, const Instance& instance, const Order& order,
                          Rng& rng, const Alg1Reference* reference = nullptr,
                          Schedule* schedule_out = nullptr);

}  // namespace mcover
