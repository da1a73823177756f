#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mcover/core.hpp"

namespace mcover {

enum class OptMethod { exact, upper_bound_only };

struct OptResult {
  double value = 0.0;
  // Witness schedule indexed by job (identity order).
  std::optional<Schedule> witness;
  OptMethod method = OptMethod::exact;
  std::uint64_t nodes = 0;
};

std::string to_string(OptMethod method);

inline constexpr std::uint64_t kDefaultOptBudget = 50'000'000;

// Optimal minimum load by target-feasibility branch and bound. The returned
// value is the minimum load of an actual assignment and no assignment has a
// strictly larger minimum, so the result is exact in floating arithmetic (not
// just bracketed). On budget exhaustion: method upper_bound_only, value L_1/m.
OptResult opt_exact(const Instance& instance, std::uint64_t node_budget = kDefaultOptBudget);

// L_1 / m.
double opt_upper_bound(const Instance& instance);

// max(P_m, max_{i<=min(m,n)} L_i/m - P_i, 0): holds for Greedy in every order.
double greedy_lower_bounds(const RankStats& stats, int m);

enum class InstanceKind { simple, proper };
enum class SimpleReason { none, fewer_jobs_than_machines, many_large_jobs, few_large_jobs };

std::string to_string(SimpleReason reason);

struct Taxonomy {
  double opt = 0.0;
  double large_threshold = 0.0;  // opt / (100 m^(1/4))
  std::size_t k = 0;             // jobs strictly above the threshold
  InstanceKind kind = InstanceKind::simple;
  SimpleReason reason = SimpleReason::none;
  int d = -1;  // ceil(log2(m - k)) for proper instances

  bool proper() const { return kind == InstanceKind::proper; }
  bool is_large(double size) const { return size > large_threshold; }
};

// Simple/proper classification against a reference optimum. Throws
// std::invalid_argument for opt < 0 or log-domain instances.
Taxonomy classify(const Instance& instance, double opt);

double large_job_threshold(int m, double opt);
// ceil(log2(x)) for x >= 1.
int ceil_log2(std::uint64_t x);
// ceil((3/4) log2 m), the largest degree a proper instance can have.
int max_degree(int m);

}  // namespace mcover
