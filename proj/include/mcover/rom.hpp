#pragma once

#include <cstdint>

#include "mcover/core.hpp"
#include "mcover/schedulers.hpp"

namespace mcover {

struct RomValue {
  double value = 0.0;
  // Zero when the value is exact; otherwise the half-width of an inner Monte
  // Carlo 95% interval.
  double ci95 = 0.0;
  bool exact = true;
  std::uint64_t orders = 0;
  std::uint64_t outcomes = 0;  // enumerated leaves over all orders
};

inline constexpr std::size_t kMaxExactRomJobs = 8;
inline constexpr std::uint64_t kMaxEnumeratedOutcomes = 10'000;

// Random-order value: the average minimum load over all n! arrival orders and,
// for randomized schedulers, over the scheduler's own choices. Those choices
// are enumerated exactly while their support per order stays within
// kMaxEnumeratedOutcomes; beyond that an inner Monte Carlo estimate is used.
// Throws std::invalid_argument for n > kMaxExactRomJobs.
RomValue exact_rom_value(const Instance& instance, const SchedulerSpec& scheduler,
                         std::uint64_t inner_seed = 1, std::uint64_t inner_trials = 256);

}  // namespace mcover
