#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mcover/core.hpp"
#include "mcover/generators.hpp"
#include "mcover/talent.hpp"

namespace mcover {

// Marks every arrival that the schedule put on a machine already holding a job
// of the same size. One flag per arrival position.
std::vector<std::uint8_t> induced_marks(const Instance& instance, const Order& order,
                                        const Schedule& schedule);

// The marking strategy a covering scheduler induces on the contest behind a
// reduction instance (scheduled in its given order).
std::unique_ptr<MarkingStrategy> schedule_induced_strategy(const Instance& instance,
                                                           const Order& order,
                                                           const Schedule& schedule);

struct ReductionCheck {
  GameResult game;
  // A machine with no large job and at most points + 1 medium jobs, if any.
  std::optional<int> light_machine;
  bool structural_ok = false;
  double min_load = 0.0;  // log domain
  double load_bound = 0.0;  // log of (points+1)/T OPT + OPT/(lambda-1)
  bool load_ok = false;
};

// Checks one scheduled run of a reduction instance. The schedule must come from
// the instance's given order.
ReductionCheck check_reduction(const GeneratedInstance& generated, const Schedule& schedule);

}  // namespace mcover
