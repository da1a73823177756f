#include "mcover/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mcover {

std::vector<std::uint8_t> induced_marks(const Instance& instance, const Order& order,
                                        const Schedule& schedule) {
  if (schedule.assignment().size() != order.size()) {
    throw std::invalid_argument("schedule and order lengths differ");
  }
  std::vector<std::set<double>> held(static_cast<std::size_t>(schedule.machines()));
  std::vector<std::uint8_t> marks(order.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int machine = schedule.assignment()[pos];
    if (machine == Schedule::kUnassigned) continue;
    const double size = instance.sizes[order.perm[pos]];
    marks[pos] = held[static_cast<std::size_t>(machine)].insert(size).second ? 0 : 1;
  }
  return marks;
}

std::unique_ptr<MarkingStrategy> schedule_induced_strategy(const Instance& instance,
                                                           const Order& order,
                                                           const Schedule& schedule) {
  const std::vector<std::uint8_t> marks = induced_marks(instance, order, schedule);
  return make_scripted_strategy(std::vector<bool>(marks.begin(), marks.end()), "induced");
}

ReductionCheck check_reduction(const GeneratedInstance& generated, const Schedule& schedule) {
  if (!generated.reduction || !generated.known_opt || !generated.given_order) {
    throw std::invalid_argument("not a reduction instance");
  }
  const ReductionLayout& layout = *generated.reduction;
  const Instance& instance = generated.instance;
  const Order& order = *generated.given_order;

  ReductionCheck check;
  auto strategy = schedule_induced_strategy(instance, order, schedule);
  check.game = play(layout.contest, *strategy);

  const auto m = static_cast<std::size_t>(schedule.machines());
  std::vector<int> large(m, 0), medium(m, 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto machine = static_cast<std::size_t>(schedule.assignment()[pos]);
    const JobRole role = layout.roles[order.perm[pos]];
    if (role == JobRole::large) ++large[machine];
    if (role == JobRole::medium) ++medium[machine];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (large[i] == 0 && medium[i] <= check.game.points + 1) {
      check.light_machine = static_cast<int>(i);
      break;
    }
  }
  check.structural_ok = check.light_machine.has_value();

  const double opt = *generated.known_opt;
  check.min_load = schedule.min_load();
  check.load_bound =
      opt + std::log((check.game.points + 1.0) / layout.T + 1.0 / (layout.lambda - 1.0));
  check.load_ok = check.min_load <= check.load_bound + 1e-12 * std::max(1.0, std::abs(check.load_bound));
  return check;
}

}  // namespace mcover
