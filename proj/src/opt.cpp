#include "mcover/opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mcover {

std::string to_string(OptMethod method) {
  return method == OptMethod::exact ? "exact" : "upper-bound-only";
}

std::string to_string(SimpleReason reason) {
  switch (reason) {
    case SimpleReason::none: return "none";
    case SimpleReason::fewer_jobs_than_machines: return "n<m";
    case SimpleReason::many_large_jobs: return "k>=m";
    case SimpleReason::few_large_jobs: return "k-small";
  }
  return "?";
}

double opt_upper_bound(const Instance& instance) {
  if (instance.log_domain) throw std::invalid_argument("opt_upper_bound: linear sizes only");
  double total = 0.0;
  for (double s : instance.sizes) total += s;
  return total / instance.m;
}

double greedy_lower_bounds(const RankStats& stats, int m) {
  const std::size_t n = stats.n();
  const auto um = static_cast<std::size_t>(m);
  double best = 0.0;
  if (n >= um) best = std::max(best, stats.p(um));
  for (std::size_t i = 1; i <= std::min(um, n); ++i) {
    best = std::max(best, stats.l(i) / m - stats.p(i));
  }
  return best;
}

namespace {

// Feasibility search: can the jobs (sorted descending) be split so that every
// machine reaches the target (>= or > target)?
class CoverSearch {
 public:
  CoverSearch(std::vector<double> sorted, int m, std::uint64_t budget)
      : sizes_(std::move(sorted)), m_(m), budget_(budget) {
    const std::size_t n = sizes_.size();
    remaining_.assign(n + 1, 0.0);
    positive_left_.assign(n + 1, 0);
    for (std::size_t j = n; j-- > 0;) {
      remaining_[j] = remaining_[j + 1] + sizes_[j];
      positive_left_[j] = positive_left_[j + 1] + (sizes_[j] > 0.0 ? 1 : 0);
    }
    slack_ = 1e-12 * std::max(1.0, remaining_[0]);
  }

  // Returns the minimum load of a covering assignment, if one exists.
  std::optional<double> find(double target, bool strict) {
    target_ = target;
    strict_ = strict;
    loads_.assign(static_cast<std::size_t>(m_), 0.0);
    machine_of_.assign(sizes_.size(), 0);
    if (!dfs(0)) return std::nullopt;
    best_assignment_ = machine_of_;
    return *std::min_element(final_loads_.begin(), final_loads_.end());
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<int>& assignment() const { return best_assignment_; }

 private:
  bool satisfied(double load) const { return strict_ ? load > target_ : load >= target_; }

  bool dfs(std::size_t j) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    double deficit = 0.0;
    int unsatisfied = 0;
    int any_satisfied = -1;
    for (int i = 0; i < m_; ++i) {
      const double load = loads_[static_cast<std::size_t>(i)];
      if (satisfied(load)) {
        if (any_satisfied < 0) any_satisfied = i;
      } else {
        ++unsatisfied;
        deficit += target_ - load;
      }
    }
    if (unsatisfied == 0) {
      // Remaining jobs can go anywhere; park them on the first machine.
      final_loads_ = loads_;
      for (std::size_t r = j; r < sizes_.size(); ++r) {
        machine_of_[r] = 0;
        final_loads_[0] += sizes_[r];
      }
      return true;
    }
    if (j == sizes_.size()) return false;
    if (remaining_[j] + slack_ < deficit) return false;
    if (positive_left_[j] < static_cast<std::size_t>(unsatisfied)) return false;

    const double size = sizes_[j];
    // Candidate machines: unsatisfied ones, one per distinct load, least loaded first.
    std::vector<int> candidates;
    candidates.reserve(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      if (!satisfied(loads_[static_cast<std::size_t>(i)])) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return loads_[static_cast<std::size_t>(a)] < loads_[static_cast<std::size_t>(b)];
    });
    double previous = -1.0;
    for (int i : candidates) {
      const double load = loads_[static_cast<std::size_t>(i)];
      if (load == previous) continue;
      previous = load;
      if (try_place(j, i, size)) return true;
      if (exhausted_) return false;
    }
    if (any_satisfied >= 0 && try_place(j, any_satisfied, size)) return true;
    return false;
  }

  bool try_place(std::size_t j, int machine, double size) {
    auto& load = loads_[static_cast<std::size_t>(machine)];
    const double before = load;
    load += size;
    machine_of_[j] = machine;
    const bool ok = dfs(j + 1);
    load = before;
    return ok;
  }

  std::vector<double> sizes_;
  int m_;
  std::uint64_t budget_;
  std::vector<double> remaining_;
  std::vector<std::size_t> positive_left_;
  double slack_ = 0.0;

  double target_ = 0.0;
  bool strict_ = false;
  std::vector<double> loads_;
  std::vector<double> final_loads_;
  std::vector<int> machine_of_;
  std::vector<int> best_assignment_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

Schedule witness_from(const Instance& instance, const std::vector<std::size_t>& sorted_jobs,
                      const std::vector<int>& machine_of_sorted) {
  Schedule schedule(instance.m, instance.n());
  std::vector<int> machine_of_job(instance.n(), 0);
  for (std::size_t r = 0; r < sorted_jobs.size(); ++r) {
    machine_of_job[sorted_jobs[r]] = machine_of_sorted[r];
  }
  for (std::size_t j = 0; j < instance.n(); ++j) {
    schedule.assign(j, machine_of_job[j], instance.sizes[j]);
  }
  return schedule;
}

}  // namespace

OptResult opt_exact(const Instance& instance, std::uint64_t node_budget) {
  instance.validate();
  if (instance.log_domain) throw std::invalid_argument("opt_exact: linear sizes only");
  const std::size_t n = instance.n();
  const int m = instance.m;
  OptResult result;

  if (n < static_cast<std::size_t>(m)) {
    Schedule schedule(m, n);
    for (std::size_t j = 0; j < n; ++j) schedule.assign(j, static_cast<int>(j), instance.sizes[j]);
    result.value = 0.0;
    result.witness = std::move(schedule);
    return result;
  }

  const std::vector<std::size_t> order = ranked_jobs(instance.sizes);
  std::vector<double> sorted(n);
  for (std::size_t r = 0; r < n; ++r) sorted[r] = instance.sizes[order[r]];

  // Initial lower bound: longest-first onto the least loaded machine.
  std::vector<double> lpt_loads(static_cast<std::size_t>(m), 0.0);
  std::vector<int> lpt_machine(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto it = std::min_element(lpt_loads.begin(), lpt_loads.end());
    lpt_machine[r] = static_cast<int>(it - lpt_loads.begin());
    *it += sorted[r];
  }
  double lo = *std::min_element(lpt_loads.begin(), lpt_loads.end());
  std::vector<int> best = lpt_machine;
  double hi = opt_upper_bound(instance);

  CoverSearch search(sorted, m, node_budget);
  auto budget_fail = [&]() {
    OptResult fallback;
    fallback.value = opt_upper_bound(instance);
    fallback.method = OptMethod::upper_bound_only;
    fallback.nodes = search.nodes();
    return fallback;
  };

  // Bracket: a feasible target raises lo to an achieved minimum load, an
  // infeasible one lowers hi.
  while (hi - lo > 1e-9 * std::max(hi, 1e-300)) {
    const double target = lo + 0.5 * (hi - lo);
    if (target <= lo || target >= hi) break;
    if (auto found = search.find(target, false)) {
      lo = *found;
      best = search.assignment();
    } else {
      if (search.exhausted()) return budget_fail();
      hi = target;
    }
  }
  // Certify: nothing strictly better than lo exists.
  while (auto found = search.find(lo, true)) {
    lo = *found;
    best = search.assignment();
  }
  if (search.exhausted()) return budget_fail();

  result.value = lo;
  result.witness = witness_from(instance, order, best);
  result.method = OptMethod::exact;
  result.nodes = search.nodes();
  return result;
}

double large_job_threshold(int m, double opt) {
  return opt / (100.0 * std::pow(static_cast<double>(m), 0.25));
}

int ceil_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("ceil_log2 of zero");
  int bits = 0;
  std::uint64_t v = 1;
  while (v < x) {
    v <<= 1;
    ++bits;
  }
  return bits;
}

int max_degree(int m) {
  return static_cast<int>(std::ceil(0.75 * std::log2(static_cast<double>(m))));
}

Taxonomy classify(const Instance& instance, double opt) {
  if (!(opt >= 0.0)) throw std::invalid_argument("classify: opt must be non-negative");
  if (instance.log_domain) throw std::invalid_argument("classify: linear sizes only");
  const int m = instance.m;
  Taxonomy tax;
  tax.opt = opt;
  tax.large_threshold = large_job_threshold(m, opt);
  tax.k = static_cast<std::size_t>(std::count_if(
      instance.sizes.begin(), instance.sizes.end(), [&](double s) { return s > tax.large_threshold; }));

  const double few_large_limit = m - std::pow(static_cast<double>(m), 0.75) / 50.0;
  if (instance.n() < static_cast<std::size_t>(m)) {
    tax.reason = SimpleReason::fewer_jobs_than_machines;
  } else if (tax.k >= static_cast<std::size_t>(m)) {
    tax.reason = SimpleReason::many_large_jobs;
  } else if (static_cast<double>(tax.k) <= few_large_limit) {
    tax.reason = SimpleReason::few_large_jobs;
  } else {
    tax.kind = InstanceKind::proper;
    tax.d = ceil_log2(static_cast<std::uint64_t>(m) - tax.k);
  }
  return tax;
}

}  // namespace mcover
