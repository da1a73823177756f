#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mcover {

class Rng;

// A Machine Covering input: m identical machines and a multiset of job sizes.
// Arrival order is not part of the instance; see Order.
//
// When log_domain is set, every entry of sizes is the natural logarithm of the
// real job size. This is how instances whose sizes span more than the double
// exponent range (steep valuation families) are carried around; all load
// arithmetic then happens on logarithms.
struct Instance {
  int m = 1;
  std::vector<double> sizes;
  bool log_domain = false;

  std::size_t n() const { return sizes.size(); }

  // Throws std::invalid_argument when m < 1 or a size is negative / NaN.
  void validate() const;
};

Instance make_instance(int m, std::vector<double> sizes, bool log_domain = false);

enum class OrderProvenance { adversarial_given, uniform_random };

// perm[pos] is the job index arriving at position pos (0-based).
struct Order {
  std::vector<std::size_t> perm;
  OrderProvenance provenance = OrderProvenance::adversarial_given;
  std::uint64_t seed = 0;

  static Order identity(std::size_t n);
  static Order uniform(std::size_t n, Rng& rng, std::uint64_t seed = 0);
  static Order given(std::vector<std::size_t> perm);

  std::size_t size() const { return perm.size(); }
};

bool is_permutation_of_n(std::span<const std::size_t> perm);

// P[i] is the (i+1)-th largest size; L[i] = P[i] + L[i+1]. Accessors p(i) and
// l(i) use the 1-indexed convention of the analysis, with l(n+1) = 0.
struct RankStats {
  std::vector<double> P;
  std::vector<double> L;
  std::vector<std::size_t> job_of_rank;
  bool log_domain = false;

  std::size_t n() const { return P.size(); }
  double p(std::size_t i) const { return P.at(i - 1); }
  double l(std::size_t i) const;
};

// Sorted by (size desc, original index asc).
RankStats rank_stats(const Instance& instance);

// Rank order of job indices under the canonical tie-break.
std::vector<std::size_t> ranked_jobs(std::span<const double> sizes);

// Largest 2^k <= size for any integer k; 0 maps to 0.
double round_down_pow2(double size);

double harmonic(int m);

// Load arithmetic shared by schedules in linear and log domain.
inline double zero_load(bool log_domain) {
  return log_domain ? -std::numeric_limits<double>::infinity() : 0.0;
}
double add_load(double load, double size, bool log_domain);
double log_add_exp(double a, double b);

class Schedule {
 public:
  Schedule() = default;
  Schedule(int m, std::size_t arrivals, bool log_domain = false);

  void assign(std::size_t position, int machine, double size);

  int machines() const { return static_cast<int>(loads_.size()); }
  bool log_domain() const { return log_domain_; }
  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<double>& loads() const { return loads_; }
  double load(int machine) const { return loads_.at(static_cast<std::size_t>(machine)); }
  double min_load() const;

  static constexpr int kUnassigned = -1;

 private:
  std::vector<int> assignment_;
  std::vector<double> loads_;
  bool log_domain_ = false;
};

// Recomputes every machine load from scratch; used to check Schedule bookkeeping.
std::vector<double> recompute_loads(const Instance& instance, const Order& order,
                                    const Schedule& schedule);

}  // namespace mcover
