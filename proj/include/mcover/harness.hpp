#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcover/generators.hpp"
#include "mcover/schedulers.hpp"

namespace mcover {

struct EventRate {
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  double lo = 0.0;  // Wilson 95% interval
  double hi = 0.0;
};

EventRate wilson_rate(std::uint64_t count, std::uint64_t trials);

struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;  // half-width, normal approximation
};

MeanCi mean_ci(const std::vector<double>& values);

enum class Verdict { none, pass, fail, vacuous };
std::string to_string(Verdict verdict);

struct EstimateReport {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
  std::string algo;
  int m = 0;
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  // NaN when only routing was simulated.
  double mean_min_load = 0.0;
  double ci95 = 0.0;
  std::optional<double> known_opt;
  std::optional<double> empirical_ratio;  // OPT / mean, linear domain only
  std::map<std::string, EventRate> event_rates;
  std::map<std::string, MeanCi> statistics;
  std::map<std::string, double> values;  // thresholds and constants behind a verdict
  Verdict verdict = Verdict::none;
  std::string note;
};

nlohmann::json to_json(const EstimateReport& report);

struct EstimateOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  // Skip machine placement; only Algorithm 1's routing decisions are simulated.
  bool routing_only = false;
};

// Random-order Monte Carlo: each trial draws a uniform order from its own
// stream and runs the scheduler on it with the same stream. Results do not
// depend on the worker count. Throws std::invalid_argument for trials < 30 and
// std::logic_error if a trial ever beats the known OPT.
EstimateReport estimate_rom(const GeneratedInstance& generated, const SchedulerSpec& spec,
                            const EstimateOptions& options);

// Frequency of P_{ceil(k - 8 sqrt m - 2^d)} >= P^up >= P_k on a proper instance
// with t = d. Throws std::invalid_argument when the upper rank is < 1.
EstimateReport lemma5_test(int m, int d, std::size_t n, const EstimateOptions& options);

// Greedy on the Figure-1 family against the bound from the proof of the
// m/H_m guarantee; VACUOUS when the bound is non-positive at this m.
EstimateReport theorem3_test(int m, const EstimateOptions& options);

// Routing statistics of Algorithm 1 with t forced to the instance's degree:
// all_large_correct rate and mean small size reaching small machines, checked
// against 0.10 and 0.5 * 31 / (800 m^(1/4)) * L_small.
EstimateReport partition_test(const GeneratedInstance& proper, const EstimateOptions& options);

std::string csv_header();
std::string csv_row(const EstimateReport& report);
// Header plus one row per report. Throws std::runtime_error when unwritable.
void csv_emit(const std::vector<EstimateReport>& reports, const std::string& path);

}  // namespace mcover
