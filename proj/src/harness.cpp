#include "mcover/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mcover/detail/parallel.hpp"
#include "mcover/random.hpp"

namespace mcover {

EventRate wilson_rate(std::uint64_t count, std::uint64_t trials) {
  EventRate r;
  r.count = count;
  r.trials = trials;
  if (trials == 0) {
    r.hi = 1.0;
    return r;
  }
  constexpr double z = 1.96;
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(count) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  r.rate = p;
  r.lo = count == 0 ? 0.0 : std::max(0.0, centre - half);
  r.hi = count == trials ? 1.0 : std::min(1.0, centre + half);
  return r;
}

MeanCi mean_ci(const std::vector<double>& values) {
  MeanCi out;
  if (values.empty()) return out;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() < 2) return out;
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.ci95 = 1.96 * std::sqrt(sq / (n - 1.0) / n);
  return out;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::none: return "NONE";
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::vacuous: return "VACUOUS";
  }
  return "?";
}

nlohmann::json to_json(const EstimateReport& report) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["family"] = report.family;
  j["params"] = report.params;
  j["algo"] = report.algo;
  j["m"] = report.m;
  j["n"] = report.n;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["mean_min_load"] = num(report.mean_min_load);
  j["ci95"] = num(report.ci95);
  j["known_opt"] = report.known_opt ? num(*report.known_opt) : nlohmann::json(nullptr);
  j["empirical_ratio"] = report.empirical_ratio ? num(*report.empirical_ratio) : nlohmann::json(nullptr);
  j["event_rates"] = nlohmann::json::object();
  for (const auto& [name, r] : report.event_rates) {
    j["event_rates"][name] = {{"rate", r.rate}, {"lo", r.lo}, {"hi", r.hi}, {"count", r.count},
                              {"trials", r.trials}};
  }
  j["statistics"] = nlohmann::json::object();
  for (const auto& [name, s] : report.statistics) {
    j["statistics"][name] = {{"mean", num(s.mean)}, {"ci95", num(s.ci95)}};
  }
  j["values"] = nlohmann::json::object();
  for (const auto& [name, v] : report.values) j["values"][name] = num(v);
  j["verdict"] = to_string(report.verdict);
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

namespace {

struct TrialOutcome {
  double min_load = 0.0;
  bool lemma5 = false;
  bool orderly = false;
  bool all_large = false;
  double small_on_small = 0.0;
  double tau_updates = 0.0;
};

EstimateReport base_report(const GeneratedInstance& g, const EstimateOptions& options) {
  EstimateReport report;
  report.family = to_string(g.family);
  report.params = g.params;
  report.m = g.instance.m;
  report.n = g.instance.n();
  report.trials = options.trials;
  report.seed = options.seed;
  report.known_opt = g.known_opt;
  return report;
}

}  // namespace

EstimateReport estimate_rom(const GeneratedInstance& generated, const SchedulerSpec& spec,
                            const EstimateOptions& options) {
  if (options.trials < 30) throw std::invalid_argument("need at least 30 trials");
  if (options.routing_only && spec.algo != Algo::alg1) {
    throw std::invalid_argument("routing-only runs need algorithm 1");
  }
  const Instance& instance = generated.instance;
  std::optional<Alg1Reference> reference;
  if (spec.algo == Algo::alg1 && generated.taxonomy_hint && !instance.log_domain) {
    reference = make_alg1_reference(instance, *generated.taxonomy_hint);
  }
  const Alg1Reference* ref = reference ? &*reference : nullptr;

  std::vector<TrialOutcome> outcomes(options.trials);
  detail::parallel_for(options.trials, options.workers, [&](std::uint64_t i) {
    Rng rng(derive_seed(options.seed, i));
    const Order order = Order::uniform(instance.n(), rng, options.seed);
    TrialReport r = options.routing_only
                        ? algorithm1_route(instance, order, rng, spec.forced_t, ref)
                        : run_scheduler(spec, instance, order, rng, ref);
    TrialOutcome& out = outcomes[i];
    out.min_load = r.min_load;
    out.lemma5 = r.lemma5_event;
    out.orderly = r.orderly;
    out.all_large = r.all_large_correct();
    out.small_on_small = r.events.small_size_routed_to_small;
    out.tau_updates = static_cast<double>(r.events.tau_updates_total);
  });

  EstimateReport report = base_report(generated, options);
  report.algo = to_string(spec.algo);
  if (spec.forced_t) report.values["forced_t"] = *spec.forced_t;

  std::vector<double> loads, small, tau;
  std::uint64_t lemma5 = 0, orderly = 0, all_large = 0, beats_opt = 0;
  for (const TrialOutcome& o : outcomes) {
    loads.push_back(o.min_load);
    small.push_back(o.small_on_small);
    tau.push_back(o.tau_updates);
    lemma5 += o.lemma5;
    orderly += o.orderly;
    all_large += o.all_large;
    if (generated.known_opt && !options.routing_only &&
        o.min_load > *generated.known_opt + 1e-9 * std::max(1.0, std::abs(*generated.known_opt))) {
      ++beats_opt;
    }
  }
  if (beats_opt > 0) throw std::logic_error("a trial's min load exceeded the known OPT");

  if (options.routing_only) {
    report.mean_min_load = std::numeric_limits<double>::quiet_NaN();
    report.ci95 = std::numeric_limits<double>::quiet_NaN();
  } else {
    const MeanCi m = mean_ci(loads);
    report.mean_min_load = m.mean;
    report.ci95 = m.ci95;
    if (generated.known_opt && !instance.log_domain) {
      report.empirical_ratio = m.mean > 0.0 ? *generated.known_opt / m.mean
                                            : std::numeric_limits<double>::infinity();
    }
  }
  if (ref) {
    report.event_rates["lemma5_event"] = wilson_rate(lemma5, options.trials);
    report.event_rates["orderly"] = wilson_rate(orderly, options.trials);
    report.event_rates["all_large_correct"] = wilson_rate(all_large, options.trials);
    report.statistics["small_size_on_small"] = mean_ci(small);
  }
  if (spec.algo == Algo::alg1) report.statistics["tau_updates"] = mean_ci(tau);
  return report;
}

EstimateReport lemma5_test(int m, int d, std::size_t n, const EstimateOptions& options) {
  if (options.trials < 30) throw std::invalid_argument("need at least 30 trials");
  if (m < 2 || d < 0 || d > 30 || (1LL << d) >= m) throw std::invalid_argument("need 2^d < m");
  const auto k = static_cast<std::size_t>(m - (1LL << d));
  const long long upper = lemma5_upper_rank(k, m, d);
  if (upper < 1) {
    throw std::invalid_argument("k - 8 sqrt(m) - 2^d < 1: m too small for the sampling lemma");
  }
  const GeneratedInstance g = gen_proper(m, d, n, options.seed);
  const Alg1Reference ref = make_alg1_reference(g.instance, *g.taxonomy_hint);

  // A uniform order with pads at uniform positions is a uniform order of the
  // jobs plus the pads, so the sample is a uniform subset of that multiset.
  const std::size_t pads = (8 - n % 8) % 8;
  const std::size_t total = n + pads;
  const std::size_t sample = total / 8;
  const std::size_t rank = p_up_rank(m, d, total);

  std::vector<std::uint8_t> hit(options.trials, 0);
  detail::parallel_for(options.trials, options.workers, [&](std::uint64_t i) {
    Rng rng(derive_seed(options.seed, i));
    std::vector<double> pool = g.instance.sizes;
    pool.resize(total, 0.0);
    partial_shuffle(std::span<double>(pool), sample, rng);
    auto nth = pool.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(pool.begin(), nth, pool.begin() + static_cast<std::ptrdiff_t>(sample),
                     std::greater<>());
    const double p_up = *nth;
    hit[i] = *ref.window_upper >= p_up && p_up >= ref.window_lower ? 1 : 0;
  });

  EstimateReport report = base_report(g, options);
  report.algo = "alg1";
  report.mean_min_load = std::numeric_limits<double>::quiet_NaN();
  report.ci95 = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t count = 0;
  for (auto h : hit) count += h;
  report.event_rates["lemma5_event"] = wilson_rate(count, options.trials);
  const double threshold = 1.0 / 3.0 - 0.05;
  report.values["threshold"] = threshold;
  report.values["p_up_rank"] = static_cast<double>(rank);
  report.values["upper_rank"] = static_cast<double>(upper);
  report.values["k"] = static_cast<double>(k);
  report.verdict = report.event_rates["lemma5_event"].rate >= threshold ? Verdict::pass : Verdict::fail;
  return report;
}

EstimateReport theorem3_test(int m, const EstimateOptions& options) {
  const GeneratedInstance g = gen_figure1(m);
  EstimateReport report = estimate_rom(g, SchedulerSpec{Algo::greedy, std::nullopt}, options);
  const double h = harmonic(m);
  const double c = std::cbrt(std::numbers::pi * std::numbers::pi / 3.0 * h * h / m);
  const double opt = *g.known_opt;
  const double threshold = (0.5 - c) * h / m * opt;
  const double ratio_cap = 2.0 * m / h * 1.1;
  report.values["C"] = c;
  report.values["threshold"] = threshold;
  report.values["ratio_cap"] = ratio_cap;
  const bool ratio_ok = report.empirical_ratio && *report.empirical_ratio <= ratio_cap;
  if (threshold <= 0.0) {
    report.verdict = ratio_ok ? Verdict::vacuous : Verdict::fail;
    report.note = "bound from the proof is non-positive at this m";
  } else {
    const bool mean_ok = report.mean_min_load >= threshold - 3.0 * report.ci95;
    report.verdict = mean_ok && ratio_ok ? Verdict::pass : Verdict::fail;
  }
  return report;
}

EstimateReport partition_test(const GeneratedInstance& proper, const EstimateOptions& options) {
  if (!proper.taxonomy_hint || !proper.taxonomy_hint->proper()) {
    throw std::invalid_argument("partition test needs a proper instance with its taxonomy");
  }
  const Taxonomy& tax = *proper.taxonomy_hint;
  EstimateOptions routed = options;
  routed.routing_only = true;
  EstimateReport report = estimate_rom(proper, SchedulerSpec{Algo::alg1, tax.d}, routed);
  const RankStats stats = rank_stats(proper.instance);
  const double l_small = stats.l(tax.k + 1);
  const double small_target =
      0.5 * 31.0 / (800.0 * std::pow(static_cast<double>(proper.instance.m), 0.25)) * l_small;
  report.values["L_small"] = l_small;
  report.values["small_threshold"] = small_target;
  report.values["large_threshold"] = 0.10;
  const bool large_ok = report.event_rates["all_large_correct"].rate >= 0.10;
  const bool small_ok = report.statistics["small_size_on_small"].mean >= small_target;
  report.verdict = large_ok && small_ok ? Verdict::pass : Verdict::fail;
  return report;
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_rate(const EstimateReport& r, const std::string& name) {
  auto it = r.event_rates.find(name);
  return it == r.event_rates.end() ? "" : csv_number(it->second.rate);
}

}  // namespace

std::string csv_header() {
  return "family,params,algo,m,n,trials,mean_min_load,ci95,empirical_ratio,lemma5_event,orderly,"
         "all_large_correct,verdict";
}

std::string csv_row(const EstimateReport& r) {
  std::string row;
  row += csv_quote(r.family) + ',';
  row += csv_quote(r.params.dump()) + ',';
  row += csv_quote(r.algo) + ',';
  row += std::to_string(r.m) + ',';
  row += std::to_string(r.n) + ',';
  row += std::to_string(r.trials) + ',';
  row += csv_number(r.mean_min_load) + ',';
  row += csv_number(r.ci95) + ',';
  row += (r.empirical_ratio ? csv_number(*r.empirical_ratio) : "") + ',';
  row += csv_rate(r, "lemma5_event") + ',';
  row += csv_rate(r, "orderly") + ',';
  row += csv_rate(r, "all_large_correct") + ',';
  row += to_string(r.verdict);
  return row;
}

void csv_emit(const std::vector<EstimateReport>& reports, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << csv_header() << "\r\n";
  for (const auto& r : reports) out << csv_row(r) << "\r\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcover
