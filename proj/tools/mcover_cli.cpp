// Command-line front end: instance generation, exact OPT, single runs, Monte
// Carlo estimates, the sampling-lemma and Greedy-bound tests, and the Talent
// Contest calculators.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mcover/generators.hpp"
#include "mcover/harness.hpp"
#include "mcover/io.hpp"
#include "mcover/opt.hpp"
#include "mcover/random.hpp"
#include "mcover/schedulers.hpp"
#include "mcover/talent.hpp"

using namespace mcover;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000;
  std::string out;
  unsigned workers = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const json& j, const Globals& g) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_text_file(g.out, j.dump(2) + "\n");
  }
}

int emit_report(const EstimateReport& report, const Globals& g) {
  if (!g.out.empty() && ends_with(g.out, ".csv")) {
    csv_emit({report}, g.out);
    std::cout << csv_row(report) << "\n";
  } else {
    emit(to_json(report), g);
  }
  return report.verdict == Verdict::fail ? 1 : 0;
}

json report_json(const TrialReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"t_guessed", r.t_guessed},
          {"p_up", num(r.p_up)},
          {"p_up_rank", r.p_up_rank},
          {"padding", r.padding},
          {"final_tau", r.final_tau},
          {"events",
           {{"large_jobs_misrouted_to_small", r.events.large_jobs_misrouted_to_small},
            {"small_size_routed_to_small", r.events.small_size_routed_to_small},
            {"tau_updates_total", r.events.tau_updates_total},
            {"tau_updates_fatal", r.events.tau_updates_fatal}}},
          {"orderly", r.has_reference ? json(r.orderly) : json(nullptr)}};
}

// A loaded instance wrapped with whatever the sidecar tells us.
GeneratedInstance load_generated(const std::string& path) {
  LoadedInstance loaded = read_instance(path);
  GeneratedInstance g;
  g.instance = std::move(loaded.instance);
  if (loaded.meta) {
    g.known_opt = loaded.meta->known_opt;
    g.params = loaded.meta->params;
    try {
      g.family = parse_family(loaded.meta->family);
    } catch (const std::invalid_argument&) {
      g.family = Family::uniform;
    }
    if (g.known_opt && !g.instance.log_domain) g.taxonomy_hint = classify(g.instance, *g.known_opt);
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online machine covering in the random-order model"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Root seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials");
  app.add_option("--out", g.out, "Output file (.csv for CSV, JSON otherwise)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1u, 1024u));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string family;
  int gm = 0, gd = 0, gT = 2;
  std::size_t gn = 0, gK = 3;
  double lambda = 10.0, opt0 = 1.0;
  std::string reason = "k>=m";
  gen->add_option("--family", family, "figure1|proper|simple|reduction|uniform")->required();
  gen->add_option("--m", gm, "Machines");
  gen->add_option("--d", gd, "Degree (proper)");
  gen->add_option("--n", gn, "Jobs");
  gen->add_option("--K", gK, "Target rank (reduction)");
  gen->add_option("--T", gT, "Arrivals per candidate (reduction)");
  gen->add_option("--lambda", lambda, "Steepness (reduction)");
  gen->add_option("--opt0", opt0, "OPT scale (proper, simple)");
  gen->add_option("--reason", reason, "n<m|k>=m|k-small (simple)");

  // opt
  auto* opt = app.add_subcommand("opt", "Exact offline optimum");
  std::string instance_path;
  std::uint64_t budget = kDefaultOptBudget;
  opt->add_option("--instance", instance_path, "Instance JSON")->required();
  opt->add_option("--budget", budget, "Search node budget");

  // run
  auto* run = app.add_subcommand("run", "One scheduler run");
  std::string algo = "greedy", order_kind = "random";
  std::optional<int> force_t;
  run->add_option("--algo", algo, "greedy|alg1");
  run->add_option("--instance", instance_path, "Instance JSON")->required();
  run->add_option("--order", order_kind, "random|given")->check(CLI::IsMember({"random", "given"}));
  run->add_option("--force-t", force_t, "Fix the guess of t");

  // estimate
  auto* est = app.add_subcommand("estimate", "Random-order Monte Carlo estimate");
  bool routing_only = false;
  est->add_option("--algo", algo, "greedy|alg1");
  est->add_option("--instance", instance_path, "Instance JSON")->required();
  est->add_option("--force-t", force_t, "Fix the guess of t");
  est->add_flag("--routing-only", routing_only, "Simulate only Algorithm 1's routing");

  // lemma5
  auto* l5 = app.add_subcommand("lemma5", "Sampling threshold event frequency");
  int lm = 0, ld = 0;
  std::size_t ln = 0;
  l5->add_option("--m", lm, "Machines")->required();
  l5->add_option("--d", ld, "Degree")->required();
  l5->add_option("--n", ln, "Jobs")->required();

  // theorem3
  auto* t3 = app.add_subcommand("theorem3", "Greedy on the Figure-1 family");
  int tm = 0;
  t3->add_option("--m", tm, "Machines")->required();

  // talent
  auto* tal = app.add_subcommand("talent", "Talent Contest points estimate");
  std::size_t tK = 16, tn = 400;
  int tT = 4;
  std::string strategy = "quantile";
  tal->add_option("--K", tK, "Target rank");
  tal->add_option("--T", tT, "Arrivals per candidate");
  tal->add_option("--n", tn, "Candidates");
  tal->add_option("--strategy", strategy, "never|all|quantile");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Closed-form lower bound");
  int bm = 16;
  bnd->add_option("--m", bm, "Machines")->required();

  // guessgame
  auto* gg = app.add_subcommand("guessgame", "Binomial guessing game");
  std::uint64_t N = 10'000;
  double s = 0.0, range = 0.0;
  std::optional<long long> guess;
  gg->add_option("--N", N, "Samples per game");
  gg->add_option("--s", s, "Threshold")->required();
  gg->add_option("--range", range, "Sample range [0, range]")->required();
  gg->add_option("--g", guess, "Guessed count (default: the mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  EstimateOptions eo;
  eo.trials = g.trials;
  eo.seed = g.seed;
  eo.workers = g.workers;

  try {
    if (*gen) {
      GeneratedInstance inst;
      const Family f = parse_family(family);
      switch (f) {
        case Family::figure1: inst = gen_figure1(gm); break;
        case Family::proper: inst = gen_proper(gm, gd, gn, g.seed, opt0); break;
        case Family::uniform: inst = gen_uniform(gn, gm, g.seed); break;
        case Family::reduction: inst = gen_reduction_instance(gK, gT, lambda, g.seed); break;
        case Family::simple: {
          SimpleReason r = SimpleReason::none;
          for (SimpleReason c : {SimpleReason::fewer_jobs_than_machines, SimpleReason::many_large_jobs,
                                 SimpleReason::few_large_jobs}) {
            if (to_string(c) == reason) r = c;
          }
          if (r == SimpleReason::none) throw UsageError("unknown simple reason '" + reason + "'");
          inst = gen_simple(gm, r, g.seed, opt0);
          break;
        }
      }
      if (g.out.empty()) {
        std::cout << instance_to_json(inst.instance).dump() << "\n";
        std::cerr << meta_to_json(meta_of(inst)).dump() << "\n";
      } else {
        write_instance(g.out, inst);
      }
      return 0;
    }
    if (*opt) {
      const LoadedInstance loaded = read_instance(instance_path);
      if (loaded.instance.log_domain) throw UsageError("exact OPT needs a linear-domain instance");
      const OptResult r = opt_exact(loaded.instance, budget);
      emit({{"opt", r.value}, {"method", r.method == OptMethod::exact ? "exact" : "upper-bound-only"}}, g);
      return 0;
    }
    if (*run) {
      const GeneratedInstance inst = load_generated(instance_path);
      Rng rng(g.seed);
      const Order order = order_kind == "given" ? Order::identity(inst.instance.n())
                                                : Order::uniform(inst.instance.n(), rng, g.seed);
      std::optional<Alg1Reference> ref;
      if (inst.taxonomy_hint) ref = make_alg1_reference(inst.instance, *inst.taxonomy_hint);
      const TrialReport r =
          run_scheduler({parse_algo(algo), force_t}, inst.instance, order, rng, ref ? &*ref : nullptr);
      emit({{"min_load", r.min_load}, {"report", report_json(r)}}, g);
      return 0;
    }
    if (*est) {
      eo.routing_only = routing_only;
      const GeneratedInstance inst = load_generated(instance_path);
      return emit_report(estimate_rom(inst, {parse_algo(algo), force_t}, eo), g);
    }
    if (*l5) return emit_report(lemma5_test(lm, ld, ln, eo), g);
    if (*t3) return emit_report(theorem3_test(tm, eo), g);
    if (*tal) {
      make_strategy(strategy);  // reject unknown names before spawning trials
      const PointsEstimate p =
          estimate_points(tK, tT, tn, [&] { return make_strategy(strategy); }, g.trials, g.seed, g.workers);
      json j = {{"mean", p.mean}, {"ci95", p.ci95}, {"trials", p.trials}, {"aborted", p.aborted}};
      j["bound_lemma8"] = tT >= 3 ? json(lemma8_bound(tK, tT)) : json(nullptr);
      emit(j, g);
      return 0;
    }
    if (*bnd) {
      emit({{"theorem10_lower_bound", theorem10_lower_bound(bm)}}, g);
      return 0;
    }
    if (*gg) {
      if (g.trials < 1) throw UsageError("need at least one trial");
      const long long target = guess ? *guess : guess_game_mode(s, N, range);
      std::uint64_t wins = 0;
      for (std::uint64_t i = 0; i < g.trials; ++i) {
        Rng rng(derive_seed(g.seed, i));
        wins += binomial_guess_game(s, target, N, range, rng) ? 1 : 0;
      }
      const EventRate r = wilson_rate(wins, g.trials);
      const double mean = s * static_cast<double>(N) / range;
      emit({{"g", target},
            {"win_rate", r.rate},
            {"lo", r.lo},
            {"hi", r.hi},
            {"poisson_pmf", poisson_pmf(target, mean)},
            {"binomial_pmf", binomial_pmf(target, N, std::clamp(s / range, 0.0, 1.0))}},
           g);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
