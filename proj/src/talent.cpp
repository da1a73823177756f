#include "mcover/talent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "mcover/detail/parallel.hpp"

namespace mcover {

void TalentInstance::validate() const {
  if (n < 1) throw std::invalid_argument("talent contest needs n >= 1");
  if (T < 1) throw std::invalid_argument("talent contest needs T >= 1");
  if (K < 1 || K > n) throw std::invalid_argument("target rank K must lie in [1, n]");
  if (valuations.size() != n) throw std::invalid_argument("need one valuation per candidate");
  std::vector<double> sorted = valuations;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("valuations must be pairwise distinct");
  }
  if (arrivals.size() != n * static_cast<std::size_t>(T)) {
    throw std::invalid_argument("need exactly n*T arrivals");
  }
  std::vector<int> seen(n, 0);
  for (const Arrival& a : arrivals) {
    if (a.candidate >= n) throw std::invalid_argument("arrival names an unknown candidate");
    if (a.occurrence != ++seen[a.candidate] || a.occurrence > T) {
      throw std::invalid_argument("occurrence indices out of sequence");
    }
  }
}

std::size_t TalentInstance::candidate_of_rank(std::size_t r) const {
  if (r < 1 || r > n) throw std::out_of_range("rank out of range");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(r - 1), idx.end(),
                   [&](std::size_t a, std::size_t b) { return valuations[a] > valuations[b]; });
  return idx[r - 1];
}

std::vector<std::size_t> TalentInstance::ranks() const {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return valuations[a] > valuations[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[idx[r]] = r + 1;
  return rank;
}

std::vector<Arrival> random_arrivals(std::size_t n, int T, Rng& rng) {
  std::vector<std::size_t> seq;
  seq.reserve(n * static_cast<std::size_t>(T));
  for (std::size_t c = 0; c < n; ++c) seq.insert(seq.end(), static_cast<std::size_t>(T), c);
  shuffle(std::span<std::size_t>(seq), rng);
  std::vector<int> count(n, 0);
  std::vector<Arrival> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = {seq[i], ++count[seq[i]]};
  return out;
}

std::vector<double> uniform_valuations(std::size_t n, double range, Rng& rng) {
  std::vector<double> v(n);
  std::unordered_set<double> seen;
  for (double& x : v) {
    do {
      x = rng.uniform(0.0, range);
    } while (!seen.insert(x).second);
  }
  return v;
}

namespace {

class MarkNever final : public MarkingStrategy {
 public:
  std::string name() const override { return "never"; }
  bool mark(const ArrivalView&) override { return false; }
};

class MarkAll final : public MarkingStrategy {
 public:
  std::string name() const override { return "all"; }
  bool mark(const ArrivalView&) override { return true; }
};

class Quantile final : public MarkingStrategy {
 public:
  explicit Quantile(double warmup) : warmup_(warmup) {
    if (!(warmup >= 0.0 && warmup <= 1.0)) throw std::invalid_argument("warmup must lie in [0, 1]");
  }
  std::string name() const override { return "quantile"; }
  void reset() override { revealed_.clear(); }

  bool mark(const ArrivalView& view) override {
    if (view.occurrence == 1) {
      revealed_.insert(std::upper_bound(revealed_.begin(), revealed_.end(), view.valuation),
                       view.valuation);
    }
    if (static_cast<double>(view.position) < warmup_ * static_cast<double>(view.total_arrivals)) {
      return false;
    }
    // Rank 1 = best among the revealed candidates.
    const auto above = revealed_.end() -
                       std::upper_bound(revealed_.begin(), revealed_.end(), view.valuation);
    const double rank = static_cast<double>(above + 1);
    const double estimate = rank * static_cast<double>(view.n) / static_cast<double>(revealed_.size());
    return estimate >= static_cast<double>(view.K);
  }

 private:
  double warmup_;
  std::vector<double> revealed_;
};

class Scripted final : public MarkingStrategy {
 public:
  Scripted(std::vector<bool> marks, std::string name) : marks_(std::move(marks)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  bool mark(const ArrivalView& view) override {
    if (view.position >= marks_.size()) throw std::out_of_range("script shorter than the arrival sequence");
    return marks_[view.position];
  }

 private:
  std::vector<bool> marks_;
  std::string name_;
};

}  // namespace

std::unique_ptr<MarkingStrategy> make_mark_never() { return std::make_unique<MarkNever>(); }
std::unique_ptr<MarkingStrategy> make_mark_all() { return std::make_unique<MarkAll>(); }
std::unique_ptr<MarkingStrategy> make_quantile_strategy(double warmup) {
  return std::make_unique<Quantile>(warmup);
}
std::unique_ptr<MarkingStrategy> make_scripted_strategy(std::vector<bool> marks, std::string name) {
  return std::make_unique<Scripted>(std::move(marks), std::move(name));
}

std::unique_ptr<MarkingStrategy> make_strategy(const std::string& name) {
  if (name == "never") return make_mark_never();
  if (name == "all") return make_mark_all();
  if (name == "quantile") return make_quantile_strategy();
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::vector<std::string> strategy_names() { return {"never", "all", "quantile"}; }

std::string to_string(ContestOutcome outcome) {
  switch (outcome) {
    case ContestOutcome::won: return "won";
    case ContestOutcome::missed_target: return "missed_target";
    case ContestOutcome::marked_better: return "marked_better";
  }
  return "?";
}

GameResult score_marks(const TalentInstance& instance, std::span<const std::uint8_t> marks) {
  if (marks.size() != instance.arrivals.size()) throw std::invalid_argument("one mark per arrival");
  const std::size_t target = instance.target();
  const double target_value = instance.valuations[target];
  const auto T = static_cast<std::size_t>(instance.T);
  std::vector<std::uint8_t> target_marked(T, 0), better_marked(T, 0);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (!marks[i]) continue;
    const Arrival& a = instance.arrivals[i];
    const auto h = static_cast<std::size_t>(a.occurrence - 1);
    if (a.candidate == target) {
      target_marked[h] = 1;
    } else if (instance.valuations[a.candidate] > target_value) {
      better_marked[h] = 1;
    }
  }
  GameResult result;
  result.per_h.resize(T);
  for (std::size_t h = 0; h < T; ++h) {
    if (!target_marked[h]) {
      result.per_h[h] = ContestOutcome::missed_target;
    } else if (better_marked[h]) {
      result.per_h[h] = ContestOutcome::marked_better;
    } else {
      result.per_h[h] = ContestOutcome::won;
      ++result.points;
    }
  }
  return result;
}

GameResult play(const TalentInstance& instance, MarkingStrategy& strategy) {
  std::vector<PastArrival> history;
  history.reserve(instance.arrivals.size());
  std::vector<std::uint8_t> marks(instance.arrivals.size(), 0);
  try {
    strategy.reset();
    for (std::size_t i = 0; i < instance.arrivals.size(); ++i) {
      const Arrival& a = instance.arrivals[i];
      ArrivalView view;
      view.position = i;
      view.total_arrivals = instance.arrivals.size();
      view.n = instance.n;
      view.T = instance.T;
      view.K = instance.K;
      view.valuation = instance.valuations[a.candidate];
      view.occurrence = a.occurrence;
      view.history = history;
      const bool marked = strategy.mark(view);
      marks[i] = marked ? 1 : 0;
      history.push_back({view.valuation, a.occurrence, marked});
    }
  } catch (const std::exception& e) {
    GameResult aborted;
    aborted.aborted = e.what();
    return aborted;
  }
  return score_marks(instance, marks);
}

bool binomial_guess_game(double s, long long g, std::uint64_t N, double range, Rng& rng) {
  if (g < 0 || static_cast<std::uint64_t>(g) > N) return false;
  const double p = std::clamp(s / range, 0.0, 1.0);
  // The number of the N uniform samples below s is Binomial(N, s/range); drawing
  // the count directly is the same game without N separate samples.
  std::binomial_distribution<long long> below(static_cast<long long>(N), p);
  return below(rng.engine()) == g;
}

long long guess_game_mode(double s, std::uint64_t N, double range) {
  return static_cast<long long>(std::floor(s * static_cast<double>(N) / range + 0.5));
}

double poisson_pmf(long long k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const auto kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

double binomial_pmf(long long k, std::uint64_t N, double p) {
  const auto n = static_cast<double>(N);
  if (k < 0 || static_cast<double>(k) > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return static_cast<double>(k) == n ? 1.0 : 0.0;
  const auto kd = static_cast<double>(k);
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(n - kd + 1.0) +
                  kd * std::log(p) + (n - kd) * std::log1p(-p));
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta series needs s > 1");
  constexpr int kTerms = 10'000;
  double sum = 0.0;
  for (int x = kTerms; x >= 1; --x) sum += std::pow(static_cast<double>(x), -s);
  const double N = kTerms;
  // Euler-Maclaurin tail of sum_{x > N} x^-s.
  return sum + std::pow(N, 1.0 - s) / (s - 1.0) - std::pow(N, -s) / 2.0 +
         s * std::pow(N, -s - 1.0) / 12.0;
}

double lemma8_bound(std::size_t K, int T) {
  if (T <= 2) throw std::domain_error("bound needs T >= 3 (zeta(T/2) diverges)");
  if (K < 1) throw std::invalid_argument("K must be positive");
  const double half = T / 2.0;
  return riemann_zeta(half) * std::pow(T + 1.0, half) /
         (2.0 * std::numbers::pi * std::sqrt(static_cast<double>(K)));
}

double lemma11_bound(std::size_t K, int T, int h, double eps) {
  if (h < 1 || h > T) throw std::invalid_argument("h must lie in [1, T]");
  if (!(eps > 0.0 && eps < 1.0 / 6.0)) throw std::invalid_argument("eps must lie in (0, 1/6)");
  if (K < 1) throw std::invalid_argument("K must be positive");
  const double rho = (T + 1.0 - h) / (T + 1.0);
  return 1.0 / (2.0 * std::numbers::pi * std::pow(rho, -T / 2.0) * std::sqrt(static_cast<double>(K))) +
         eps;
}

double lambert_w(double x) {
  if (!(x >= 0.0)) throw std::domain_error("lambert_w implemented for x >= 0");
  if (x == 0.0) return 0.0;
  double w = x < 1.0 ? x : std::log(x) - std::log(std::log(x) + 1.0) + 0.5;
  if (w <= 0.0) w = x / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double step = (w * ew - x) / (ew * (w + 1.0));
    w -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double theorem10_lower_bound(int m) {
  if (m < 2) throw std::invalid_argument("bound needs m >= 2");
  const double w = lambert_w(std::log(static_cast<double>(m)));
  const double numerator = std::floor(std::exp(w)) - 1.0;
  return numerator > 0.0 ? numerator / 1.16 : 0.0;
}

PointsEstimate estimate_points(std::size_t K, int T, std::size_t n, const StrategyFactory& factory,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (trials < 30) throw std::invalid_argument("need at least 30 trials for a confidence interval");
  if (K < 1 || K > n) throw std::invalid_argument("K must lie in [1, n]");
  std::vector<int> points(trials, 0);
  std::vector<std::uint8_t> aborted(trials, 0);
  detail::parallel_for(trials, workers, [&](std::uint64_t i) {
    Rng rng(derive_seed(seed, i));
    TalentInstance inst;
    inst.n = n;
    inst.T = T;
    inst.K = K;
    inst.valuations = uniform_valuations(n, static_cast<double>(n), rng);
    inst.arrivals = random_arrivals(n, T, rng);
    auto strategy = factory();
    const GameResult r = play(inst, *strategy);
    points[i] = r.points;
    aborted[i] = r.aborted ? 1 : 0;
  });
  PointsEstimate est;
  est.trials = trials;
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    sum += points[i];
    sq += static_cast<double>(points[i]) * points[i];
    est.aborted += aborted[i];
  }
  const auto t = static_cast<double>(trials);
  est.mean = sum / t;
  const double var = std::max(0.0, (sq - t * est.mean * est.mean) / (t - 1.0));
  est.ci95 = 1.96 * std::sqrt(var / t);
  return est;
}

}  // namespace mcover
