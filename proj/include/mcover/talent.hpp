#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcover/random.hpp"

namespace mcover {

struct Arrival {
  std::size_t candidate = 0;
  int occurrence = 1;  // h: this is the candidate's h-th arrival (1-based)
};

// n candidates, each arriving T times in a uniformly random global order; the
// target is the K-th best. Larger valuation means better candidate.
// Valuations may be log-domain exponents; only their order matters here.
struct TalentInstance {
  std::size_t n = 0;
  int T = 1;
  std::size_t K = 1;
  std::vector<double> valuations;
  std::vector<Arrival> arrivals;

  // Throws std::invalid_argument on duplicate valuations, bad counts, or
  // occurrence indices out of sequence.
  void validate() const;

  // Candidate index of rank r (1 = best).
  std::size_t candidate_of_rank(std::size_t r) const;
  std::size_t target() const { return candidate_of_rank(K); }
  // Rank (1 = best) of every candidate.
  std::vector<std::size_t> ranks() const;
};

// Uniform global order of the multiset {(c, h)}, occurrence indices assigned in
// arrival order.
std::vector<Arrival> random_arrivals(std::size_t n, int T, Rng& rng);

// Valuations i.i.d. uniform on [0, range], colliding values redrawn.
std::vector<double> uniform_valuations(std::size_t n, double range, Rng& rng);

struct PastArrival {
  double valuation = 0.0;
  int occurrence = 1;
  bool marked = false;
};

// What a strategy may see at an arrival: the current candidate's valuation
// and occurrence index, plus everything that came before.
struct ArrivalView {
  std::size_t position = 0;
  std::size_t total_arrivals = 0;
  std::size_t n = 0;
  int T = 1;
  std::size_t K = 1;
  double valuation = 0.0;
  int occurrence = 1;
  std::span<const PastArrival> history;
};

class MarkingStrategy {
 public:
  virtual ~MarkingStrategy() = default;
  virtual std::string name() const = 0;
  // Called once before the first arrival of a game.
  virtual void reset() {}
  // Immediate, irrevocable decision for the current arrival.
  virtual bool mark(const ArrivalView& view) = 0;
};

std::unique_ptr<MarkingStrategy> make_mark_never();
std::unique_ptr<MarkingStrategy> make_mark_all();
// After a warmup fraction of all arrivals, marks an arrival when its rank
// among the candidates revealed so far, scaled up by n / revealed, is >= K.
std::unique_ptr<MarkingStrategy> make_quantile_strategy(double warmup = 0.25);
// Fixed decision per arrival position.
std::unique_ptr<MarkingStrategy> make_scripted_strategy(std::vector<bool> marks,
                                                        std::string name = "scripted");
std::unique_ptr<MarkingStrategy> make_strategy(const std::string& name);
std::vector<std::string> strategy_names();

enum class ContestOutcome { won, missed_target, marked_better };
std::string to_string(ContestOutcome outcome);

struct GameResult {
  int points = 0;
  std::vector<ContestOutcome> per_h;  // index h-1
  std::optional<std::string> aborted;
};

// Plays the strategy against the instance. A strategy that throws aborts the
// game: the result carries the message and scores no points.
GameResult play(const TalentInstance& instance, MarkingStrategy& strategy);

// Scores a completed marking (one flag per arrival position).
GameResult score_marks(const TalentInstance& instance, std::span<const std::uint8_t> marks);

// --- binomial guessing game -------------------------------------------------

// Draws N samples uniform on [0, range]; wins iff exactly g fall below s.
bool binomial_guess_game(double s, long long g, std::uint64_t N, double range, Rng& rng);

// Most likely count for the guessing game at s.
long long guess_game_mode(double s, std::uint64_t N, double range);

double poisson_pmf(long long k, double mean);
double binomial_pmf(long long k, std::uint64_t N, double p);

// --- closed-form bounds -------------------------------------------------------

// Riemann zeta for s > 1: partial sum to 10^4 plus an Euler-Maclaurin tail.
double riemann_zeta(double s);

// zeta(T/2) (T+1)^(T/2) / (2 pi sqrt K). Throws std::domain_error for T <= 2.
double lemma8_bound(std::size_t K, int T);

// 1 / (2 pi rho^(-T/2) sqrt K) + eps with rho = (T+1-h)/(T+1).
double lemma11_bound(std::size_t K, int T, int h, double eps);

// Principal branch of Lambert W for x >= 0, Newton iteration on w e^w = x.
double lambert_w(double x);

// (floor(e^{W(ln m)}) - 1) / 1.16, clamped at 0.
double theorem10_lower_bound(int m);

// --- Monte Carlo --------------------------------------------------------------

struct PointsEstimate {
  double mean = 0.0;
  double ci95 = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t aborted = 0;
};

using StrategyFactory = std::function<std::unique_ptr<MarkingStrategy>()>;

// Mean points of a strategy over random valuations (uniform on [0, n]) and
// random arrival orders. Throws std::invalid_argument for trials < 30.
PointsEstimate estimate_points(std::size_t K, int T, std::size_t n, const StrategyFactory& factory,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace mcover
