#pragma once

// Repeated protocol runs, soundness estimation against exact enumeration,
// transcript-distribution comparison and verifier cost.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzk/agents.hpp"
#include "pzk/games.hpp"
#include "pzk/stats.hpp"

namespace pzk {

/// One prepared round on the prover's side: the commitment laid out during
/// setup, and the agent that answers the referee's queries about it.
class Attempt {
 public:
  virtual ~Attempt() = default;
  /// Runs the verification script on the commitment; rd.prover should be prover().
  virtual bool verify(Round& rd) = 0;
  virtual Prover& prover() = 0;
  virtual nlohmann::json commitment() const = 0;
};

/// Builds an attempt from the round's randomness (the prover draws from
/// the kProver stream only).
using Strategy = std::function<std::unique_ptr<Attempt>(const RandomSource&)>;

/// Verifier choice the exact oracle enumerates.
struct Axis {
  enum class Kind : std::uint8_t {
    Choice,       // choose(label, bound): every value
    Permutation,  // permutation(label, k): all k! orders
    OddOne,       // permutation(label, k): k orders, item `odd` at each position
  };
  std::string label;
  Kind kind = Kind::Choice;
  std::size_t odd = 0;
};

struct CheatPlan {
  std::string name;
  Strategy strategy;
  /// Verifier choices that decide the outcome; all others are irrelevant.
  std::vector<Axis> axes;
  std::string description;
};

/// Honest prover with a valid solution. Throws InvalidSolution.
Strategy honest_strategy(const AnyInstance& inst, const AnySolution& sol);

/// Cheat names a game supports.
std::vector<std::string> cheat_names(Game game);
/// Cheating prover built around `reference` (a solution of `inst`, or any
/// full grid for games whose cheats need one). Throws InvalidArgument on an
/// unknown name.
CheatPlan make_cheat(const AnyInstance& inst, const AnySolution& reference, const std::string& name);

/// Runs verify on a fresh commitment from `attempt`. Table and verifier use
/// the kShuffle and kChallenge streams of `rs`.
bool run_round(Attempt& attempt, const RandomSource& rs, Transcript& log);

struct ProtocolConfig {
  Game game = Game::Akari;
  std::size_t rounds = 1;  // the security parameter K
  std::uint64_t seed = 0;
};

struct ProtocolResult {
  bool accepted = false;
  std::size_t rounds_run = 0;
  Transcript transcript;  // every round, tagged with its index
};

/// K independent setup + verify rounds with RandomSource(seed).derive(k);
/// stops at the first reject. Throws InvalidArgument if K = 0.
ProtocolResult run_protocol(const Strategy& strategy, const ProtocolConfig& cfg);
ProtocolResult run_protocol(const AnyInstance& inst, const AnySolution& sol, const ProtocolConfig& cfg);

struct ExperimentReport {
  std::string label;
  std::size_t trials = 0;
  std::size_t escapes = 0;
  std::size_t catches = 0;
  double escape_rate = 0;
  std::optional<stats::Rational> exact;
  stats::Interval ci95;
  double runtime_seconds = 0;

  /// |escape_rate - exact| <= 3 sigma(exact).
  bool within_three_sigma() const;
  nlohmann::json to_json() const;
};

/// Probability that one round accepts, by walking the tree of the given
/// verifier choices (everything else drawn from `seed`).
stats::Rational exact_escape(const CheatPlan& plan, std::uint64_t seed = 0, std::size_t max_leaves = 1'000'000);

/// Per-round escape rate over independent trials. Trials are spread over
/// `threads` workers (0: hardware concurrency); results do not depend on it.
ExperimentReport estimate_soundness(const CheatPlan& plan, std::size_t trials, std::uint64_t seed,
                                    bool with_exact = true, unsigned threads = 0);

using TranscriptSource = std::function<Transcript(std::size_t trial)>;

struct ZkReport {
  std::size_t trials = 0;
  std::size_t keys = 0;       // (stratum, event index) cells that were tested
  double min_p = 1;           // smallest per-cell p-value
  double p_value = 1;         // Bonferroni-adjusted
  double total_variation = 0; // largest per-cell empirical TV distance
  std::string worst;          // the cell with min_p

  nlohmann::json to_json() const;
};

/// Event at each position of the transcript, stratified by the announced
/// challenge, compared between the two sources with a chi-square test.
ZkReport compare_transcripts(const TranscriptSource& a, const TranscriptSource& b, std::size_t trials);

/// Real, simulated and (for some classes) leaky transcript sources for one
/// challenge class of a game.
struct ZkClass {
  std::string name;
  TranscriptSource real;
  TranscriptSource simulated;
  TranscriptSource leaky;  // empty when this class has no leaky control
};

std::vector<ZkClass> zk_classes(const AnyInstance& inst, const AnySolution& sol, std::uint64_t seed);

struct CostPoint {
  int n = 0;
  double operations = 0;  // mean over the sampled instances
};

/// Table operations of one honest KenKen verification round on random
/// instances of each size.
std::vector<CostPoint> measure_verifier_cost(int n_min, int n_max, std::size_t per_n, std::uint64_t seed);

}  // namespace pzk
