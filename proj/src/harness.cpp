#include "pzk/harness.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <set>
#include <thread>

#include "pzk/akari_zkp.hpp"
#include "pzk/error.hpp"
#include "pzk/generators.hpp"
#include "pzk/kakuro_zkp.hpp"
#include "pzk/kenken_zkp.hpp"
#include "pzk/takuzu_zkp.hpp"

namespace pzk {

namespace {

// Per-game protocol entry points.
template <class Inst>
struct Zkp;

template <>
struct Zkp<akari::Instance> {
  using Sol = akari::Solution;
  using Com = akari_zkp::Commitment;
  static Com setup(const akari::Instance& i, const Sol& s, Stream& c) { return akari_zkp::setup_commitment(i, s, c); }
  static bool verify(const akari::Instance& i, Com& c, Round& rd) { return akari_zkp::verify_round(i, c, rd); }
  static nlohmann::json json(const Com& c) { return akari_zkp::to_json(c); }
};
template <>
struct Zkp<takuzu::Instance> {
  using Sol = takuzu::Solution;
  using Com = takuzu_zkp::Commitment;
  static Com setup(const takuzu::Instance& i, const Sol& s, Stream& c) { return takuzu_zkp::setup_commitment(i, s, c); }
  static bool verify(const takuzu::Instance& i, Com& c, Round& rd) { return takuzu_zkp::verify_round(i, c, rd); }
  static nlohmann::json json(const Com& c) { return takuzu_zkp::to_json(c); }
};
template <>
struct Zkp<kakuro::Instance> {
  using Sol = kakuro::Solution;
  using Com = kakuro_zkp::Commitment;
  static Com setup(const kakuro::Instance& i, const Sol& s, Stream& c) { return kakuro_zkp::setup_commitment(i, s, c); }
  static bool verify(const kakuro::Instance& i, Com& c, Round& rd) { return kakuro_zkp::verify_round(i, c, rd); }
  static nlohmann::json json(const Com& c) { return kakuro_zkp::to_json(c); }
};
template <>
struct Zkp<kenken::Instance> {
  using Sol = kenken::Solution;
  using Com = kenken_zkp::Commitment;
  static Com setup(const kenken::Instance& i, const Sol& s, Stream& c) { return kenken_zkp::setup_commitment(i, s, c); }
  static bool verify(const kenken::Instance& i, Com& c, Round& rd) { return kenken_zkp::verify_round(i, c, rd); }
  static nlohmann::json json(const Com& c) { return kenken_zkp::to_json(c); }
};

class FnAttempt : public Attempt {
 public:
  FnAttempt(std::function<bool(Round&)> verify, std::function<nlohmann::json()> json, std::unique_ptr<Prover> prover)
      : verify_(std::move(verify)), json_(std::move(json)), prover_(std::move(prover)) {}

  bool verify(Round& rd) override { return verify_(rd); }
  Prover& prover() override { return *prover_; }
  nlohmann::json commitment() const override { return json_(); }

 private:
  std::function<bool(Round&)> verify_;
  std::function<nlohmann::json()> json_;
  std::unique_ptr<Prover> prover_;
};

template <class Inst>
std::unique_ptr<Attempt> attempt_of(std::shared_ptr<const Inst> inst, typename Zkp<Inst>::Com com,
                                    std::unique_ptr<Prover> prover) {
  auto c = std::make_shared<typename Zkp<Inst>::Com>(std::move(com));
  return std::make_unique<FnAttempt>([inst, c](Round& rd) { return Zkp<Inst>::verify(*inst, *c, rd); },
                                     [c] { return Zkp<Inst>::json(*c); }, std::move(prover));
}

template <class Inst>
Strategy honest_of(const Inst& inst, const typename Zkp<Inst>::Sol& sol) {
  if (!validate(AnyInstance(inst), AnySolution(sol)).empty()) {
    throw Error(Errc::InvalidSolution, "not a solution of the instance");
  }
  auto i = std::make_shared<const Inst>(inst);
  auto s = std::make_shared<const typename Zkp<Inst>::Sol>(sol);
  return [i, s](const RandomSource& rs) {
    Stream coins = rs.stream(RandomSource::kProver);
    auto com = Zkp<Inst>::setup(*i, *s, coins);
    return attempt_of<Inst>(i, std::move(com), std::make_unique<HonestProver>(std::move(coins)));
  };
}

/// Strategy whose commitment comes from `build(inst, rs)` and whose prover
/// is honest on the remaining coins.
template <class Inst, class Build>
Strategy cheat_of(std::shared_ptr<const Inst> inst, Build build, bool wrong_marks = false) {
  return [inst, build, wrong_marks](const RandomSource& rs) -> std::unique_ptr<Attempt> {
    auto com = build(*inst, rs);
    std::unique_ptr<Prover> prover;
    if (wrong_marks) prover = std::make_unique<WrongMarkProver>(rs.stream(RandomSource::kProver));
    else prover = std::make_unique<HonestProver>(rs.stream(RandomSource::kProver));
    return attempt_of<Inst>(inst, std::move(com), std::move(prover));
  };
}

[[noreturn]] void unknown_cheat(Game g, const std::string& name) {
  std::string known;
  for (const auto& n : cheat_names(g)) known += (known.empty() ? "" : ", ") + n;
  throw Error(Errc::InvalidArgument, "unknown cheat '" + name + "' for " + to_string(g) + " (known: " + known + ")");
}

CheatPlan akari_cheat(const akari::Instance& inst, const akari::Solution& ref, const std::string& name) {
  auto i = std::make_shared<const akari::Instance>(inst);
  const auto st = akari::derive_structure(inst);
  if (st.whites.empty()) throw Error(Errc::InvalidArgument, "the grid has no white cell");
  CheatPlan plan{name, {}, {{"c", Axis::Kind::Choice, 0}}, {}};
  if (name == "inconsistent-cell") {
    const Cell cell = st.whites.front();
    plan.strategy = cheat_of(i, [cell, ref](const akari::Instance& in, const RandomSource& rs) {
      return akari_zkp::cheating_setup(in, akari_zkp::InconsistentCell{cell, ref}, rs);
    });
    plan.axes.push_back({"pick " + to_string(cell), Axis::Kind::OddOne, 0});
    plan.description = "one card at " + to_string(cell) + " shows the opposite face";
  } else if (name == "non-solution") {
    plan.strategy = cheat_of(i, [](const akari::Instance& in, const RandomSource& rs) {
      return akari_zkp::cheating_setup(in, akari_zkp::WellFormedNonSolution{}, rs);
    });
    plan.description = "consistent packets for a grid with no lights";
  } else {
    unknown_cheat(Game::Akari, name);
  }
  return plan;
}

/// A grid that keeps the givens and breaks as few rule classes as possible,
/// preferring a repeated line, then a triple, then imbalance.
Grid<int> takuzu_wrong_grid(const takuzu::Instance& inst, const takuzu::Solution& ref) {
  const int n = inst.n;
  std::vector<Cell> blanks;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (inst.givens.at(r, c) == takuzu::kBlank) blanks.push_back({r, c});
    }
  }
  auto classes = [](const Grid<int>& g) {
    std::set<std::string> out;
    for (const auto& v : takuzu::check_rules(g)) out.insert(v.rule);
    return out;
  };
  if (blanks.size() <= 20) {
    std::optional<Grid<int>> best;
    int best_rank = 4;
    const std::vector<std::string> order{"Unique", "NoThreeEqual", "Balance"};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blanks.size()); ++mask) {
      Grid<int> g = inst.givens;
      for (std::size_t k = 0; k < blanks.size(); ++k) g[blanks[k]] = static_cast<int>((mask >> k) & 1);
      const auto broken = classes(g);
      if (broken.size() != 1) continue;
      const int rank = static_cast<int>(std::find(order.begin(), order.end(), *broken.begin()) - order.begin());
      if (rank < best_rank) {
        best_rank = rank;
        best = g;
        if (rank == 0) break;
      }
    }
    if (best) return *best;
  }
  if (blanks.empty()) throw Error(Errc::InvalidArgument, "every cell is given; no wrong grid keeps the givens");
  Grid<int> g = ref.values;
  g[blanks.front()] ^= 1;
  return g;
}

CheatPlan takuzu_cheat(const takuzu::Instance& inst, const takuzu::Solution& ref, const std::string& name) {
  auto i = std::make_shared<const takuzu::Instance>(inst);
  CheatPlan plan{name, {}, {{"leaf", Axis::Kind::Choice, 0}}, {}};
  takuzu_zkp::Strategy strategy;
  if (name == "wrong-grid") {
    strategy = takuzu_zkp::WrongGrid{takuzu_wrong_grid(inst, ref)};
    plan.description = "commits a grid that keeps the givens but breaks a rule";
  } else if (name == "mismatched-envelope") {
    strategy = takuzu_zkp::MismatchedEnvelope{ref};
    plan.description = "the written row permutation differs from the one applied";
  } else {
    unknown_cheat(Game::Takuzu, name);
  }
  plan.strategy = [i, strategy](const RandomSource& rs) -> std::unique_ptr<Attempt> {
    Stream coins = rs.stream(RandomSource::kProver);
    auto com = takuzu_zkp::cheating_setup(*i, strategy, coins);
    return attempt_of<takuzu::Instance>(i, std::move(com), std::make_unique<HonestProver>(std::move(coins)));
  };
  return plan;
}

std::vector<int> run_others(const kakuro::Instance& inst, const Grid<int>& values, int run, Cell skip) {
  std::vector<int> out;
  for (const Cell c : inst.runs[static_cast<std::size_t>(run)].cells) {
    if (c != skip) out.push_back(values[c]);
  }
  return out;
}

CheatPlan kakuro_cheat(const kakuro::Instance& inst, const kakuro::Solution& ref, const std::string& name) {
  auto i = std::make_shared<const kakuro::Instance>(inst);
  CheatPlan plan{name, {}, {}, {}};
  if (name == "deviant-envelope" || name == "deviant-envelope-2") {
    const int copies = name == "deviant-envelope" ? 1 : 2;
    std::optional<kakuro_zkp::DeviantEnvelope> dev;
    for (const Cell c : inst.whites()) {
      const auto h = run_others(inst, ref.values, inst.horizontal_run[c], c);
      const auto v = run_others(inst, ref.values, inst.vertical_run[c], c);
      for (int y = 1; y <= 9 && !dev; ++y) {
        if (y == ref.values[c] || std::count(h.begin(), h.end(), y)) continue;
        if (copies == 2 && std::count(v.begin(), v.end(), y)) continue;
        dev = kakuro_zkp::DeviantEnvelope{ref, c, y, copies};
      }
      if (dev) break;
    }
    if (!dev) throw Error(Errc::InvalidArgument, "no cell admits a deviant value");
    plan.strategy = cheat_of(i, [dev = *dev](const kakuro::Instance& in, const RandomSource& rs) {
      return kakuro_zkp::cheating_setup(in, dev, rs);
    });
    plan.axes.push_back({"assign " + to_string(dev->cell), Axis::Kind::Permutation, 0});
    plan.description = std::to_string(copies) + " envelope(s) at " + to_string(dev->cell) + " hold " +
                       std::to_string(dev->value) + " instead of " + std::to_string(ref.values[dev->cell]);
  } else if (name == "non-solution") {
    const auto whites = inst.whites();
    if (whites.empty()) throw Error(Errc::InvalidArgument, "the grid has no white cell");
    kakuro::Solution bad = ref;
    bad.values[whites.front()] = bad.values[whites.front()] % 9 + 1;
    plan.strategy = cheat_of(i, [bad](const kakuro::Instance& in, const RandomSource& rs) {
      return kakuro_zkp::cheating_setup(in, kakuro_zkp::WellFormedNonSolution{bad}, rs);
    });
    plan.description = "consistent envelopes for a grid with one wrong digit";
  } else {
    unknown_cheat(Game::Kakuro, name);
  }
  return plan;
}

CheatPlan kenken_cheat(const kenken::Instance& inst, const kenken::Solution& ref, const std::string& name) {
  auto i = std::make_shared<const kenken::Instance>(inst);
  CheatPlan plan{name, {}, {}, {}};
  const int n = inst.n;
  if (name == "deviant-envelope") {
    const auto dev = kenken_zkp::find_deviant(inst);
    if (!dev) throw Error(Errc::InvalidArgument, "no Latin square with a single repairable cage was found");
    plan.strategy = cheat_of(i, [dev = *dev](const kenken::Instance& in, const RandomSource& rs) {
      return kenken_zkp::cheating_setup(in, dev, rs);
    });
    plan.axes.push_back({"assign " + to_string(dev->cell), Axis::Kind::Permutation, 0});
    plan.description = "Latin non-solution; one envelope at " + to_string(dev->cell) + " holds " +
                       std::to_string(dev->value) + " to repair its cage";
  } else if (name == "wrong-mark") {
    const bool any = std::any_of(inst.cages.begin(), inst.cages.end(), [](const kenken::Cage& c) {
      return c.op == kenken::Op::Sub || c.op == kenken::Op::Div;
    });
    if (!any) throw Error(Errc::InvalidArgument, "no subtraction or division cage to mark");
    plan.strategy = cheat_of(
        i,
        [ref](const kenken::Instance& in, const RandomSource& rs) {
          return kenken_zkp::cheating_setup(in, kenken_zkp::WrongMark{ref}, rs);
        },
        true);
    plan.description = "honest envelopes, but a non-maximal envelope is marked";
  } else if (name == "non-solution") {
    std::optional<Grid<int>> bad;
    for (int a = 0; a < n && !bad; ++a) {
      for (int b = a + 1; b < n && !bad; ++b) {
        Grid<int> g = ref.values;
        for (int c = 0; c < n; ++c) std::swap(g.at(a, c), g.at(b, c));
        if (!kenken::validate(inst, kenken::Solution{g}).empty()) bad = g;
      }
    }
    if (!bad) throw Error(Errc::InvalidArgument, "no row swap breaks the solution");
    plan.strategy = cheat_of(i, [g = *bad](const kenken::Instance& in, const RandomSource& rs) {
      return kenken_zkp::cheating_setup(in, kenken_zkp::WellFormedNonSolution{g}, rs);
    });
    plan.description = "consistent envelopes for a Latin square that breaks a cage";
  } else if (name == "mismatched-encoding") {
    if (n < 2) throw Error(Errc::InvalidArgument, "a 1x1 grid has a single value");
    const Cell cell{0, 0};
    const int other = ref.values[cell] % n + 1;
    plan.strategy = cheat_of(i, [ref, cell, other](const kenken::Instance& in, const RandomSource& rs) {
      return kenken_zkp::cheating_setup(in, kenken_zkp::MismatchedEncoding{ref, cell, other}, rs);
    });
    plan.description = "count cards and p-envelopes at (0,0) encode different values";
  } else {
    unknown_cheat(Game::Kenken, name);
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Exact enumeration

std::size_t factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<std::size_t> unrank(std::size_t index, std::size_t k) {
  std::vector<std::size_t> pool(k);
  for (std::size_t i = 0; i < k; ++i) pool[i] = i;
  std::vector<std::size_t> out;
  for (std::size_t i = k; i > 0; --i) {
    const std::size_t f = factorial(i - 1);
    out.push_back(pool[index / f]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(index / f));
    index %= f;
  }
  return out;
}

struct Step {
  std::string label;
  std::size_t size = 0;
  std::size_t value = 0;
};

/// Follows a fixed prefix of choices and extends it with zeros; the walk
/// over all prefixes visits every leaf of the choice tree once.
class ExploringVerifier : public Verifier {
 public:
  ExploringVerifier(const std::vector<Axis>& axes, std::vector<Step>& path, Verifier& fallback)
      : axes_(axes), path_(path), fallback_(fallback) {}

  std::size_t choose(const std::string& what, std::size_t bound) override {
    const Axis* a = axis(what);
    if (!a || a->kind != Axis::Kind::Choice) return fallback_.choose(what, bound);
    return next(what, bound);
  }

  std::vector<std::size_t> permutation(const std::string& what, std::size_t k) override {
    const Axis* a = axis(what);
    if (a && a->kind == Axis::Kind::Permutation) return unrank(next(what, factorial(k)), k);
    if (a && a->kind == Axis::Kind::OddOne && a->odd < k) {
      const std::size_t at = next(what, k);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < k; ++i) {
        if (i != a->odd) order.push_back(i);
      }
      order.insert(order.begin() + static_cast<std::ptrdiff_t>(at), a->odd);
      return order;
    }
    return fallback_.permutation(what, k);
  }

 private:
  const Axis* axis(const std::string& label) const {
    for (const auto& a : axes_) {
      if (a.label == label) return &a;
    }
    return nullptr;
  }

  std::size_t next(const std::string& label, std::size_t size) {
    if (pos_ < path_.size()) {
      if (path_[pos_].label != label) throw Error(Errc::InvalidArgument, "choice tree changed shape at " + label);
      return path_[pos_++].value;
    }
    path_.push_back({label, size, 0});
    ++pos_;
    return 0;
  }

  const std::vector<Axis>& axes_;
  std::vector<Step>& path_;
  Verifier& fallback_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Transcript sources

using TableFactory = std::function<std::unique_ptr<Table>(Transcript&, Stream)>;

std::unique_ptr<Table> plain_table(Transcript& log, Stream s) { return std::make_unique<Table>(log, std::move(s)); }
std::unique_ptr<Table> leaky_table(Transcript& log, Stream s) { return std::make_unique<LeakyTable>(log, std::move(s)); }

/// One round of `strategy`, optionally with some verifier choices pinned.
Transcript round_with(const Strategy& strategy, const RandomSource& rs, const TableFactory& make_table,
                      const std::vector<std::pair<std::string, std::size_t>>& forced) {
  auto attempt = strategy(rs);
  Transcript log;
  auto table = make_table(log, rs.stream(RandomSource::kShuffle));
  LocalVerifier coins(rs.stream(RandomSource::kChallenge));
  ScriptedVerifier verifier(coins);
  for (const auto& [what, v] : forced) verifier.force(what, v);
  Round rd{*table, verifier, attempt->prover()};
  attempt->verify(rd);
  return log;
}

constexpr std::uint64_t kSimSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kLeakSalt = 0xc2b2ae3d27d4eb4fULL;

}  // namespace

// ---------------------------------------------------------------------------

Strategy honest_strategy(const AnyInstance& inst, const AnySolution& sol) {
  if (inst.index() != sol.index()) throw Error(Errc::ShapeMismatch, "solution is for a different game");
  return std::visit(
      [&](const auto& i) -> Strategy {
        using I = std::decay_t<decltype(i)>;
        return honest_of<I>(i, std::get<typename Zkp<I>::Sol>(sol));
      },
      inst);
}

std::vector<std::string> cheat_names(Game game) {
  switch (game) {
    case Game::Akari: return {"inconsistent-cell", "non-solution"};
    case Game::Takuzu: return {"wrong-grid", "mismatched-envelope"};
    case Game::Kakuro: return {"deviant-envelope", "deviant-envelope-2", "non-solution"};
    case Game::Kenken: return {"deviant-envelope", "wrong-mark", "non-solution", "mismatched-encoding"};
  }
  return {};
}

CheatPlan make_cheat(const AnyInstance& inst, const AnySolution& reference, const std::string& name) {
  if (inst.index() != reference.index()) throw Error(Errc::ShapeMismatch, "reference is for a different game");
  switch (game_of(inst)) {
    case Game::Akari:
      return akari_cheat(std::get<akari::Instance>(inst), std::get<akari::Solution>(reference), name);
    case Game::Takuzu:
      return takuzu_cheat(std::get<takuzu::Instance>(inst), std::get<takuzu::Solution>(reference), name);
    case Game::Kakuro:
      return kakuro_cheat(std::get<kakuro::Instance>(inst), std::get<kakuro::Solution>(reference), name);
    case Game::Kenken:
      return kenken_cheat(std::get<kenken::Instance>(inst), std::get<kenken::Solution>(reference), name);
  }
  throw Error(Errc::InvalidArgument, "unknown game");
}

bool run_round(Attempt& attempt, const RandomSource& rs, Transcript& log) {
  Table table(log, rs.stream(RandomSource::kShuffle));
  LocalVerifier verifier(rs.stream(RandomSource::kChallenge));
  Round rd{table, verifier, attempt.prover()};
  return attempt.verify(rd);
}

ProtocolResult run_protocol(const Strategy& strategy, const ProtocolConfig& cfg) {
  if (cfg.rounds < 1) throw Error(Errc::InvalidArgument, "the number of rounds must be at least 1");
  ProtocolResult result;
  result.accepted = true;
  const RandomSource root(cfg.seed);
  for (std::size_t k = 0; k < cfg.rounds && result.accepted; ++k) {
    const RandomSource rs = root.derive(k);
    result.transcript.set_round(k);
    auto attempt = strategy(rs);
    result.accepted = run_round(*attempt, rs, result.transcript);
    result.rounds_run = k + 1;
  }
  return result;
}

ProtocolResult run_protocol(const AnyInstance& inst, const AnySolution& sol, const ProtocolConfig& cfg) {
  if (cfg.rounds < 1) throw Error(Errc::InvalidArgument, "the number of rounds must be at least 1");
  if (game_of(inst) != cfg.game) throw Error(Errc::ShapeMismatch, "instance does not match the configured game");
  return run_protocol(honest_strategy(inst, sol), cfg);
}

bool ExperimentReport::within_three_sigma() const {
  if (!exact) return false;
  const double p = exact->value();
  return std::abs(escape_rate - p) <= 3 * stats::binomial_sigma(p, trials) + 1e-12;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["trials"] = trials;
  j["escapes"] = escapes;
  j["catches"] = catches;
  j["escape_rate"] = escape_rate;
  j["exact"] = exact ? nlohmann::json(exact->str()) : nlohmann::json(nullptr);
  j["exact_value"] = exact ? nlohmann::json(exact->value()) : nlohmann::json(nullptr);
  j["ci95"] = {ci95.low, ci95.high};
  j["runtime_seconds"] = runtime_seconds;
  return j;
}

stats::Rational exact_escape(const CheatPlan& plan, std::uint64_t seed, std::size_t max_leaves) {
  std::vector<Step> path;
  stats::Rational total;
  std::size_t leaves = 0;
  const RandomSource rs(seed);
  do {
    LocalVerifier fallback(rs.stream("oracle"));
    ExploringVerifier verifier(plan.axes, path, fallback);
    auto attempt = plan.strategy(rs);
    Transcript log;
    Table table(log, rs.stream(RandomSource::kShuffle));
    Round rd{table, verifier, attempt->prover()};
    if (attempt->verify(rd)) {
      stats::Rational w = stats::Rational::of(1, 1);
      for (const auto& s : path) w = w * stats::Rational::of(1, static_cast<std::int64_t>(s.size));
      total = total + w;
    }
    if (++leaves > max_leaves) throw Error(Errc::BudgetExceeded, "choice tree has more than " + std::to_string(max_leaves) + " leaves");
    while (!path.empty() && path.back().value + 1 == path.back().size) path.pop_back();
    if (!path.empty()) ++path.back().value;
  } while (!path.empty());
  return total;
}

ExperimentReport estimate_soundness(const CheatPlan& plan, std::size_t trials, std::uint64_t seed, bool with_exact,
                                    unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  std::vector<char> escaped(trials, 0);
  std::vector<std::exception_ptr> errors(threads);
  const RandomSource root(seed);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t t = w; t < trials; t += threads) {
        const RandomSource rs = root.derive(t);
        auto attempt = plan.strategy(rs);
        Transcript log;
        escaped[t] = run_round(*attempt, rs, log) ? 1 : 0;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentReport r;
  r.label = plan.name;
  r.trials = trials;
  r.escapes = static_cast<std::size_t>(std::count(escaped.begin(), escaped.end(), 1));
  r.catches = trials - r.escapes;
  r.escape_rate = trials ? static_cast<double>(r.escapes) / static_cast<double>(trials) : 0.0;
  r.ci95 = stats::wald_interval(r.escapes, trials);
  if (with_exact) r.exact = exact_escape(plan, seed);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::json ZkReport::to_json() const {
  return {{"trials", trials}, {"keys", keys}, {"min_p", min_p}, {"p_value", p_value},
          {"total_variation", total_variation}, {"worst", worst}};
}

ZkReport compare_transcripts(const TranscriptSource& a, const TranscriptSource& b, std::size_t trials) {
  using Hist = std::map<std::string, std::size_t>;
  std::map<std::pair<std::string, std::size_t>, std::pair<Hist, Hist>> cells;
  constexpr std::size_t kLength = static_cast<std::size_t>(-1);
  constexpr std::size_t kStratum = static_cast<std::size_t>(-2);
  auto add = [&](const Transcript& t, bool first) {
    std::string stratum;
    for (const auto& e : t.events()) {
      if (e.kind == EventKind::ChallengeAnnounced) stratum += e.detail + ";";
    }
    auto bump = [&](std::size_t at, const std::string& value) {
      auto& cell = cells[{stratum, at}];
      ++(first ? cell.first : cell.second)[value];
    };
    for (std::size_t i = 0; i < t.events().size(); ++i) {
      Event e = t.events()[i];
      e.round = 0;
      bump(i, encode_event(e));
    }
    bump(kLength, std::to_string(t.size()));
    ++(first ? cells[{"", kStratum}].first : cells[{"", kStratum}].second)[stratum];
  };
  for (std::size_t t = 0; t < trials; ++t) {
    add(a(t), true);
    add(b(t), false);
  }

  // Categories seen fewer than 10 times in total share one bin, so that the
  // TV estimate is not dominated by sampling noise in sparse cells.
  auto pool_rare = [](const Hist& a, const Hist& b) {
    std::pair<Hist, Hist> out;
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    for (const auto& k : keys) {
      const auto ia = a.find(k), ib = b.find(k);
      const std::size_t na = ia == a.end() ? 0 : ia->second, nb = ib == b.end() ? 0 : ib->second;
      const std::string bin = na + nb < 10 ? std::string("\x01rare") : k;
      out.first[bin] += na;
      out.second[bin] += nb;
    }
    return out;
  };

  ZkReport r;
  r.trials = trials;
  for (const auto& [key, hists] : cells) {
    const auto pooled = pool_rare(hists.first, hists.second);
    const auto tv = stats::total_variation(pooled.first, pooled.second);
    const auto chi = stats::two_sample(hists.first, hists.second);
    if (chi.dof == 0) {
      // A single pooled category: compare the two totals instead.
      std::size_t na = 0, nb = 0;
      for (const auto& [k, v] : hists.first) na += v;
      for (const auto& [k, v] : hists.second) nb += v;
      if (na == nb) {
        ++r.keys;  // the same single outcome on both sides
        continue;
      }
    }
    r.total_variation = std::max(r.total_variation, tv);
    ++r.keys;
    if (chi.p_value < r.min_p) {
      r.min_p = chi.p_value;
      r.worst = key.first + "#" + (key.second == kLength ? "length" : key.second == kStratum ? "stratum" : std::to_string(key.second));
    }
  }
  r.p_value = std::min(1.0, r.min_p * static_cast<double>(std::max<std::size_t>(r.keys, 1)));
  return r;
}

std::vector<ZkClass> zk_classes(const AnyInstance& inst, const AnySolution& sol, std::uint64_t seed) {
  const Strategy honest = honest_strategy(inst, sol);
  const RandomSource real_root(seed), sim_root(seed ^ kSimSalt), leak_root(seed ^ kLeakSalt);
  std::vector<ZkClass> out;

  switch (game_of(inst)) {
    case Game::Akari: {
      auto i = std::make_shared<const akari::Instance>(std::get<akari::Instance>(inst));
      for (int c : {0, 1}) {
        ZkClass k;
        k.name = "c=" + std::to_string(c);
        k.real = [=](std::size_t t) {
          return round_with(honest, real_root.derive(t), plain_table, {{"c", static_cast<std::size_t>(c)}});
        };
        k.simulated = [=](std::size_t t) { return akari_zkp::simulate_round(*i, c, sim_root.derive(t)); };
        if (c == 0) {
          k.leaky = [=](std::size_t t) { return round_with(honest, leak_root.derive(t), leaky_table, {{"c", 0}}); };
        }
        out.push_back(std::move(k));
      }
      break;
    }
    case Game::Takuzu: {
      auto i = std::make_shared<const takuzu::Instance>(std::get<takuzu::Instance>(inst));
      auto s = std::make_shared<const takuzu::Solution>(std::get<takuzu::Solution>(sol));
      const int n = i->n;
      for (int c = 0; c <= 3; ++c) {
        std::vector<std::size_t> leaves;
        for (std::size_t l = 0; l < takuzu_zkp::leaf_count(n); ++l) {
          if (takuzu_zkp::decode_leaf(n, l).c == c) leaves.push_back(l);
        }
        auto pick = [leaves](const RandomSource& rs) { return leaves[rs.stream("class").below(leaves.size())]; };
        ZkClass k;
        k.name = "c=" + std::to_string(c);
        k.real = [=](std::size_t t) {
          const auto rs = real_root.derive(t);
          return round_with(honest, rs, plain_table, {{"leaf", pick(rs)}});
        };
        k.simulated = [=](std::size_t t) {
          const auto rs = sim_root.derive(t);
          return takuzu_zkp::simulate_round(*i, pick(rs), rs);
        };
        if (c == 2) {
          Strategy identity = [i, s](const RandomSource& rs) -> std::unique_ptr<Attempt> {
            auto com = takuzu_zkp::setup_commitment(*i, *s, takuzu_zkp::identity(i->n));
            return attempt_of<takuzu::Instance>(i, std::move(com),
                                                std::make_unique<HonestProver>(rs.stream(RandomSource::kProver)));
          };
          k.leaky = [=](std::size_t t) {
            const auto rs = leak_root.derive(t);
            return round_with(identity, rs, plain_table, {{"leaf", pick(rs)}});
          };
        }
        out.push_back(std::move(k));
      }
      break;
    }
    case Game::Kakuro: {
      auto i = std::make_shared<const kakuro::Instance>(std::get<kakuro::Instance>(inst));
      ZkClass k;
      k.name = "all";
      k.real = [=](std::size_t t) { return round_with(honest, real_root.derive(t), plain_table, {}); };
      k.simulated = [=](std::size_t t) { return kakuro_zkp::simulate_round(*i, sim_root.derive(t)); };
      k.leaky = [=](std::size_t t) { return round_with(honest, leak_root.derive(t), leaky_table, {}); };
      out.push_back(std::move(k));
      break;
    }
    case Game::Kenken: {
      auto i = std::make_shared<const kenken::Instance>(std::get<kenken::Instance>(inst));
      ZkClass k;
      k.name = "all";
      k.real = [=](std::size_t t) { return round_with(honest, real_root.derive(t), plain_table, {}); };
      k.simulated = [=](std::size_t t) { return kenken_zkp::simulate_round(*i, sim_root.derive(t)); };
      k.leaky = [=](std::size_t t) { return round_with(honest, leak_root.derive(t), leaky_table, {}); };
      out.push_back(std::move(k));
      break;
    }
  }
  return out;
}

std::vector<CostPoint> measure_verifier_cost(int n_min, int n_max, std::size_t per_n, std::uint64_t seed) {
  if (n_min < 1 || n_max < n_min || per_n == 0) throw Error(Errc::InvalidArgument, "bad cost range");
  std::vector<CostPoint> out;
  const RandomSource root(seed);
  for (int n = n_min; n <= n_max; ++n) {
    double total = 0;
    for (std::size_t j = 0; j < per_n; ++j) {
      const RandomSource rs = root.derive(static_cast<std::uint64_t>(n) * 1000 + j);
      Stream gen = rs.stream("instance");
      auto [inst, sol] = generate::kenken(n, gen);
      Stream coins = rs.stream(RandomSource::kProver);
      auto com = kenken_zkp::setup_commitment(inst, sol, coins);
      HonestProver prover(std::move(coins));
      Transcript log;
      Table table(log, rs.stream(RandomSource::kShuffle));
      LocalVerifier verifier(rs.stream(RandomSource::kChallenge));
      Round rd{table, verifier, prover};
      if (!kenken_zkp::verify_round(inst, com, rd)) {
        throw Error(Errc::InvalidSolution, "honest KenKen round rejected at n=" + std::to_string(n));
      }
      total += static_cast<double>(table.operations());
    }
    out.push_back({n, total / static_cast<double>(per_n)});
  }
  return out;
}

}  // namespace pzk
