// Acceptance run: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is the number of failed criteria (capped at 1).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "pzk/akari_zkp.hpp"
#include "pzk/generators.hpp"
#include "pzk/harness.hpp"
#include "pzk/interface.hpp"
#include "pzk/kakuro_zkp.hpp"
#include "pzk/kenken_zkp.hpp"
#include "pzk/takuzu_zkp.hpp"
#include "support.hpp"

using namespace pzk;
using stats::Rational;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string summary;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Calls f(i) for i in [0, n) over all cores.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers(); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

double sigma(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

bool within3(double rate, double p, std::size_t n) { return std::abs(rate - p) <= 3 * sigma(p, n) + 1e-12; }

// ---------------------------------------------------------------------------
// 1

Verdict completeness() {
  const auto t0 = Clock::now();
  std::atomic<std::size_t> accepted{0};
  const std::size_t seeds = 200;
  std::vector<test::Fixture> fx;
  for (Game g : kGames) fx.push_back(test::fixture(g));
  parallel_for(4 * seeds, [&](std::size_t i) {
    const auto& f = fx[i / seeds];
    const ProtocolConfig cfg{game_of(f.inst), 50, i % seeds};
    accepted += run_protocol(f.inst, f.sol, cfg).accepted;
  });
  const double secs = seconds_since(t0);
  return {accepted == 4 * seeds && secs < 60,
          fmt("%zu/%zu fixture runs accepted at K=50 over %zu seeds per game in %.1f s", accepted.load(), 4 * seeds,
              seeds, secs)};
}

// ---------------------------------------------------------------------------
// 2

/// Escape probability of a Kakuro commitment under uniform envelope-to-rule
/// bijections, from its contents and the run rules alone.
Rational kakuro_assignment_oracle(const kakuro::Instance& inst, const kakuro_zkp::Commitment& com) {
  auto value = [](const Envelope& e) {
    return static_cast<int>(faces_of(private_peek(e, Role::Prover))[Face::Black]);
  };
  const auto whites = inst.whites();
  std::vector<std::array<int, 4>> vals(whites.size());
  std::vector<std::size_t> mixed;
  for (std::size_t i = 0; i < whites.size(); ++i) {
    for (int k = 0; k < 4; ++k) vals[i][k] = value(com.cells[i][k]);
    if (std::any_of(vals[i].begin(), vals[i].end(), [&](int v) { return v != vals[i][0]; })) mixed.push_back(i);
  }
  std::vector<std::vector<int>> sides(inst.runs.size());
  for (std::size_t r = 0; r < inst.runs.size(); ++r) {
    for (const auto& e : com.sides[r]) sides[r].push_back(value(e));
  }
  std::vector<std::array<int, 4>> perms;
  std::array<int, 4> p{0, 1, 2, 3};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  // rule slots: 0 row unicity, 1 column unicity, 2 row sum, 3 column sum
  std::vector<std::array<int, 4>> by_rule(whites.size());
  for (std::size_t i = 0; i < whites.size(); ++i) by_rule[i] = vals[i];
  std::int64_t pass = 0, total = 0;
  std::vector<std::size_t> idx(mixed.size(), 0);
  while (true) {
    for (std::size_t m = 0; m < mixed.size(); ++m) {
      for (int rule = 0; rule < 4; ++rule) by_rule[mixed[m]][rule] = vals[mixed[m]][perms[idx[m]][rule]];
    }
    bool ok = true;
    for (std::size_t r = 0; r < inst.runs.size() && ok; ++r) {
      const auto& run = inst.runs[r];
      const int uni = run.horizontal ? 0 : 1, sum = run.horizontal ? 2 : 3;
      std::vector<int> seen = sides[r];
      int s = 0;
      for (const Cell c : run.cells) {
        const auto i = static_cast<std::size_t>(std::find(whites.begin(), whites.end(), c) - whites.begin());
        seen.push_back(by_rule[i][uni]);
        s += by_rule[i][sum];
      }
      std::sort(seen.begin(), seen.end());
      std::vector<int> digits(9);
      std::iota(digits.begin(), digits.end(), 1);
      ok = seen == digits && s == run.clue;
    }
    pass += ok;
    ++total;
    std::size_t m = 0;
    while (m < idx.size() && ++idx[m] == perms.size()) idx[m++] = 0;
    if (m == idx.size()) break;
  }
  return Rational::of(pass, total);
}

Verdict kakuro_soundness() {
  const auto f = test::fixture(Game::Kakuro);
  const auto& inst = std::get<kakuro::Instance>(f.inst);
  bool pass = true;
  std::string summary;
  for (const auto& [name, expected] : {std::pair<std::string, Rational>{"deviant-envelope", {1, 4}},
                                    std::pair<std::string, Rational>{"deviant-envelope-2", {1, 6}}}) {
    const auto plan = make_cheat(f.inst, f.sol, name);
    Supply supply;
    const auto com = kakuro_zkp::commitment_from_json(inst, plan.strategy(RandomSource(0))->commitment(), supply);
    const Rational oracle = kakuro_assignment_oracle(inst, com);
    const auto rep = estimate_soundness(plan, 20000, 1);
    const bool ok = oracle == expected && rep.exact == oracle && within3(rep.escape_rate, oracle.value(), rep.trials);
    pass = pass && ok;
    summary += fmt("%s%s: oracle %s, enumerated %s, MC %.5f (3 sigma %.4f)", summary.empty() ? "" : "; ", name.c_str(),
                   oracle.str().c_str(), rep.exact ? rep.exact->str().c_str() : "-", rep.escape_rate,
                   3 * sigma(oracle.value(), rep.trials));
  }
  return {pass, summary};
}

// ---------------------------------------------------------------------------
// 3

Verdict kenken_soundness() {
  const auto f = test::fixture(Game::Kenken);
  const auto dev = estimate_soundness(make_cheat(f.inst, f.sol, "deviant-envelope"), 20000, 1);
  const double ceiling = 1.0 / 3 + 3 * sigma(1.0 / 3, dev.trials);
  const auto wm = estimate_soundness(make_cheat(f.inst, f.sol, "wrong-mark"), 10000, 2, false);
  const bool ok = dev.escape_rate <= ceiling && dev.exact && dev.exact->value() <= 1.0 / 3 && wm.escapes == 0 &&
                  wm.trials == 10000;
  return {ok, fmt("deviant-envelope MC %.5f (ceiling %.5f, enumerated %s); wrong-mark %zu escapes in %zu rounds",
                  dev.escape_rate, ceiling, dev.exact ? dev.exact->str().c_str() : "-", wm.escapes, wm.trials)};
}

// ---------------------------------------------------------------------------
// 4

/// One flipped card at u of an otherwise homogeneous commitment of the valid
/// light set L: c=0 always catches; under c=1 the flipped card escapes only
/// in the uses listed below, each hit with probability 1/|packet|.
Rational akari_flip_oracle(const akari::Instance& inst, const std::set<Cell>& L, Cell u) {
  auto cross_count = [&](Cell w) {
    int k = L.count(w) ? 1 : 0;
    for (const Cell v : test::akari_vis(inst, w)) k += static_cast<int>(L.count(v));
    return k;
  };
  auto segment_lights = [&](bool horizontal) {
    int k = L.count(u) ? 1 : 0;
    for (const Cell v : test::akari_vis(inst, u)) {
      if ((v.row == u.row) == horizontal) k += static_cast<int>(L.count(v));
    }
    return k;
  };
  const bool lit = L.count(u) > 0;  // the flipped card shows the other face
  std::int64_t escapes = 0;
  for (bool h : {true, false}) {
    const int k = segment_lights(h) + (lit ? -1 : 1);
    // the prover tops up a dark segment with one light
    escapes += (k == 0 ? 1 : k) == 1;
  }
  // walls: the count moves by one, always caught
  std::vector<Cell> crosses{u};
  for (const Cell v : test::akari_vis(inst, u)) crosses.push_back(v);
  for (const Cell w : crosses) {
    const int k = cross_count(w) + (lit ? -1 : 1);
    const int shown = k + (k == 2 ? 0 : 1);  // an Empty on two lights, a Light otherwise
    escapes += shown == 2;
  }
  const auto size = static_cast<std::int64_t>(3 + test::akari_adj_numbered(inst, u) + test::akari_vis(inst, u).size());
  return Rational::of(1, 2) * Rational::of(escapes, size);
}

Verdict akari_soundness() {
  const auto f = test::fixture(Game::Akari);
  const auto& inst = std::get<akari::Instance>(f.inst);
  const auto& sol = std::get<akari::Solution>(f.sol);

  const auto ns = estimate_soundness(make_cheat(f.inst, f.sol, "non-solution"), 20000, 1);
  // homogeneous packets pass c=0; c=1 passes only for a valid light set
  const Rational ns_oracle = Rational::of(1, 2) + Rational::of(test::akari_ok(inst, {}) ? 1 : 0, 2);

  const auto plan = make_cheat(f.inst, f.sol, "inconsistent-cell");
  Supply supply;
  const auto com = akari_zkp::commitment_from_json(inst, plan.strategy(RandomSource(0))->commitment(), supply);
  const auto st = akari::derive_structure(inst);
  std::optional<Cell> u;
  for (std::size_t i = 0; i < com.primal.size(); ++i) {
    if (faces_of(com.primal[i].items).entries().size() > 1) u = st.whites[i];
  }
  const Rational ic_oracle = u ? akari_flip_oracle(inst, sol.lights, *u) : Rational{1, 1};
  const auto ic = estimate_soundness(plan, 20000, 1);

  const bool ok = ns_oracle == Rational{1, 2} && ns.exact == ns_oracle &&
                  within3(ns.escape_rate, ns_oracle.value(), ns.trials) && u && ic.exact == ic_oracle &&
                  within3(ic.escape_rate, ic_oracle.value(), ic.trials);
  return {ok, fmt("non-solution: oracle %s, MC %.5f; inconsistent-cell at %s: oracle %s, enumerated %s, MC %.5f",
                  ns_oracle.str().c_str(), ns.escape_rate, u ? to_string(*u).c_str() : "?", ic_oracle.str().c_str(),
                  ic.exact ? ic.exact->str().c_str() : "-", ic.escape_rate)};
}

// ---------------------------------------------------------------------------
// 5

class TakuzuAttempt : public Attempt {
 public:
  TakuzuAttempt(std::shared_ptr<const takuzu::Instance> inst, takuzu_zkp::Commitment com, Stream coins)
      : inst_(std::move(inst)), com_(std::move(com)), prover_(std::move(coins)) {}
  bool verify(Round& rd) override { return takuzu_zkp::verify_round(*inst_, com_, rd); }
  Prover& prover() override { return prover_; }
  nlohmann::json commitment() const override { return takuzu_zkp::to_json(com_); }

 private:
  std::shared_ptr<const takuzu::Instance> inst_;
  takuzu_zkp::Commitment com_;
  HonestProver prover_;
};

using Rows = std::vector<std::vector<int>>;

/// Leaves that catch a grid committed with truthful permutations.
int catching_leaves(const takuzu::Instance& inst, const Rows& g) {
  const int n = inst.n;
  auto line = [&](int d, int i) {
    std::vector<int> v(n);
    for (int k = 0; k < n; ++k) v[k] = d == 0 ? g[i][k] : g[k][i];
    return v;
  };
  int k = 0;
  bool givens = false;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) givens |= inst.givens.at(r, c) != takuzu::kBlank && inst.givens.at(r, c) != g[r][c];
  }
  k += givens;
  for (int d = 0; d < 2; ++d) {
    bool unbalanced = false;
    for (int i = 0; i < n; ++i) {
      const auto v = line(d, i);
      unbalanced |= 2 * std::accumulate(v.begin(), v.end(), 0) != n;
    }
    k += unbalanced;
    // revealing line l: another line with zeros wherever l has zeros leaves a deck without a 1
    for (int l = 0; l < n; ++l) {
      const auto a = line(d, l);
      bool caught = false;
      for (int m = 0; m < n && !caught; ++m) {
        if (m == l) continue;
        const auto b = line(d, m);
        bool covered = true;
        for (int x = 0; x < n; ++x) covered &= a[x] == 1 || b[x] == 0;
        caught = covered;
      }
      k += caught;
    }
    for (int e = 0; e < 3; ++e) {
      bool triple = false;
      for (int i = 0; i < n; ++i) {
        const auto v = line(d, i);
        for (int s = e; s + 3 <= n && (s - e) / 3 < (n - e) / 3; s += 3) triple |= v[s] == v[s + 1] && v[s + 1] == v[s + 2];
      }
      k += triple;
    }
  }
  return k;
}

Verdict takuzu_soundness() {
  const auto f = test::fixture(Game::Takuzu);
  const auto inst = std::make_shared<const takuzu::Instance>(std::get<takuzu::Instance>(f.inst));
  const int n = inst->n;
  const std::size_t leaves = 2 * static_cast<std::size_t>(n) + 9;

  // Grids agreeing with the givens, one per broken rule class.
  std::map<std::string, Rows> picks;
  std::vector<Cell> blanks;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (inst->givens.at(r, c) == takuzu::kBlank) blanks.push_back({r, c});
    }
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blanks.size()); ++mask) {
    Rows g(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) g[r][c] = inst->givens.at(r, c);
    }
    for (std::size_t b = 0; b < blanks.size(); ++b) g[blanks[b].row][blanks[b].col] = (mask >> b) & 1;
    Grid<int> grid(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) grid.at(r, c) = g[r][c];
    }
    std::set<std::string> broken;
    for (const auto& v : takuzu::check_rules(grid)) broken.insert(v.rule);
    if (broken.size() == 1 && !picks.count(*broken.begin())) picks[*broken.begin()] = g;
    if (broken.size() == 3 && !picks.count("all")) picks["all"] = g;
  }

  bool pass = !picks.empty();
  std::string summary;
  std::uint64_t seed = 10;
  for (const auto& [label, g] : picks) {
    Grid<int> grid(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) grid.at(r, c) = g[r][c];
    }
    CheatPlan plan;
    plan.name = "wrong-grid/" + label;
    plan.axes = {{"leaf", Axis::Kind::Choice, 0}};
    plan.strategy = [inst, grid](const RandomSource& rs) -> std::unique_ptr<Attempt> {
      auto com = takuzu_zkp::cheating_setup(*inst, takuzu_zkp::WrongGrid{grid}, rs);
      return std::make_unique<TakuzuAttempt>(inst, std::move(com), rs.stream(RandomSource::kProver));
    };
    const int k = catching_leaves(*inst, g);
    const Rational oracle = Rational::of(static_cast<std::int64_t>(leaves) - k, static_cast<std::int64_t>(leaves));
    const auto rep = estimate_soundness(plan, 20000, seed++);
    const bool ok = k > 0 && rep.exact == oracle && within3(rep.escape_rate, oracle.value(), rep.trials);
    pass = pass && ok;
    summary += fmt("%s%s k=%d: 1-k/17=%s, MC %.5f", summary.empty() ? "" : "; ", label.c_str(), k,
                   oracle.str().c_str(), rep.escape_rate);
  }
  for (const auto& name : cheat_names(Game::Takuzu)) {
    const auto rep = estimate_soundness(make_cheat(f.inst, f.sol, name), 20000, seed++);
    const bool ok = rep.exact && rep.exact->value() < 1 && rep.within_three_sigma();
    pass = pass && ok;
    summary += fmt("; %s: enumerated %s, MC %.5f", name.c_str(), rep.exact ? rep.exact->str().c_str() : "-",
                   rep.escape_rate);
  }
  return {pass, summary};
}

// ---------------------------------------------------------------------------
// 6

Verdict zero_knowledge() {
  bool pass = true;
  std::string summary;
  const std::size_t N = 5000;
  for (Game g : kGames) {
    const auto f = test::fixture(g);
    bool has_leak = false;
    for (const auto& k : zk_classes(f.inst, f.sol, 1)) {
      const auto sim = compare_transcripts(k.real, k.simulated, N);
      bool ok = sim.p_value > 0.01 && sim.keys > 0;
      std::string line = fmt("%s %s: p=%.3g over %zu cells", to_string(g), k.name.c_str(), sim.p_value, sim.keys);
      if (k.leaky) {
        has_leak = true;
        const auto leak = compare_transcripts(k.real, k.leaky, N);
        ok = ok && leak.p_value < 1e-6;
        line += fmt(", leaky p=%.3g", leak.p_value);
      }
      std::cerr << "  " << line << (ok ? "" : "  <- fail") << "\n";
      pass = pass && ok;
      summary += (summary.empty() ? "" : "; ") + line;
    }
    pass = pass && has_leak;
  }
  return {pass, summary};
}

// ---------------------------------------------------------------------------
// 7

using Content = std::map<int, std::pair<std::size_t, std::size_t>>;  // prime -> (black, red)

std::pair<std::size_t, std::size_t> black_red(const Envelope& e) {
  const auto f = faces_of(private_peek(e, Role::Prover));
  return {f[Face::Black], f[Face::Red]};
}

/// Free p-envelopes and the marked envelope's p-envelopes of a large envelope.
std::pair<Content, Content> large_contents(const Envelope& large, bool& marked_ok) {
  Content free, marked;
  marked_ok = false;
  for (const auto& it : private_peek(large, Role::Prover)) {
    const auto& e = it.envelope();
    if (e.prime_label) {
      free[*e.prime_label] = black_red(e);
    } else {
      for (const auto& pe : private_peek(e, Role::Prover)) marked[*pe.envelope().prime_label] = black_red(pe.envelope());
      marked_ok = true;
    }
  }
  return {free, marked};
}

Verdict division_example() {
  const kenken::Cage cage{"D", {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, kenken::Op::Div, 2};
  const int n = 9;
  Supply supply;
  auto decoys = kenken_zkp::build_division_decoys(cage, 6, n, supply);

  // The printed listing, envelope by envelope: (black, red).
  const std::map<int, std::pair<Content, Content>> listed{
      {8, {{{2, {2, 7}}, {3, {0, 6}}, {5, {0, 3}}, {7, {0, 3}}}, {{2, {3, 0}}, {3, {0, 2}}, {5, {0, 1}}, {7, {0, 1}}}}},
      {4, {{{2, {1, 8}}, {3, {0, 6}}, {5, {0, 3}}, {7, {0, 3}}}, {{2, {2, 1}}, {3, {0, 2}}, {5, {0, 1}}, {7, {0, 1}}}}},
      {2, {{{2, {0, 9}}, {3, {0, 6}}, {5, {0, 3}}, {7, {0, 3}}}, {{2, {1, 2}}, {3, {0, 2}}, {5, {0, 1}}, {7, {0, 1}}}}},
      {6, {{{2, {0, 9}}, {3, {1, 5}}, {5, {0, 3}}, {7, {0, 3}}}, {{2, {1, 2}}, {3, {1, 1}}, {5, {0, 1}}, {7, {0, 1}}}}},
  };

  bool pass = decoys.maxima == std::vector<int>{2, 4, 6, 8} && decoys.large.size() == 3;
  std::size_t matched = 0;
  for (const auto& large : decoys.large) {
    bool marked_ok = false;
    const auto got = large_contents(large, marked_ok);
    bool hit = false;
    for (int m : {2, 4, 8}) hit |= marked_ok && got == listed.at(m);
    matched += hit;
  }
  pass = pass && matched == 3;

  // The honest cage 6, 3, 1, 1 after marking the 6.
  Transcript log;
  Table table(log, Stream(1));
  Envelope marked = kenken_zkp::encode_factors(6, n, supply);
  std::vector<Envelope> others;
  for (int v : {1, 3, 1}) others.push_back(kenken_zkp::encode_factors(v, n, supply));
  table.mark(marked, 0, "cage-div");
  const Envelope merged = kenken_zkp::assemble_division(table, std::move(marked), std::move(others), n, "cage-div");
  bool marked_ok = false;
  const auto got = large_contents(merged, marked_ok);
  const bool honest = marked_ok && got == listed.at(6);
  pass = pass && honest;
  return {pass, fmt("maxima {2,4,6,8}; %zu/3 decoys and %s merged envelope match the listing envelope by envelope",
                    matched, honest ? "the" : "NOT the")};
}

// ---------------------------------------------------------------------------
// 8

struct Tally {
  std::atomic<std::size_t> instances{0};
  std::atomic<std::size_t> violations{0};
  void check(bool ok) { violations += !ok; }
};

Round make_round(Table& t, Verifier& v, Prover& p) { return Round{t, v, p}; }

void akari_property(std::size_t i, Tally& tally) {
  Stream rng(9000 + i);
  const int h = 2 + static_cast<int>(rng.below(6)), w = 2 + static_cast<int>(rng.below(6));
  auto [inst, sol] = generate::akari(h, w, rng);
  tally.check(test::akari_ok(inst, sol.lights));
  const auto st = akari::derive_structure(inst);
  for (int c = 0; c < 2; ++c) {
    const RandomSource rs(i * 2 + static_cast<std::uint64_t>(c));
    auto com = akari_zkp::setup_commitment(inst, sol, rs);
    for (std::size_t k = 0; k < st.whites.size(); ++k) {
      const Cell u = st.whites[k];
      const std::size_t want = 3 + static_cast<std::size_t>(test::akari_adj_numbered(inst, u)) + test::akari_vis(inst, u).size();
      tally.check(com.primal[k].size() == want && com.dual[k].size() == want);
      tally.check(faces_of(com.primal[k].items).entries().size() == 1);
    }
    tally.check(com.primal.size() == static_cast<std::size_t>(std::count_if(
                                         inst.cells.data().begin(), inst.cells.data().end(),
                                         [](const akari::Square& s) { return s.white(); })));
    Transcript log;
    Table table(log, rs.stream(RandomSource::kShuffle));
    LocalVerifier coins(rs.stream(RandomSource::kChallenge));
    ScriptedVerifier v(coins);
    v.force("c", static_cast<std::size_t>(c));
    HonestProver p(rs.stream(RandomSource::kProver));
    Round rd = make_round(table, v, p);
    tally.check(akari_zkp::verify_round(inst, com, rd));
    tally.check(table.conserved());
  }
  ++tally.instances;
}

void takuzu_property(std::size_t i, Tally& tally) {
  Stream rng(7000 + i);
  const int n = 2 * (1 + static_cast<int>(rng.below(4)));
  auto [inst, sol] = generate::takuzu(n, rng);
  std::vector<std::vector<int>> g(n, std::vector<int>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g[r][c] = sol.values.at(r, c);
  }
  tally.check(test::takuzu_ok(g));
  for (std::size_t leaf = i % 3; leaf < takuzu_zkp::leaf_count(n); leaf += 3) {
    const RandomSource rs(i * 100 + leaf);
    auto com = takuzu_zkp::setup_commitment(inst, sol, rs);
    tally.check(com.cards.size() == static_cast<std::size_t>(n * n));
    FaceCounts before;
    collect_card_faces(com.cards, before);
    tally.check(before[Face::Bit1] == static_cast<std::size_t>(n * n / 2));
    Transcript log;
    Table table(log, rs.stream(RandomSource::kShuffle));
    LocalVerifier coins(rs.stream(RandomSource::kChallenge));
    ScriptedVerifier v(coins);
    v.force("leaf", leaf);
    HonestProver p(rs.stream(RandomSource::kProver));
    Round rd = make_round(table, v, p);
    tally.check(takuzu_zkp::verify_round(inst, com, rd));
    tally.check(table.conserved());
  }
  ++tally.instances;
}

void kakuro_property(std::size_t i, Tally& tally) {
  Stream rng(5000 + i);
  const int h = 2 + static_cast<int>(rng.below(5)), w = 2 + static_cast<int>(rng.below(5));
  auto [inst, sol] = generate::kakuro(h, w, rng);
  const RandomSource rs(i);
  auto com = kakuro_zkp::setup_commitment(inst, sol, rs);
  std::vector<Uid> uids;
  tally.check(com.cells.size() == inst.whites().size());
  for (std::size_t k = 0; k < com.cells.size(); ++k) {
    tally.check(com.cells[k].size() == 4);
    for (const auto& e : com.cells[k]) uids.push_back(e.uid);
  }
  for (std::size_t r = 0; r < com.sides.size(); ++r) {
    tally.check(com.sides[r].size() == 9 - inst.runs[r].cells.size());
    for (const auto& e : com.sides[r]) uids.push_back(e.uid);
  }
  Transcript log;
  Table table(log, rs.stream(RandomSource::kShuffle));
  LocalVerifier v(rs.stream(RandomSource::kChallenge));
  HonestProver p(rs.stream(RandomSource::kProver));
  Round rd = make_round(table, v, p);
  tally.check(kakuro_zkp::verify_round(inst, com, rd));
  tally.check(table.conserved());
  const auto& opened = table.opened();
  for (Uid u : uids) tally.check(std::count(opened.begin(), opened.end(), u) == 1);
  ++tally.instances;
}

void kenken_property(std::size_t i, Tally& tally) {
  Stream rng(3000 + i);
  const int n = 2 + static_cast<int>(rng.below(5));
  auto [inst, sol] = generate::kenken(n, rng);
  const RandomSource rs(i);
  auto com = kenken_zkp::setup_commitment(inst, sol, rs);
  std::vector<Uid> outer;
  tally.check(com.cells.size() == static_cast<std::size_t>(n * n));
  for (const auto& cell : com.cells) {
    tally.check(cell.size() == 3);
    for (const auto& e : cell) outer.push_back(e.uid);
  }
  Transcript log;
  Table table(log, rs.stream(RandomSource::kShuffle));
  LocalVerifier v(rs.stream(RandomSource::kChallenge));
  HonestProver p(rs.stream(RandomSource::kProver));
  Round rd = make_round(table, v, p);
  tally.check(kenken_zkp::verify_round(inst, com, rd));
  tally.check(table.conserved());
  const auto& opened = table.opened();
  for (Uid u : outer) tally.check(std::count(opened.begin(), opened.end(), u) == 1);
  ++tally.instances;
}

Verdict invariants() {
  const std::size_t per_game = 120;
  Tally tallies[4];
  const std::function<void(std::size_t, Tally&)> props[4] = {akari_property, takuzu_property, kakuro_property,
                                                              kenken_property};
  parallel_for(4 * per_game, [&](std::size_t j) {
    const std::size_t g = j / per_game;
    try {
      props[g](j % per_game, tallies[g]);
    } catch (const std::exception& e) {
      std::cerr << "  " << to_string(kGames[g]) << " instance " << j % per_game << ": " << e.what() << "\n";
      ++tallies[g].violations;
    }
  });
  bool pass = true;
  std::string summary;
  for (std::size_t g = 0; g < 4; ++g) {
    pass = pass && tallies[g].instances >= 100 && tallies[g].violations == 0;
    summary += fmt("%s%s %zu instances, %zu violations", g ? "; " : "", to_string(kGames[g]),
                   tallies[g].instances.load(), tallies[g].violations.load());
  }
  return {pass, summary};
}

// ---------------------------------------------------------------------------
// 9

Verdict solver_oracle() {
  const auto kk = test::fixture(Game::Kakuro);
  const auto& ki = std::get<kakuro::Instance>(kk.inst);
  const auto kbrute = test::kakuro_brute(ki);
  std::vector<int> printed;
  for (const Cell c : ki.whites()) printed.push_back(std::get<kakuro::Solution>(kk.sol).values[c]);
  const auto ksolve = solve(kk.inst, 10);
  const bool kak = kbrute.size() == 1 && kbrute[0] == printed && ksolve.size() == 1 && ksolve[0] == kk.sol;

  const auto tk = test::fixture(Game::Takuzu);
  const auto& ti = std::get<takuzu::Instance>(tk.inst);
  const auto tbrute = test::takuzu_brute(ti);
  const auto& ts = std::get<takuzu::Solution>(tk.sol);
  bool same = tbrute.size() == 1;
  for (int r = 0; same && r < ti.n; ++r) {
    for (int c = 0; c < ti.n; ++c) same = same && tbrute[0][r][c] == ts.values.at(r, c);
  }
  const auto tsolve = solve(tk.inst, 10);
  const bool tak = same && tsolve.size() == 1 && tsolve[0] == tk.sol;

  const auto kn = test::fixture(Game::Kenken);
  const auto& ni = std::get<kenken::Instance>(kn.inst);
  std::vector<std::vector<int>> g(ni.n, std::vector<int>(ni.n));
  for (int r = 0; r < ni.n; ++r) {
    for (int c = 0; c < ni.n; ++c) g[r][c] = std::get<kenken::Solution>(kn.sol).values.at(r, c);
  }
  const auto viol = validate(kn.inst, kn.sol);
  const bool ken = viol.empty() && test::kenken_ok(ni, g);
  return {kak && tak && ken, fmt("kakuro %zu solution(s) by enumeration, printed %s; takuzu %zu, printed %s; "
                                 "kenken %zu violations",
                                 kbrute.size(), kak ? "matches" : "differs", tbrute.size(), tak ? "matches" : "differs",
                                 viol.size())};
}

// ---------------------------------------------------------------------------
// 10

Verdict transport() {
  bool pass = true;
  std::string summary;
  for (Game g : kGames) {
    const auto f = test::fixture(g);
    const std::size_t rounds = 10;
    const std::uint64_t seed = 2024;
    const auto local = run_protocol(f.inst, f.sol, {g, rounds, seed});
    const auto dist = session::run_forked({"acceptance", f.inst, rounds, seed}, honest_strategy(f.inst, f.sol));
    const auto a = local.transcript.to_ndjson();
    const bool ok = dist.referee.accepted && local.accepted && dist.referee.transcript.to_ndjson() == a &&
                    dist.verifier_view.to_ndjson() == a;
    pass = pass && ok;
    summary += fmt("%s%s %zu bytes %s", summary.empty() ? "" : "; ", to_string(g), a.size(), ok ? "identical" : "DIFFER");
  }
  return {pass, summary};
}

// ---------------------------------------------------------------------------
// 11

Verdict verifier_cost() {
  const auto pts = measure_verifier_cost(3, 16, 3, 1);
  std::vector<double> x, y;
  bool monotone = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x.push_back(pts[i].n);
    y.push_back(pts[i].operations);
    if (i) monotone = monotone && pts[i].operations > pts[i - 1].operations;
  }
  const double slope = stats::loglog_slope(x, y);
  return {slope <= 5.5 && monotone && pts.size() == 14,
          fmt("log-log slope %.3f over n=3..16 (%.0f ops at n=3, %.0f at n=16), %s", slope, y.front(), y.back(),
              monotone ? "monotone" : "not monotone")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"completeness", completeness},
      {"kakuro soundness", kakuro_soundness},
      {"kenken soundness", kenken_soundness},
      {"akari soundness", akari_soundness},
      {"takuzu soundness", takuzu_soundness},
      {"zero knowledge", zero_knowledge},
      {"division encoding", division_example},
      {"conservation and budgets", invariants},
      {"solver oracle", solver_oracle},
      {"transport transparency", transport},
      {"verifier cost", verifier_cost},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << "criterion " << (i + 1) << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << v.summary << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
