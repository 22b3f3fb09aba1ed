#include <doctest.h>

#include <map>

#include "pzk/error.hpp"
#include "pzk/takuzu_zkp.hpp"
#include "support.hpp"

using namespace pzk;
using namespace pzk::takuzu_zkp;

namespace {

const takuzu::Instance& fig() {
  static const auto f = test::fixture(Game::Takuzu);
  return std::get<takuzu::Instance>(f.inst);
}
const takuzu::Solution& fig_sol() {
  static const auto f = test::fixture(Game::Takuzu);
  return std::get<takuzu::Solution>(f.sol);
}

Grid<int> grid_of(const std::vector<std::string>& rows) {
  const int n = static_cast<int>(rows.size());
  Grid<int> g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g.at(r, c) = rows[r][c] - '0';
  }
  return g;
}

struct Outcome {
  bool ok = false;
  bool conserved = false;
  Transcript log;
};

Outcome run_leaf(const takuzu::Instance& inst, Commitment com, std::size_t leaf, std::uint64_t seed = 1) {
  Outcome out;
  const RandomSource rs(seed);
  Table table(out.log, rs.stream(RandomSource::kShuffle));
  LocalVerifier coins(rs.stream(RandomSource::kChallenge));
  ScriptedVerifier v(coins);
  v.force("leaf", leaf);
  HonestProver p(rs.stream(RandomSource::kProver));
  Round rd{table, v, p};
  out.ok = verify_round(inst, com, rd);
  out.conserved = table.conserved();
  return out;
}

}  // namespace

TEST_CASE("leaf space") {
  CHECK(leaf_count(4) == 17);
  CHECK(leaf_count(8) == 25);
  std::map<int, int> per_class;
  for (std::size_t i = 0; i < leaf_count(4); ++i) ++per_class[decode_leaf(4, i).c];
  CHECK(per_class == std::map<int, int>{{0, 1}, {1, 2}, {2, 8}, {3, 6}});

  Stream r(3);
  std::map<std::size_t, int> hist;
  const int N = 17000;
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < 17; ++i) index_of[describe(decode_leaf(4, i))] = i;
  REQUIRE(index_of.size() == 17);
  for (int k = 0; k < N; ++k) ++hist[index_of.at(describe(sample_challenge(4, r)))];
  REQUIRE(hist.size() == 17);
  for (const auto& [leaf, count] : hist) CHECK(std::abs(count - 1000) < 5 * std::sqrt(1000.0));
}

TEST_CASE("permutations") {
  Permutations p{{1, 0, 2, 3}, {0, 1, 2, 3}};
  const auto s = permute(p, fig_sol().values);
  CHECK(s == grid_of({"1001", "0110", "0011", "1100"}));
  CHECK(unpermute(p, s) == fig_sol().values);

  Stream r(9);
  for (int k = 0; k < 20; ++k) {
    Permutations q{r.permutation(4), r.permutation(4)};
    CHECK(unpermute(q, permute(q, fig_sol().values)) == fig_sol().values);
    CHECK(read_note(write_note(q), 4) == q);
  }
  CHECK_FALSE(read_note("garbage", 4));
  CHECK_FALSE(read_note(write_note(p), 6));
  CHECK(permute(identity(4), fig_sol().values) == fig_sol().values);
}

TEST_CASE("fixed permutations land where they should") {
  Permutations p{{1, 0, 2, 3}, {0, 1, 2, 3}};
  const auto com = setup_commitment(fig(), fig_sol(), p);
  Grid<int> seen(4, 4);
  for (int i = 0; i < 16; ++i) seen.at(i / 4, i % 4) = com.cards[i].card().face == Face::Bit1;
  CHECK(seen == grid_of({"1001", "0110", "0011", "1100"}));
  const auto note = private_peek(com.E, Role::Prover);
  REQUIRE(note.size() == 1);
  CHECK(read_note(note[0].note().text, 4) == p);
}

TEST_CASE("honest commitments pass every leaf") {
  for (std::size_t leaf = 0; leaf < leaf_count(4); ++leaf) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto r = run_leaf(fig(), setup_commitment(fig(), fig_sol(), RandomSource(seed)), leaf, seed);
      CHECK(r.ok);
      CHECK(r.conserved);
    }
  }
}

TEST_CASE("balance decks show two of each bit") {
  const auto r = run_leaf(fig(), setup_commitment(fig(), fig_sol(), RandomSource(2)), 1);
  int decks = 0;
  for (const auto& e : r.log.events()) {
    if (e.kind == EventKind::CardsRevealed && e.context == "c1") {
      CHECK(e.faces == FaceCounts{{Face::Bit0, 2}, {Face::Bit1, 2}});
      ++decks;
    }
  }
  CHECK(decks == 4);
}

TEST_CASE("duplicated lines are caught by exactly the line-reveal leaves") {
  // rows 0=1 and 2=3 repeat, as do columns 0=3 and 1=2; balance and triples hold
  const auto g = grid_of({"0110", "0110", "1001", "1001"});
  int caught = 0;
  for (std::size_t leaf = 0; leaf < leaf_count(4); ++leaf) {
    Supply s;
    const auto com = commit_grid(g, identity(4), identity(4), s);
    const auto r = run_leaf(fig(), com, leaf);
    CHECK(r.conserved);
    const Leaf l = decode_leaf(4, leaf);
    const bool expected = l.c == 2;
    // c=0 also fails: the grid disagrees with the givens
    CHECK(r.ok == !(expected || l.c == 0));
    caught += !r.ok;
  }
  CHECK(caught == 9);
}

TEST_CASE("invalid inputs") {
  auto wrong = fig_sol();
  wrong.values.at(0, 0) ^= 1;
  CHECK_THROWS_AS(setup_commitment(fig(), wrong, RandomSource(1)), Error);
  auto com = setup_commitment(fig(), fig_sol(), RandomSource(1));
  run_leaf(fig(), std::move(com), 0);
  Commitment used = setup_commitment(fig(), fig_sol(), RandomSource(1));
  used.consumed = true;
  CHECK_THROWS_AS(run_leaf(fig(), std::move(used), 0), Error);
}

TEST_CASE("simulator shapes") {
  for (std::size_t leaf = 0; leaf < leaf_count(4); ++leaf) {
    const auto t = simulate_round(fig(), leaf, RandomSource(leaf));
    CHECK(t.events().back().detail == "accept");
    for (const auto& e : t.events()) {
      if (e.kind != EventKind::CardsRevealed) continue;
      if (e.context == "c1") CHECK(e.faces == FaceCounts{{Face::Bit0, 2}, {Face::Bit1, 2}});
      if (e.context == "c2") CHECK(e.faces == FaceCounts{{Face::Bit1, 1}});
    }
  }
  Stream r(4);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_no_triple(6, r);
    for (const auto& v : takuzu::check_rules(g)) CHECK(v.rule != "NoThreeEqual");
    const auto fill = random_completion(fig().givens, r);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (fig().givens.at(i, j) != takuzu::kBlank) CHECK(fill.at(i, j) == fig().givens.at(i, j));
      }
    }
  }
}

TEST_CASE("wire form") {
  const auto com = setup_commitment(fig(), fig_sol(), RandomSource(5));
  Supply s(500);
  auto back = commitment_from_json(fig(), to_json(com), s);
  CHECK(to_json(back) == to_json(com));
  CHECK(run_leaf(fig(), std::move(back), 12).ok);
}
