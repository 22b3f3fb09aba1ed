#include <doctest.h>

#include <algorithm>

#include "pzk/error.hpp"
#include "pzk/kakuro_zkp.hpp"
#include "support.hpp"

using namespace pzk;
using namespace pzk::kakuro_zkp;

namespace {

const kakuro::Instance& fig() {
  static const auto f = test::fixture(Game::Kakuro);
  return std::get<kakuro::Instance>(f.inst);
}
const kakuro::Solution& fig_sol() {
  static const auto f = test::fixture(Game::Kakuro);
  return std::get<kakuro::Solution>(f.sol);
}

std::size_t blacks(const Envelope& e) { return faces_of(private_peek(e, Role::Prover))[Face::Black]; }

struct Outcome {
  bool ok = false;
  bool conserved = false;
  Transcript log;
};

/// Runs a round with every cell's envelope order pinned to `order`.
Outcome run(Commitment com, std::uint64_t seed, const std::vector<std::size_t>* order = nullptr) {
  Outcome out;
  const RandomSource rs(seed);
  Table table(out.log, rs.stream(RandomSource::kShuffle));
  LocalVerifier coins(rs.stream(RandomSource::kChallenge));
  ScriptedVerifier v(coins);
  if (order) {
    for (const Cell c : fig().whites()) v.force_permutation("assign " + to_string(c), *order);
  }
  HonestProver p(rs.stream(RandomSource::kProver));
  Round rd{table, v, p};
  out.ok = verify_round(fig(), com, rd);
  out.conserved = table.conserved();
  return out;
}

}  // namespace

TEST_CASE("value encoding") {
  Supply s;
  const auto e3 = encode_value(3, s);
  CHECK(e3.count() == 9);
  CHECK(blacks(e3) == 3);
  CHECK(blacks(encode_value(9, s)) == 9);
  CHECK_THROWS_AS(encode_value(0, s), Error);
  CHECK_THROWS_AS(encode_value(10, s), Error);
  CHECK(side_digits({1, 2}) == std::vector<int>{3, 4, 5, 6, 7, 8, 9});
  CHECK(side_digits({1, 3}) == std::vector<int>{2, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("setup layout") {
  const auto com = setup_commitment(fig(), fig_sol(), RandomSource(1));
  REQUIRE(com.cells.size() == 4);
  const int values[] = {1, 2, 3, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(com.cells[i].size() == 4);
    for (const auto& e : com.cells[i]) CHECK(blacks(e) == static_cast<std::size_t>(values[i]));
  }
  REQUIRE(com.sides.size() == fig().runs.size());
  for (std::size_t r = 0; r < fig().runs.size(); ++r) {
    std::vector<int> run_vals;
    for (const Cell c : fig().runs[r].cells) run_vals.push_back(fig_sol().values[c]);
    std::vector<int> got;
    for (const auto& e : com.sides[r]) got.push_back(static_cast<int>(blacks(e)));
    std::sort(got.begin(), got.end());
    CHECK(got == side_digits(run_vals));
    if (fig().runs[r].horizontal && fig().runs[r].cells.front() == Cell{1, 1}) CHECK(got.size() == 7);
  }
}

TEST_CASE("honest rounds accept and consume every envelope once") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto com = setup_commitment(fig(), fig_sol(), RandomSource(seed));
    std::vector<Uid> uids;
    for (const auto& cell : com.cells) {
      for (const auto& e : cell) uids.push_back(e.uid);
    }
    for (const auto& side : com.sides) {
      for (const auto& e : side) uids.push_back(e.uid);
    }
    Outcome out;
    const RandomSource rs(seed);
    Table table(out.log, rs.stream(RandomSource::kShuffle));
    LocalVerifier v(rs.stream(RandomSource::kChallenge));
    HonestProver p(rs.stream(RandomSource::kProver));
    Round rd{table, v, p};
    CHECK(verify_round(fig(), com, rd));
    CHECK(table.conserved());
    auto opened = table.opened();
    std::sort(opened.begin(), opened.end());
    std::sort(uids.begin(), uids.end());
    CHECK(opened == uids);
  }
}

TEST_CASE("top-row sum pool shows 3 black out of 18") {
  const auto r = run(setup_commitment(fig(), fig_sol(), RandomSource(4)), 4);
  bool seen = false;
  for (const auto& e : r.log.events()) {
    if (e.kind == EventKind::CardsRevealed && e.context == "sum" && e.faces[Face::Black] == 3) {
      CHECK(e.faces.total() == 18);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("a wrong value in all four envelopes is caught") {
  auto values = fig_sol();
  values.values.at(1, 1) = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto com = cheating_setup(fig(), WellFormedNonSolution{values}, RandomSource(seed));
    CHECK_FALSE(run(com, seed).ok);
  }
}

TEST_CASE("a deviant envelope escapes only on its rule") {
  // (0,0) of the white block holds 1; one copy claims 4, with the row run's
  // side envelopes complementing {4, 2}
  const DeviantEnvelope dev{fig_sol(), {1, 1}, 4, 1};
  int escapes = 0;
  std::vector<std::size_t> order{0, 1, 2, 3};
  do {
    const auto com = cheating_setup(fig(), dev, RandomSource(1));
    const auto r = run(com, 1, &order);
    CHECK(r.conserved);
    escapes += r.ok;
  } while (std::next_permutation(order.begin(), order.end()));
  // the same order for every cell: the deviant copy passes only on row unicity
  CHECK(escapes == 6);
}

TEST_CASE("reuse is refused") {
  auto com = setup_commitment(fig(), fig_sol(), RandomSource(1));
  com.consumed = true;
  CHECK_THROWS_AS(run(com, 1), Error);
}

TEST_CASE("simulator") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = simulate_round(fig(), RandomSource(seed));
    CHECK(t.events().back().detail == "accept");
    for (const auto& e : t.events()) {
      if (e.kind == EventKind::CardsRevealed && e.context == "sum") CHECK(e.faces.total() == 18);
    }
  }
}

TEST_CASE("wire form") {
  const auto com = setup_commitment(fig(), fig_sol(), RandomSource(2));
  Supply s(99);
  auto back = commitment_from_json(fig(), to_json(com), s);
  CHECK(to_json(back) == to_json(com));
  CHECK(run(std::move(back), 2).ok);
}
