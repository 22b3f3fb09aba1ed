#include <doctest.h>

#include "pzk/akari_zkp.hpp"
#include "pzk/error.hpp"
#include "support.hpp"

using namespace pzk;

namespace {

struct Run {
  Transcript log;
  bool ok = false;
  bool conserved = false;
};

Run run_with(const akari::Instance& inst, akari_zkp::Commitment com, int c, std::uint64_t seed = 1) {
  Run out;
  const RandomSource rs(seed);
  Table table(out.log, rs.stream(RandomSource::kShuffle));
  LocalVerifier coins(rs.stream(RandomSource::kChallenge));
  ScriptedVerifier v(coins);
  v.force("c", static_cast<std::size_t>(c));
  HonestProver p(rs.stream(RandomSource::kProver));
  Round rd{table, v, p};
  out.ok = akari_zkp::verify_round(inst, com, rd);
  out.conserved = table.conserved();
  return out;
}

const akari::Instance& fig() {
  static const auto f = test::fixture(Game::Akari);
  return std::get<akari::Instance>(f.inst);
}
const akari::Solution& fig_sol() {
  static const auto f = test::fixture(Game::Akari);
  return std::get<akari::Solution>(f.sol);
}

}  // namespace

TEST_CASE("setup packet sizes and faces") {
  const auto com = akari_zkp::setup_commitment(fig(), fig_sol(), RandomSource(1));
  const auto st = akari::derive_structure(fig());
  const auto i00 = static_cast<std::size_t>(st.index({0, 0}));
  const auto i10 = static_cast<std::size_t>(st.index({1, 0}));
  CHECK(com.primal[i00].size() == 9);
  CHECK(faces_of(com.primal[i00].items) == FaceCounts{{Face::Empty, 9}});
  CHECK(com.primal[i10].size() == 6);
  CHECK(faces_of(com.primal[i10].items) == FaceCounts{{Face::Light, 6}});
  CHECK(faces_of(com.dual[i10].items) == FaceCounts{{Face::Empty, 6}});
}

TEST_CASE("honest rounds accept under both challenges and conserve cards") {
  for (int c = 0; c < 2; ++c) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = run_with(fig(), akari_zkp::setup_commitment(fig(), fig_sol(), RandomSource(seed)), c, seed);
      CHECK(r.ok);
      CHECK(r.conserved);
    }
  }
}

TEST_CASE("the wall 4 reveals four lights") {
  const auto r = run_with(fig(), akari_zkp::setup_commitment(fig(), fig_sol(), RandomSource(3)), 1);
  bool seen = false;
  for (const auto& e : r.log.events()) {
    if (e.kind == EventKind::CardsRevealed && e.context == "wall" && e.faces.total() == 4) {
      CHECK(e.faces[Face::Light] == 4);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("invalid solutions and reuse are refused") {
  akari::Solution missing = fig_sol();
  missing.lights.erase({4, 2});
  CHECK_THROWS_AS(akari_zkp::setup_commitment(fig(), missing, RandomSource(1)), Error);

  Supply s;
  auto com = akari_zkp::commit_lights(fig(), missing, s);
  CHECK_FALSE(run_with(fig(), com, 1).ok);
  CHECK(run_with(fig(), com, 0).ok);

  Transcript log;
  Table t(log, Stream(1));
  LocalVerifier v(Stream(2));
  HonestProver p(Stream(3));
  Round rd{t, v, p};
  auto once = akari_zkp::setup_commitment(fig(), fig_sol(), RandomSource(1));
  akari_zkp::verify_round(fig(), once, rd);
  try {
    akari_zkp::verify_round(fig(), once, rd);
    FAIL("second use accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConsumedCommitment);
  }
}

TEST_CASE("wrong-sized packets are rejected, not crashed on") {
  Supply s;
  auto com = akari_zkp::commit_lights(fig(), fig_sol(), s);
  com.primal[0].items.pop_back();
  com.dual[0].items.pop_back();
  for (int c = 0; c < 2; ++c) {
    const auto r = run_with(fig(), com, c);
    CHECK_FALSE(r.ok);
    CHECK(r.conserved);
  }
}

TEST_CASE("inconsistent cell must be white") {
  CHECK_THROWS_AS(akari_zkp::cheating_setup(fig(), akari_zkp::InconsistentCell{{1, 1}, fig_sol()}, RandomSource(1)),
                  Error);
  const auto com = akari_zkp::cheating_setup(fig(), akari_zkp::InconsistentCell{{0, 0}, fig_sol()}, RandomSource(1));
  CHECK(faces_of(com.primal[0].items).entries().size() == 2);
}

TEST_CASE("simulator reveals the forced shapes") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto t1 = akari_zkp::simulate_round(fig(), 1, RandomSource(seed));
    for (const auto& e : t1.events()) {
      if (e.kind != EventKind::CardsRevealed) continue;
      if (e.context == "segment") CHECK(e.faces[Face::Light] == 1);
      if (e.context == "cross") CHECK(e.faces[Face::Light] == 2);
    }
    CHECK(t1.events().back().detail == "accept");
    const auto t0 = akari_zkp::simulate_round(fig(), 0, RandomSource(seed));
    CHECK(t0.events().back().detail == "accept");
  }
}

TEST_CASE("commitments survive the wire form") {
  const auto com = akari_zkp::setup_commitment(fig(), fig_sol(), RandomSource(1));
  Supply s(1000);
  auto back = akari_zkp::commitment_from_json(fig(), akari_zkp::to_json(com), s);
  CHECK(akari_zkp::to_json(back) == akari_zkp::to_json(com));
  CHECK(run_with(fig(), std::move(back), 1).ok);
  auto j = akari_zkp::to_json(com);
  j["G"].erase(0);
  CHECK_THROWS_AS(akari_zkp::commitment_from_json(fig(), j, s), Error);
}
