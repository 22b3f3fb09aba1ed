#include "pzk/akari_zkp.hpp"

#include <algorithm>

#include "pzk/error.hpp"

namespace pzk::akari_zkp {

using akari::Structure;

namespace {

Face invert(Face f) { return f == Face::Light ? Face::Empty : Face::Light; }

Packet uniform_packet(Supply& supply, Face face, std::size_t n, const std::string& origin) {
  return Packet{as_items(supply.cards(face, n)), origin};
}

std::vector<Face> peek_faces(const Packet& p) {
  std::vector<Face> out;
  for (const auto& it : private_peek(p, Role::Prover)) {
    if (it.is_card()) out.push_back(it.card().face);
  }
  return out;
}

/// Replaces packets at the points where the zero-knowledge simulator may swap
/// in packets of its own choosing.
class SimulatorTable : public Table {
 public:
  SimulatorTable(Transcript& log, Stream shuffler, const akari::Instance& inst, const Structure& st)
      : Table(log, std::move(shuffler)), inst_(inst), st_(st) {}

  Packet substitute(std::string_view point, std::size_t index, Packet p) override {
    const std::size_t k = p.size();
    std::size_t lights = 0;
    if (point == "segment") {
      lights = 0;
    } else if (point == "wall") {
      lights = static_cast<std::size_t>(inst_.cells[st_.numbered_walls[index]].number);
    } else if (point == "cross") {
      lights = std::min<std::size_t>(2, k);
    } else {
      return p;
    }
    retire(std::move(p));
    Packet swapped;
    for (std::size_t i = 0; i < k; ++i) swapped.items.emplace_back(mint(i < lights ? Face::Light : Face::Empty));
    return swapped;
  }

 private:
  const akari::Instance& inst_;
  const Structure& st_;
};

bool verify_zero(const Structure& st, Commitment& com, Round& rd) {
  Table& t = rd.table;
  Packet all;
  for (std::size_t i = 0; i < st.whites.size(); ++i) {
    Packet g = t.substitute("primal", i, std::move(com.primal[i]));
    all.items.emplace_back(t.seal(std::move(g.items)));
  }
  for (std::size_t i = 0; i < st.whites.size(); ++i) {
    Packet d = t.substitute("dual", i, std::move(com.dual[i]));
    all.items.emplace_back(t.seal(std::move(d.items)));
  }
  all = t.shuffle(std::move(all), "c0");
  bool ok = true;
  for (auto& env : all.items) {
    Packet p{t.open(std::move(env.envelope()), "c0"), {}};
    const FaceCounts faces = t.reveal(p, "c0");
    ok = ok && faces.entries().size() <= 1;
    t.retire(std::move(p));
  }
  return ok;
}

bool verify_one(const akari::Instance& inst, const Structure& st, Commitment& com, Round& rd) {
  Table& t = rd.table;
  for (auto& d : com.dual) t.retire(std::move(d));

  // The verifier decides which card of each cell serves which check.
  const std::size_t w = st.whites.size();
  std::vector<std::vector<Item>> stack(w);
  std::vector<std::size_t> next(w, 0);
  for (std::size_t i = 0; i < w; ++i) {
    auto& cards = com.primal[i].items;
    const auto order = rd.verifier.permutation("pick " + to_string(st.whites[i]), cards.size());
    for (std::size_t k : order) stack[i].push_back(std::move(cards[k]));
  }
  auto take = [&](Cell c) -> Item {
    const int i = st.index(c);
    return std::move(stack[i].at(next[i]++));
  };

  bool ok = true;
  auto prover_adds = [&](Packet& p, ProverQuery::Kind kind, const char* ctx, const char* back) {
    t.handed(p.size(), ctx);
    const ProverReply reply = rd.prover.respond({kind, ctx, peek_faces(p), {}});
    if (reply.add) p.items.emplace_back(t.mint(*reply.add));
    t.handed(p.size(), back);
  };

  // Check 1: one light per maximal segment, after the prover fills in a
  // light for segments that are dark.
  for (std::size_t s = 0; s < st.segments.size(); ++s) {
    Packet p;
    for (const Cell c : st.segments[s].cells) p.items.push_back(take(c));
    p = t.substitute("segment", s, std::move(p));
    p = t.shuffle(std::move(p), "segment");
    prover_adds(p, ProverQuery::Kind::AkariSegment, "segment", "segment-return");
    p = t.shuffle(std::move(p), "segment");
    ok = t.reveal(p, "segment")[Face::Light] == 1 && ok;
    t.retire(std::move(p));
  }

  // Check 2: numbered walls.
  for (std::size_t k = 0; k < st.numbered_walls.size(); ++k) {
    Packet p;
    for (const Cell c : st.wall_neighbors[k]) p.items.push_back(take(c));
    p = t.substitute("wall", k, std::move(p));
    p = t.shuffle(std::move(p), "wall");
    const auto lights = t.reveal(p, "wall")[Face::Light];
    ok = lights == static_cast<std::size_t>(inst.cells[st.numbered_walls[k]].number) && ok;
    t.retire(std::move(p));
  }

  // Check 3: every white cell is lit, by one or two lights.
  for (std::size_t i = 0; i < w; ++i) {
    Packet p;
    p.items.push_back(take(st.whites[i]));
    for (const Cell v : st.visible[i]) p.items.push_back(take(v));
    p = t.substitute("cross", i, std::move(p));
    prover_adds(p, ProverQuery::Kind::AkariCross, "cross", "cross-return");
    p = t.shuffle(std::move(p), "cross");
    ok = t.reveal(p, "cross")[Face::Light] == 2 && ok;
    t.retire(std::move(p));
  }

  for (std::size_t i = 0; i < w; ++i) {
    for (std::size_t k = next[i]; k < stack[i].size(); ++k) t.retire(std::move(stack[i][k]));
    if (next[i] != stack[i].size()) ok = false;  // cannot happen for well-sized packets
  }
  return ok;
}

}  // namespace

Commitment commit_lights(const akari::Instance& inst, const akari::Solution& lights, Supply& supply) {
  const Structure st = akari::derive_structure(inst);
  Commitment com;
  for (const Cell u : st.whites) {
    const Face face = lights.lights.count(u) ? Face::Light : Face::Empty;
    const std::size_t n = st.packet_size(u);
    com.primal.push_back(uniform_packet(supply, face, n, "G" + to_string(u)));
    com.dual.push_back(uniform_packet(supply, invert(face), n, "dual" + to_string(u)));
  }
  return com;
}

Commitment setup_commitment(const akari::Instance& inst, const akari::Solution& sol, Stream& coins) {
  (void)coins;  // the layout is fully determined by the solution
  if (!akari::validate(inst, sol).empty()) throw Error(Errc::InvalidSolution, "not a solution of the instance");
  Supply supply;
  return commit_lights(inst, sol, supply);
}

Commitment setup_commitment(const akari::Instance& inst, const akari::Solution& sol, const RandomSource& r) {
  Stream coins = r.stream(RandomSource::kProver);
  return setup_commitment(inst, sol, coins);
}

bool verify_round(const akari::Instance& inst, Commitment& com, Round& rd) {
  if (com.consumed) throw Error(Errc::ConsumedCommitment, "commitment already used");
  com.consumed = true;
  const Structure st = akari::derive_structure(inst);
  if (com.primal.size() != st.whites.size() || com.dual.size() != st.whites.size()) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  Table& t = rd.table;
  for (const auto* grid : {&com.primal, &com.dual}) {
    for (const auto& p : *grid) t.register_inventory(p.items);
  }
  // Card counts per cell are in plain view; a wrong count is rejected outright.
  bool sized = true;
  for (std::size_t i = 0; i < st.whites.size(); ++i) {
    const std::size_t want = st.packet_size(st.whites[i]);
    sized = sized && com.primal[i].size() == want && com.dual[i].size() == want;
  }
  if (!sized) {
    for (auto& p : com.primal) t.retire(std::move(p));
    for (auto& p : com.dual) t.retire(std::move(p));
    com.primal.clear();
    com.dual.clear();
    t.verdict(false);
    return false;
  }
  const std::size_t c = rd.verifier.choose("c", 2);
  t.announce("c=" + std::to_string(c), "challenge");
  const bool ok = c == 0 ? verify_zero(st, com, rd) : verify_one(inst, st, com, rd);
  com.primal.clear();
  com.dual.clear();
  t.verdict(ok);
  return ok;
}

Commitment cheating_setup(const akari::Instance& inst, const Strategy& strategy, const RandomSource& r) {
  (void)r;
  Supply supply;
  if (const auto* bad = std::get_if<InconsistentCell>(&strategy)) {
    if (!inst.cells.contains(bad->cell) || !inst.cells[bad->cell].white()) {
      throw Error(Errc::NoSuchCell, to_string(bad->cell) + " is not a white cell");
    }
    Commitment com = commit_lights(inst, bad->base, supply);
    const Structure st = akari::derive_structure(inst);
    auto& card = com.primal[st.index(bad->cell)].items.front().card();
    card.face = invert(card.face);
    return com;
  }
  return commit_lights(inst, std::get<WellFormedNonSolution>(strategy).lights, supply);
}

Transcript simulate_round(const akari::Instance& inst, int c, const RandomSource& r) {
  const Structure st = akari::derive_structure(inst);
  Supply supply;
  // G all Empty, the dual all Light: every packet homogeneous.
  Commitment com = commit_lights(inst, akari::Solution{}, supply);
  Transcript log;
  SimulatorTable table(log, r.stream(RandomSource::kShuffle), inst, st);
  LocalVerifier coins(r.stream(RandomSource::kChallenge));
  ScriptedVerifier verifier(coins);
  verifier.force("c", static_cast<std::size_t>(c));
  HonestProver prover(r.stream(RandomSource::kProver));
  Round rd{table, verifier, prover};
  verify_round(inst, com, rd);
  return log;
}

nlohmann::json to_json(const Commitment& com) {
  nlohmann::json j;
  auto grid = [](const std::vector<Packet>& packets) {
    auto a = nlohmann::json::array();
    for (const auto& p : packets) a.push_back(items_to_json(p.items));
    return a;
  };
  j["G"] = grid(com.primal);
  j["dual"] = grid(com.dual);
  return j;
}

Commitment commitment_from_json(const akari::Instance& inst, const nlohmann::json& j, Supply& supply) {
  const Structure st = akari::derive_structure(inst);
  Commitment com;
  for (const auto& p : j.at("G")) com.primal.push_back(Packet{items_from_json(p, supply), {}});
  for (const auto& p : j.at("dual")) com.dual.push_back(Packet{items_from_json(p, supply), {}});
  if (com.primal.size() != st.whites.size() || com.dual.size() != st.whites.size()) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  for (const auto* grid : {&com.primal, &com.dual}) {
    for (const auto& p : *grid) {
      for (const auto& it : p.items) {
        if (!it.is_card()) throw Error(Errc::ShapeMismatch, "Akari packets hold cards only");
      }
    }
  }
  return com;
}

}  // namespace pzk::akari_zkp
