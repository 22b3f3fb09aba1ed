#include "pzk/kakuro_zkp.hpp"

#include <algorithm>

#include "pzk/error.hpp"

namespace pzk::kakuro_zkp {

namespace {

constexpr std::size_t kRules = 4;

/// Opens an envelope of cards and reveals them. Nullopt (and everything
/// retired) if it held anything but cards.
std::optional<FaceCounts> open_and_reveal(Table& t, Envelope e, std::string_view ctx) {
  Packet p{t.open(std::move(e), ctx), {}};
  const bool cards = std::all_of(p.items.begin(), p.items.end(), [](const Item& it) { return it.is_card(); });
  std::optional<FaceCounts> faces;
  if (cards) faces = t.reveal(p, ctx);
  t.retire(std::move(p));
  return faces;
}

std::vector<std::vector<int>> run_values(const kakuro::Instance& inst, const Grid<int>& values) {
  std::vector<std::vector<int>> out;
  for (const auto& run : inst.runs) {
    std::vector<int> v;
    for (const Cell c : run.cells) v.push_back(values[c]);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<int>> complements(const std::vector<std::vector<int>>& runs) {
  std::vector<std::vector<int>> out;
  for (const auto& r : runs) out.push_back(side_digits(r));
  return out;
}

std::vector<std::array<int, 4>> uniform_values(const kakuro::Instance& inst, const Grid<int>& values) {
  std::vector<std::array<int, 4>> out;
  for (const Cell c : inst.whites()) {
    const int v = values[c];
    out.push_back({v, v, v, v});
  }
  return out;
}

class SimulatorTable : public Table {
 public:
  SimulatorTable(Transcript& log, Stream shuffler, const kakuro::Instance& inst)
      : Table(log, std::move(shuffler)), inst_(inst), supply_(Uid{1} << 41) {}

  Packet substitute(std::string_view point, std::size_t index, Packet p) override {
    Packet out;
    if (point == "unicity") {
      for (int l = 1; l <= 9; ++l) out.items.emplace_back(encode_value(l, supply_));
    } else if (point == "sum") {
      const auto& run = inst_.runs[index];
      const std::size_t black = static_cast<std::size_t>(run.clue);
      const std::size_t total = 9 * run.cells.size();
      for (std::size_t i = 0; i < total; ++i) out.items.emplace_back(supply_.card(i < black ? Face::Black : Face::Red));
    } else {
      return p;
    }
    retire(std::move(p));
    register_inventory(out.items);
    return out;
  }

 private:
  const kakuro::Instance& inst_;
  Supply supply_;
};

}  // namespace

Envelope encode_value(int l, Supply& supply) {
  if (l < 1 || l > 9) throw Error(Errc::OutOfRange, "Kakuro values are 1..9, got " + std::to_string(l));
  std::vector<Item> cards = as_items(supply.cards(Face::Black, static_cast<std::size_t>(l)));
  for (auto& c : supply.cards(Face::Red, static_cast<std::size_t>(9 - l))) cards.emplace_back(c);
  return supply.seal(std::move(cards));
}

std::vector<int> side_digits(const std::vector<int>& values) {
  std::vector<int> out;
  for (int d = 1; d <= 9; ++d) {
    if (std::find(values.begin(), values.end(), d) == values.end()) out.push_back(d);
  }
  return out;
}

Commitment commit(const kakuro::Instance& inst, const std::vector<std::array<int, 4>>& values,
                  const std::vector<std::vector<int>>& sides, Supply& supply) {
  Commitment com;
  for (const auto& four : values) {
    std::vector<Envelope> envs;
    for (int v : four) envs.push_back(encode_value(v, supply));
    com.cells.push_back(std::move(envs));
  }
  for (std::size_t r = 0; r < inst.runs.size(); ++r) {
    std::vector<Envelope> envs;
    for (int v : sides.at(r)) envs.push_back(encode_value(v, supply));
    com.sides.push_back(std::move(envs));
  }
  return com;
}

Commitment setup_commitment(const kakuro::Instance& inst, const kakuro::Solution& sol, Stream& coins) {
  (void)coins;
  if (!kakuro::validate(inst, sol).empty()) throw Error(Errc::InvalidSolution, "not a solution of the instance");
  Supply supply;
  return commit(inst, uniform_values(inst, sol.values), complements(run_values(inst, sol.values)), supply);
}

Commitment setup_commitment(const kakuro::Instance& inst, const kakuro::Solution& sol, const RandomSource& r) {
  Stream coins = r.stream(RandomSource::kProver);
  return setup_commitment(inst, sol, coins);
}

bool verify_round(const kakuro::Instance& inst, Commitment& com, Round& rd) {
  if (com.consumed) throw Error(Errc::ConsumedCommitment, "commitment already used");
  com.consumed = true;
  const auto whites = inst.whites();
  if (com.cells.size() != whites.size() || com.sides.size() != inst.runs.size()) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  Table& t = rd.table;
  for (const auto& envs : com.cells) {
    for (const auto& e : envs) t.register_inventory({Item(e)});
  }
  for (const auto& envs : com.sides) {
    for (const auto& e : envs) t.register_inventory({Item(e)});
  }

  bool ok = true;
  // A cell without exactly four envelopes fails in public view.
  for (auto& envs : com.cells) {
    if (envs.size() != kRules) ok = false;
    while (envs.size() < kRules) envs.push_back(t.seal({}));
  }

  // assigned[i][rule]
  Grid<int> index(inst.cells.height(), inst.cells.width(), -1);
  std::vector<std::array<std::optional<Envelope>, kRules>> assigned(whites.size());
  for (std::size_t i = 0; i < whites.size(); ++i) {
    index[whites[i]] = static_cast<int>(i);
    const auto order = rd.verifier.permutation("assign " + to_string(whites[i]), kRules);
    for (std::size_t rule = 0; rule < kRules; ++rule) assigned[i][rule] = std::move(com.cells[i][order[rule]]);
    for (std::size_t k = kRules; k < com.cells[i].size(); ++k) t.retire(Item(std::move(com.cells[i][k])));
  }
  auto take = [&](Cell c, Rule rule) {
    auto& slot = assigned[index[c]][static_cast<std::size_t>(rule)];
    Envelope e = std::move(*slot);
    slot.reset();
    return e;
  };

  for (std::size_t r = 0; r < inst.runs.size(); ++r) {
    const auto& run = inst.runs[r];
    Packet p;
    for (const Cell c : run.cells) p.items.emplace_back(take(c, run.horizontal ? Rule::RowUnicity : Rule::ColumnUnicity));
    for (auto& e : com.sides[r]) p.items.emplace_back(std::move(e));
    p = t.substitute("unicity", r, std::move(p));
    p = t.shuffle(std::move(p), "unicity");
    std::vector<int> values;
    bool shaped = true;
    for (auto& it : p.items) {
      if (!it.is_envelope()) {
        shaped = false;
        t.retire(std::move(it));
        continue;
      }
      const auto faces = open_and_reveal(t, std::move(it.envelope()), "unicity");
      if (!faces || faces->total() != 9) shaped = false;
      if (faces) values.push_back(static_cast<int>((*faces)[Face::Black]));
    }
    std::sort(values.begin(), values.end());
    ok = shaped && values == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9} && ok;
  }

  for (std::size_t r = 0; r < inst.runs.size(); ++r) {
    const auto& run = inst.runs[r];
    Packet pool;
    bool shaped = true;
    for (const Cell c : run.cells) {
      for (auto& it : t.open(take(c, run.horizontal ? Rule::RowSum : Rule::ColumnSum), "sum")) {
        if (it.is_card()) pool.items.push_back(std::move(it));
        else {
          shaped = false;
          t.retire(std::move(it));
        }
      }
    }
    pool = t.substitute("sum", r, std::move(pool));
    pool = t.shuffle(std::move(pool), "sum");
    const auto faces = t.reveal(pool, "sum");
    ok = shaped && faces[Face::Black] == static_cast<std::size_t>(run.clue) && ok;
    t.retire(std::move(pool));
  }

  com.cells.clear();
  com.sides.clear();
  t.verdict(ok);
  return ok;
}

Commitment cheating_setup(const kakuro::Instance& inst, const Strategy& strategy, const RandomSource& r) {
  (void)r;
  Supply supply;
  if (const auto* dev = std::get_if<DeviantEnvelope>(&strategy)) {
    if (!inst.cells.contains(dev->cell) || !inst.cells[dev->cell].white()) {
      throw Error(Errc::NoSuchCell, to_string(dev->cell) + " is not a white cell");
    }
    if (dev->copies < 1 || dev->copies > 2) throw Error(Errc::InvalidArgument, "copies must be 1 or 2");
    auto values = uniform_values(inst, dev->base.values);
    const auto whites = inst.whites();
    const auto at = std::find(whites.begin(), whites.end(), dev->cell) - whites.begin();
    for (int k = 0; k < dev->copies; ++k) values[at][kRules - 1 - k] = dev->value;
    Grid<int> shifted = dev->base.values;
    shifted[dev->cell] = dev->value;
    auto sides = complements(run_values(inst, dev->base.values));
    const auto moved = complements(run_values(inst, shifted));
    sides[inst.horizontal_run[dev->cell]] = moved[inst.horizontal_run[dev->cell]];
    if (dev->copies == 2) sides[inst.vertical_run[dev->cell]] = moved[inst.vertical_run[dev->cell]];
    return commit(inst, values, sides, supply);
  }
  const auto& bad = std::get<WellFormedNonSolution>(strategy).values;
  return commit(inst, uniform_values(inst, bad.values), complements(run_values(inst, bad.values)), supply);
}

Transcript simulate_round(const kakuro::Instance& inst, const RandomSource& r) {
  // Placeholder layout of the right shape: every cell 1, sides 1..(9-len).
  Grid<int> ones(inst.cells.height(), inst.cells.width(), 0);
  for (const Cell c : inst.whites()) ones[c] = 1;
  std::vector<std::vector<int>> sides;
  for (const auto& run : inst.runs) {
    std::vector<int> s;
    for (std::size_t d = 1; d + run.cells.size() <= 9; ++d) s.push_back(static_cast<int>(d));
    sides.push_back(std::move(s));
  }
  Supply supply;
  Commitment com = commit(inst, uniform_values(inst, ones), sides, supply);

  Transcript log;
  SimulatorTable table(log, r.stream(RandomSource::kShuffle), inst);
  LocalVerifier verifier(r.stream(RandomSource::kChallenge));
  HonestProver prover(r.stream(RandomSource::kProver));
  Round rd{table, verifier, prover};
  verify_round(inst, com, rd);
  return log;
}

nlohmann::json to_json(const Commitment& com) {
  auto lists = [](const std::vector<std::vector<Envelope>>& v) {
    auto a = nlohmann::json::array();
    for (const auto& envs : v) {
      auto row = nlohmann::json::array();
      for (const auto& e : envs) row.push_back(envelope_to_json(e));
      a.push_back(std::move(row));
    }
    return a;
  };
  return {{"cells", lists(com.cells)}, {"sides", lists(com.sides)}};
}

Commitment commitment_from_json(const kakuro::Instance& inst, const nlohmann::json& j, Supply& supply) {
  auto lists = [&](const nlohmann::json& a) {
    std::vector<std::vector<Envelope>> out;
    for (const auto& row : a) {
      std::vector<Envelope> envs;
      for (const auto& e : row) envs.push_back(envelope_from_json(e, supply));
      out.push_back(std::move(envs));
    }
    return out;
  };
  Commitment com;
  com.cells = lists(j.at("cells"));
  com.sides = lists(j.at("sides"));
  if (com.cells.size() != inst.whites().size() || com.sides.size() != inst.runs.size()) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  return com;
}

}  // namespace pzk::kakuro_zkp
