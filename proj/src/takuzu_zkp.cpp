#include "pzk/takuzu_zkp.hpp"

#include <algorithm>
#include <sstream>

#include "pzk/error.hpp"

namespace pzk::takuzu_zkp {

namespace {

Face bit_face(int v) { return v ? Face::Bit1 : Face::Bit0; }

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::optional<std::vector<std::size_t>> split(const std::string& text, int n) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 6) {
      return std::nullopt;
    }
    out.push_back(std::stoul(part));
  }
  if (static_cast<int>(out.size()) != n) return std::nullopt;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (std::size_t v : out) {
    if (v >= static_cast<std::size_t>(n) || seen[v]) return std::nullopt;
    seen[v] = true;
  }
  return out;
}

/// Face-down cards of the commitment, addressed by S' position.
class Board {
 public:
  Board(std::vector<Item>& cards, int n) : n_(n) {
    for (auto& c : cards) slots_.emplace_back(std::move(c));
    cards.clear();
  }

  Item take(std::size_t row, std::size_t col) {
    auto& slot = slots_.at(row * static_cast<std::size_t>(n_) + col);
    if (!slot) throw Error(Errc::InvalidArgument, "card already taken");
    Item it = std::move(*slot);
    slot.reset();
    return it;
  }

  /// Card at position k of row/column `line` of S'.
  Item take_line(int d, std::size_t line, std::size_t k) { return d == 0 ? take(line, k) : take(k, line); }

  void retire_rest(Table& t) {
    for (auto& slot : slots_) {
      if (slot) t.retire(std::move(*slot));
      slot.reset();
    }
  }

 private:
  int n_;
  std::vector<std::optional<Item>> slots_;
};

std::vector<Face> faces(const Packet& p) {
  std::vector<Face> out;
  for (const auto& it : private_peek(p, Role::Prover)) {
    if (it.is_card()) out.push_back(it.card().face);
  }
  return out;
}

std::optional<Permutations> open_slip(Table& t, Envelope e, int n, const char* ctx) {
  std::optional<Permutations> perms;
  auto items = t.open(std::move(e), ctx);
  if (items.size() == 1 && items.front().is_note()) perms = read_note(items.front().note().text, n);
  t.retire(std::move(items));
  return perms;
}

bool verify_zero(const takuzu::Instance& inst, Commitment& com, Board& board, Round& rd) {
  Table& t = rd.table;
  const auto perms = open_slip(t, std::move(com.E), inst.n, "c0");
  if (!perms) return false;
  bool ok = true;
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      const int given = inst.givens.at(i, j);
      if (given == takuzu::kBlank) continue;
      Packet p;
      p.items.push_back(board.take(perms->rows[i], perms->cols[j]));
      ok = t.reveal(p, "c0")[bit_face(given)] == 1 && ok;
      t.retire(std::move(p));
    }
  }
  return ok;
}

bool verify_one(int n, const Leaf& leaf, Board& board, Round& rd) {
  Table& t = rd.table;
  bool ok = true;
  for (int line = 0; line < n; ++line) {
    Packet p;
    for (int k = 0; k < n; ++k) p.items.push_back(board.take_line(leaf.d, line, k));
    p = t.substitute("deck", static_cast<std::size_t>(line), std::move(p));
    p = t.shuffle(std::move(p), "c1");
    const auto f = t.reveal(p, "c1");
    ok = 2 * f[Face::Bit1] == static_cast<std::size_t>(n) && 2 * f[Face::Bit0] == static_cast<std::size_t>(n) && ok;
    t.retire(std::move(p));
  }
  return ok;
}

bool verify_two(int n, const Leaf& leaf, Board& board, Round& rd) {
  Table& t = rd.table;
  Packet line;
  for (int k = 0; k < n; ++k) line.items.push_back(board.take_line(leaf.d, leaf.line, k));
  line = t.substitute("line", static_cast<std::size_t>(leaf.line), std::move(line));
  std::vector<int> zeros;
  for (int k = 0; k < n; ++k) {
    Packet one;
    one.items.push_back(std::move(line.items.at(k)));
    if (t.reveal(one, "c2-line")[Face::Bit0] == 1) zeros.push_back(k);
    t.retire(std::move(one));
  }
  bool ok = true;
  for (int other = 0; other < n; ++other) {
    if (other == leaf.line) continue;
    Packet deck;
    for (int k : zeros) deck.items.push_back(board.take_line(leaf.d, other, k));
    deck = t.substitute("zero-deck", static_cast<std::size_t>(other), std::move(deck));
    deck = t.shuffle(std::move(deck), "c2");
    t.handed(deck.size(), "c2");
    const ProverReply reply = rd.prover.respond({ProverQuery::Kind::TakuzuReveal, "c2", faces(deck), {}});
    Packet shown;
    if (reply.index < deck.size()) {
      shown.items.push_back(std::move(deck.items[reply.index]));
      deck.items.erase(deck.items.begin() + static_cast<std::ptrdiff_t>(reply.index));
    }
    ok = t.reveal(shown, "c2")[Face::Bit1] == 1 && ok;
    t.retire(std::move(shown));
    t.retire(std::move(deck));
  }
  return ok;
}

bool verify_three(int n, const Leaf& leaf, Commitment& com, Board& board, Round& rd) {
  Table& t = rd.table;
  const auto perms = open_slip(t, std::move(com.E), n, "c3");
  if (!perms) return false;
  bool ok = true;
  const int x = (n - leaf.e) / 3;
  for (int line = 0; line < n; ++line) {
    for (int i = 0; i < x; ++i) {
      Packet triple;
      for (int k = leaf.e + 3 * i; k < leaf.e + 3 * i + 3; ++k) {
        // position (line, k) of the un-permuted grid
        const std::size_t r = perms->rows[leaf.d == 0 ? line : k];
        const std::size_t c = perms->cols[leaf.d == 0 ? k : line];
        triple.items.push_back(board.take(r, c));
      }
      t.handed(triple.size(), "c3");
      const ProverReply reply = rd.prover.respond({ProverQuery::Kind::TakuzuDiscard, "c3", faces(triple), {}});
      const std::size_t drop = std::min<std::size_t>(reply.index, triple.size() - 1);
      t.retire(std::move(triple.items[drop]));
      triple.items.erase(triple.items.begin() + static_cast<std::ptrdiff_t>(drop));
      t.handed(triple.size(), "c3-return");
      const auto f = t.reveal(triple, "c3");
      ok = f[Face::Bit0] == 1 && f[Face::Bit1] == 1 && ok;
      t.retire(std::move(triple));
    }
  }
  return ok;
}

class SimulatorTable : public Table {
 public:
  SimulatorTable(Transcript& log, Stream shuffler, Stream coins, int n)
      : Table(log, std::move(shuffler)), coins_(std::move(coins)), n_(n) {}

  Packet substitute(std::string_view point, std::size_t index, Packet p) override {
    (void)index;
    const std::size_t k = p.size();
    std::vector<Face> swapped;
    if (point == "deck" || point == "line") {
      for (int i = 0; i < n_; ++i) swapped.push_back(2 * i < n_ ? Face::Bit0 : Face::Bit1);
      if (point == "line") coins_.shuffle(swapped);
    } else if (point == "zero-deck") {
      for (std::size_t i = 0; i < k; ++i) swapped.push_back(i == 0 ? Face::Bit1 : Face::Bit0);
    } else {
      return p;
    }
    retire(std::move(p));
    Packet out;
    for (Face f : swapped) out.items.emplace_back(mint(f));
    return out;
  }

 private:
  Stream coins_;
  int n_;
};

Permutations random_permutations(int n, Stream& coins) {
  return {coins.permutation(static_cast<std::size_t>(n)), coins.permutation(static_cast<std::size_t>(n))};
}

}  // namespace

Permutations identity(int n) {
  Permutations p;
  for (int i = 0; i < n; ++i) {
    p.rows.push_back(static_cast<std::size_t>(i));
    p.cols.push_back(static_cast<std::size_t>(i));
  }
  return p;
}

Grid<int> permute(const Permutations& p, const Grid<int>& g) {
  Grid<int> out(g.height(), g.width(), 0);
  for (int i = 0; i < g.height(); ++i) {
    for (int j = 0; j < g.width(); ++j) out.at(static_cast<int>(p.rows[i]), static_cast<int>(p.cols[j])) = g.at(i, j);
  }
  return out;
}

Grid<int> unpermute(const Permutations& p, const Grid<int>& s) {
  Grid<int> out(s.height(), s.width(), 0);
  for (int i = 0; i < s.height(); ++i) {
    for (int j = 0; j < s.width(); ++j) out.at(i, j) = s.at(static_cast<int>(p.rows[i]), static_cast<int>(p.cols[j]));
  }
  return out;
}

std::string write_note(const Permutations& p) { return "rows=" + join(p.rows) + ";cols=" + join(p.cols); }

std::optional<Permutations> read_note(const std::string& text, int n) {
  const auto semi = text.find(';');
  if (text.rfind("rows=", 0) != 0 || semi == std::string::npos || text.compare(semi + 1, 5, "cols=") != 0) {
    return std::nullopt;
  }
  auto rows = split(text.substr(5, semi - 5), n);
  auto cols = split(text.substr(semi + 6), n);
  if (!rows || !cols) return std::nullopt;
  return Permutations{std::move(*rows), std::move(*cols)};
}

std::size_t leaf_count(int n) { return static_cast<std::size_t>(2 * n + 9); }

Leaf decode_leaf(int n, std::size_t index) {
  if (index >= leaf_count(n)) throw Error(Errc::OutOfRange, "leaf index out of range");
  const int i = static_cast<int>(index);
  Leaf leaf;
  if (i == 0) {
    leaf.c = 0;
  } else if (i <= 2) {
    leaf.c = 1;
    leaf.d = i - 1;
  } else if (i < 3 + 2 * n) {
    leaf.c = 2;
    leaf.d = (i - 3) / n;
    leaf.line = (i - 3) % n;
  } else {
    leaf.c = 3;
    leaf.d = (i - 3 - 2 * n) / 3;
    leaf.e = (i - 3 - 2 * n) % 3;
  }
  return leaf;
}

std::string describe(const Leaf& leaf) {
  switch (leaf.c) {
    case 0: return "c=0";
    case 1: return "c=1;d=" + std::to_string(leaf.d);
    case 2: return "c=2;d=" + std::to_string(leaf.d) + ";line=" + std::to_string(leaf.line);
    default: return "c=3;d=" + std::to_string(leaf.d) + ";e=" + std::to_string(leaf.e);
  }
}

Leaf sample_challenge(int n, Stream& r) { return decode_leaf(n, r.below(leaf_count(n))); }

Commitment commit_grid(const Grid<int>& grid, const Permutations& noted, const Permutations& used, Supply& supply) {
  const Grid<int> s = permute(used, grid);
  Commitment com;
  com.n = grid.height();
  for (int v : s.data()) com.cards.emplace_back(supply.card(bit_face(v)));
  com.E = supply.seal({Note{write_note(noted)}});
  return com;
}

Commitment setup_commitment(const takuzu::Instance& inst, const takuzu::Solution& sol, const Permutations& perms) {
  if (!takuzu::validate(inst, sol).empty()) throw Error(Errc::InvalidSolution, "not a solution of the instance");
  Supply supply;
  return commit_grid(sol.values, perms, perms, supply);
}

Commitment setup_commitment(const takuzu::Instance& inst, const takuzu::Solution& sol, Stream& coins) {
  if (!takuzu::validate(inst, sol).empty()) throw Error(Errc::InvalidSolution, "not a solution of the instance");
  return setup_commitment(inst, sol, random_permutations(inst.n, coins));
}

Commitment setup_commitment(const takuzu::Instance& inst, const takuzu::Solution& sol, const RandomSource& r) {
  Stream coins = r.stream(RandomSource::kProver);
  return setup_commitment(inst, sol, coins);
}

bool verify_round(const takuzu::Instance& inst, Commitment& com, Round& rd) {
  if (com.consumed) throw Error(Errc::ConsumedCommitment, "commitment already used");
  com.consumed = true;
  const int n = inst.n;
  if (com.n != n || com.cards.size() != static_cast<std::size_t>(n * n)) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  Table& t = rd.table;
  t.register_inventory(com.cards);
  t.register_inventory({Item(com.E)});

  const Leaf leaf = decode_leaf(n, rd.verifier.choose("leaf", leaf_count(n)));
  t.announce(describe(leaf), "challenge");
  Board board(com.cards, n);
  bool ok = false;
  switch (leaf.c) {
    case 0: ok = verify_zero(inst, com, board, rd); break;
    case 1: ok = verify_one(n, leaf, board, rd); break;
    case 2: ok = verify_two(n, leaf, board, rd); break;
    default: ok = verify_three(n, leaf, com, board, rd); break;
  }
  if (leaf.c == 1 || leaf.c == 2) t.retire(Item(std::move(com.E)));  // returned unopened
  board.retire_rest(t);
  t.verdict(ok);
  return ok;
}

Commitment cheating_setup(const takuzu::Instance& inst, const Strategy& strategy, Stream& coins) {
  Supply supply;
  const Permutations used = random_permutations(inst.n, coins);
  if (const auto* wrong = std::get_if<WrongGrid>(&strategy)) {
    if (wrong->values.height() != inst.n || wrong->values.width() != inst.n) {
      throw Error(Errc::ShapeMismatch, "grid size differs from instance size");
    }
    return commit_grid(wrong->values, used, used, supply);
  }
  const auto& base = std::get<MismatchedEnvelope>(strategy).base;
  if (base.values.height() != inst.n || inst.n < 2) throw Error(Errc::ShapeMismatch, "grid size differs from instance size");
  Permutations noted = used;
  std::swap(noted.rows[0], noted.rows[1]);
  return commit_grid(base.values, noted, used, supply);
}

Commitment cheating_setup(const takuzu::Instance& inst, const Strategy& strategy, const RandomSource& r) {
  Stream coins = r.stream(RandomSource::kProver);
  return cheating_setup(inst, strategy, coins);
}

Grid<int> random_completion(const Grid<int>& givens, Stream& r) {
  Grid<int> g = givens;
  for (int i = 0; i < g.height(); ++i) {
    for (int j = 0; j < g.width(); ++j) {
      if (g.at(i, j) == takuzu::kBlank) g.at(i, j) = static_cast<int>(r.below(2));
    }
  }
  return g;
}

Grid<int> random_no_triple(int n, Stream& r) {
  Grid<int> g(n, n, 0);
  auto fits = [&](int i, int j) {
    const int v = g.at(i, j);
    if (j >= 2 && g.at(i, j - 1) == v && g.at(i, j - 2) == v) return false;
    if (i >= 2 && g.at(i - 1, j) == v && g.at(i - 2, j) == v) return false;
    return true;
  };
  // Depth-first fill with random value order; dead ends are rare and shallow.
  std::vector<int> first(static_cast<std::size_t>(n * n), 0);
  std::vector<int> tried(static_cast<std::size_t>(n * n), 0);
  int pos = 0;
  first[0] = static_cast<int>(r.below(2));
  while (pos < n * n) {
    const int i = pos / n;
    const int j = pos % n;
    if (tried[pos] == 2) {
      tried[pos] = 0;
      --pos;
      continue;
    }
    if (tried[pos] == 0) first[pos] = static_cast<int>(r.below(2));
    g.at(i, j) = tried[pos] == 0 ? first[pos] : 1 - first[pos];
    ++tried[pos];
    if (fits(i, j)) {
      ++pos;
      if (pos < n * n) tried[pos] = 0;
    }
  }
  return g;
}

Transcript simulate_round(const takuzu::Instance& inst, std::size_t leaf_index, const RandomSource& r) {
  const int n = inst.n;
  const Leaf leaf = decode_leaf(n, leaf_index);
  Stream coins = r.stream("simulator");
  Supply supply;
  const Grid<int> grid = leaf.c == 3 ? random_no_triple(n, coins) : random_completion(inst.givens, coins);
  const Permutations perms = random_permutations(n, coins);
  Commitment com = commit_grid(grid, perms, perms, supply);

  Transcript log;
  SimulatorTable table(log, r.stream(RandomSource::kShuffle), std::move(coins), n);
  LocalVerifier fallback(r.stream(RandomSource::kChallenge));
  ScriptedVerifier verifier(fallback);
  verifier.force("leaf", leaf_index);
  HonestProver prover(r.stream(RandomSource::kProver));
  Round rd{table, verifier, prover};
  verify_round(inst, com, rd);
  return log;
}

nlohmann::json to_json(const Commitment& com) {
  nlohmann::json j;
  j["n"] = com.n;
  j["E"] = envelope_to_json(com.E);
  j["cards"] = items_to_json(com.cards);
  return j;
}

Commitment commitment_from_json(const takuzu::Instance& inst, const nlohmann::json& j, Supply& supply) {
  Commitment com;
  com.n = j.at("n").get<int>();
  com.E = envelope_from_json(j.at("E"), supply);
  com.cards = items_from_json(j.at("cards"), supply);
  if (com.n != inst.n || com.cards.size() != static_cast<std::size_t>(inst.n * inst.n)) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  for (const auto& it : com.cards) {
    if (!it.is_card()) throw Error(Errc::ShapeMismatch, "Takuzu grid holds cards only");
  }
  return com;
}

}  // namespace pzk::takuzu_zkp
