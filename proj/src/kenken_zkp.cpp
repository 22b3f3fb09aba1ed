#include "pzk/kenken_zkp.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <functional>

#include "pzk/error.hpp"

namespace pzk::kenken_zkp {

using kenken::Op;

namespace {

constexpr std::size_t kCopies = 3;
enum Rule : std::size_t { RowUnicity = 0, ColumnUnicity = 1, CageRule = 2 };

long long product(const std::map<int, int>& exps) {
  long long v = 1;
  for (const auto& [p, e] : exps) {
    for (int i = 0; i < e; ++i) v *= p;
  }
  return v;
}

/// t with every prime <= n divided out; 1 iff t factors over the table.
long long residue(long long t, int n) {
  for (const auto& [p, e] : prime_table(n)) {
    (void)e;
    while (t % p == 0) t /= p;
  }
  return t;
}

std::vector<Item> colored(Supply& supply, std::size_t black, std::size_t total) {
  std::vector<Item> out;
  for (std::size_t i = 0; i < total; ++i) out.emplace_back(supply.card(i < black ? Face::Black : Face::Red));
  return out;
}

std::size_t black_in(const std::vector<Item>& items) {
  std::size_t b = 0;
  for (const auto& it : items) b += it.is_card() && it.card().face == Face::Black;
  return b;
}

std::optional<FaceCounts> open_cards(Table& t, Envelope e, std::string_view ctx) {
  Packet p{t.open(std::move(e), ctx), {}};
  const bool cards = std::all_of(p.items.begin(), p.items.end(), [](const Item& it) { return it.is_card(); });
  std::optional<FaceCounts> faces;
  if (cards) faces = t.reveal(p, ctx);
  t.retire(std::move(p));
  return faces;
}

int label_key(const Item& it) {
  return it.is_envelope() && it.envelope().prime_label ? *it.envelope().prime_label : INT_MAX;
}

/// Opens labeled p-envelopes in label order. Each must hold `mult * e_p`
/// cards and every prime must appear once; nullopt otherwise.
std::optional<std::map<int, int>> read_p_envelopes(Table& t, std::vector<Item> items, int n, std::size_t mult,
                                                   std::string_view ctx) {
  const auto table = prime_table(n);
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return label_key(a) < label_key(b); });
  bool ok = items.size() == table.size();
  std::map<int, int> out;
  for (auto& it : items) {
    const int p = label_key(it);
    if (p == INT_MAX || !table.count(p) || out.count(p)) {
      ok = false;
      t.retire(std::move(it));
      continue;
    }
    const auto faces = open_cards(t, std::move(it.envelope()), ctx);
    if (!faces || faces->total() != mult * static_cast<std::size_t>(table.at(p))) ok = false;
    out[p] = faces ? static_cast<int>((*faces)[Face::Black]) : 0;
  }
  if (!ok) return std::nullopt;
  return out;
}

std::optional<std::map<int, int>> read_factors(Table& t, Envelope factors, int n, std::string_view ctx) {
  return read_p_envelopes(t, t.open(std::move(factors), ctx), n, 1, ctx);
}

/// Opens an outer cell envelope into its count and factor envelopes.
std::pair<std::optional<Envelope>, std::optional<Envelope>> split(Table& t, Envelope outer, std::string_view ctx) {
  auto items = t.open(std::move(outer), ctx);
  std::pair<std::optional<Envelope>, std::optional<Envelope>> out;
  if (items.size() == 2 && items[0].is_envelope() && items[1].is_envelope()) {
    out.first = std::move(items[0].envelope());
    out.second = std::move(items[1].envelope());
    return out;
  }
  t.retire(std::move(items));
  return out;
}

/// Full decode for the unicity checks: both encodings must agree.
std::optional<long long> open_cell(Table& t, Envelope outer, int n, std::string_view ctx) {
  auto [count, factors] = split(t, std::move(outer), ctx);
  if (!count || !factors) {
    if (count) t.retire(Item(std::move(*count)));
    if (factors) t.retire(Item(std::move(*factors)));
    return std::nullopt;
  }
  const auto faces = open_cards(t, std::move(*count), ctx);
  const auto exps = read_factors(t, std::move(*factors), n, ctx);
  if (!faces || faces->total() != static_cast<std::size_t>(n) || !exps) return std::nullopt;
  const auto v = static_cast<long long>((*faces)[Face::Black]);
  if (product(*exps) != v) return std::nullopt;
  return v;
}

Envelope subtraction_large(int m, long long target, std::size_t c, int n, Supply& supply) {
  Envelope marked = encode_count(m, n, supply);
  marked.mark = "marked";
  std::vector<Item> items;
  items.emplace_back(std::move(marked));
  for (auto& it : colored(supply, static_cast<std::size_t>(m - target), static_cast<std::size_t>(n) * (c - 1))) {
    items.push_back(std::move(it));
  }
  return supply.seal(std::move(items));
}

Envelope division_large(int m, long long target, std::size_t c, int n, Supply& supply) {
  Envelope marked = encode_factors(m, n, supply);
  marked.mark = "marked";
  std::vector<Item> items;
  items.emplace_back(std::move(marked));
  for (const auto& [p, e] : prime_table(n)) {
    const auto black = static_cast<std::size_t>(exponent_of(m, p) - exponent_of(target, p));
    items.emplace_back(supply.seal(colored(supply, black, (c - 1) * static_cast<std::size_t>(e)), p));
  }
  return supply.seal(std::move(items));
}

int cage_max(const kenken::Cage& cage, const Grid<int>& values) {
  int m = 0;
  for (const Cell c : cage.cells) m = std::max(m, values[c]);
  return m;
}

/// Decoys for the Sub/Div cages. When `values` break a cage so that its
/// maximum is not feasible, every maximum gets a large envelope.
std::map<std::size_t, std::vector<Envelope>> decoys_for(const kenken::Instance& inst, const Grid<int>& values,
                                                        Supply& supply) {
  std::map<std::size_t, std::vector<Envelope>> out;
  for (std::size_t k = 0; k < inst.cages.size(); ++k) {
    const auto& cage = inst.cages[k];
    if (cage.op != Op::Sub && cage.op != Op::Div) continue;
    const auto maxima = cage.op == Op::Sub ? subtraction_maxima(cage.target, cage.cells.size(), inst.n)
                                           : division_maxima(cage.target, inst.n);
    if (maxima.empty()) {
      out[k] = {};
      continue;
    }
    int m = cage_max(cage, values);
    if (std::find(maxima.begin(), maxima.end(), m) == maxima.end()) m = 0;
    auto set = cage.op == Op::Sub ? build_subtraction_decoys(cage, m, inst.n, supply)
                                  : build_division_decoys(cage, m, inst.n, supply);
    out[k] = std::move(set.large);
  }
  return out;
}

class SimulatorTable : public Table {
 public:
  SimulatorTable(Transcript& log, Stream shuffler, const kenken::Instance& inst)
      : Table(log, std::move(shuffler)), inst_(inst), supply_(Uid{1} << 41) {}

  Packet substitute(std::string_view point, std::size_t index, Packet p) override {
    const int n = inst_.n;
    Packet out;
    if (point == "row" || point == "col") {
      for (int v = 1; v <= n; ++v) out.items.emplace_back(encode_cell(v, n, supply_));
    } else if (point == "add") {
      const auto& cage = inst_.cages[index];
      const std::size_t total = cage.cells.size() * static_cast<std::size_t>(n);
      out.items = colored(supply_, std::min<std::size_t>(static_cast<std::size_t>(cage.target), total), total);
    } else if (point.substr(0, 4) == "mul:") {
      const auto& cage = inst_.cages[index];
      const int prime = std::stoi(std::string(point.substr(4)));
      const std::size_t total = cage.cells.size() * static_cast<std::size_t>(prime_table(n).at(prime));
      const auto black = static_cast<std::size_t>(exponent_of(cage.target, prime));
      out.items = colored(supply_, std::min(black, total), total);
    } else if (point == "sub" || point == "div") {
      const auto& cage = inst_.cages[index];
      const auto maxima = point == "sub" ? subtraction_maxima(cage.target, cage.cells.size(), n)
                                         : division_maxima(cage.target, n);
      if (maxima.empty()) return p;
      for (int m : maxima) {
        out.items.emplace_back(point == "sub" ? subtraction_large(m, cage.target, cage.cells.size(), n, supply_)
                                              : division_large(m, cage.target, cage.cells.size(), n, supply_));
      }
    } else {
      return p;
    }
    retire(std::move(p));
    register_inventory(out.items);
    return out;
  }

 private:
  const kenken::Instance& inst_;
  Supply supply_;
};

class Verification {
 public:
  Verification(const kenken::Instance& inst, Commitment& com, Round& rd) : inst_(inst), com_(com), rd_(rd), t_(rd.table) {}

  bool run() {
    const int n = inst_.n;
    for (const auto& envs : com_.cells) {
      for (const auto& e : envs) t_.register_inventory({Item(e)});
    }
    for (const auto& [k, envs] : com_.decoys) {
      for (const auto& e : envs) t_.register_inventory({Item(e)});
    }
    for (auto& envs : com_.cells) {
      if (envs.size() != kCopies) ok_ = false;
      while (envs.size() < kCopies) envs.push_back(t_.seal({}));
    }

    assigned_.resize(com_.cells.size());
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const std::size_t i = static_cast<std::size_t>(r * n + c);
        const auto order = rd_.verifier.permutation("assign " + to_string(Cell{r, c}), kCopies);
        for (std::size_t rule = 0; rule < kCopies; ++rule) assigned_[i][rule] = std::move(com_.cells[i][order[rule]]);
        for (std::size_t k = kCopies; k < com_.cells[i].size(); ++k) t_.retire(Item(std::move(com_.cells[i][k])));
      }
    }

    for (int r = 0; r < n; ++r) unicity(RowUnicity, r);
    for (int c = 0; c < n; ++c) unicity(ColumnUnicity, c);
    for (std::size_t k = 0; k < inst_.cages.size(); ++k) {
      switch (inst_.cages[k].op) {
        case Op::Add: addition(k); break;
        case Op::Mul: multiplication(k); break;
        case Op::Sub: subtraction(k); break;
        case Op::Div: division(k); break;
      }
    }
    for (auto& [k, envs] : com_.decoys) {
      for (auto& e : envs) t_.retire(Item(std::move(e)));
    }
    com_.cells.clear();
    com_.decoys.clear();
    return ok_;
  }

 private:
  Envelope take(Cell cell, Rule rule) {
    auto& slot = assigned_[static_cast<std::size_t>(cell.row * inst_.n + cell.col)][rule];
    Envelope e = std::move(*slot);
    slot.reset();
    return e;
  }

  std::vector<Envelope> decoys(std::size_t k) {
    auto it = com_.decoys.find(k);
    if (it == com_.decoys.end()) return {};
    auto out = std::move(it->second);
    com_.decoys.erase(it);
    return out;
  }

  void unicity(Rule rule, int line) {
    const int n = inst_.n;
    const char* name = rule == RowUnicity ? "row" : "col";
    Packet p;
    for (int i = 0; i < n; ++i) p.items.emplace_back(take(rule == RowUnicity ? Cell{line, i} : Cell{i, line}, rule));
    p = t_.substitute(name, static_cast<std::size_t>(line), std::move(p));
    p = t_.shuffle(std::move(p), name);
    std::vector<long long> values;
    bool coherent = true;
    for (auto& it : p.items) {
      if (!it.is_envelope()) {
        coherent = false;
        t_.retire(std::move(it));
        continue;
      }
      const auto v = open_cell(t_, std::move(it.envelope()), n, name);
      if (v) values.push_back(*v);
      else coherent = false;
    }
    std::sort(values.begin(), values.end());
    std::vector<long long> expected(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) expected[static_cast<std::size_t>(v - 1)] = v;
    ok_ = ok_ && coherent && values == expected;
  }

  /// Opens the cage envelopes, keeps one half of each and discards the other.
  std::vector<Envelope> halves(const kenken::Cage& cage, bool keep_count, std::string_view ctx, bool& shaped) {
    std::vector<Envelope> out;
    for (const Cell c : cage.cells) {
      auto [count, factors] = split(t_, take(c, CageRule), ctx);
      auto& keep = keep_count ? count : factors;
      auto& drop = keep_count ? factors : count;
      if (drop) t_.retire(Item(std::move(*drop)));
      if (keep) out.push_back(std::move(*keep));
      else shaped = false;
    }
    return out;
  }

  void addition(std::size_t k) {
    const auto& cage = inst_.cages[k];
    bool shaped = true;
    Packet pool;
    for (auto& e : halves(cage, true, "cage-add", shaped)) {
      for (auto& it : t_.open(std::move(e), "cage-add")) {
        if (it.is_card()) pool.items.push_back(std::move(it));
        else {
          shaped = false;
          t_.retire(std::move(it));
        }
      }
    }
    pool = t_.substitute("add", k, std::move(pool));
    pool = t_.shuffle(std::move(pool), "cage-add");
    const auto faces = t_.reveal(pool, "cage-add");
    ok_ = ok_ && shaped && static_cast<long long>(faces[Face::Black]) == cage.target;
    t_.retire(std::move(pool));
  }

  void multiplication(std::size_t k) {
    const auto& cage = inst_.cages[k];
    const auto table = prime_table(inst_.n);
    bool shaped = true;
    std::map<int, Packet> pools;
    for (const auto& [p, e] : table) pools[p];
    for (auto& fe : halves(cage, false, "cage-mul", shaped)) {
      for (auto& it : t_.open(std::move(fe), "cage-mul")) {
        const int p = label_key(it);
        if (!pools.count(p)) {
          shaped = false;
          t_.retire(std::move(it));
          continue;
        }
        for (auto& card : t_.open(std::move(it.envelope()), "cage-mul")) pools[p].items.push_back(std::move(card));
      }
    }
    bool match = residue(cage.target, inst_.n) == 1;
    for (auto& [p, pool] : pools) {
      pool = t_.substitute("mul:" + std::to_string(p), k, std::move(pool));
      pool = t_.shuffle(std::move(pool), "cage-mul");
      const bool cards = std::all_of(pool.items.begin(), pool.items.end(), [](const Item& it) { return it.is_card(); });
      if (cards) {
        const auto faces = t_.reveal(pool, "cage-mul");
        match = match && static_cast<int>(faces[Face::Black]) == exponent_of(cage.target, p);
      } else {
        shaped = false;
      }
      t_.retire(std::move(pool));
    }
    ok_ = ok_ && shaped && match;
  }

  /// The prover marks the maximum among the handed envelopes.
  std::pair<Envelope, std::vector<Envelope>> mark_step(std::vector<Envelope> envs, bool division, std::string_view ctx,
                                                       bool& shaped) {
    Packet p;
    for (auto& e : envs) p.items.emplace_back(std::move(e));
    p = t_.shuffle(std::move(p), ctx);
    t_.handed(p.size(), ctx);
    ProverQuery q{ProverQuery::Kind::KenKenMark, std::string(ctx), {}, {}};
    for (const auto& it : p.items) q.values.push_back(division ? factor_value(it.envelope()) : count_value(it.envelope()));
    std::size_t idx = rd_.prover.respond(q).index;
    if (idx >= p.size()) {
      shaped = false;
      idx = 0;
    }
    t_.mark(p.items[idx].envelope(), idx, ctx);
    Envelope marked = std::move(p.items[idx].envelope());
    std::vector<Envelope> others;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i != idx) others.push_back(std::move(p.items[i].envelope()));
    }
    return {std::move(marked), std::move(others)};
  }

  /// Splits an opened large envelope into its marked envelope and the rest.
  static std::optional<Envelope> take_marked(std::vector<Item>& items) {
    std::optional<Envelope> marked;
    std::size_t found = 0;
    for (auto it = items.begin(); it != items.end();) {
      if (it->is_envelope() && it->envelope().mark) {
        ++found;
        if (!marked) {
          marked = std::move(it->envelope());
          it = items.erase(it);
          continue;
        }
      }
      ++it;
    }
    if (found != 1) {
      if (marked) items.emplace_back(std::move(*marked));
      return std::nullopt;
    }
    return marked;
  }

  void subtraction(std::size_t k) {
    const auto& cage = inst_.cages[k];
    const int n = inst_.n;
    const std::size_t c = cage.cells.size();
    bool shaped = true;
    auto counts = halves(cage, true, "cage-sub", shaped);
    Packet all;
    if (!counts.empty()) {
      auto [marked, others] = mark_step(std::move(counts), false, "cage-sub", shaped);
      all.items.emplace_back(assemble_subtraction(t_, std::move(marked), std::move(others), "cage-sub"));
    }
    for (auto& e : decoys(k)) all.items.emplace_back(std::move(e));
    all = t_.substitute("sub", k, std::move(all));
    all = t_.shuffle(std::move(all), "cage-sub");
    std::vector<int> maxima;
    for (auto& it : all.items) {
      if (!it.is_envelope()) {
        shaped = false;
        t_.retire(std::move(it));
        continue;
      }
      auto items = t_.open(std::move(it.envelope()), "cage-sub");
      auto marked = take_marked(items);
      if (!marked) {
        shaped = false;
        t_.retire(std::move(items));
        continue;
      }
      const auto m = open_cards(t_, std::move(*marked), "cage-sub");
      Packet free{std::move(items), {}};
      const bool cards = std::all_of(free.items.begin(), free.items.end(), [](const Item& x) { return x.is_card(); });
      if (!m || m->total() != static_cast<std::size_t>(n) || !cards || free.size() != static_cast<std::size_t>(n) * (c - 1)) {
        shaped = false;
        t_.retire(std::move(free));
        continue;
      }
      const auto f = t_.reveal(free, "cage-sub");
      const long long diff = static_cast<long long>((*m)[Face::Black]) - static_cast<long long>(f[Face::Black]);
      if (diff != cage.target) shaped = false;
      maxima.push_back(static_cast<int>((*m)[Face::Black]));
      t_.retire(std::move(free));
    }
    std::sort(maxima.begin(), maxima.end());
    ok_ = ok_ && shaped && maxima == subtraction_maxima(cage.target, c, n);
  }

  void division(std::size_t k) {
    const auto& cage = inst_.cages[k];
    const int n = inst_.n;
    const std::size_t c = cage.cells.size();
    bool shaped = true;
    auto factors = halves(cage, false, "cage-div", shaped);
    Packet all;
    if (!factors.empty()) {
      auto [marked, others] = mark_step(std::move(factors), true, "cage-div", shaped);
      all.items.emplace_back(assemble_division(t_, std::move(marked), std::move(others), n, "cage-div"));
    }
    for (auto& e : decoys(k)) all.items.emplace_back(std::move(e));
    all = t_.substitute("div", k, std::move(all));
    all = t_.shuffle(std::move(all), "cage-div");
    std::vector<int> maxima;
    for (auto& it : all.items) {
      if (!it.is_envelope()) {
        shaped = false;
        t_.retire(std::move(it));
        continue;
      }
      auto items = t_.open(std::move(it.envelope()), "cage-div");
      auto marked = take_marked(items);
      if (!marked) {
        shaped = false;
        t_.retire(std::move(items));
        continue;
      }
      const auto top = read_factors(t_, std::move(*marked), n, "cage-div");
      const auto rest = read_p_envelopes(t_, std::move(items), n, c - 1, "cage-div");
      if (!top || !rest) {
        shaped = false;
        continue;
      }
      for (const auto& [p, e] : *top) {
        if (e - rest->at(p) != exponent_of(cage.target, p)) shaped = false;
      }
      maxima.push_back(static_cast<int>(product(*top)));
    }
    std::sort(maxima.begin(), maxima.end());
    ok_ = ok_ && shaped && residue(cage.target, n) == 1 && maxima == division_maxima(cage.target, n);
  }

  const kenken::Instance& inst_;
  Commitment& com_;
  Round& rd_;
  Table& t_;
  std::vector<std::array<std::optional<Envelope>, kCopies>> assigned_;
  bool ok_ = true;
};

}  // namespace

std::map<int, int> prime_table(int n) {
  std::map<int, int> out;
  for (int p = 2; p <= n; ++p) {
    if (!is_prime(p)) continue;
    int e = 0;
    for (long long q = p; q <= n; q *= p) ++e;
    out[p] = e;
  }
  return out;
}

int exponent_of(long long value, int p) {
  if (value == 0) return 0;
  int e = 0;
  while (value % p == 0) {
    value /= p;
    ++e;
  }
  return e;
}

Envelope encode_count(int v, int n, Supply& supply) {
  if (v < 0 || v > n) throw Error(Errc::OutOfRange, "count " + std::to_string(v) + " outside 0.." + std::to_string(n));
  return supply.seal(colored(supply, static_cast<std::size_t>(v), static_cast<std::size_t>(n)));
}

Envelope encode_factors(long long v, int n, Supply& supply) {
  if (v < 1 || residue(v, n) != 1) throw Error(Errc::OutOfRange, std::to_string(v) + " does not factor over primes <= " + std::to_string(n));
  std::vector<Item> envs;
  for (const auto& [p, e] : prime_table(n)) {
    const int x = exponent_of(v, p);
    if (x > e) throw Error(Errc::OutOfRange, std::to_string(v) + " has too large a power of " + std::to_string(p));
    envs.emplace_back(supply.seal(colored(supply, static_cast<std::size_t>(x), static_cast<std::size_t>(e)), p));
  }
  return supply.seal(std::move(envs));
}

Envelope encode_cell(int v, int n, Supply& supply) {
  if (v < 1 || v > n) throw Error(Errc::OutOfRange, "value " + std::to_string(v) + " outside 1.." + std::to_string(n));
  std::vector<Item> parts;
  parts.emplace_back(encode_count(v, n, supply));
  parts.emplace_back(encode_factors(v, n, supply));
  return supply.seal(std::move(parts));
}

long long count_value(const Envelope& count) {
  return static_cast<long long>(black_in(private_peek(count, Role::Prover)));
}

long long factor_value(const Envelope& factors) {
  std::map<int, int> exps;
  for (const auto& it : private_peek(factors, Role::Prover)) {
    if (!it.is_envelope() || !it.envelope().prime_label) continue;
    exps[*it.envelope().prime_label] += static_cast<int>(black_in(private_peek(it.envelope(), Role::Prover)));
  }
  return product(exps);
}

std::vector<int> subtraction_maxima(long long t, std::size_t c, int n) {
  std::vector<int> out;
  for (long long m = t + static_cast<long long>(c) - 1; m <= n; ++m) {
    if (m >= 1) out.push_back(static_cast<int>(m));
  }
  return out;
}

std::vector<int> division_maxima(long long t, int n) {
  std::vector<int> out;
  if (t < 1) return out;
  for (long long m = t; m <= n; m += t) out.push_back(static_cast<int>(m));
  return out;
}

DecoySet build_subtraction_decoys(const kenken::Cage& cage, int sol_max, int n, Supply& supply) {
  if (cage.op != Op::Sub) throw Error(Errc::InvalidArgument, "cage " + cage.id + " is not a subtraction cage");
  DecoySet set;
  set.maxima = subtraction_maxima(cage.target, cage.cells.size(), n);
  if (set.maxima.empty()) throw Error(Errc::InfeasibleCage, "cage " + cage.id + " has no feasible maximum");
  if (sol_max != 0 && std::find(set.maxima.begin(), set.maxima.end(), sol_max) == set.maxima.end()) {
    throw Error(Errc::InfeasibleCage, std::to_string(sol_max) + " cannot be the maximum of cage " + cage.id);
  }
  for (int m : set.maxima) {
    if (m != sol_max) set.large.push_back(subtraction_large(m, cage.target, cage.cells.size(), n, supply));
  }
  return set;
}

DecoySet build_division_decoys(const kenken::Cage& cage, int sol_max, int n, Supply& supply) {
  if (cage.op != Op::Div) throw Error(Errc::InvalidArgument, "cage " + cage.id + " is not a division cage");
  DecoySet set;
  set.maxima = division_maxima(cage.target, n);
  if (set.maxima.empty()) throw Error(Errc::InfeasibleCage, "cage " + cage.id + " has no feasible maximum");
  if (sol_max != 0 && std::find(set.maxima.begin(), set.maxima.end(), sol_max) == set.maxima.end()) {
    throw Error(Errc::InfeasibleCage, std::to_string(sol_max) + " cannot be the maximum of cage " + cage.id);
  }
  for (int m : set.maxima) {
    if (m != sol_max) set.large.push_back(division_large(m, cage.target, cage.cells.size(), n, supply));
  }
  return set;
}

Envelope assemble_subtraction(Table& t, Envelope marked, std::vector<Envelope> others, std::string_view ctx) {
  Packet pool;
  for (auto& e : others) {
    for (auto& it : t.open(std::move(e), ctx)) pool.items.push_back(std::move(it));
  }
  pool = t.shuffle(std::move(pool), ctx);
  std::vector<Item> items;
  items.emplace_back(std::move(marked));
  for (auto& it : pool.items) items.push_back(std::move(it));
  return t.seal(std::move(items));
}

Envelope assemble_division(Table& t, Envelope marked, std::vector<Envelope> others, int n, std::string_view ctx) {
  const auto table = prime_table(n);
  std::map<int, Packet> pools;
  for (const auto& [p, e] : table) pools[p];
  for (auto& fe : others) {
    for (auto& it : t.open(std::move(fe), ctx)) {
      const int p = label_key(it);
      if (!pools.count(p)) {
        t.retire(std::move(it));
        continue;
      }
      for (auto& card : t.open(std::move(it.envelope()), ctx)) pools[p].items.push_back(std::move(card));
    }
  }
  std::vector<Item> items;
  items.emplace_back(std::move(marked));
  for (auto& [p, pool] : pools) {
    pool = t.shuffle(std::move(pool), ctx);
    items.emplace_back(t.seal(std::move(pool.items), p));
  }
  return t.seal(std::move(items));
}

Commitment commit_values(const kenken::Instance& inst, const Grid<int>& values, Supply& supply) {
  Commitment com;
  com.n = inst.n;
  for (int r = 0; r < inst.n; ++r) {
    for (int c = 0; c < inst.n; ++c) {
      std::vector<Envelope> envs;
      for (std::size_t k = 0; k < kCopies; ++k) envs.push_back(encode_cell(values[{r, c}], inst.n, supply));
      com.cells.push_back(std::move(envs));
    }
  }
  com.decoys = decoys_for(inst, values, supply);
  return com;
}

Commitment setup_commitment(const kenken::Instance& inst, const kenken::Solution& sol, Stream& coins) {
  (void)coins;
  if (!kenken::validate(inst, sol).empty()) throw Error(Errc::InvalidSolution, "not a solution of the instance");
  Supply supply;
  return commit_values(inst, sol.values, supply);
}

Commitment setup_commitment(const kenken::Instance& inst, const kenken::Solution& sol, const RandomSource& r) {
  Stream coins = r.stream(RandomSource::kProver);
  return setup_commitment(inst, sol, coins);
}

bool verify_round(const kenken::Instance& inst, Commitment& com, Round& rd) {
  if (com.consumed) throw Error(Errc::ConsumedCommitment, "commitment already used");
  com.consumed = true;
  if (com.cells.size() != static_cast<std::size_t>(inst.n * inst.n)) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  const bool ok = Verification(inst, com, rd).run();
  rd.table.verdict(ok);
  return ok;
}

Commitment cheating_setup(const kenken::Instance& inst, const Strategy& strategy, const RandomSource& r) {
  (void)r;
  Supply supply;
  auto check_cell = [&](Cell c) {
    if (c.row < 0 || c.col < 0 || c.row >= inst.n || c.col >= inst.n) {
      throw Error(Errc::NoSuchCell, to_string(c) + " is outside the grid");
    }
  };
  if (const auto* dev = std::get_if<DeviantEnvelope>(&strategy)) {
    check_cell(dev->cell);
    Grid<int> shifted = dev->base;
    shifted[dev->cell] = dev->value;
    Commitment com = commit_values(inst, dev->base, supply);
    com.decoys = decoys_for(inst, shifted, supply);
    com.cells[static_cast<std::size_t>(dev->cell.row * inst.n + dev->cell.col)].back() =
        encode_cell(dev->value, inst.n, supply);
    return com;
  }
  if (const auto* wm = std::get_if<WrongMark>(&strategy)) return commit_values(inst, wm->sol.values, supply);
  if (const auto* bad = std::get_if<WellFormedNonSolution>(&strategy)) return commit_values(inst, bad->values, supply);
  const auto& mis = std::get<MismatchedEncoding>(strategy);
  check_cell(mis.cell);
  Commitment com = commit_values(inst, mis.base.values, supply);
  const int v = mis.base.values[mis.cell];
  for (auto& e : com.cells[static_cast<std::size_t>(mis.cell.row * inst.n + mis.cell.col)]) {
    std::vector<Item> parts;
    parts.emplace_back(encode_count(v, inst.n, supply));
    parts.emplace_back(encode_factors(mis.factor_value, inst.n, supply));
    e = supply.seal(std::move(parts));
  }
  return com;
}

std::optional<DeviantEnvelope> find_deviant(const kenken::Instance& inst, std::size_t budget) {
  const int n = inst.n;
  Grid<int> g(n, n, 0);
  std::vector<std::vector<bool>> row(n, std::vector<bool>(n + 1)), col(n, std::vector<bool>(n + 1));
  std::optional<DeviantEnvelope> found;
  std::size_t nodes = 0;

  auto cage_values = [&](const kenken::Cage& cage) {
    std::vector<int> v;
    for (const Cell c : cage.cells) v.push_back(g[c]);
    return v;
  };
  auto examine = [&]() {
    std::size_t broken = 0, which = 0;
    for (std::size_t k = 0; k < inst.cages.size(); ++k) {
      const auto& cage = inst.cages[k];
      if (!kenken::cage_satisfied(cage.op, cage.target, cage_values(cage))) {
        ++broken;
        which = k;
      }
    }
    if (broken != 1) return;
    const auto& cage = inst.cages[which];
    for (std::size_t i = 0; i < cage.cells.size(); ++i) {
      auto v = cage_values(cage);
      for (int y = 1; y <= n; ++y) {
        if (y == v[i]) continue;
        auto w = v;
        w[i] = y;
        if (kenken::cage_satisfied(cage.op, cage.target, w)) {
          found = DeviantEnvelope{g, cage.cells[i], y};
          return;
        }
      }
    }
  };
  std::function<void(int)> fill = [&](int pos) {
    if (found || ++nodes > budget) return;
    if (pos == n * n) {
      examine();
      return;
    }
    const int r = pos / n, c = pos % n;
    for (int v = 1; v <= n && !found; ++v) {
      if (row[r][v] || col[c][v]) continue;
      row[r][v] = col[c][v] = true;
      g[{r, c}] = v;
      fill(pos + 1);
      row[r][v] = col[c][v] = false;
    }
  };
  fill(0);
  return found;
}

Transcript simulate_round(const kenken::Instance& inst, const RandomSource& r) {
  // Placeholder of the right shape: every cell 1, one decoy short per cage.
  Supply supply;
  Commitment com;
  com.n = inst.n;
  for (int i = 0; i < inst.n * inst.n; ++i) {
    std::vector<Envelope> envs;
    for (std::size_t k = 0; k < kCopies; ++k) envs.push_back(encode_cell(1, inst.n, supply));
    com.cells.push_back(std::move(envs));
  }
  for (std::size_t k = 0; k < inst.cages.size(); ++k) {
    const auto& cage = inst.cages[k];
    if (cage.op == Op::Sub) {
      const auto maxima = subtraction_maxima(cage.target, cage.cells.size(), inst.n);
      if (!maxima.empty()) com.decoys[k] = build_subtraction_decoys(cage, maxima.front(), inst.n, supply).large;
    } else if (cage.op == Op::Div) {
      const auto maxima = division_maxima(cage.target, inst.n);
      if (!maxima.empty()) com.decoys[k] = build_division_decoys(cage, maxima.front(), inst.n, supply).large;
    }
  }

  Transcript log;
  SimulatorTable table(log, r.stream(RandomSource::kShuffle), inst);
  LocalVerifier verifier(r.stream(RandomSource::kChallenge));
  HonestProver prover(r.stream(RandomSource::kProver));
  Round rd{table, verifier, prover};
  verify_round(inst, com, rd);
  return log;
}

nlohmann::json to_json(const Commitment& com) {
  nlohmann::json j;
  j["n"] = com.n;
  auto cells = nlohmann::json::array();
  for (const auto& envs : com.cells) {
    auto a = nlohmann::json::array();
    for (const auto& e : envs) a.push_back(envelope_to_json(e));
    cells.push_back(std::move(a));
  }
  j["cells"] = std::move(cells);
  auto decoys = nlohmann::json::array();
  for (const auto& [k, envs] : com.decoys) {
    auto a = nlohmann::json::array();
    for (const auto& e : envs) a.push_back(envelope_to_json(e));
    decoys.push_back({{"cage", k}, {"large", std::move(a)}});
  }
  j["decoys"] = std::move(decoys);
  return j;
}

Commitment commitment_from_json(const kenken::Instance& inst, const nlohmann::json& j, Supply& supply) {
  Commitment com;
  com.n = j.at("n").get<int>();
  for (const auto& a : j.at("cells")) {
    std::vector<Envelope> envs;
    for (const auto& e : a) envs.push_back(envelope_from_json(e, supply));
    com.cells.push_back(std::move(envs));
  }
  for (const auto& d : j.at("decoys")) {
    const auto k = d.at("cage").get<std::size_t>();
    if (k >= inst.cages.size()) throw Error(Errc::ShapeMismatch, "decoys for an unknown cage");
    auto& envs = com.decoys[k];
    for (const auto& e : d.at("large")) envs.push_back(envelope_from_json(e, supply));
  }
  if (com.n != inst.n || com.cells.size() != static_cast<std::size_t>(inst.n * inst.n)) {
    throw Error(Errc::ShapeMismatch, "commitment does not match the grid");
  }
  return com;
}

}  // namespace pzk::kenken_zkp
