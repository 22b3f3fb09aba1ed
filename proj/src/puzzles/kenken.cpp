#include "pzk/puzzles/kenken.hpp"

#include <algorithm>
#include <map>

#include "pzk/error.hpp"
#include "text.hpp"

namespace pzk::kenken {

char symbol(Op op) {
  switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
  }
  return '?';
}

bool cage_satisfied(Op op, long long target, const std::vector<int>& values) {
  if (values.empty()) return false;
  switch (op) {
    case Op::Add: {
      long long sum = 0;
      for (int v : values) sum += v;
      return sum == target;
    }
    case Op::Mul: {
      long long prod = 1;
      for (int v : values) {
        prod *= v;
        if (prod > target) return false;
      }
      return prod == target;
    }
    case Op::Sub: {
      if (values.size() < 2) return false;
      const int top = *std::max_element(values.begin(), values.end());
      long long rest = -top;
      for (int v : values) rest += v;
      return top - rest == target;
    }
    case Op::Div: {
      if (values.size() < 2) return false;
      const int top = *std::max_element(values.begin(), values.end());
      long long rest = 1;
      bool skipped = false;
      for (int v : values) {
        if (v == top && !skipped) {
          skipped = true;
          continue;
        }
        rest *= v;
      }
      return rest != 0 && top % rest == 0 && top / rest == target;
    }
  }
  return false;
}

void finalize(Instance& inst) {
  const int n = inst.n;
  if (n < 1) throw Error(Errc::StructureError, "KenKen size must be positive");
  inst.cage_of = Grid<int>(n, n, -1);
  for (std::size_t k = 0; k < inst.cages.size(); ++k) {
    auto& cage = inst.cages[k];
    if (cage.cells.empty()) throw Error(Errc::StructureError, "cage " + cage.id + " is empty");
    if ((cage.op == Op::Sub || cage.op == Op::Div) && cage.cells.size() < 2) {
      throw Error(Errc::StructureError, "cage " + cage.id + " needs at least two cells");
    }
    if (cage.target < 1) throw Error(Errc::StructureError, "cage " + cage.id + " has a non-positive target");
    std::sort(cage.cells.begin(), cage.cells.end());
    for (const Cell c : cage.cells) {
      if (!inst.cage_of.contains(c)) throw Error(Errc::StructureError, "cage " + cage.id + " leaves the grid");
      if (inst.cage_of[c] >= 0) throw Error(Errc::StructureError, "cell " + to_string(c) + " is in two cages");
      inst.cage_of[c] = static_cast<int>(k);
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (inst.cage_of.at(r, c) < 0) throw Error(Errc::StructureError, "cell " + to_string(Cell{r, c}) + " is in no cage");
    }
  }
}

Instance parse_instance(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error(Errc::StructureError, "empty KenKen file");
  const auto& head = lines.front();
  const int n = static_cast<int>(detail::parse_int(head, 1, head.text));
  if (n < 1 || n > 64) throw ParseError(head.number, 1, "grid size must be within 1..64");
  if (static_cast<int>(lines.size()) < 1 + n) throw Error(Errc::StructureError, "missing cage rows");

  std::map<std::string, std::vector<Cell>> members;
  for (int r = 0; r < n; ++r) {
    const auto& line = lines[1 + r];
    std::vector<detail::Token> ids;
    if (line.text.find_first_of(" \t") != std::string::npos) {
      ids = detail::tokens(line.text);
    } else {
      for (std::size_t c = 0; c < line.text.size(); ++c) ids.push_back({c + 1, std::string(1, line.text[c])});
    }
    if (static_cast<int>(ids.size()) != n) {
      throw Error(Errc::StructureError, "cage row on line " + std::to_string(line.number) + " must have " +
                                            std::to_string(n) + " cells");
    }
    for (int c = 0; c < n; ++c) members[ids[c].text].push_back({r, c});
  }

  Instance inst;
  inst.n = n;
  std::map<std::string, bool> defined;
  for (std::size_t i = 1 + static_cast<std::size_t>(n); i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto toks = detail::tokens(line.text);
    if (toks.size() != 3) throw ParseError(line.number, 1, "expected 'ID OP TARGET'");
    Cage cage;
    cage.id = toks[0].text;
    const auto& op = toks[1].text;
    if (op == "+") cage.op = Op::Add;
    else if (op == "-") cage.op = Op::Sub;
    else if (op == "*") cage.op = Op::Mul;
    else if (op == "/") cage.op = Op::Div;
    else throw ParseError(line.number, toks[1].column, "operator must be one of + - * /");
    cage.target = detail::parse_int(line, toks[2].column, toks[2].text);
    if (defined[cage.id]) throw ParseError(line.number, 1, "cage " + cage.id + " defined twice");
    defined[cage.id] = true;
    auto it = members.find(cage.id);
    if (it == members.end()) throw Error(Errc::StructureError, "cage " + cage.id + " has no cells");
    cage.cells = it->second;
    inst.cages.push_back(std::move(cage));
  }
  for (const auto& [id, cells] : members) {
    if (!defined[id]) throw Error(Errc::StructureError, "cage " + id + " has no definition");
  }
  finalize(inst);
  return inst;
}

std::string serialize(const Instance& inst) {
  const bool compact = std::all_of(inst.cages.begin(), inst.cages.end(),
                                   [](const Cage& c) { return c.id.size() == 1 && c.id != " "; });
  std::string out = std::to_string(inst.n) + "\n";
  for (int r = 0; r < inst.n; ++r) {
    for (int c = 0; c < inst.n; ++c) {
      if (!compact && c > 0) out += ' ';
      out += inst.cages[inst.cage_of.at(r, c)].id;
    }
    out += '\n';
  }
  for (const auto& cage : inst.cages) {
    out += cage.id + " " + symbol(cage.op) + " " + std::to_string(cage.target) + "\n";
  }
  return out;
}

Solution parse_solution(std::string_view text) {
  const auto lines = detail::content_lines(text);
  const int n = static_cast<int>(lines.size());
  if (n == 0) throw Error(Errc::ShapeMismatch, "empty solution");
  Solution sol{Grid<int>(n, n, 0)};
  for (int r = 0; r < n; ++r) {
    const auto toks = detail::tokens(lines[r].text);
    if (static_cast<int>(toks.size()) != n) throw Error(Errc::ShapeMismatch, "solution must be square");
    for (int c = 0; c < n; ++c) {
      sol.values.at(r, c) = static_cast<int>(detail::parse_int(lines[r], toks[c].column, toks[c].text));
    }
  }
  return sol;
}

std::string serialize(const Solution& sol) {
  std::string out;
  for (int r = 0; r < sol.values.height(); ++r) {
    for (int c = 0; c < sol.values.width(); ++c) {
      if (c > 0) out += ' ';
      out += std::to_string(sol.values.at(r, c));
    }
    out += '\n';
  }
  return out;
}

std::vector<Violation> validate(const Instance& inst, const Solution& sol) {
  const int n = inst.n;
  if (sol.values.height() != n || sol.values.width() != n) {
    throw Error(Errc::ShapeMismatch, "solution size differs from instance size");
  }
  std::vector<Violation> out;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int v = sol.values.at(r, c);
      if (v < 1 || v > n) out.push_back({"Range", to_string(Cell{r, c})});
    }
  }
  for (bool rows : {true, false}) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
      bool ok = true;
      for (int k = 0; k < n; ++k) {
        const int v = rows ? sol.values.at(i, k) : sol.values.at(k, i);
        if (v >= 1 && v <= n && seen[v]++) ok = false;
      }
      if (!ok) out.push_back({rows ? "RowUnicity" : "ColumnUnicity", (rows ? "row " : "column ") + std::to_string(i)});
    }
  }
  for (const auto& cage : inst.cages) {
    std::vector<int> vals;
    for (const Cell c : cage.cells) vals.push_back(sol.values[c]);
    if (!cage_satisfied(cage.op, cage.target, vals)) out.push_back({"Cage", "cage " + cage.id});
  }
  return out;
}

namespace {

class Solver {
 public:
  Solver(const Instance& inst, std::size_t limit, std::size_t budget)
      : inst_(inst), n_(inst.n), limit_(limit), budget_(budget), values_(inst.n, inst.n, 0),
        row_used_(static_cast<std::size_t>(n_ * (n_ + 1)), false),
        col_used_(static_cast<std::size_t>(n_ * (n_ + 1)), false) {}

  std::vector<Solution> run() {
    search(0);
    return found_;
  }

 private:
  bool cage_ok(const Cage& cage) const {
    std::vector<int> vals;
    long long sum = 0;
    long long prod = 1;
    bool complete = true;
    for (const Cell c : cage.cells) {
      const int v = values_[c];
      if (v == 0) {
        complete = false;
        continue;
      }
      vals.push_back(v);
      sum += v;
      prod *= v;
    }
    if (complete) return cage_satisfied(cage.op, cage.target, vals);
    if (cage.op == Op::Add) return sum < cage.target;
    if (cage.op == Op::Mul) return cage.target % prod == 0;
    return true;
  }

  void search(int idx) {
    if (found_.size() >= limit_) return;
    if (++nodes_ > budget_) throw Error(Errc::BudgetExceeded, "KenKen search exceeded its node budget");
    if (idx == n_ * n_) {
      found_.push_back(Solution{values_});
      return;
    }
    const int r = idx / n_;
    const int c = idx % n_;
    for (int v = 1; v <= n_; ++v) {
      auto ru = row_used_[static_cast<std::size_t>(r * (n_ + 1) + v)];
      auto cu = col_used_[static_cast<std::size_t>(c * (n_ + 1) + v)];
      if (ru || cu) continue;
      ru = cu = true;
      values_.at(r, c) = v;
      if (cage_ok(inst_.cages[inst_.cage_of.at(r, c)])) search(idx + 1);
      values_.at(r, c) = 0;
      ru = cu = false;
    }
  }

  const Instance& inst_;
  int n_;
  std::size_t limit_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  Grid<int> values_;
  std::vector<bool> row_used_;
  std::vector<bool> col_used_;
  std::vector<Solution> found_;
};

}  // namespace

std::vector<Solution> solve(const Instance& inst, std::size_t limit, std::size_t budget) {
  return Solver(inst, limit, budget).run();
}

}  // namespace pzk::kenken
