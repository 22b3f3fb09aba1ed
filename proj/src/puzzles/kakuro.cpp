#include "pzk/puzzles/kakuro.hpp"

#include <algorithm>

#include "pzk/error.hpp"
#include "text.hpp"

namespace pzk::kakuro {

std::vector<Cell> Instance::whites() const {
  std::vector<Cell> out;
  for (int r = 0; r < cells.height(); ++r) {
    for (int c = 0; c < cells.width(); ++c) {
      if (cells.at(r, c).white()) out.push_back({r, c});
    }
  }
  return out;
}

namespace {

std::optional<int> parse_sum(const detail::Line& line, std::size_t column, const std::string& text) {
  if (text == "-") return std::nullopt;
  const long long v = detail::parse_int(line, column, text);
  return static_cast<int>(v);
}

std::string clue_token(const Square& sq) {
  auto part = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  return part(sq.down) + "\\" + part(sq.right);
}

}  // namespace

void derive_runs(Instance& inst) {
  const auto& g = inst.cells;
  inst.runs.clear();
  inst.horizontal_run = Grid<int>(g.height(), g.width(), -1);
  inst.vertical_run = Grid<int>(g.height(), g.width(), -1);
  for (bool horizontal : {true, false}) {
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        const auto& sq = g.at(r, c);
        if (sq.kind != Square::Kind::Clue) continue;
        const auto& sum = horizontal ? sq.right : sq.down;
        if (!sum) continue;
        Run run;
        run.horizontal = horizontal;
        run.clue = *sum;
        run.clue_cell = {r, c};
        for (Cell v = horizontal ? Cell{r, c + 1} : Cell{r + 1, c}; g.contains(v) && g[v].white();
             v = horizontal ? Cell{v.row, v.col + 1} : Cell{v.row + 1, v.col}) {
          run.cells.push_back(v);
        }
        const std::string where = "clue at " + to_string(run.clue_cell);
        if (run.cells.empty()) throw Error(Errc::StructureError, where + " governs no white cells");
        if (run.cells.size() > 9) throw Error(Errc::StructureError, where + " governs more than 9 cells");
        if (run.clue < 1 || run.clue > 45) throw Error(Errc::StructureError, where + " has a sum outside 1..45");
        auto& owner = horizontal ? inst.horizontal_run : inst.vertical_run;
        for (const Cell v : run.cells) owner[v] = static_cast<int>(inst.runs.size());
        inst.runs.push_back(std::move(run));
      }
    }
  }
  for (const Cell w : inst.whites()) {
    if (inst.horizontal_run[w] < 0 || inst.vertical_run[w] < 0) {
      throw Error(Errc::StructureError, "white cell " + to_string(w) + " is not covered by a clue in both directions");
    }
  }
}

Instance parse_instance(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error(Errc::StructureError, "empty Kakuro grid");
  std::vector<std::vector<detail::Token>> rows;
  for (const auto& line : lines) rows.push_back(detail::tokens(line.text));
  const int width = static_cast<int>(rows.front().size());
  Instance inst;
  inst.cells = Grid<Square>(static_cast<int>(rows.size()), width);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    if (static_cast<int>(rows[r].size()) != width) {
      throw Error(Errc::StructureError, "Kakuro grid is not rectangular (line " +
                                            std::to_string(lines[r].number) + ")");
    }
    for (int c = 0; c < width; ++c) {
      const auto& tok = rows[r][c];
      Square sq;
      if (tok.text == ".") {
        sq.kind = Square::Kind::White;
      } else if (tok.text == "X") {
        sq.kind = Square::Kind::Filler;
      } else {
        const auto slash = tok.text.find('\\');
        if (slash == std::string::npos) {
          throw ParseError(lines[r].number, tok.column, "expected '.', 'X' or a D\\R clue, got '" + tok.text + "'");
        }
        sq.kind = Square::Kind::Clue;
        sq.down = parse_sum(lines[r], tok.column, tok.text.substr(0, slash));
        sq.right = parse_sum(lines[r], tok.column + slash + 1, tok.text.substr(slash + 1));
        if (!sq.down && !sq.right) sq.kind = Square::Kind::Filler;
      }
      inst.cells.at(r, c) = sq;
    }
  }
  derive_runs(inst);
  return inst;
}

std::string serialize(const Instance& inst) {
  std::string out;
  for (int r = 0; r < inst.cells.height(); ++r) {
    for (int c = 0; c < inst.cells.width(); ++c) {
      const auto& sq = inst.cells.at(r, c);
      if (c > 0) out += ' ';
      switch (sq.kind) {
        case Square::Kind::White: out += '.'; break;
        case Square::Kind::Filler: out += 'X'; break;
        case Square::Kind::Clue: out += clue_token(sq); break;
      }
    }
    out += '\n';
  }
  return out;
}

Solution parse_solution(const Instance& inst, std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (static_cast<int>(lines.size()) != inst.cells.height()) {
    throw Error(Errc::ShapeMismatch, "solution row count differs from instance");
  }
  Solution sol{Grid<int>(inst.cells.height(), inst.cells.width(), 0)};
  for (int r = 0; r < inst.cells.height(); ++r) {
    const auto toks = detail::tokens(lines[r].text);
    if (static_cast<int>(toks.size()) != inst.cells.width()) {
      throw Error(Errc::ShapeMismatch, "solution row " + std::to_string(r) + " has wrong width");
    }
    for (int c = 0; c < inst.cells.width(); ++c) {
      const auto& tok = toks[c];
      if (inst.cells.at(r, c).white()) {
        if (tok.text.size() != 1 || tok.text[0] < '1' || tok.text[0] > '9') {
          throw ParseError(lines[r].number, tok.column, "expected a digit 1..9, got '" + tok.text + "'");
        }
        sol.values.at(r, c) = tok.text[0] - '0';
      } else if (tok.text.size() == 1 && tok.text[0] >= '0' && tok.text[0] <= '9') {
        throw Error(Errc::ShapeMismatch, "digit on a non-white cell at " + to_string(Cell{r, c}));
      }
    }
  }
  return sol;
}

std::string serialize(const Instance& inst, const Solution& sol) {
  std::string out;
  for (int r = 0; r < inst.cells.height(); ++r) {
    for (int c = 0; c < inst.cells.width(); ++c) {
      const auto& sq = inst.cells.at(r, c);
      if (c > 0) out += ' ';
      switch (sq.kind) {
        case Square::Kind::White: out += std::to_string(sol.values.at(r, c)); break;
        case Square::Kind::Filler: out += 'X'; break;
        case Square::Kind::Clue: out += clue_token(sq); break;
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<Violation> validate(const Instance& inst, const Solution& sol) {
  if (sol.values.height() != inst.cells.height() || sol.values.width() != inst.cells.width()) {
    throw Error(Errc::ShapeMismatch, "solution shape differs from instance");
  }
  std::vector<Violation> out;
  for (const Cell w : inst.whites()) {
    const int v = sol.values[w];
    if (v < 1 || v > 9) out.push_back({"Range", to_string(w)});
  }
  for (const auto& run : inst.runs) {
    const std::string where = std::string(run.horizontal ? "row run at " : "column run at ") + to_string(run.clue_cell);
    int seen = 0;
    int sum = 0;
    bool unique = true;
    for (const Cell c : run.cells) {
      const int v = sol.values[c];
      sum += v;
      if (v >= 1 && v <= 9) {
        if (seen & (1 << v)) unique = false;
        seen |= 1 << v;
      }
    }
    if (!unique) out.push_back({"Unicity", where});
    if (sum != run.clue) out.push_back({"Sum", where});
  }
  return out;
}

namespace {

class Solver {
 public:
  Solver(const Instance& inst, std::size_t limit, std::size_t budget)
      : inst_(inst), whites_(inst.whites()), limit_(limit), budget_(budget),
        values_(inst.cells.height(), inst.cells.width(), 0) {}

  std::vector<Solution> run() {
    search(0);
    return found_;
  }

 private:
  bool run_ok(int run_index) const {
    const auto& run = inst_.runs[run_index];
    int seen = 0;
    int sum = 0;
    int open = 0;
    for (const Cell c : run.cells) {
      const int v = values_[c];
      if (v == 0) {
        ++open;
        continue;
      }
      if (seen & (1 << v)) return false;
      seen |= 1 << v;
      sum += v;
    }
    if (open == 0) return sum == run.clue;
    // Remaining cells need at least 1+2+... and at most 9+8+... more.
    int lo = 0;
    int hi = 0;
    for (int k = 0; k < open; ++k) {
      lo += k + 1;
      hi += 9 - k;
    }
    return sum + lo <= run.clue && sum + hi >= run.clue;
  }

  void search(std::size_t i) {
    if (found_.size() >= limit_) return;
    if (++nodes_ > budget_) throw Error(Errc::BudgetExceeded, "Kakuro search exceeded its node budget");
    if (i == whites_.size()) {
      found_.push_back(Solution{values_});
      return;
    }
    const Cell c = whites_[i];
    for (int v = 1; v <= 9; ++v) {
      values_[c] = v;
      if (run_ok(inst_.horizontal_run[c]) && run_ok(inst_.vertical_run[c])) search(i + 1);
    }
    values_[c] = 0;
  }

  const Instance& inst_;
  std::vector<Cell> whites_;
  std::size_t limit_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  Grid<int> values_;
  std::vector<Solution> found_;
};

}  // namespace

std::vector<Solution> solve(const Instance& inst, std::size_t limit, std::size_t budget) {
  return Solver(inst, limit, budget).run();
}

}  // namespace pzk::kakuro
