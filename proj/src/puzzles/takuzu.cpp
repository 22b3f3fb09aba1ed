#include "pzk/puzzles/takuzu.hpp"

#include "pzk/error.hpp"
#include "text.hpp"

namespace pzk::takuzu {

namespace {

Grid<int> parse_square(std::string_view text, bool allow_blank) {
  const auto lines = detail::content_lines(text);
  const int n = static_cast<int>(lines.size());
  if (n == 0) throw Error(Errc::StructureError, "empty Takuzu grid");
  Grid<int> g(n, n, kBlank);
  for (int r = 0; r < n; ++r) {
    const auto& line = lines[r];
    if (static_cast<int>(line.text.size()) != n) {
      throw Error(Errc::StructureError, "Takuzu grid must be square (line " +
                                            std::to_string(line.number) + ")");
    }
    for (int c = 0; c < n; ++c) {
      const char ch = line.text[c];
      if (ch == '0' || ch == '1') {
        g.at(r, c) = ch - '0';
      } else if (ch == '.' && allow_blank) {
        g.at(r, c) = kBlank;
      } else {
        throw ParseError(line.number, static_cast<std::size_t>(c) + 1,
                         std::string("unexpected character '") + ch + "'");
      }
    }
  }
  if (n % 2 != 0) throw Error(Errc::StructureError, "Takuzu size must be even, got " + std::to_string(n));
  return g;
}

std::string render(const Grid<int>& g) {
  std::string out;
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      const int v = g.at(r, c);
      out += v == kBlank ? '.' : static_cast<char>('0' + v);
    }
    out += '\n';
  }
  return out;
}

int value(const Grid<int>& g, bool rows, int line, int k) { return rows ? g.at(line, k) : g.at(k, line); }

}  // namespace

Instance parse_instance(std::string_view text) {
  Instance inst;
  inst.givens = parse_square(text, true);
  inst.n = inst.givens.height();
  return inst;
}

std::string serialize(const Instance& inst) { return render(inst.givens); }

Solution parse_solution(std::string_view text) { return Solution{parse_square(text, false)}; }

std::string serialize(const Solution& sol) { return render(sol.values); }

std::vector<Violation> check_rules(const Grid<int>& g) {
  std::vector<Violation> out;
  const int n = g.height();
  for (bool rows : {true, false}) {
    const char* kind = rows ? "row " : "column ";
    for (int i = 0; i < n; ++i) {
      int ones = 0;
      for (int k = 0; k < n; ++k) ones += value(g, rows, i, k);
      if (2 * ones != n) out.push_back({"Balance", kind + std::to_string(i)});
      for (int k = 0; k + 2 < n; ++k) {
        const int a = value(g, rows, i, k);
        if (a == value(g, rows, i, k + 1) && a == value(g, rows, i, k + 2)) {
          out.push_back({"NoThreeEqual", kind + std::to_string(i) + " at " + std::to_string(k)});
        }
      }
      for (int j = i + 1; j < n; ++j) {
        bool same = true;
        for (int k = 0; k < n && same; ++k) same = value(g, rows, i, k) == value(g, rows, j, k);
        if (same) out.push_back({"Unique", kind + std::to_string(i) + " = " + std::to_string(j)});
      }
    }
  }
  return out;
}

std::vector<Violation> validate(const Instance& inst, const Solution& sol) {
  if (sol.values.height() != inst.n || sol.values.width() != inst.n) {
    throw Error(Errc::ShapeMismatch, "solution size differs from instance size");
  }
  for (int v : sol.values.data()) {
    if (v != 0 && v != 1) throw Error(Errc::ShapeMismatch, "solution contains blanks");
  }
  auto out = check_rules(sol.values);
  for (int r = 0; r < inst.n; ++r) {
    for (int c = 0; c < inst.n; ++c) {
      const int given = inst.givens.at(r, c);
      if (given != kBlank && given != sol.values.at(r, c)) out.push_back({"Given", to_string(Cell{r, c})});
    }
  }
  return out;
}

namespace {

class Solver {
 public:
  Solver(const Instance& inst, std::size_t limit, std::size_t budget)
      : inst_(inst), n_(inst.n), limit_(limit), budget_(budget), g_(inst.givens) {}

  std::vector<Solution> run() {
    if (n_ % 2 != 0) return {};
    search(0);
    return found_;
  }

 private:
  bool line_ok(bool rows, int line, int upto) const {
    int ones = 0;
    int zeros = 0;
    for (int k = 0; k <= upto; ++k) {
      const int v = value(g_, rows, line, k);
      (v == 1 ? ones : zeros) += 1;
      if (k >= 2 && v == value(g_, rows, line, k - 1) && v == value(g_, rows, line, k - 2)) return false;
    }
    return 2 * ones <= n_ && 2 * zeros <= n_;
  }

  bool unique_ok(bool rows, int line) const {
    for (int j = 0; j < line; ++j) {
      bool same = true;
      for (int k = 0; k < n_ && same; ++k) same = value(g_, rows, line, k) == value(g_, rows, j, k);
      if (same) return false;
    }
    return true;
  }

  void search(int idx) {
    if (found_.size() >= limit_) return;
    if (++nodes_ > budget_) throw Error(Errc::BudgetExceeded, "Takuzu search exceeded its node budget");
    if (idx == n_ * n_) {
      found_.push_back(Solution{g_});
      return;
    }
    const int r = idx / n_;
    const int c = idx % n_;
    const int given = inst_.givens.at(r, c);
    for (int v : {0, 1}) {
      if (given != kBlank && given != v) continue;
      g_.at(r, c) = v;
      bool ok = line_ok(true, r, c) && line_ok(false, c, r);
      if (ok && c == n_ - 1) ok = unique_ok(true, r);
      if (ok && r == n_ - 1) ok = unique_ok(false, c);
      if (ok) search(idx + 1);
    }
    g_.at(r, c) = given;
  }

  const Instance& inst_;
  int n_;
  std::size_t limit_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  Grid<int> g_;
  std::vector<Solution> found_;
};

}  // namespace

std::vector<Solution> solve(const Instance& inst, std::size_t limit, std::size_t budget) {
  return Solver(inst, limit, budget).run();
}

}  // namespace pzk::takuzu
