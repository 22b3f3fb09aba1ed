#include "pzk/puzzles/akari.hpp"

#include <algorithm>

#include "pzk/error.hpp"
#include "text.hpp"

namespace pzk::akari {

namespace {

constexpr Cell kSteps[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

Cell step(Cell c, Cell d) { return {c.row + d.row, c.col + d.col}; }

}  // namespace

std::size_t Structure::packet_size(Cell c) const {
  const int i = index(c);
  return 3 + static_cast<std::size_t>(adjacent_numbered[i]) + visible[i].size();
}

Instance parse_instance(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error(Errc::StructureError, "empty Akari grid");
  const int width = static_cast<int>(lines.front().text.size());
  Instance inst;
  inst.cells = Grid<Square>(static_cast<int>(lines.size()), width);
  for (int r = 0; r < static_cast<int>(lines.size()); ++r) {
    const auto& line = lines[r];
    if (static_cast<int>(line.text.size()) != width) {
      throw Error(Errc::StructureError, "Akari grid is not rectangular (line " +
                                            std::to_string(line.number) + ")");
    }
    for (int c = 0; c < width; ++c) {
      const char ch = line.text[c];
      Square sq;
      if (ch == '.') {
      } else if (ch == '#') {
        sq.wall = true;
      } else if (ch >= '0' && ch <= '4') {
        sq.wall = true;
        sq.number = ch - '0';
      } else {
        throw ParseError(line.number, static_cast<std::size_t>(c) + 1,
                         std::string("unexpected character '") + ch + "'");
      }
      inst.cells.at(r, c) = sq;
    }
  }
  return inst;
}

std::string serialize(const Instance& inst) {
  std::string out;
  for (int r = 0; r < inst.height(); ++r) {
    for (int c = 0; c < inst.width(); ++c) {
      const auto& sq = inst.cells.at(r, c);
      out += sq.white() ? '.' : (sq.numbered() ? static_cast<char>('0' + sq.number) : '#');
    }
    out += '\n';
  }
  return out;
}

Solution parse_solution(const Instance& inst, std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (static_cast<int>(lines.size()) != inst.height()) {
    throw Error(Errc::ShapeMismatch, "solution has " + std::to_string(lines.size()) +
                                         " rows, instance has " + std::to_string(inst.height()));
  }
  Solution sol;
  for (int r = 0; r < inst.height(); ++r) {
    const auto& line = lines[r];
    if (static_cast<int>(line.text.size()) != inst.width()) {
      throw Error(Errc::ShapeMismatch, "solution row " + std::to_string(r) + " has wrong width");
    }
    for (int c = 0; c < inst.width(); ++c) {
      const char ch = line.text[c];
      const auto& sq = inst.cells.at(r, c);
      if (ch == '*') {
        if (!sq.white()) throw Error(Errc::ShapeMismatch, "light on a wall at " + to_string(Cell{r, c}));
        sol.lights.insert({r, c});
      } else if (ch == '.' || ch == '#' || (ch >= '0' && ch <= '4')) {
        const bool wall = ch != '.';
        if (wall != sq.wall) throw Error(Errc::ShapeMismatch, "solution overlay disagrees with instance at " + to_string(Cell{r, c}));
      } else {
        throw ParseError(line.number, static_cast<std::size_t>(c) + 1,
                         std::string("unexpected character '") + ch + "'");
      }
    }
  }
  return sol;
}

std::string serialize(const Instance& inst, const Solution& sol) {
  std::string out = serialize(inst);
  for (const auto& c : sol.lights) {
    out[static_cast<std::size_t>(c.row * (inst.width() + 1) + c.col)] = '*';
  }
  return out;
}

Structure derive_structure(const Instance& inst) {
  Structure s;
  const auto& g = inst.cells;
  s.white_index = Grid<int>(g.height(), g.width(), -1);
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (g.at(r, c).white()) {
        s.white_index.at(r, c) = static_cast<int>(s.whites.size());
        s.whites.push_back({r, c});
      }
    }
  }
  const std::size_t w = s.whites.size();
  s.visible.resize(w);
  s.adjacent_numbered.assign(w, 0);
  s.row_segment.assign(w, -1);
  s.column_segment.assign(w, -1);

  for (std::size_t i = 0; i < w; ++i) {
    const Cell u = s.whites[i];
    for (const Cell d : kSteps) {
      for (Cell v = step(u, d); g.contains(v) && g[v].white(); v = step(v, d)) {
        s.visible[i].push_back(v);
      }
      const Cell n = step(u, d);
      if (g.contains(n) && g[n].numbered()) ++s.adjacent_numbered[i];
    }
    std::sort(s.visible[i].begin(), s.visible[i].end());
  }

  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (!g.at(r, c).white() || (c > 0 && g.at(r, c - 1).white())) continue;
      Segment seg{{}, true};
      for (int k = c; k < g.width() && g.at(r, k).white(); ++k) {
        s.row_segment[s.white_index.at(r, k)] = static_cast<int>(s.segments.size());
        seg.cells.push_back({r, k});
      }
      s.segments.push_back(std::move(seg));
    }
  }
  for (int c = 0; c < g.width(); ++c) {
    for (int r = 0; r < g.height(); ++r) {
      if (!g.at(r, c).white() || (r > 0 && g.at(r - 1, c).white())) continue;
      Segment seg{{}, false};
      for (int k = r; k < g.height() && g.at(k, c).white(); ++k) {
        s.column_segment[s.white_index.at(k, c)] = static_cast<int>(s.segments.size());
        seg.cells.push_back({k, c});
      }
      s.segments.push_back(std::move(seg));
    }
  }

  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (!g.at(r, c).numbered()) continue;
      s.numbered_walls.push_back({r, c});
      std::vector<Cell> around;
      for (const Cell d : kSteps) {
        const Cell n = step({r, c}, d);
        if (g.contains(n) && g[n].white()) around.push_back(n);
      }
      std::sort(around.begin(), around.end());
      s.wall_neighbors.push_back(std::move(around));
    }
  }
  return s;
}

std::vector<Violation> validate(const Instance& inst, const Solution& sol) {
  for (const auto& c : sol.lights) {
    if (!inst.cells.contains(c) || !inst.cells[c].white()) {
      throw Error(Errc::ShapeMismatch, "light outside the white cells at " + to_string(c));
    }
  }
  const Structure s = derive_structure(inst);
  std::vector<Violation> out;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    const auto lit = std::count_if(seg.cells.begin(), seg.cells.end(),
                                   [&](Cell c) { return sol.lights.count(c) > 0; });
    if (lit > 1) {
      out.push_back({"NoMutualLight", std::string(seg.horizontal ? "row segment at " : "column segment at ") +
                                          to_string(seg.cells.front())});
    }
  }
  for (std::size_t i = 0; i < s.numbered_walls.size(); ++i) {
    const Cell wall = s.numbered_walls[i];
    const auto& around = s.wall_neighbors[i];
    const auto lit = std::count_if(around.begin(), around.end(), [&](Cell c) { return sol.lights.count(c) > 0; });
    if (lit != inst.cells[wall].number) out.push_back({"WallNumber", to_string(wall)});
  }
  for (std::size_t i = 0; i < s.whites.size(); ++i) {
    const Cell u = s.whites[i];
    bool lit = sol.lights.count(u) > 0;
    for (const Cell v : s.visible[i]) lit = lit || sol.lights.count(v) > 0;
    if (!lit) out.push_back({"Unlit", to_string(u)});
  }
  return out;
}

namespace {

class Solver {
 public:
  Solver(const Instance& inst, std::size_t limit, std::size_t budget)
      : inst_(inst), s_(derive_structure(inst)), limit_(limit), budget_(budget) {
    const std::size_t w = s_.whites.size();
    light_.assign(w, -1);
    // closure_done[k]: white cells whose {u} ∪ vis(u) is fully decided after deciding cell k.
    closure_done_.resize(w);
    for (std::size_t i = 0; i < w; ++i) {
      int last = static_cast<int>(i);
      for (const Cell v : s_.visible[i]) last = std::max(last, s_.index(v));
      closure_done_[last].push_back(static_cast<int>(i));
    }
    wall_of_.resize(w);
    for (std::size_t k = 0; k < s_.numbered_walls.size(); ++k) {
      for (const Cell n : s_.wall_neighbors[k]) wall_of_[s_.index(n)].push_back(static_cast<int>(k));
    }
  }

  std::vector<Solution> run() {
    search(0);
    return found_;
  }

 private:
  bool lit_by_other(int i) const {
    for (const Cell v : s_.visible[i]) {
      if (light_[s_.index(v)] == 1) return true;
    }
    return false;
  }

  bool walls_ok(int i) const {
    for (int k : wall_of_[i]) {
      int on = 0;
      int open = 0;
      for (const Cell n : s_.wall_neighbors[k]) {
        const int v = light_[s_.index(n)];
        if (v == 1) ++on;
        if (v == -1) ++open;
      }
      const int need = inst_.cells[s_.numbered_walls[k]].number;
      if (on > need || on + open < need) return false;
    }
    return true;
  }

  bool closures_ok(int i) const {
    for (int u : closure_done_[i]) {
      if (light_[u] == 1) continue;
      if (!lit_by_other(u)) return false;
    }
    return true;
  }

  void search(int i) {
    if (found_.size() >= limit_) return;
    if (++nodes_ > budget_) throw Error(Errc::BudgetExceeded, "Akari search exceeded its node budget");
    if (i == static_cast<int>(s_.whites.size())) {
      Solution sol;
      for (std::size_t k = 0; k < light_.size(); ++k) {
        if (light_[k] == 1) sol.lights.insert(s_.whites[k]);
      }
      found_.push_back(std::move(sol));
      return;
    }
    for (int choice : {0, 1}) {
      if (choice == 1 && lit_by_other(i)) continue;
      light_[i] = choice;
      if (walls_ok(i) && closures_ok(i)) search(i + 1);
      light_[i] = -1;
    }
  }

  const Instance& inst_;
  Structure s_;
  std::size_t limit_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<int> light_;
  std::vector<std::vector<int>> closure_done_;
  std::vector<std::vector<int>> wall_of_;
  std::vector<Solution> found_;
};

}  // namespace

std::vector<Solution> solve(const Instance& inst, std::size_t limit, std::size_t budget) {
  return Solver(inst, limit, budget).run();
}

}  // namespace pzk::akari
