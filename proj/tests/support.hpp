#pragma once

// Shared helpers for the test binaries: fixture loading and brute-force
// oracles that do not go through the library's own solvers.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pzk/games.hpp"
#include "pzk/harness.hpp"

namespace pzk::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(Game g, bool solution = false) {
  return std::string(PZK_TEST_DATA) + "/fig." + to_string(g) + (solution ? ".sol" : "");
}

struct Fixture {
  AnyInstance inst;
  AnySolution sol;
};

inline Fixture fixture(Game g) {
  Fixture f{parse_instance(g, read_file(data_path(g))), {}};
  f.sol = parse_solution(f.inst, read_file(data_path(g, true)));
  return f;
}

// ---------------------------------------------------------------------------
// Rule checkers written from the game rules alone.

inline bool takuzu_ok(const std::vector<std::vector<int>>& g) {
  const int n = static_cast<int>(g.size());
  auto line = [&](int i, bool row) {
    std::vector<int> v(n);
    for (int k = 0; k < n; ++k) v[k] = row ? g[i][k] : g[k][i];
    return v;
  };
  for (int d = 0; d < 2; ++d) {
    std::set<std::vector<int>> seen;
    for (int i = 0; i < n; ++i) {
      const auto v = line(i, d == 0);
      int ones = 0;
      for (int x : v) ones += x;
      if (2 * ones != n) return false;
      for (int k = 0; k + 2 < n; ++k) {
        if (v[k] == v[k + 1] && v[k + 1] == v[k + 2]) return false;
      }
      if (!seen.insert(v).second) return false;
    }
  }
  return true;
}

/// Every completion of the givens that obeys the rules.
inline std::vector<std::vector<std::vector<int>>> takuzu_brute(const takuzu::Instance& inst) {
  std::vector<Cell> blanks;
  for (int r = 0; r < inst.n; ++r) {
    for (int c = 0; c < inst.n; ++c) {
      if (inst.givens.at(r, c) == takuzu::kBlank) blanks.push_back({r, c});
    }
  }
  std::vector<std::vector<std::vector<int>>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blanks.size()); ++mask) {
    std::vector<std::vector<int>> g(inst.n, std::vector<int>(inst.n));
    for (int r = 0; r < inst.n; ++r) {
      for (int c = 0; c < inst.n; ++c) g[r][c] = inst.givens.at(r, c);
    }
    for (std::size_t b = 0; b < blanks.size(); ++b) g[blanks[b].row][blanks[b].col] = (mask >> b) & 1;
    if (takuzu_ok(g)) out.push_back(g);
  }
  return out;
}

/// Every digit assignment to the white cells meeting all runs.
inline std::vector<std::vector<int>> kakuro_brute(const kakuro::Instance& inst) {
  const auto whites = inst.whites();
  std::vector<std::vector<int>> out;
  std::vector<int> vals(whites.size(), 1);
  auto ok = [&] {
    for (const auto& run : inst.runs) {
      std::set<int> seen;
      int sum = 0;
      for (const Cell c : run.cells) {
        const auto i = static_cast<std::size_t>(std::find(whites.begin(), whites.end(), c) - whites.begin());
        sum += vals[i];
        if (!seen.insert(vals[i]).second) return false;
      }
      if (sum != run.clue) return false;
    }
    return true;
  };
  while (true) {
    if (ok()) out.push_back(vals);
    std::size_t k = 0;
    while (k < vals.size() && vals[k] == 9) vals[k++] = 1;
    if (k == vals.size()) break;
    ++vals[k];
  }
  return out;
}

inline bool kenken_ok(const kenken::Instance& inst, const std::vector<std::vector<int>>& g) {
  const int n = inst.n;
  for (int i = 0; i < n; ++i) {
    std::set<int> row, col;
    for (int k = 0; k < n; ++k) {
      if (g[i][k] < 1 || g[i][k] > n) return false;
      row.insert(g[i][k]);
      col.insert(g[k][i]);
    }
    if (static_cast<int>(row.size()) != n || static_cast<int>(col.size()) != n) return false;
  }
  for (const auto& cage : inst.cages) {
    std::vector<long long> v;
    for (const Cell c : cage.cells) v.push_back(g[c.row][c.col]);
    std::sort(v.begin(), v.end());
    long long acc = 0;
    switch (cage.op) {
      case kenken::Op::Add:
        for (auto x : v) acc += x;
        break;
      case kenken::Op::Mul:
        acc = 1;
        for (auto x : v) acc *= x;
        break;
      case kenken::Op::Sub:
        acc = v.back();
        for (std::size_t i = 0; i + 1 < v.size(); ++i) acc -= v[i];
        break;
      case kenken::Op::Div: {
        long long rest = 1;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) rest *= v[i];
        if (v.back() % rest != 0) return false;
        acc = v.back() / rest;
        break;
      }
    }
    if (acc != cage.target) return false;
  }
  return true;
}

/// White cells seen from (r, c) along its row and column, walls blocking.
inline std::vector<Cell> akari_vis(const akari::Instance& inst, Cell u) {
  const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
  std::vector<Cell> out;
  for (int d = 0; d < 4; ++d) {
    for (Cell v{u.row + dr[d], u.col + dc[d]}; inst.cells.contains(v) && inst.cells[v].white();
         v = {v.row + dr[d], v.col + dc[d]}) {
      out.push_back(v);
    }
  }
  return out;
}

inline int akari_adj_numbered(const akari::Instance& inst, Cell u) {
  const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
  int k = 0;
  for (int d = 0; d < 4; ++d) {
    const Cell v{u.row + dr[d], u.col + dc[d]};
    k += inst.cells.contains(v) && inst.cells[v].numbered();
  }
  return k;
}

/// Akari rules straight from the grid.
inline bool akari_ok(const akari::Instance& inst, const std::set<Cell>& lights) {
  const int H = inst.height(), W = inst.width();
  auto white = [&](int r, int c) { return r >= 0 && c >= 0 && r < H && c < W && inst.cells.at(r, c).white(); };
  const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      const auto& sq = inst.cells.at(r, c);
      if (sq.numbered()) {
        int k = 0;
        for (int d = 0; d < 4; ++d) k += lights.count({r + dr[d], c + dc[d]}) && white(r + dr[d], c + dc[d]);
        if (k != sq.number) return false;
      }
      if (!sq.white()) continue;
      bool lit = lights.count({r, c}) > 0;
      for (int d = 0; d < 4; ++d) {
        for (int rr = r + dr[d], cc = c + dc[d]; white(rr, cc); rr += dr[d], cc += dc[d]) {
          if (lights.count({rr, cc})) {
            if (lights.count({r, c})) return false;  // two lights see each other
            lit = true;
          }
        }
      }
      if (!lit) return false;
    }
  }
  return true;
}

}  // namespace pzk::test
