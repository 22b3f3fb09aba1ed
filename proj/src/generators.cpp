#include "pzk/generators.hpp"

#include <algorithm>
#include <numeric>
#include <functional>

#include "pzk/error.hpp"

namespace pzk::generate {

namespace {

constexpr Cell kSteps[] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

Cell step(Cell c, Cell d) { return {c.row + d.row, c.col + d.col}; }

}  // namespace

std::pair<akari::Instance, akari::Solution> akari(int height, int width, Stream& r) {
  if (height < 1 || width < 1) throw Error(Errc::InvalidArgument, "Akari grids need a positive size");
  akari::Instance inst{Grid<akari::Square>(height, width)};
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) inst.cells.at(i, j).wall = r.below(5) == 0;
  }
  // Keep at least one white cell.
  inst.cells.at(static_cast<int>(r.below(static_cast<std::size_t>(height))),
                static_cast<int>(r.below(static_cast<std::size_t>(width)))).wall = false;

  const auto st = akari::derive_structure(inst);
  std::vector<bool> lit(st.whites.size(), false);
  akari::Solution sol;
  // A light on an unlit cell never sees another light.
  auto order = r.permutation(st.whites.size());
  for (std::size_t i : order) {
    if (lit[i]) continue;
    sol.lights.insert(st.whites[i]);
    lit[i] = true;
    for (const Cell v : st.visible[i]) lit[static_cast<std::size_t>(st.index(v))] = true;
  }
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      auto& sq = inst.cells.at(i, j);
      if (!sq.wall || r.coin()) continue;
      int n = 0;
      for (const Cell d : kSteps) {
        const Cell v = step({i, j}, d);
        n += inst.cells.contains(v) && sol.lights.count(v);
      }
      sq.number = n;
    }
  }
  return {std::move(inst), std::move(sol)};
}

std::pair<takuzu::Instance, takuzu::Solution> takuzu(int n, Stream& r) {
  if (n < 2 || n % 2 != 0 || n > 16) throw Error(Errc::InvalidArgument, "Takuzu size must be even and in 2..16");
  Grid<int> g(n, n, -1);
  const int half = n / 2;
  auto fits = [&](int row, int col) {
    const int v = g.at(row, col);
    if (col >= 2 && g.at(row, col - 1) == v && g.at(row, col - 2) == v) return false;
    if (row >= 2 && g.at(row - 1, col) == v && g.at(row - 2, col) == v) return false;
    int in_row = 0, in_col = 0;
    for (int k = 0; k <= col; ++k) in_row += g.at(row, k) == v;
    for (int k = 0; k <= row; ++k) in_col += g.at(k, col) == v;
    if (in_row > half || in_col > half) return false;
    if (col == n - 1) {
      for (int k = 0; k < row; ++k) {
        bool same = true;
        for (int j = 0; j < n && same; ++j) same = g.at(k, j) == g.at(row, j);
        if (same) return false;
      }
    }
    if (row == n - 1) {
      for (int k = 0; k < col; ++k) {
        bool same = true;
        for (int i = 0; i < n && same; ++i) same = g.at(i, k) == g.at(i, col);
        if (same) return false;
      }
    }
    return true;
  };
  std::function<bool(int)> fill = [&](int pos) {
    if (pos == n * n) return true;
    const int row = pos / n, col = pos % n;
    const int first = r.coin() ? 1 : 0;
    for (int v : {first, 1 - first}) {
      g.at(row, col) = v;
      if (fits(row, col) && fill(pos + 1)) return true;
    }
    g.at(row, col) = -1;
    return false;
  };
  if (!fill(0)) throw Error(Errc::InvalidArgument, "no Takuzu grid of this size");
  takuzu::Instance inst{n, Grid<int>(n, n, takuzu::kBlank)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (r.below(5) < 2) inst.givens.at(i, j) = g.at(i, j);
    }
  }
  return {std::move(inst), takuzu::Solution{std::move(g)}};
}

std::pair<kakuro::Instance, kakuro::Solution> kakuro(int height, int width, Stream& r) {
  if (height < 2 || width < 2 || height > 10 || width > 10) {
    throw Error(Errc::InvalidArgument, "Kakuro sizes must be in 2..10");
  }
  using Kind = kakuro::Square::Kind;
  Grid<char> white(height, width, 0);
  for (int i = 1; i < height; ++i) {
    for (int j = 1; j < width; ++j) white.at(i, j) = r.below(4) != 0;
  }
  white.at(1, 1) = true;

  // Digits distinct along each maximal run.
  Grid<int> values(height, width, 0);
  auto run_of = [&](Cell c, Cell d) {
    std::vector<Cell> out;
    Cell s = c;
    while (white.contains(step(s, {-d.row, -d.col})) && white[step(s, {-d.row, -d.col})]) s = step(s, {-d.row, -d.col});
    for (Cell v = s; white.contains(v) && white[v]; v = step(v, d)) out.push_back(v);
    return out;
  };
  std::vector<Cell> cells;
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      if (white.at(i, j)) cells.push_back({i, j});
    }
  }
  std::function<bool(std::size_t)> fill = [&](std::size_t k) {
    if (k == cells.size()) return true;
    const Cell c = cells[k];
    std::vector<int> digits(9);
    std::iota(digits.begin(), digits.end(), 1);
    r.shuffle(digits);
    for (int d : digits) {
      bool clash = false;
      for (const Cell dir : {Cell{0, 1}, Cell{1, 0}}) {
        for (const Cell v : run_of(c, dir)) clash = clash || (v != c && values[v] == d);
      }
      if (clash) continue;
      values[c] = d;
      if (fill(k + 1)) return true;
    }
    values[c] = 0;
    return false;
  };
  if (!fill(0)) throw Error(Errc::InvalidArgument, "could not fill the Kakuro grid");

  kakuro::Instance inst;
  inst.cells = Grid<kakuro::Square>(height, width);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      auto& sq = inst.cells.at(i, j);
      if (white.at(i, j)) {
        sq.kind = Kind::White;
        continue;
      }
      auto sum = [&](Cell d) {
        int s = 0;
        for (Cell v = step({i, j}, d); white.contains(v) && white[v]; v = step(v, d)) s += values[v];
        return s;
      };
      const int right = sum({0, 1});
      const int down = sum({1, 0});
      if (right > 0) sq.right = right;
      if (down > 0) sq.down = down;
      sq.kind = right > 0 || down > 0 ? Kind::Clue : Kind::Filler;
    }
  }
  kakuro::derive_runs(inst);
  return {std::move(inst), kakuro::Solution{std::move(values)}};
}

Grid<int> latin_square(int n, Stream& r) {
  const auto rows = r.permutation(static_cast<std::size_t>(n));
  const auto cols = r.permutation(static_cast<std::size_t>(n));
  const auto symbols = r.permutation(static_cast<std::size_t>(n));
  Grid<int> g(n, n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g.at(i, j) = static_cast<int>(symbols[(rows[static_cast<std::size_t>(i)] + cols[static_cast<std::size_t>(j)]) %
                                            static_cast<std::size_t>(n)]) + 1;
    }
  }
  return g;
}

std::pair<kenken::Instance, kenken::Solution> kenken(int n, Stream& r) {
  if (n < 1 || n > 64) throw Error(Errc::InvalidArgument, "KenKen size must be in 1..64");
  Grid<int> values = latin_square(n, r);

  // Random connected cages of 1 to 4 cells.
  Grid<int> owner(n, n, -1);
  std::vector<std::vector<Cell>> groups;
  for (std::size_t k : r.permutation(static_cast<std::size_t>(n * n))) {
    const Cell start{static_cast<int>(k) / n, static_cast<int>(k) % n};
    if (owner[start] >= 0) continue;
    const std::size_t target = 1 + r.below(4);
    std::vector<Cell> group{start};
    owner[start] = static_cast<int>(groups.size());
    while (group.size() < target) {
      std::vector<Cell> frontier;
      for (const Cell c : group) {
        for (const Cell d : kSteps) {
          const Cell v = step(c, d);
          if (owner.contains(v) && owner[v] < 0) frontier.push_back(v);
        }
      }
      if (frontier.empty()) break;
      const Cell pick = frontier[r.below(frontier.size())];
      owner[pick] = static_cast<int>(groups.size());
      group.push_back(pick);
    }
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }

  kenken::Instance inst;
  inst.n = n;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    kenken::Cage cage;
    cage.id = "c" + std::to_string(k);
    cage.cells = groups[k];
    std::vector<long long> v;
    for (const Cell c : cage.cells) v.push_back(values[c]);
    std::sort(v.rbegin(), v.rend());
    long long sum = 0, prod = 1;
    for (long long x : v) {
      sum += x;
      prod *= x;
    }
    const long long rest_sum = sum - v[0];
    const long long rest_prod = prod / v[0];
    std::vector<std::pair<kenken::Op, long long>> options{{kenken::Op::Add, sum}, {kenken::Op::Mul, prod}};
    if (v.size() >= 2 && v[0] - rest_sum >= 1) options.push_back({kenken::Op::Sub, v[0] - rest_sum});
    if (v.size() >= 2 && v[0] % rest_prod == 0) options.push_back({kenken::Op::Div, v[0] / rest_prod});
    const auto& [op, target] = options[r.below(options.size())];
    cage.op = op;
    cage.target = target;
    inst.cages.push_back(std::move(cage));
  }
  kenken::finalize(inst);
  return {std::move(inst), kenken::Solution{std::move(values)}};
}

}  // namespace pzk::generate
