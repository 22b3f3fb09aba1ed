#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pzk/grid.hpp"

namespace pzk::akari {

struct Square {
  bool wall = false;
  int number = -1;  // 0..4 on numbered walls, -1 otherwise

  bool white() const { return !wall; }
  bool numbered() const { return wall && number >= 0; }
  friend bool operator==(const Square&, const Square&) = default;
};

struct Instance {
  Grid<Square> cells;

  int height() const { return cells.height(); }
  int width() const { return cells.width(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Solution {
  std::set<Cell> lights;
  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Maximal run of white cells in one row or column.
struct Segment {
  std::vector<Cell> cells;
  bool horizontal = true;
};

/// Derived, public structure of an Akari instance.
struct Structure {
  std::vector<Cell> whites;                   // row-major
  Grid<int> white_index;                      // -1 on walls
  std::vector<std::vector<Cell>> visible;     // line of sight per white cell
  std::vector<int> adjacent_numbered;         // numbered walls touching each white cell
  std::vector<Segment> segments;              // row segments, then column segments
  std::vector<int> row_segment;               // per white cell
  std::vector<int> column_segment;            // per white cell
  std::vector<Cell> numbered_walls;           // row-major
  std::vector<std::vector<Cell>> wall_neighbors;  // white 4-neighbours of each numbered wall

  int index(Cell c) const { return white_index[c]; }
  /// Cards needed on one white cell: 3 + adjacent numbered walls + |line of sight|.
  std::size_t packet_size(Cell c) const;
};

Instance parse_instance(std::string_view text);
std::string serialize(const Instance& inst);

/// Instance overlay with `*` marking lights.
Solution parse_solution(const Instance& inst, std::string_view text);
std::string serialize(const Instance& inst, const Solution& sol);

Structure derive_structure(const Instance& inst);

std::vector<Violation> validate(const Instance& inst, const Solution& sol);

/// Every solution up to `limit`, in deterministic order. Throws
/// BudgetExceeded once more than `budget` search nodes were expanded.
std::vector<Solution> solve(const Instance& inst, std::size_t limit = 2,
                            std::size_t budget = 20'000'000);

}  // namespace pzk::akari
