#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pzk/grid.hpp"

namespace pzk::kakuro {

struct Square {
  enum class Kind : std::uint8_t { White, Filler, Clue };
  Kind kind = Kind::Filler;
  std::optional<int> down;
  std::optional<int> right;

  bool white() const { return kind == Kind::White; }
  friend bool operator==(const Square&, const Square&) = default;
};

/// Maximal line of white cells governed by one clue.
struct Run {
  std::vector<Cell> cells;
  int clue = 0;
  bool horizontal = true;
  Cell clue_cell;

  friend bool operator==(const Run&, const Run&) = default;
};

struct Instance {
  Grid<Square> cells;
  std::vector<Run> runs;      // horizontal runs, then vertical runs
  Grid<int> horizontal_run;   // run index per white cell, -1 elsewhere
  Grid<int> vertical_run;

  std::vector<Cell> whites() const;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Solution {
  Grid<int> values;  // 1..9 on white cells, 0 elsewhere

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Whitespace-separated tokens: `X` filler, `.` white, `D\R` clue.
Instance parse_instance(std::string_view text);
std::string serialize(const Instance& inst);

/// Builds runs and checks that every white cell lies on exactly one run per
/// direction. Called by the parser; exposed for generated instances.
void derive_runs(Instance& inst);

Solution parse_solution(const Instance& inst, std::string_view text);
std::string serialize(const Instance& inst, const Solution& sol);

std::vector<Violation> validate(const Instance& inst, const Solution& sol);

std::vector<Solution> solve(const Instance& inst, std::size_t limit = 2,
                            std::size_t budget = 20'000'000);

}  // namespace pzk::kakuro
