#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pzk/grid.hpp"

namespace pzk::kenken {

enum class Op : std::uint8_t { Add, Sub, Mul, Div };

char symbol(Op op);

struct Cage {
  std::string id;
  std::vector<Cell> cells;  // row-major
  Op op = Op::Add;
  long long target = 1;

  friend bool operator==(const Cage&, const Cage&) = default;
};

struct Instance {
  int n = 0;
  std::vector<Cage> cages;  // in definition order
  Grid<int> cage_of;        // cage index per cell

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Solution {
  Grid<int> values;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// True iff `values` (in any order) meet the cage's operation and target.
bool cage_satisfied(Op op, long long target, const std::vector<int>& values);

/// Line 1: n. Next n lines: cage ids per cell (one character each, or
/// whitespace-separated tokens). Then one `ID OP TARGET` line per cage.
Instance parse_instance(std::string_view text);
std::string serialize(const Instance& inst);

/// Checks the partition and per-cage constraints, fills `cage_of`.
void finalize(Instance& inst);

/// n lines of n whitespace-separated integers.
Solution parse_solution(std::string_view text);
std::string serialize(const Solution& sol);

std::vector<Violation> validate(const Instance& inst, const Solution& sol);

std::vector<Solution> solve(const Instance& inst, std::size_t limit = 2,
                            std::size_t budget = 20'000'000);

}  // namespace pzk::kenken
