#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pzk/grid.hpp"

namespace pzk::takuzu {

constexpr int kBlank = -1;

struct Instance {
  int n = 0;
  Grid<int> givens;  // 0, 1 or kBlank

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Solution {
  Grid<int> values;  // 0 or 1 everywhere

  int n() const { return values.height(); }
  friend bool operator==(const Solution&, const Solution&) = default;
};

Instance parse_instance(std::string_view text);
std::string serialize(const Instance& inst);

Solution parse_solution(std::string_view text);
std::string serialize(const Solution& sol);

/// Violations of the three game rules (Balance, Unique, NoThreeEqual) and of
/// the printed givens (Given).
std::vector<Violation> validate(const Instance& inst, const Solution& sol);

/// Rule check for a full grid, ignoring givens.
std::vector<Violation> check_rules(const Grid<int>& values);

std::vector<Solution> solve(const Instance& inst, std::size_t limit = 2,
                            std::size_t budget = 20'000'000);

}  // namespace pzk::takuzu
