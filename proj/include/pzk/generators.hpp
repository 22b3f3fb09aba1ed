#pragma once

// Random solvable instances, each returned with a solution it admits.

#include <utility>

#include "pzk/puzzles/akari.hpp"
#include "pzk/puzzles/kakuro.hpp"
#include "pzk/puzzles/kenken.hpp"
#include "pzk/puzzles/takuzu.hpp"
#include "pzk/random.hpp"

namespace pzk::generate {

std::pair<akari::Instance, akari::Solution> akari(int height, int width, Stream& r);
/// n even, 2 <= n <= 16.
std::pair<takuzu::Instance, takuzu::Solution> takuzu(int n, Stream& r);
/// Row 0 and column 0 hold the clues; at least 2x2.
std::pair<kakuro::Instance, kakuro::Solution> kakuro(int height, int width, Stream& r);
std::pair<kenken::Instance, kenken::Solution> kenken(int n, Stream& r);

/// Uniform-ish Latin square: a cyclic square with rows, columns and symbols shuffled.
Grid<int> latin_square(int n, Stream& r);

}  // namespace pzk::generate
