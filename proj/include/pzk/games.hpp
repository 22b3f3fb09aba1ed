#pragma once

// The four puzzles behind one dispatching interface.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pzk/puzzles/akari.hpp"
#include "pzk/puzzles/kakuro.hpp"
#include "pzk/puzzles/kenken.hpp"
#include "pzk/puzzles/takuzu.hpp"

namespace pzk {

enum class Game : std::uint8_t { Akari, Takuzu, Kakuro, Kenken };

const char* to_string(Game game);
/// Throws InvalidArgument on an unknown name.
Game game_from_string(std::string_view name);
inline constexpr Game kGames[] = {Game::Akari, Game::Takuzu, Game::Kakuro, Game::Kenken};

using AnyInstance = std::variant<akari::Instance, takuzu::Instance, kakuro::Instance, kenken::Instance>;
using AnySolution = std::variant<akari::Solution, takuzu::Solution, kakuro::Solution, kenken::Solution>;

Game game_of(const AnyInstance& inst);

AnyInstance parse_instance(Game game, std::string_view text);
std::string serialize(const AnyInstance& inst);
/// Throws ShapeMismatch if the solution belongs to another game.
AnySolution parse_solution(const AnyInstance& inst, std::string_view text);
std::string serialize(const AnyInstance& inst, const AnySolution& sol);

std::vector<Violation> validate(const AnyInstance& inst, const AnySolution& sol);
std::vector<AnySolution> solve(const AnyInstance& inst, std::size_t limit = 2);

/// Small built-in example grid of each game and its solution, in file format.
std::string_view fixture_instance_text(Game game);
std::string_view fixture_solution_text(Game game);

}  // namespace pzk
