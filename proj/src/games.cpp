#include "pzk/games.hpp"

#include "pzk/error.hpp"

namespace pzk {

namespace {

template <class S>
const S& same_game(const AnySolution& sol) {
  if (const auto* s = std::get_if<S>(&sol)) return *s;
  throw Error(Errc::ShapeMismatch, "solution is for a different game");
}

}  // namespace

const char* to_string(Game game) {
  switch (game) {
    case Game::Akari: return "akari";
    case Game::Takuzu: return "takuzu";
    case Game::Kakuro: return "kakuro";
    case Game::Kenken: return "kenken";
  }
  return "?";
}

Game game_from_string(std::string_view name) {
  for (Game g : kGames) {
    if (name == to_string(g)) return g;
  }
  throw Error(Errc::InvalidArgument, "unknown game '" + std::string(name) + "'");
}

Game game_of(const AnyInstance& inst) { return static_cast<Game>(inst.index()); }

AnyInstance parse_instance(Game game, std::string_view text) {
  switch (game) {
    case Game::Akari: return akari::parse_instance(text);
    case Game::Takuzu: return takuzu::parse_instance(text);
    case Game::Kakuro: return kakuro::parse_instance(text);
    case Game::Kenken: return kenken::parse_instance(text);
  }
  throw Error(Errc::InvalidArgument, "unknown game");
}

std::string serialize(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return serialize(i); }, inst);
}

AnySolution parse_solution(const AnyInstance& inst, std::string_view text) {
  switch (game_of(inst)) {
    case Game::Akari: return akari::parse_solution(std::get<akari::Instance>(inst), text);
    case Game::Takuzu: return takuzu::parse_solution(text);
    case Game::Kakuro: return kakuro::parse_solution(std::get<kakuro::Instance>(inst), text);
    case Game::Kenken: return kenken::parse_solution(text);
  }
  throw Error(Errc::InvalidArgument, "unknown game");
}

std::string serialize(const AnyInstance& inst, const AnySolution& sol) {
  switch (game_of(inst)) {
    case Game::Akari: return akari::serialize(std::get<akari::Instance>(inst), same_game<akari::Solution>(sol));
    case Game::Takuzu: return takuzu::serialize(same_game<takuzu::Solution>(sol));
    case Game::Kakuro: return kakuro::serialize(std::get<kakuro::Instance>(inst), same_game<kakuro::Solution>(sol));
    case Game::Kenken: return kenken::serialize(same_game<kenken::Solution>(sol));
  }
  throw Error(Errc::InvalidArgument, "unknown game");
}

std::vector<Violation> validate(const AnyInstance& inst, const AnySolution& sol) {
  return std::visit(
      [&](const auto& i) {
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, akari::Instance>) return akari::validate(i, same_game<akari::Solution>(sol));
        else if constexpr (std::is_same_v<I, takuzu::Instance>) return takuzu::validate(i, same_game<takuzu::Solution>(sol));
        else if constexpr (std::is_same_v<I, kakuro::Instance>) return kakuro::validate(i, same_game<kakuro::Solution>(sol));
        else return kenken::validate(i, same_game<kenken::Solution>(sol));
      },
      inst);
}

std::vector<AnySolution> solve(const AnyInstance& inst, std::size_t limit) {
  return std::visit(
      [&](const auto& i) {
        std::vector<AnySolution> out;
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, akari::Instance>) {
          for (auto& s : akari::solve(i, limit)) out.emplace_back(std::move(s));
        } else if constexpr (std::is_same_v<I, takuzu::Instance>) {
          for (auto& s : takuzu::solve(i, limit)) out.emplace_back(std::move(s));
        } else if constexpr (std::is_same_v<I, kakuro::Instance>) {
          for (auto& s : kakuro::solve(i, limit)) out.emplace_back(std::move(s));
        } else {
          for (auto& s : kenken::solve(i, limit)) out.emplace_back(std::move(s));
        }
        return out;
      },
      inst);
}

std::string_view fixture_instance_text(Game game) {
  switch (game) {
    case Game::Akari: return ".....\n.4.#.\n...2.\n0.#..\n.....\n";
    case Game::Takuzu: return ".1.0\n..0.\n.0..\n11.0\n";
    case Game::Kakuro: return "X 4\\- 3\\-\n-\\3 . .\n-\\4 . .\n";
    case Game::Kenken: return "3\nABB\nACC\nACC\nA + 6\nB - 1\nC * 18\n";
  }
  throw Error(Errc::InvalidArgument, "unknown game");
}

std::string_view fixture_solution_text(Game game) {
  switch (game) {
    case Game::Akari: return ".*...\n*4*#.\n.*.2*\n0.#*.\n..*..\n";
    case Game::Takuzu: return "0110\n1001\n0011\n1100\n";
    case Game::Kakuro: return "X 4\\- 3\\-\n-\\3 1 2\n-\\4 3 1\n";
    case Game::Kenken: return "3 1 2\n1 2 3\n2 3 1\n";
  }
  throw Error(Errc::InvalidArgument, "unknown game");
}

}  // namespace pzk
