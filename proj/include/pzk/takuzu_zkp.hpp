#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzk/agents.hpp"
#include "pzk/puzzles/takuzu.hpp"

namespace pzk::takuzu_zkp {

/// S'[rows[i]][cols[j]] = S[i][j].
struct Permutations {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  friend bool operator==(const Permutations&, const Permutations&) = default;
};

Permutations identity(int n);
Grid<int> permute(const Permutations& p, const Grid<int>& grid);
Grid<int> unpermute(const Permutations& p, const Grid<int>& permuted);

/// The slip of paper sealed in E.
std::string write_note(const Permutations& p);
/// Nullopt if the text is not a pair of permutations of size n.
std::optional<Permutations> read_note(const std::string& text, int n);

struct Commitment {
  int n = 0;
  Envelope E;               // holds the written permutations
  std::vector<Item> cards;  // S' row-major, face down
  bool consumed = false;
};

/// One of the 2n+9 equally likely challenge leaves.
struct Leaf {
  int c = 0;
  int d = 0;     // 0 rows, 1 columns (c = 1, 2, 3)
  int line = 0;  // c = 2
  int e = 0;     // c = 3, triples start at 0-based offset e
};

std::size_t leaf_count(int n);
Leaf decode_leaf(int n, std::size_t index);
std::string describe(const Leaf& leaf);
Leaf sample_challenge(int n, Stream& r);

/// Commits `grid` under `used`, with `noted` written in E.
Commitment commit_grid(const Grid<int>& grid, const Permutations& noted, const Permutations& used, Supply& supply);

/// Draws πR and πC uniformly from the prover's coins.
Commitment setup_commitment(const takuzu::Instance& inst, const takuzu::Solution& sol, Stream& coins);
Commitment setup_commitment(const takuzu::Instance& inst, const takuzu::Solution& sol, const RandomSource& r);
/// Fixed permutations. Still validates the solution.
Commitment setup_commitment(const takuzu::Instance& inst, const takuzu::Solution& sol, const Permutations& perms);

bool verify_round(const takuzu::Instance& inst, Commitment& com, Round& round);

struct WrongGrid {
  Grid<int> values;
};
/// Cards follow πR and πC, E claims πR∘(0 1) and πC.
struct MismatchedEnvelope {
  takuzu::Solution base;
};
using Strategy = std::variant<WrongGrid, MismatchedEnvelope>;

Commitment cheating_setup(const takuzu::Instance& inst, const Strategy& strategy, Stream& coins);
Commitment cheating_setup(const takuzu::Instance& inst, const Strategy& strategy, const RandomSource& r);

/// Transcript of a round with the given leaf, produced without any solution.
Transcript simulate_round(const takuzu::Instance& inst, std::size_t leaf, const RandomSource& r);

/// Uniform fill of the blanks.
Grid<int> random_completion(const Grid<int>& givens, Stream& r);
/// Random grid with no three equal neighbours in any row or column.
Grid<int> random_no_triple(int n, Stream& r);

nlohmann::json to_json(const Commitment& com);
Commitment commitment_from_json(const takuzu::Instance& inst, const nlohmann::json& j, Supply& supply);

}  // namespace pzk::takuzu_zkp
