#pragma once

#include <array>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzk/agents.hpp"
#include "pzk/puzzles/kakuro.hpp"

namespace pzk::kakuro_zkp {

/// The four uses of a cell's envelopes, in assignment order.
enum class Rule : std::uint8_t { RowUnicity, ColumnUnicity, RowSum, ColumnSum };

/// l Black + (9 - l) Red in a sealed envelope. Throws OutOfRange unless 1 <= l <= 9.
Envelope encode_value(int l, Supply& supply);

/// Digits 1..9 missing from `values`.
std::vector<int> side_digits(const std::vector<int>& values);

struct Commitment {
  std::vector<std::vector<Envelope>> cells;  // per white cell, row-major; 4 each
  std::vector<std::vector<Envelope>> sides;  // per run
  bool consumed = false;
};

/// Four envelopes per cell holding `values[i]`, and side envelopes per run.
Commitment commit(const kakuro::Instance& inst, const std::vector<std::array<int, 4>>& values,
                  const std::vector<std::vector<int>>& sides, Supply& supply);

Commitment setup_commitment(const kakuro::Instance& inst, const kakuro::Solution& sol, Stream& coins);
Commitment setup_commitment(const kakuro::Instance& inst, const kakuro::Solution& sol, const RandomSource& r);

bool verify_round(const kakuro::Instance& inst, Commitment& com, Round& round);

/// `copies` of the cell's envelopes (1 or 2) encode `value` instead of the
/// base value. The side envelopes of the row run (and, for two copies, the
/// column run) complement `value`, so exactly the matching unicity checks
/// need it.
struct DeviantEnvelope {
  kakuro::Solution base;
  Cell cell;
  int value = 1;
  int copies = 1;
};
struct WellFormedNonSolution {
  kakuro::Solution values;
};
using Strategy = std::variant<DeviantEnvelope, WellFormedNonSolution>;

Commitment cheating_setup(const kakuro::Instance& inst, const Strategy& strategy, const RandomSource& r);

Transcript simulate_round(const kakuro::Instance& inst, const RandomSource& r);

nlohmann::json to_json(const Commitment& com);
Commitment commitment_from_json(const kakuro::Instance& inst, const nlohmann::json& j, Supply& supply);

}  // namespace pzk::kakuro_zkp
