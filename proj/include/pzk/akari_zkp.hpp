#pragma once

#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzk/agents.hpp"
#include "pzk/puzzles/akari.hpp"

namespace pzk::akari_zkp {

/// Per white cell (in Structure::whites order) one packet on the grid G and
/// one on the dual grid with every face inverted.
struct Commitment {
  std::vector<Packet> primal;
  std::vector<Packet> dual;
  bool consumed = false;
};

/// Honest commitment. Throws InvalidSolution unless `sol` solves `inst`.
Commitment setup_commitment(const akari::Instance& inst, const akari::Solution& sol, Stream& coins);
Commitment setup_commitment(const akari::Instance& inst, const akari::Solution& sol, const RandomSource& r);

/// Homogeneous packets for an arbitrary light set; no validity check.
Commitment commit_lights(const akari::Instance& inst, const akari::Solution& lights, Supply& supply);

/// Runs one verification round: the verifier draws c in {0,1}.
/// Throws ConsumedCommitment on a second use.
bool verify_round(const akari::Instance& inst, Commitment& com, Round& round);

/// One card of the packet at `cell` shows the opposite face of the others.
struct InconsistentCell {
  Cell cell;
  akari::Solution base;
};
/// Homogeneous packets for a light set that breaks some rule.
struct WellFormedNonSolution {
  akari::Solution lights;
};
using Strategy = std::variant<InconsistentCell, WellFormedNonSolution>;

/// Throws NoSuchCell if an InconsistentCell target is not a white cell.
Commitment cheating_setup(const akari::Instance& inst, const Strategy& strategy, const RandomSource& r);

/// Transcript of a round with challenge `c`, produced without any solution.
Transcript simulate_round(const akari::Instance& inst, int c, const RandomSource& r);

nlohmann::json to_json(const Commitment& com);
Commitment commitment_from_json(const akari::Instance& inst, const nlohmann::json& j, Supply& supply);

}  // namespace pzk::akari_zkp
