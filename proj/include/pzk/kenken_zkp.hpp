#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzk/agents.hpp"
#include "pzk/puzzles/kenken.hpp"

namespace pzk::kenken_zkp {

/// prime p <= n -> largest exponent of p among 1..n.
std::map<int, int> prime_table(int n);
int exponent_of(long long value, int p);

// Cell encoding: an outer envelope holding
//   [0] the count envelope: v Black + (n - v) Red,
//   [1] the factor envelope: one p-envelope per prime p <= n, ascending,
//       each with e_p cards of which exp_p(v) are Black.

Envelope encode_count(int v, int n, Supply& supply);
/// Throws OutOfRange unless every prime factor of v fits the table for n.
Envelope encode_factors(long long v, int n, Supply& supply);
/// Throws OutOfRange unless 1 <= v <= n.
Envelope encode_cell(int v, int n, Supply& supply);

/// Black count of a count envelope, as the prover sees it.
long long count_value(const Envelope& count);
/// Product of p^Black over the p-envelopes of a factor envelope.
long long factor_value(const Envelope& factors);

/// Maxima a cage's largest cell can take: {t+c-1..n} for subtraction,
/// the multiples of t up to n for division.
std::vector<int> subtraction_maxima(long long t, std::size_t c, int n);
std::vector<int> division_maxima(long long t, int n);

struct DecoySet {
  std::vector<int> maxima;
  std::vector<Envelope> large;  // one per maximum other than the solution's
};

/// Large envelopes for every feasible maximum except `sol_max` (pass 0 to
/// keep them all). Throw InfeasibleCage when the cage admits no maximum or
/// `sol_max` is not one of them.
DecoySet build_subtraction_decoys(const kenken::Cage& cage, int sol_max, int n, Supply& supply);
DecoySet build_division_decoys(const kenken::Cage& cage, int sol_max, int n, Supply& supply);

/// The verifier's side of the mark step: the marked envelope joins the
/// contents of the unmarked ones in a fresh large envelope.
Envelope assemble_subtraction(Table& t, Envelope marked, std::vector<Envelope> others, std::string_view ctx);
Envelope assemble_division(Table& t, Envelope marked, std::vector<Envelope> others, int n, std::string_view ctx);

struct Commitment {
  int n = 0;
  std::vector<std::vector<Envelope>> cells;             // row-major, 3 each
  std::map<std::size_t, std::vector<Envelope>> decoys;  // per Sub/Div cage index
  bool consumed = false;
};

/// Three identical envelopes per cell, decoys from the cage maxima of `values`.
Commitment commit_values(const kenken::Instance& inst, const Grid<int>& values, Supply& supply);

Commitment setup_commitment(const kenken::Instance& inst, const kenken::Solution& sol, Stream& coins);
Commitment setup_commitment(const kenken::Instance& inst, const kenken::Solution& sol, const RandomSource& r);

bool verify_round(const kenken::Instance& inst, Commitment& com, Round& round);

/// Two envelopes of the cell hold the base value, the third holds `value`.
/// With a Latin base whose only broken cage contains the cell, exactly one
/// of the three rules is met by the odd envelope.
struct DeviantEnvelope {
  Grid<int> base;
  Cell cell;
  int value = 1;
};
/// Honest commitment; the cheating lies in the prover's marks.
struct WrongMark {
  kenken::Solution sol;
};
struct WellFormedNonSolution {
  Grid<int> values;
};
/// One cell's count and factor encodings disagree.
struct MismatchedEncoding {
  kenken::Solution base;
  Cell cell;
  int factor_value = 1;
};
using Strategy = std::variant<DeviantEnvelope, WrongMark, WellFormedNonSolution, MismatchedEncoding>;

Commitment cheating_setup(const kenken::Instance& inst, const Strategy& strategy, const RandomSource& r);

/// Searches Latin squares for a DeviantEnvelope of the kind described above.
std::optional<DeviantEnvelope> find_deviant(const kenken::Instance& inst, std::size_t budget = 2'000'000);

Transcript simulate_round(const kenken::Instance& inst, const RandomSource& r);

nlohmann::json to_json(const Commitment& com);
Commitment commitment_from_json(const kenken::Instance& inst, const nlohmann::json& j, Supply& supply);

}  // namespace pzk::kenken_zkp
