#pragma once

// The two parties of a round. Protocol scripts run on the referee's Table and
// ask the verifier for its random choices and the prover for the few actions
// that need a private look at face-down cards.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzk/physical.hpp"

namespace pzk {

class Verifier {
 public:
  virtual ~Verifier() = default;

  /// Uniform choice in [0, bound), labeled by what it decides.
  virtual std::size_t choose(const std::string& what, std::size_t bound) = 0;
  /// Uniform ordering of k objects.
  virtual std::vector<std::size_t> permutation(const std::string& what, std::size_t k);
  /// Every public event, as it happens.
  virtual void observe(const Event& event) { (void)event; }
};

class LocalVerifier : public Verifier {
 public:
  explicit LocalVerifier(Stream coins) : coins_(std::move(coins)) {}

  std::size_t choose(const std::string& what, std::size_t bound) override;
  std::vector<std::size_t> permutation(const std::string& what, std::size_t k) override;

 private:
  Stream coins_;
};

/// Verifier whose labeled choices can be pinned; everything else falls
/// through to an inner verifier. Used to enumerate the challenge space.
class ScriptedVerifier : public Verifier {
 public:
  explicit ScriptedVerifier(Verifier& fallback) : fallback_(fallback) {}

  void force(const std::string& what, std::size_t value) { choices_[what] = value; }
  void force_permutation(const std::string& what, std::vector<std::size_t> order) {
    orders_[what] = std::move(order);
  }

  std::size_t choose(const std::string& what, std::size_t bound) override;
  std::vector<std::size_t> permutation(const std::string& what, std::size_t k) override;
  void observe(const Event& event) override { fallback_.observe(event); }

 private:
  Verifier& fallback_;
  std::map<std::string, std::size_t> choices_;
  std::map<std::string, std::vector<std::size_t>> orders_;
};

/// A request for the prover, carrying what the prover privately sees.
struct ProverQuery {
  enum class Kind : std::uint8_t {
    AkariSegment,  // add a Light iff every card is Empty
    AkariCross,    // add an Empty iff two Lights are present
    TakuzuReveal,  // pick a Bit1 card to turn over
    TakuzuDiscard, // drop one of the two equal cards of a triple
    KenKenMark,    // mark the envelope holding the cage maximum
  };

  Kind kind = Kind::AkariSegment;
  std::string context;
  std::vector<Face> faces;        // peeked cards, in handed order
  std::vector<long long> values;  // KenKen: peeked envelope values, in handed order
};

struct ProverReply {
  std::optional<Face> add;  // card to add, for the Akari queries
  std::size_t index = 0;    // chosen position for the others
};

const char* to_string(ProverQuery::Kind kind);
/// Session action a prover answers a query with.
const char* reply_action(ProverQuery::Kind kind);

class Prover {
 public:
  virtual ~Prover() = default;
  virtual ProverReply respond(const ProverQuery& query) = 0;
};

/// Best-response prover: follows the protocol, breaking ties with its coins.
class HonestProver : public Prover {
 public:
  explicit HonestProver(Stream coins) : coins_(std::move(coins)) {}
  ProverReply respond(const ProverQuery& query) override;

 protected:
  Stream coins_;
};

/// Marks a non-maximal envelope whenever one exists.
class WrongMarkProver : public HonestProver {
 public:
  using HonestProver::HonestProver;
  ProverReply respond(const ProverQuery& query) override;
};

/// Everything a protocol script needs to run one verification round.
struct Round {
  Table& table;
  Verifier& verifier;
  Prover& prover;
};

// ---------------------------------------------------------------------------
// Wire forms

nlohmann::json to_json(const ProverQuery& query);
ProverQuery query_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProverReply& reply);
ProverReply reply_from_json(const nlohmann::json& j);

/// Physical items as the prover lays them out. Uids are not transmitted;
/// the receiver allocates fresh ones.
nlohmann::json items_to_json(const std::vector<Item>& items);
std::vector<Item> items_from_json(const nlohmann::json& j, Supply& supply);
nlohmann::json envelope_to_json(const Envelope& e);
Envelope envelope_from_json(const nlohmann::json& j, Supply& supply);

}  // namespace pzk
