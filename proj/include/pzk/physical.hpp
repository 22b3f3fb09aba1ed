#pragma once

// Face-down cards, sealed envelopes, the shuffle functionality and the public
// transcript. Every protocol step in the library is expressed through these.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pzk/random.hpp"

namespace pzk {

enum class Face : std::uint8_t { Black, Red, Light, Empty, Bit0, Bit1 };
enum class Orientation : std::uint8_t { FaceDown, FaceUp };
enum class Role : std::uint8_t { Prover, Verifier, Referee };

const char* to_string(Face face);
Face face_from_string(std::string_view name);
const char* to_string(Role role);
Role role_from_string(std::string_view name);

using Uid = std::uint64_t;

struct Card {
  Face face = Face::Empty;
  Orientation orientation = Orientation::FaceDown;
  Uid uid = 0;
};

/// A written slip of paper. Readable by whoever opens the envelope holding it.
struct Note {
  std::string text;
};

struct Item;

struct Envelope {
  enum class State : std::uint8_t { Sealed, Open };

  std::vector<Item> contents;
  State state = State::Sealed;
  std::optional<std::string> mark;
  std::optional<int> prime_label;
  Uid uid = 0;

  bool sealed() const { return state == State::Sealed; }
  /// Publicly observable: a sealed envelope's thickness.
  std::size_t count() const { return contents.size(); }
};

struct Item {
  std::variant<Card, Envelope, Note> value;

  Item(Card c) : value(std::move(c)) {}          // NOLINT(google-explicit-constructor)
  Item(Envelope e) : value(std::move(e)) {}      // NOLINT(google-explicit-constructor)
  Item(Note n) : value(std::move(n)) {}          // NOLINT(google-explicit-constructor)

  bool is_card() const { return std::holds_alternative<Card>(value); }
  bool is_envelope() const { return std::holds_alternative<Envelope>(value); }
  bool is_note() const { return std::holds_alternative<Note>(value); }
  const Card& card() const { return std::get<Card>(value); }
  Card& card() { return std::get<Card>(value); }
  const Envelope& envelope() const { return std::get<Envelope>(value); }
  Envelope& envelope() { return std::get<Envelope>(value); }
  const Note& note() const { return std::get<Note>(value); }
};

struct Packet {
  std::vector<Item> items;
  std::string origin;  // private provenance, never logged

  std::size_t size() const { return items.size(); }
};

/// Multiset of card faces.
class FaceCounts {
 public:
  FaceCounts() = default;
  FaceCounts(std::initializer_list<std::pair<const Face, std::size_t>> init);

  void add(Face face, std::size_t n = 1);
  std::size_t operator[](Face face) const;
  std::size_t total() const;
  const std::map<Face, std::size_t>& entries() const { return counts_; }

  friend bool operator==(const FaceCounts&, const FaceCounts&) = default;

 private:
  std::map<Face, std::size_t> counts_;  // zero entries are never stored
};

FaceCounts faces_of(const std::vector<Card>& cards);
FaceCounts faces_of(const std::vector<Item>& items);

// ---------------------------------------------------------------------------
// Transcript

enum class EventKind : std::uint8_t {
  ShuffleRequested,
  EnvelopeOpened,
  CardsRevealed,
  EnvelopeMarked,
  PacketHanded,
  ChallengeAnnounced,
  VerdictRecorded,
};

const char* to_string(EventKind kind);

/// What the verifier sees of one item inside an envelope it opens.
struct ItemView {
  enum class Kind : std::uint8_t { Card, Envelope, Note };
  Kind kind = Kind::Card;
  std::size_t count = 0;             // envelopes: number of top-level items
  std::optional<int> prime_label;    // envelopes
  bool marked = false;               // envelopes
  std::string text;                  // notes

  friend auto operator<=>(const ItemView&, const ItemView&) = default;
};

struct Event {
  EventKind kind = EventKind::ChallengeAnnounced;
  std::size_t round = 0;
  std::string context;          // public step label
  std::size_t count = 0;        // shuffled/handed/opened item count; marked position
  std::string detail;           // shuffle kind, challenge value or verdict
  FaceCounts faces;             // CardsRevealed only
  std::vector<ItemView> items;  // EnvelopeOpened only, sorted

  friend bool operator==(const Event&, const Event&) = default;
};

/// Ordered log of publicly visible events.
class Transcript {
 public:
  void set_round(std::size_t round) { round_ = round; }
  std::size_t round() const { return round_; }

  void append(Event event);
  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// One JSON record per line, stable field order.
  std::string to_ndjson() const;
  static Transcript from_ndjson(std::string_view text);

  friend bool operator==(const Transcript& a, const Transcript& b) { return a.events_ == b.events_; }

 private:
  std::vector<Event> events_;
  std::size_t round_ = 0;
};

std::string encode_event(const Event& event);
Event decode_event(std::string_view line);

// ---------------------------------------------------------------------------
// Physical operations

/// Uniformly permutes the packet and logs the request.
Packet shuffle_packet(Packet p, Stream& r, Transcript& log, std::string_view context = {});

/// Seals items into an envelope. No event: setup is private to the prover.
Envelope seal_envelope(std::vector<Item> items, std::optional<int> prime_label = std::nullopt,
                       Uid uid = 0);

/// Opens a sealed envelope and returns its contents (cards stay face down).
std::vector<Item> open_envelope(Envelope& e, Transcript& log, std::string_view context = {});

/// Marks a sealed envelope in view of the verifier.
void mark_envelope(Envelope& e, std::size_t position, Transcript& log,
                   std::string_view context = {});

/// Turns every card face up and logs the face multiset.
FaceCounts reveal_cards(Packet& p, Transcript& log, std::string_view context = {});

/// Prover-only view of a container. Leaves the object and the log untouched.
std::vector<Item> private_peek(const Envelope& e, Role actor);
std::vector<Item> private_peek(const Packet& p, Role actor);

ItemView observe(const Item& item);
bool is_prime(long long value);

/// Card uids held anywhere inside the items, depth first.
void collect_card_uids(const std::vector<Item>& items, std::vector<Uid>& out);
void collect_card_faces(const std::vector<Item>& items, FaceCounts& out);
void collect_envelope_uids(const std::vector<Item>& items, std::vector<Uid>& out);

// ---------------------------------------------------------------------------

/// Allocator of fresh physical objects.
class Supply {
 public:
  explicit Supply(Uid first = 1) : next_(first) {}

  Card card(Face face) { return Card{face, Orientation::FaceDown, next_++}; }
  std::vector<Card> cards(Face face, std::size_t n);
  Envelope seal(std::vector<Item> items, std::optional<int> prime_label = std::nullopt) {
    return seal_envelope(std::move(items), prime_label, next_++);
  }
  Uid next_uid() const { return next_; }

 private:
  Uid next_;
};

std::vector<Item> as_items(std::vector<Card> cards);

/// The referee's workspace for one verification round.
///
/// Owns the shuffle functionality and the public log; everything that leaves
/// play is retired here so card conservation can be audited afterwards.
/// Subclasses override the hooks to act as a simulator (swap packets at the
/// points a zero-knowledge simulator is allowed to) or as a broken shuffler.
class Table {
 public:
  Table(Transcript& log, Stream shuffler, Uid first_uid = Uid{1} << 40);
  virtual ~Table() = default;
  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;

  Packet shuffle(Packet p, std::string_view context);
  /// Opens the envelope, retires the empty shell and hands back its contents.
  std::vector<Item> open(Envelope e, std::string_view context);
  FaceCounts reveal(Packet& p, std::string_view context);
  void mark(Envelope& e, std::size_t position, std::string_view context);
  void handed(std::size_t count, std::string_view context);
  void announce(const std::string& value, std::string_view context);
  void verdict(bool accept);

  Card mint(Face face);
  Envelope seal(std::vector<Item> items, std::optional<int> prime_label = std::nullopt);

  void retire(Item item);
  void retire(std::vector<Item> items);
  void retire(Packet packet) { retire(std::move(packet.items)); }
  const std::vector<Item>& retired() const { return retired_; }

  /// Records the cards and envelopes in play at the start of the round.
  void register_inventory(const std::vector<Item>& items);
  /// True iff every registered or created card and envelope was retired
  /// exactly once.
  bool conserved() const;
  /// Uids of the envelopes opened so far, in order.
  const std::vector<Uid>& opened() const { return opened_; }

  void tally(std::uint64_t n) { operations_ += n; }
  std::uint64_t operations() const { return operations_; }

  Transcript& transcript() { return log_; }
  Stream& shuffler() { return shuffler_; }

  void set_observer(std::function<void(const Event&)> observer) { observer_ = std::move(observer); }

  /// Simulator hook: may replace a packet at a named point of the script.
  virtual Packet substitute(std::string_view point, std::size_t index, Packet p) {
    (void)point;
    (void)index;
    return p;
  }

 protected:
  /// Order produced by the shuffle functionality for k objects.
  virtual std::vector<std::size_t> shuffle_order(std::size_t k) { return shuffler_.permutation(k); }

 private:
  void notify();

  Transcript& log_;
  Stream shuffler_;
  Supply supply_;
  std::vector<Item> retired_;
  std::vector<Uid> inventory_;
  std::vector<Uid> envelopes_;
  std::vector<Uid> opened_;
  std::uint64_t operations_ = 0;
  std::function<void(const Event&)> observer_;
};

/// Shuffle functionality that leaves every order untouched. Only for
/// demonstrating that the statistical tests detect leakage.
class LeakyTable : public Table {
 public:
  using Table::Table;

 protected:
  std::vector<std::size_t> shuffle_order(std::size_t k) override;
};

}  // namespace pzk
