#include "pzk/physical.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pzk/error.hpp"

namespace pzk {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Errc code) {
  switch (code) {
    case Errc::NonPrimeLabel: return "NonPrimeLabel";
    case Errc::AlreadyOpen: return "AlreadyOpen";
    case Errc::AlreadyMarked: return "AlreadyMarked";
    case Errc::NotSealed: return "NotSealed";
    case Errc::ContainsEnvelope: return "ContainsEnvelope";
    case Errc::NotProver: return "NotProver";
    case Errc::ParseError: return "ParseError";
    case Errc::StructureError: return "StructureError";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InvalidSolution: return "InvalidSolution";
    case Errc::ConsumedCommitment: return "ConsumedCommitment";
    case Errc::NoSuchCell: return "NoSuchCell";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::InfeasibleCage: return "InfeasibleCage";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ProtocolViolation: return "ProtocolViolation";
    case Errc::MalformedFrame: return "MalformedFrame";
    case Errc::SessionFailure: return "SessionFailure";
  }
  return "Unknown";
}

const char* to_string(Face face) {
  switch (face) {
    case Face::Black: return "Black";
    case Face::Red: return "Red";
    case Face::Light: return "Light";
    case Face::Empty: return "Empty";
    case Face::Bit0: return "Bit0";
    case Face::Bit1: return "Bit1";
  }
  return "?";
}

Face face_from_string(std::string_view name) {
  for (Face f : {Face::Black, Face::Red, Face::Light, Face::Empty, Face::Bit0, Face::Bit1}) {
    if (name == to_string(f)) return f;
  }
  throw Error(Errc::InvalidArgument, "unknown face '" + std::string(name) + "'");
}

const char* to_string(Role role) {
  switch (role) {
    case Role::Prover: return "prover";
    case Role::Verifier: return "verifier";
    case Role::Referee: return "referee";
  }
  return "?";
}

Role role_from_string(std::string_view name) {
  for (Role r : {Role::Prover, Role::Verifier, Role::Referee}) {
    if (name == to_string(r)) return r;
  }
  throw Error(Errc::InvalidArgument, "unknown role '" + std::string(name) + "'");
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ShuffleRequested: return "ShuffleRequested";
    case EventKind::EnvelopeOpened: return "EnvelopeOpened";
    case EventKind::CardsRevealed: return "CardsRevealed";
    case EventKind::EnvelopeMarked: return "EnvelopeMarked";
    case EventKind::PacketHanded: return "PacketHanded";
    case EventKind::ChallengeAnnounced: return "ChallengeAnnounced";
    case EventKind::VerdictRecorded: return "VerdictRecorded";
  }
  return "?";
}

namespace {

EventKind event_kind_from_string(std::string_view name) {
  for (auto k : {EventKind::ShuffleRequested, EventKind::EnvelopeOpened, EventKind::CardsRevealed,
                 EventKind::EnvelopeMarked, EventKind::PacketHanded,
                 EventKind::ChallengeAnnounced, EventKind::VerdictRecorded}) {
    if (name == to_string(k)) return k;
  }
  throw Error(Errc::InvalidArgument, "unknown event '" + std::string(name) + "'");
}

std::string shuffle_kind(const std::vector<Item>& items) {
  bool cards = false;
  bool envelopes = false;
  for (const auto& it : items) {
    (it.is_card() ? cards : envelopes) = true;
  }
  if (cards && envelopes) return "mixed";
  return envelopes ? "envelopes" : "cards";
}

Event make_event(EventKind kind, std::string_view context) {
  Event e;
  e.kind = kind;
  e.context = std::string(context);
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------

FaceCounts::FaceCounts(std::initializer_list<std::pair<const Face, std::size_t>> init) {
  for (const auto& [face, n] : init) add(face, n);
}

void FaceCounts::add(Face face, std::size_t n) {
  if (n != 0) counts_[face] += n;
}

std::size_t FaceCounts::operator[](Face face) const {
  auto it = counts_.find(face);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t FaceCounts::total() const {
  std::size_t sum = 0;
  for (const auto& [face, n] : counts_) sum += n;
  return sum;
}

FaceCounts faces_of(const std::vector<Card>& cards) {
  FaceCounts out;
  for (const auto& c : cards) out.add(c.face);
  return out;
}

FaceCounts faces_of(const std::vector<Item>& items) {
  FaceCounts out;
  for (const auto& it : items) {
    if (it.is_card()) out.add(it.card().face);
  }
  return out;
}

// ---------------------------------------------------------------------------

void Transcript::append(Event event) {
  event.round = round_;
  events_.push_back(std::move(event));
}

namespace {

ordered_json event_json(const Event& e, std::size_t seq) {
  ordered_json j;
  j["round"] = e.round;
  j["seq"] = seq;
  j["event"] = to_string(e.kind);
  j["ctx"] = e.context;
  switch (e.kind) {
    case EventKind::ShuffleRequested:
      j["count"] = e.count;
      j["kind"] = e.detail;
      break;
    case EventKind::EnvelopeOpened: {
      j["count"] = e.count;
      auto items = ordered_json::array();
      for (const auto& v : e.items) {
        ordered_json iv;
        switch (v.kind) {
          case ItemView::Kind::Card:
            iv["type"] = "card";
            break;
          case ItemView::Kind::Envelope:
            iv["type"] = "envelope";
            iv["count"] = v.count;
            if (v.prime_label) iv["label"] = *v.prime_label;
            if (v.marked) iv["marked"] = true;
            break;
          case ItemView::Kind::Note:
            iv["type"] = "note";
            iv["text"] = v.text;
            break;
        }
        items.push_back(std::move(iv));
      }
      j["items"] = std::move(items);
      break;
    }
    case EventKind::CardsRevealed: {
      ordered_json faces = ordered_json::object();
      for (const auto& [face, n] : e.faces.entries()) faces[to_string(face)] = n;
      j["faces"] = std::move(faces);
      break;
    }
    case EventKind::EnvelopeMarked:
      j["position"] = e.count;
      break;
    case EventKind::PacketHanded:
      j["count"] = e.count;
      break;
    case EventKind::ChallengeAnnounced:
      j["value"] = e.detail;
      break;
    case EventKind::VerdictRecorded:
      j["verdict"] = e.detail;
      break;
  }
  return j;
}

Event event_from_json(const ordered_json& j) {
  Event e;
  e.kind = event_kind_from_string(j.at("event").get<std::string>());
  e.round = j.at("round").get<std::size_t>();
  e.context = j.at("ctx").get<std::string>();
  switch (e.kind) {
    case EventKind::ShuffleRequested:
      e.count = j.at("count").get<std::size_t>();
      e.detail = j.at("kind").get<std::string>();
      break;
    case EventKind::EnvelopeOpened:
      e.count = j.at("count").get<std::size_t>();
      for (const auto& iv : j.at("items")) {
        ItemView v;
        const auto type = iv.at("type").get<std::string>();
        if (type == "card") {
          v.kind = ItemView::Kind::Card;
        } else if (type == "envelope") {
          v.kind = ItemView::Kind::Envelope;
          v.count = iv.at("count").get<std::size_t>();
          if (iv.contains("label")) v.prime_label = iv.at("label").get<int>();
          v.marked = iv.value("marked", false);
        } else if (type == "note") {
          v.kind = ItemView::Kind::Note;
          v.text = iv.at("text").get<std::string>();
        } else {
          throw Error(Errc::InvalidArgument, "unknown item type '" + type + "'");
        }
        e.items.push_back(std::move(v));
      }
      break;
    case EventKind::CardsRevealed:
      for (const auto& [name, n] : j.at("faces").items()) {
        e.faces.add(face_from_string(name), n.get<std::size_t>());
      }
      break;
    case EventKind::EnvelopeMarked:
      e.count = j.at("position").get<std::size_t>();
      break;
    case EventKind::PacketHanded:
      e.count = j.at("count").get<std::size_t>();
      break;
    case EventKind::ChallengeAnnounced:
      e.detail = j.at("value").get<std::string>();
      break;
    case EventKind::VerdictRecorded:
      e.detail = j.at("verdict").get<std::string>();
      break;
  }
  return e;
}

}  // namespace

std::string encode_event(const Event& event) { return event_json(event, 0).dump(); }

Event decode_event(std::string_view line) {
  try {
    return event_from_json(ordered_json::parse(line));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::InvalidArgument, std::string("bad event record: ") + ex.what());
  }
}

std::string Transcript::to_ndjson() const {
  std::string out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    out += event_json(events_[i], i).dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::from_ndjson(std::string_view text) {
  Transcript t;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Event e = decode_event(line);
    t.round_ = e.round;
    t.events_.push_back(std::move(e));
  }
  return t;
}

// ---------------------------------------------------------------------------

bool is_prime(long long value) {
  if (value < 2) return false;
  for (long long d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

ItemView observe(const Item& item) {
  ItemView v;
  if (item.is_card()) {
    v.kind = ItemView::Kind::Card;
  } else if (item.is_envelope()) {
    const auto& env = item.envelope();
    v.kind = ItemView::Kind::Envelope;
    v.count = env.count();
    v.prime_label = env.prime_label;
    v.marked = env.mark.has_value();
  } else {
    v.kind = ItemView::Kind::Note;
    v.text = item.note().text;
  }
  return v;
}

Packet shuffle_packet(Packet p, Stream& r, Transcript& log, std::string_view context) {
  Event e = make_event(EventKind::ShuffleRequested, context);
  e.count = p.items.size();
  e.detail = shuffle_kind(p.items);
  r.shuffle(p.items);
  log.append(std::move(e));
  return p;
}

Envelope seal_envelope(std::vector<Item> items, std::optional<int> prime_label, Uid uid) {
  if (prime_label && !is_prime(*prime_label)) {
    throw Error(Errc::NonPrimeLabel, std::to_string(*prime_label) + " is not prime");
  }
  Envelope env;
  env.contents = std::move(items);
  env.prime_label = prime_label;
  env.uid = uid;
  return env;
}

std::vector<Item> open_envelope(Envelope& e, Transcript& log, std::string_view context) {
  if (!e.sealed()) throw Error(Errc::AlreadyOpen, "envelope already open");
  Event ev = make_event(EventKind::EnvelopeOpened, context);
  ev.count = e.contents.size();
  for (const auto& it : e.contents) ev.items.push_back(observe(it));
  std::sort(ev.items.begin(), ev.items.end());
  e.state = Envelope::State::Open;
  std::vector<Item> out = std::move(e.contents);
  e.contents.clear();
  log.append(std::move(ev));
  return out;
}

void mark_envelope(Envelope& e, std::size_t position, Transcript& log, std::string_view context) {
  if (!e.sealed()) throw Error(Errc::NotSealed, "only sealed envelopes can be marked");
  if (e.mark) throw Error(Errc::AlreadyMarked, "envelope already marked");
  e.mark = "marked";
  Event ev = make_event(EventKind::EnvelopeMarked, context);
  ev.count = position;
  log.append(std::move(ev));
}

FaceCounts reveal_cards(Packet& p, Transcript& log, std::string_view context) {
  for (const auto& it : p.items) {
    if (!it.is_card()) throw Error(Errc::ContainsEnvelope, "reveal requires a packet of cards");
  }
  FaceCounts faces;
  for (auto& it : p.items) {
    it.card().orientation = Orientation::FaceUp;
    faces.add(it.card().face);
  }
  Event ev = make_event(EventKind::CardsRevealed, context);
  ev.faces = faces;
  log.append(std::move(ev));
  return faces;
}

std::vector<Item> private_peek(const Envelope& e, Role actor) {
  if (actor != Role::Prover) throw Error(Errc::NotProver, "only the prover may look inside");
  return e.contents;
}

std::vector<Item> private_peek(const Packet& p, Role actor) {
  if (actor != Role::Prover) throw Error(Errc::NotProver, "only the prover may look inside");
  return p.items;
}

void collect_card_uids(const std::vector<Item>& items, std::vector<Uid>& out) {
  for (const auto& it : items) {
    if (it.is_card()) {
      out.push_back(it.card().uid);
    } else if (it.is_envelope()) {
      collect_card_uids(it.envelope().contents, out);
    }
  }
}

void collect_card_faces(const std::vector<Item>& items, FaceCounts& out) {
  for (const auto& it : items) {
    if (it.is_card()) {
      out.add(it.card().face);
    } else if (it.is_envelope()) {
      collect_card_faces(it.envelope().contents, out);
    }
  }
}

void collect_envelope_uids(const std::vector<Item>& items, std::vector<Uid>& out) {
  for (const auto& it : items) {
    if (it.is_envelope()) {
      out.push_back(it.envelope().uid);
      collect_envelope_uids(it.envelope().contents, out);
    }
  }
}

std::vector<Card> Supply::cards(Face face, std::size_t n) {
  std::vector<Card> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(card(face));
  return out;
}

std::vector<Item> as_items(std::vector<Card> cards) {
  std::vector<Item> out;
  out.reserve(cards.size());
  for (auto& c : cards) out.emplace_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------

Table::Table(Transcript& log, Stream shuffler, Uid first_uid)
    : log_(log), shuffler_(std::move(shuffler)), supply_(first_uid) {}

void Table::notify() {
  if (observer_) observer_(log_.events().back());
}

Packet Table::shuffle(Packet p, std::string_view context) {
  Event e = make_event(EventKind::ShuffleRequested, context);
  e.count = p.items.size();
  e.detail = shuffle_kind(p.items);
  const auto order = shuffle_order(p.items.size());
  std::vector<Item> permuted;
  permuted.reserve(p.items.size());
  for (std::size_t i : order) permuted.push_back(std::move(p.items[i]));
  p.items = std::move(permuted);
  tally(p.items.size());
  log_.append(std::move(e));
  notify();
  return p;
}

std::vector<Item> Table::open(Envelope e, std::string_view context) {
  auto items = open_envelope(e, log_, context);
  opened_.push_back(e.uid);
  retired_.emplace_back(std::move(e));
  tally(1 + items.size());
  notify();
  return items;
}

FaceCounts Table::reveal(Packet& p, std::string_view context) {
  auto faces = reveal_cards(p, log_, context);
  tally(p.items.size());
  notify();
  return faces;
}

void Table::mark(Envelope& e, std::size_t position, std::string_view context) {
  mark_envelope(e, position, log_, context);
  tally(1);
  notify();
}

void Table::handed(std::size_t count, std::string_view context) {
  Event e = make_event(EventKind::PacketHanded, context);
  e.count = count;
  tally(count);
  log_.append(std::move(e));
  notify();
}

void Table::announce(const std::string& value, std::string_view context) {
  Event e = make_event(EventKind::ChallengeAnnounced, context);
  e.detail = value;
  log_.append(std::move(e));
  notify();
}

void Table::verdict(bool accept) {
  Event e = make_event(EventKind::VerdictRecorded, "verdict");
  e.detail = accept ? "accept" : "reject";
  log_.append(std::move(e));
  notify();
}

Card Table::mint(Face face) {
  Card c = supply_.card(face);
  inventory_.push_back(c.uid);
  return c;
}

Envelope Table::seal(std::vector<Item> items, std::optional<int> prime_label) {
  Envelope e = supply_.seal(std::move(items), prime_label);
  envelopes_.push_back(e.uid);
  tally(1);
  return e;
}

void Table::retire(Item item) { retired_.push_back(std::move(item)); }

void Table::retire(std::vector<Item> items) {
  for (auto& it : items) retired_.push_back(std::move(it));
}

void Table::register_inventory(const std::vector<Item>& items) {
  collect_card_uids(items, inventory_);
  collect_envelope_uids(items, envelopes_);
}

bool Table::conserved() const {
  auto same = [](std::vector<Uid> before, std::vector<Uid> after) {
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    return before == after;
  };
  std::vector<Uid> cards;
  std::vector<Uid> envelopes;
  collect_card_uids(retired_, cards);
  collect_envelope_uids(retired_, envelopes);
  return same(inventory_, cards) && same(envelopes_, envelopes);
}

std::vector<std::size_t> LeakyTable::shuffle_order(std::size_t k) {
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

}  // namespace pzk
