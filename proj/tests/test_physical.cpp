#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "pzk/error.hpp"
#include "pzk/physical.hpp"

using namespace pzk;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("streams are reproducible and labels are independent") {
  const RandomSource rs(42);
  auto a = rs.stream(RandomSource::kShuffle);
  auto b = rs.stream(RandomSource::kShuffle);
  auto c = rs.stream(RandomSource::kChallenge);
  std::vector<std::size_t> xa, xb, xc;
  for (int i = 0; i < 20; ++i) {
    xa.push_back(a.below(1000));
    xb.push_back(b.below(1000));
    xc.push_back(c.below(1000));
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  CHECK(rs.derive(1).seed() != rs.derive(2).seed());
}

TEST_CASE("permutation draws are uniform over S3") {
  Stream s(7);
  std::map<std::vector<std::size_t>, int> hist;
  const int N = 60000;
  for (int i = 0; i < N; ++i) ++hist[s.permutation(3)];
  REQUIRE(hist.size() == 6);
  for (const auto& [p, k] : hist) CHECK(std::abs(k - N / 6) < 5 * std::sqrt(N / 6.0));
}

TEST_CASE("prime labels") {
  Supply s;
  CHECK(code_of([&] { s.seal({}, 4); }) == Errc::NonPrimeLabel);
  CHECK(code_of([&] { s.seal({}, 1); }) == Errc::NonPrimeLabel);
  CHECK(s.seal({}, 7).prime_label == 7);
}

TEST_CASE("envelopes open once and mark once") {
  Transcript log;
  Supply s;
  Envelope e = s.seal(as_items(s.cards(Face::Black, 2)));
  mark_envelope(e, 3, log, "m");
  CHECK(code_of([&] { mark_envelope(e, 3, log, "m"); }) == Errc::AlreadyMarked);
  auto items = open_envelope(e, log, "o");
  CHECK(items.size() == 2);
  CHECK(code_of([&] { open_envelope(e, log, "o"); }) == Errc::AlreadyOpen);
  CHECK(code_of([&] { mark_envelope(e, 0, log, "m"); }) == Errc::NotSealed);
  REQUIRE(log.size() == 2);
  CHECK(log.events()[0].kind == EventKind::EnvelopeMarked);
  CHECK(log.events()[0].count == 3);
  CHECK(log.events()[1].count == 2);
}

TEST_CASE("reveal refuses envelopes and logs faces") {
  Transcript log;
  Supply s;
  Packet p{as_items(s.cards(Face::Red, 2)), {}};
  p.items.emplace_back(s.card(Face::Black));
  const auto f = reveal_cards(p, log, "r");
  CHECK(f == FaceCounts{{Face::Red, 2}, {Face::Black, 1}});
  CHECK(log.events().back().faces == f);
  for (const auto& it : p.items) CHECK(it.card().orientation == Orientation::FaceUp);
  Packet q{{Item(s.seal({}))}, {}};
  CHECK(code_of([&] { reveal_cards(q, log, "r"); }) == Errc::ContainsEnvelope);
}

TEST_CASE("private peek is for the prover only") {
  Supply s;
  Envelope e = s.seal(as_items(s.cards(Face::Light, 1)));
  CHECK(private_peek(e, Role::Prover).size() == 1);
  CHECK(code_of([&] { private_peek(e, Role::Verifier); }) == Errc::NotProver);
  CHECK(code_of([&] { private_peek(e, Role::Referee); }) == Errc::NotProver);
  CHECK(e.sealed());
}

TEST_CASE("opened envelope views hide the cards") {
  Transcript log;
  Supply s;
  std::vector<Item> inner = as_items(s.cards(Face::Black, 3));
  inner.emplace_back(s.seal(as_items(s.cards(Face::Red, 2)), 5));
  Envelope e = s.seal(std::move(inner));
  open_envelope(e, log, "x");
  const auto& ev = log.events().back();
  REQUIRE(ev.items.size() == 4);
  std::size_t cards = 0;
  for (const auto& v : ev.items) {
    if (v.kind == ItemView::Kind::Card) ++cards;
    if (v.kind == ItemView::Kind::Envelope) {
      CHECK(v.prime_label == 5);
      CHECK(v.count == 2);
    }
  }
  CHECK(cards == 3);
  CHECK(ev.faces.total() == 0);
}

TEST_CASE("table shuffle keeps the multiset and conservation holds") {
  Transcript log;
  Supply s;
  Table t(log, Stream(3));
  Packet p{as_items(s.cards(Face::Black, 3)), {}};
  for (auto& c : s.cards(Face::Red, 4)) p.items.emplace_back(c);
  t.register_inventory(p.items);
  std::vector<Uid> before;
  collect_card_uids(p.items, before);
  p = t.shuffle(std::move(p), "s");
  std::vector<Uid> after;
  collect_card_uids(p.items, after);
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);
  CHECK_FALSE(t.conserved());
  t.retire(std::move(p));
  CHECK(t.conserved());
  CHECK(log.events().back().kind == EventKind::ShuffleRequested);
  CHECK(log.events().back().count == 7);
}

TEST_CASE("leaky table never moves anything") {
  Transcript log;
  Supply s;
  LeakyTable t(log, Stream(3));
  Packet p{as_items(s.cards(Face::Black, 5)), {}};
  std::vector<Uid> before;
  collect_card_uids(p.items, before);
  p = t.shuffle(std::move(p), "s");
  std::vector<Uid> after;
  collect_card_uids(p.items, after);
  CHECK(before == after);
}

TEST_CASE("table open records the shell and the order of opening") {
  Transcript log;
  Supply s;
  Table t(log, Stream(1));
  Envelope a = s.seal(as_items(s.cards(Face::Bit0, 1)));
  Envelope b = s.seal(as_items(s.cards(Face::Bit1, 1)));
  const Uid ua = a.uid, ub = b.uid;
  t.register_inventory({Item(a), Item(b)});
  auto x = t.open(std::move(b), "b");
  auto y = t.open(std::move(a), "a");
  CHECK(t.opened() == std::vector<Uid>{ub, ua});
  t.retire(std::move(x));
  CHECK_FALSE(t.conserved());
  t.retire(std::move(y));
  CHECK(t.conserved());
}

TEST_CASE("transcripts round trip through ndjson") {
  Transcript log;
  Supply s;
  Table t(log, Stream(9));
  log.set_round(4);
  t.announce("c=1", "challenge");
  Packet p{as_items(s.cards(Face::Empty, 2)), {}};
  p = t.shuffle(std::move(p), "pack");
  t.reveal(p, "pack");
  t.handed(2, "hand");
  Envelope e = s.seal({Item(Note{"r: 1 0\nc: 0 1"}), Item(s.seal({}, 2))});
  t.mark(e, 1, "mark");
  t.open(std::move(e), "open");
  t.verdict(true);
  const auto text = log.to_ndjson();
  const auto back = Transcript::from_ndjson(text);
  CHECK(back == log);
  CHECK(back.to_ndjson() == text);
  for (const auto& ev : log.events()) {
    CHECK(ev.round == 4);
    CHECK(decode_event(encode_event(ev)) == ev);
  }
  CHECK(text.find("uid") == std::string::npos);
}

TEST_CASE("face names") {
  for (Face f : {Face::Black, Face::Red, Face::Light, Face::Empty, Face::Bit0, Face::Bit1}) {
    CHECK(face_from_string(to_string(f)) == f);
  }
  CHECK(is_prime(2));
  CHECK(is_prime(13));
  CHECK_FALSE(is_prime(9));
  CHECK_FALSE(is_prime(0));
}
