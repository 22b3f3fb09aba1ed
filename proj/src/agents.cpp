#include "pzk/agents.hpp"

#include <algorithm>

#include "pzk/error.hpp"

namespace pzk {

using nlohmann::json;

std::vector<std::size_t> Verifier::permutation(const std::string& what, std::size_t k) {
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  for (std::size_t i = k; i > 1; --i) std::swap(order[i - 1], order[choose(what, i)]);
  return order;
}

std::size_t LocalVerifier::choose(const std::string& what, std::size_t bound) {
  (void)what;
  return coins_.below(bound);
}

std::vector<std::size_t> LocalVerifier::permutation(const std::string& what, std::size_t k) {
  (void)what;
  return coins_.permutation(k);
}

std::size_t ScriptedVerifier::choose(const std::string& what, std::size_t bound) {
  auto it = choices_.find(what);
  if (it == choices_.end()) return fallback_.choose(what, bound);
  if (it->second >= bound) throw Error(Errc::InvalidArgument, "forced choice for " + what + " out of range");
  return it->second;
}

std::vector<std::size_t> ScriptedVerifier::permutation(const std::string& what, std::size_t k) {
  auto it = orders_.find(what);
  if (it == orders_.end()) return fallback_.permutation(what, k);
  if (it->second.size() != k) throw Error(Errc::InvalidArgument, "forced order for " + what + " has wrong size");
  return it->second;
}

// ---------------------------------------------------------------------------

const char* to_string(ProverQuery::Kind kind) {
  switch (kind) {
    case ProverQuery::Kind::AkariSegment: return "akari-segment";
    case ProverQuery::Kind::AkariCross: return "akari-cross";
    case ProverQuery::Kind::TakuzuReveal: return "takuzu-reveal";
    case ProverQuery::Kind::TakuzuDiscard: return "takuzu-discard";
    case ProverQuery::Kind::KenKenMark: return "kenken-mark";
  }
  return "?";
}

const char* reply_action(ProverQuery::Kind kind) {
  switch (kind) {
    case ProverQuery::Kind::AkariSegment:
    case ProverQuery::Kind::AkariCross: return "add-card";
    case ProverQuery::Kind::TakuzuReveal: return "reveal-card";
    case ProverQuery::Kind::TakuzuDiscard: return "discard-card";
    case ProverQuery::Kind::KenKenMark: return "mark-request";
  }
  return "?";
}

namespace {

std::size_t pick(Stream& coins, const std::vector<std::size_t>& options) {
  return options[coins.below(options.size())];
}

}  // namespace

ProverReply HonestProver::respond(const ProverQuery& q) {
  ProverReply r;
  switch (q.kind) {
    case ProverQuery::Kind::AkariSegment: {
      const bool dark = std::all_of(q.faces.begin(), q.faces.end(), [](Face f) { return f == Face::Empty; });
      r.add = dark ? Face::Light : Face::Empty;
      break;
    }
    case ProverQuery::Kind::AkariCross: {
      const auto lights = std::count(q.faces.begin(), q.faces.end(), Face::Light);
      r.add = lights >= 2 ? Face::Empty : Face::Light;
      break;
    }
    case ProverQuery::Kind::TakuzuReveal: {
      std::vector<std::size_t> ones;
      std::vector<std::size_t> all;
      for (std::size_t i = 0; i < q.faces.size(); ++i) {
        all.push_back(i);
        if (q.faces[i] == Face::Bit1) ones.push_back(i);
      }
      if (!ones.empty()) r.index = pick(coins_, ones);
      else if (!all.empty()) r.index = pick(coins_, all);
      break;
    }
    case ProverQuery::Kind::TakuzuDiscard: {
      std::vector<std::size_t> twins;
      for (std::size_t i = 0; i < q.faces.size(); ++i) {
        if (std::count(q.faces.begin(), q.faces.end(), q.faces[i]) >= 2) twins.push_back(i);
      }
      if (!twins.empty()) r.index = pick(coins_, twins);
      break;
    }
    case ProverQuery::Kind::KenKenMark: {
      if (q.values.empty()) break;
      const long long top = *std::max_element(q.values.begin(), q.values.end());
      std::vector<std::size_t> best;
      for (std::size_t i = 0; i < q.values.size(); ++i) {
        if (q.values[i] == top) best.push_back(i);
      }
      r.index = pick(coins_, best);
      break;
    }
  }
  return r;
}

ProverReply WrongMarkProver::respond(const ProverQuery& q) {
  if (q.kind != ProverQuery::Kind::KenKenMark || q.values.empty()) return HonestProver::respond(q);
  const long long top = *std::max_element(q.values.begin(), q.values.end());
  std::vector<std::size_t> lower;
  for (std::size_t i = 0; i < q.values.size(); ++i) {
    if (q.values[i] < top) lower.push_back(i);
  }
  if (lower.empty()) return HonestProver::respond(q);
  ProverReply r;
  r.index = pick(coins_, lower);
  return r;
}

// ---------------------------------------------------------------------------

json to_json(const ProverQuery& q) {
  json j;
  j["kind"] = to_string(q.kind);
  j["ctx"] = q.context;
  auto faces = json::array();
  for (Face f : q.faces) faces.push_back(to_string(f));
  j["faces"] = std::move(faces);
  j["values"] = q.values;
  return j;
}

ProverQuery query_from_json(const json& j) {
  ProverQuery q;
  const auto kind = j.at("kind").get<std::string>();
  bool known = false;
  for (auto k : {ProverQuery::Kind::AkariSegment, ProverQuery::Kind::AkariCross, ProverQuery::Kind::TakuzuReveal,
                 ProverQuery::Kind::TakuzuDiscard, ProverQuery::Kind::KenKenMark}) {
    if (kind == to_string(k)) {
      q.kind = k;
      known = true;
    }
  }
  if (!known) throw Error(Errc::InvalidArgument, "unknown query kind '" + kind + "'");
  q.context = j.value("ctx", "");
  for (const auto& f : j.at("faces")) q.faces.push_back(face_from_string(f.get<std::string>()));
  q.values = j.at("values").get<std::vector<long long>>();
  return q;
}

json to_json(const ProverReply& r) {
  json j;
  if (r.add) j["face"] = to_string(*r.add);
  j["index"] = r.index;
  return j;
}

ProverReply reply_from_json(const json& j) {
  ProverReply r;
  if (j.contains("face")) r.add = face_from_string(j.at("face").get<std::string>());
  r.index = j.value("index", std::size_t{0});
  return r;
}

json envelope_to_json(const Envelope& e) {
  json j;
  if (e.prime_label) j["label"] = *e.prime_label;
  if (e.mark) j["mark"] = *e.mark;
  j["items"] = items_to_json(e.contents);
  return j;
}

json items_to_json(const std::vector<Item>& items) {
  auto out = json::array();
  for (const auto& it : items) {
    if (it.is_card()) {
      out.push_back(to_string(it.card().face));
    } else if (it.is_envelope()) {
      out.push_back(envelope_to_json(it.envelope()));
    } else {
      out.push_back(json{{"note", it.note().text}});
    }
  }
  return out;
}

Envelope envelope_from_json(const json& j, Supply& supply) {
  if (!j.is_object() || !j.contains("items")) throw Error(Errc::InvalidArgument, "envelope record needs items");
  std::optional<int> label;
  if (j.contains("label")) label = j.at("label").get<int>();
  Envelope e = supply.seal(items_from_json(j.at("items"), supply), label);
  if (j.contains("mark")) e.mark = j.at("mark").get<std::string>();
  return e;
}

std::vector<Item> items_from_json(const json& j, Supply& supply) {
  if (!j.is_array()) throw Error(Errc::InvalidArgument, "item list must be an array");
  std::vector<Item> out;
  out.reserve(j.size());
  for (const auto& it : j) {
    if (it.is_string()) {
      out.emplace_back(supply.card(face_from_string(it.get<std::string>())));
    } else if (it.is_object() && it.contains("note")) {
      out.emplace_back(Note{it.at("note").get<std::string>()});
    } else {
      out.emplace_back(envelope_from_json(it, supply));
    }
  }
  return out;
}

}  // namespace pzk
