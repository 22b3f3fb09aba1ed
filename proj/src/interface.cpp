#include "pzk/interface.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "pzk/akari_zkp.hpp"
#include "pzk/error.hpp"
#include "pzk/kakuro_zkp.hpp"
#include "pzk/kenken_zkp.hpp"
#include "pzk/takuzu_zkp.hpp"

namespace pzk::session {

using nlohmann::json;
using nlohmann::ordered_json;

const char* role_name(Role role) {
  switch (role) {
    case Role::Prover: return "prover";
    case Role::Verifier: return "verifier";
    case Role::Referee: return "referee";
  }
  return "?";
}

Role role_from_string(std::string_view name) {
  if (name == "prover") return Role::Prover;
  if (name == "verifier") return Role::Verifier;
  if (name == "referee") return Role::Referee;
  throw Error(Errc::MalformedFrame, "unknown role '" + std::string(name) + "'");
}

const std::set<std::string>& known_actions() {
  static const std::set<std::string> actions{
      "hello",       "setup",         "place",         "choose",      "pick",         "event",
      "ack",         "hand",          "mark-request",  "add-card",    "reveal-card",  "discard-card",
      "pass",        "open-request",  "shuffle-request", "result",    "abort"};
  return actions;
}

std::string encode_message(const Message& m) {
  ordered_json j;
  j["session"] = m.session;
  j["seq"] = m.seq;
  j["role"] = role_name(m.role);
  j["action"] = m.action;
  j["payload"] = m.payload;
  return j.dump() + "\n";
}

Message decode_message(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFrame, std::string("unparsable frame: ") + e.what());
  }
  try {
    if (!j.is_object()) throw Error(Errc::MalformedFrame, "frame is not an object");
    for (const char* key : {"session", "seq", "role", "action", "payload"}) {
      if (!j.contains(key)) throw Error(Errc::MalformedFrame, std::string("frame lacks '") + key + "'");
    }
    if (!j["seq"].is_number_unsigned()) throw Error(Errc::MalformedFrame, "seq must be a non-negative integer");
    Message m;
    m.session = j["session"].get<std::string>();
    m.seq = j["seq"].get<std::uint64_t>();
    m.role = role_from_string(j["role"].get<std::string>());
    m.action = j["action"].get<std::string>();
    if (!known_actions().count(m.action)) throw Error(Errc::MalformedFrame, "unknown action '" + m.action + "'");
    m.payload = j["payload"];
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFrame, std::string("bad frame field: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sockets

FdChannel::~FdChannel() {
  if (fd_ >= 0) ::close(fd_);
}

void FdChannel::send_line(const std::string& line) {
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::send(fd_, line.data() + done, line.size() - done, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(Errc::SessionFailure, std::string("send failed: ") + std::strerror(errno));
    done += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> FdChannel::receive_line() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      // A partial line at end of stream is a truncated frame.
      if (!buffer_.empty()) {
        std::string rest = std::move(buffer_);
        buffer_.clear();
        return rest;
      }
      return std::nullopt;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::pair<std::unique_ptr<FdChannel>, std::unique_ptr<FdChannel>> channel_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw Error(Errc::SessionFailure, std::string("socketpair: ") + std::strerror(errno));
  }
  return {std::make_unique<FdChannel>(fds[0]), std::make_unique<FdChannel>(fds[1])};
}

namespace {

std::pair<std::string, std::string> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw Error(Errc::InvalidArgument, "address must be host:port, got '" + address + "'");
  std::string host = address.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  return {host, address.substr(colon + 1)};
}

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list) ::freeaddrinfo(list);
  }
};

AddrInfo resolve(const std::string& address, bool passive) {
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo info;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &info.list); rc != 0) {
    throw Error(Errc::SessionFailure, "cannot resolve " + address + ": " + ::gai_strerror(rc));
  }
  return info;
}

}  // namespace

std::unique_ptr<FdChannel> connect_tcp(const std::string& address) {
  const AddrInfo info = resolve(address, false);
  for (addrinfo* a = info.list; a; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) return std::make_unique<FdChannel>(fd);
    ::close(fd);
  }
  throw Error(Errc::SessionFailure, "cannot connect to " + address);
}

Listener::Listener(const std::string& address) {
  const AddrInfo info = resolve(address, true);
  fd_ = ::socket(info.list->ai_family, info.list->ai_socktype, info.list->ai_protocol);
  if (fd_ < 0) throw Error(Errc::SessionFailure, std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd_, info.list->ai_addr, info.list->ai_addrlen) != 0 || ::listen(fd_, 4) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd_);
    throw Error(Errc::SessionFailure, "cannot listen on " + address + ": " + why);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<FdChannel> Listener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<FdChannel>(fd);
    if (errno != EINTR) throw Error(Errc::SessionFailure, std::string("accept: ") + std::strerror(errno));
  }
}

// ---------------------------------------------------------------------------
// Endpoint

void Endpoint::send(const std::string& action, json payload) {
  channel_.send_line(encode_message({session_, next_seq_++, self_, action, std::move(payload)}));
}

Message Endpoint::receive(const std::set<std::string>& allowed) {
  const auto line = channel_.receive_line();
  if (!line) throw Error(Errc::SessionFailure, std::string(role_name(peer_)) + " disconnected");
  Message m = decode_message(*line);
  if (m.session != session_) throw Error(Errc::ProtocolViolation, "message for session '" + m.session + "'");
  if (m.role != peer_) {
    throw Error(Errc::ProtocolViolation, std::string("expected the ") + role_name(peer_) + ", got " + role_name(m.role));
  }
  if (m.seq <= last_seen_) {
    throw Error(Errc::ProtocolViolation, "seq " + std::to_string(m.seq) + " does not follow " + std::to_string(last_seen_));
  }
  last_seen_ = m.seq;
  if (m.action == "abort" && !allowed.count("abort")) {
    throw Error(Errc::ProtocolViolation, "peer aborted: " + m.payload.value("reason", std::string{}));
  }
  if (!allowed.count(m.action)) {
    std::string want;
    for (const auto& a : allowed) want += (want.empty() ? "" : "|") + a;
    throw Error(Errc::ProtocolViolation, std::string(role_name(peer_)) + " sent '" + m.action + "' where " + want + " was expected");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Referee

namespace {

class RemoteVerifier : public Verifier {
 public:
  explicit RemoteVerifier(Endpoint& peer) : peer_(peer) {}

  std::size_t choose(const std::string& what, std::size_t bound) override {
    peer_.send("choose", {{"what", what}, {"bound", bound}});
    const Message m = peer_.receive({"pick"});
    const auto v = m.payload.value("value", json()).is_number_unsigned() ? m.payload["value"].get<std::size_t>() : bound;
    if (v >= bound) throw Error(Errc::ProtocolViolation, "pick for '" + what + "' is out of range");
    return v;
  }

  std::vector<std::size_t> permutation(const std::string& what, std::size_t k) override {
    peer_.send("choose", {{"what", what}, {"permutation", k}});
    const Message m = peer_.receive({"pick"});
    std::vector<std::size_t> order;
    try {
      order = m.payload.at("order").get<std::vector<std::size_t>>();
    } catch (const json::exception&) {
      throw Error(Errc::ProtocolViolation, "pick for '" + what + "' carries no order");
    }
    std::vector<char> seen(k, 0);
    bool ok = order.size() == k;
    for (const auto i : order) ok = ok && i < k && !seen[i]++;
    if (!ok) throw Error(Errc::ProtocolViolation, "pick for '" + what + "' is not a permutation of " + std::to_string(k));
    return order;
  }

 private:
  Endpoint& peer_;
};

class RemoteProver : public Prover {
 public:
  explicit RemoteProver(Endpoint& peer) : peer_(peer) {}

  ProverReply respond(const ProverQuery& query) override {
    peer_.send("hand", to_json(query));
    const Message m = peer_.receive({reply_action(query.kind), "pass"});
    try {
      return reply_from_json(m.payload);
    } catch (const std::exception& e) {
      throw Error(Errc::ProtocolViolation, std::string("unreadable prover reply: ") + e.what());
    }
  }

 private:
  Endpoint& peer_;
};

bool verify_placed(const AnyInstance& inst, const json& placed, Round& rd) {
  Supply supply;
  auto rebuild = [&](auto&& from_json) {
    try {
      return from_json();
    } catch (const Error& e) {
      throw Error(Errc::ProtocolViolation, std::string("malformed commitment: ") + e.what());
    } catch (const json::exception& e) {
      throw Error(Errc::ProtocolViolation, std::string("malformed commitment: ") + e.what());
    }
  };
  return std::visit(
      [&](const auto& i) -> bool {
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, akari::Instance>) {
          auto c = rebuild([&] { return akari_zkp::commitment_from_json(i, placed, supply); });
          return akari_zkp::verify_round(i, c, rd);
        } else if constexpr (std::is_same_v<I, takuzu::Instance>) {
          auto c = rebuild([&] { return takuzu_zkp::commitment_from_json(i, placed, supply); });
          return takuzu_zkp::verify_round(i, c, rd);
        } else if constexpr (std::is_same_v<I, kakuro::Instance>) {
          auto c = rebuild([&] { return kakuro_zkp::commitment_from_json(i, placed, supply); });
          return kakuro_zkp::verify_round(i, c, rd);
        } else {
          auto c = rebuild([&] { return kenken_zkp::commitment_from_json(i, placed, supply); });
          return kenken_zkp::verify_round(i, c, rd);
        }
      },
      inst);
}

bool is_violation(const Error& e) { return e.code() == Errc::ProtocolViolation || e.code() == Errc::MalformedFrame; }

void try_send(Endpoint& e, const std::string& action, const json& payload) {
  try {
    e.send(action, payload);
  } catch (const Error&) {
    // The peer may already be gone; the abort reaches whoever is left.
  }
}

/// Hands back a line that was read ahead before the rest of the stream.
class Replay : public Channel {
 public:
  Replay(std::unique_ptr<FdChannel> inner, std::string first) : inner_(std::move(inner)), first_(std::move(first)) {}
  void send_line(const std::string& line) override { inner_->send_line(line); }
  std::optional<std::string> receive_line() override {
    if (first_) return std::exchange(first_, std::nullopt);
    return inner_->receive_line();
  }

 private:
  std::unique_ptr<FdChannel> inner_;
  std::optional<std::string> first_;
};

json hello_payload(const SessionConfig& cfg) {
  return {{"game", to_string(game_of(cfg.instance))}, {"rounds", cfg.rounds}, {"seed", cfg.seed}};
}

void check_game(const Message& hello, const SessionConfig& cfg) {
  if (hello.payload.value("game", std::string{}) != to_string(game_of(cfg.instance))) {
    throw Error(Errc::ProtocolViolation, "peer plays a different game");
  }
}

}  // namespace

SessionResult referee(Channel& prover_ch, Channel& verifier_ch, const SessionConfig& cfg) {
  if (cfg.rounds < 1) throw Error(Errc::InvalidArgument, "the number of rounds must be at least 1");
  Endpoint P(prover_ch, cfg.session, Role::Referee, Role::Prover);
  Endpoint V(verifier_ch, cfg.session, Role::Referee, Role::Verifier);
  SessionResult result;
  result.accepted = true;
  try {
    check_game(P.receive({"hello"}), cfg);
    check_game(V.receive({"hello"}), cfg);
    P.send("hello", hello_payload(cfg));
    V.send("hello", hello_payload(cfg));

    const RandomSource root(cfg.seed);
    for (std::size_t k = 0; k < cfg.rounds && result.accepted; ++k) {
      const RandomSource rs = root.derive(k);
      result.transcript.set_round(k);
      P.send("setup", {{"round", k}});
      const Message placed = P.receive({"place"});
      V.send("setup", {{"round", k}});
      V.receive({"ack"});

      Table table(result.transcript, rs.stream(RandomSource::kShuffle));
      table.set_observer([&](const Event& e) {
        V.send("event", {{"event", json::parse(encode_event(e))}});
        V.receive({"ack"});
      });
      RemoteVerifier rv(V);
      RemoteProver rp(P);
      Round rd{table, rv, rp};
      result.accepted = verify_placed(cfg.instance, placed.payload.value("commitment", json()), rd);
      result.rounds_run = k + 1;
    }
  } catch (const Error& e) {
    if (!is_violation(e)) throw;
    result.accepted = false;
    result.abort = e.what();
    const json why{{"reason", e.what()}};
    try_send(P, "abort", why);
    try_send(V, "abort", why);
    return result;
  }
  const json verdict{{"verdict", result.accepted ? "accept" : "reject"}, {"rounds", result.rounds_run}};
  P.send("result", verdict);
  V.send("result", verdict);
  return result;
}

SessionResult referee(Listener& listener, const SessionConfig& cfg) {
  std::unique_ptr<Channel> prover_ch, verifier_ch;
  while (!prover_ch || !verifier_ch) {
    auto ch = listener.accept();
    const auto line = ch->receive_line();
    if (!line) continue;
    Message hello;
    try {
      hello = decode_message(*line);
    } catch (const Error&) {
      continue;  // not one of ours
    }
    auto& slot = hello.role == Role::Prover ? prover_ch : hello.role == Role::Verifier ? verifier_ch : prover_ch;
    if (hello.action != "hello" || hello.role == Role::Referee || slot) continue;
    slot = std::make_unique<Replay>(std::move(ch), *line);
  }
  return referee(*prover_ch, *verifier_ch, cfg);
}

// ---------------------------------------------------------------------------
// Peers

SessionResult prover(Channel& channel, const SessionConfig& cfg, const Strategy& strategy) {
  Endpoint R(channel, cfg.session, Role::Prover, Role::Referee);
  R.send("hello", hello_payload(cfg));
  const Message hello = R.receive({"hello"});
  check_game(hello, cfg);
  const RandomSource root(hello.payload.value("seed", cfg.seed));

  SessionResult result;
  std::unique_ptr<Attempt> attempt;
  for (;;) {
    const Message m = R.receive({"setup", "hand", "result", "abort"});
    if (m.action == "setup") {
      const std::size_t round = m.payload.at("round").get<std::size_t>();
      attempt = strategy(root.derive(round));
      result.rounds_run = round + 1;
      R.send("place", {{"commitment", attempt->commitment()}});
    } else if (m.action == "hand") {
      if (!attempt) throw Error(Errc::ProtocolViolation, "query before setup");
      const ProverQuery q = query_from_json(m.payload);
      R.send(reply_action(q.kind), to_json(attempt->prover().respond(q)));
    } else if (m.action == "result") {
      result.accepted = m.payload.value("verdict", std::string{}) == "accept";
      result.rounds_run = m.payload.value("rounds", result.rounds_run);
      return result;
    } else {
      result.abort = m.payload.value("reason", std::string{"aborted"});
      return result;
    }
  }
}

SessionResult verifier(Channel& channel, const SessionConfig& cfg) {
  Endpoint R(channel, cfg.session, Role::Verifier, Role::Referee);
  R.send("hello", hello_payload(cfg));
  const Message hello = R.receive({"hello"});
  check_game(hello, cfg);
  const RandomSource root(hello.payload.value("seed", cfg.seed));

  SessionResult result;
  std::optional<LocalVerifier> coins;
  for (;;) {
    const Message m = R.receive({"setup", "choose", "event", "result", "abort"});
    if (m.action == "setup") {
      const std::size_t round = m.payload.at("round").get<std::size_t>();
      coins.emplace(root.derive(round).stream(RandomSource::kChallenge));
      result.transcript.set_round(round);
      R.send("ack");
    } else if (m.action == "choose") {
      if (!coins) throw Error(Errc::ProtocolViolation, "choice before setup");
      const std::string what = m.payload.value("what", std::string{});
      if (m.payload.contains("permutation")) {
        R.send("pick", {{"order", coins->permutation(what, m.payload["permutation"].get<std::size_t>())}});
      } else {
        R.send("pick", {{"value", coins->choose(what, m.payload.at("bound").get<std::size_t>())}});
      }
    } else if (m.action == "event") {
      result.transcript.append(decode_event(m.payload.at("event").dump()));
      R.send("ack");
    } else if (m.action == "result") {
      result.accepted = m.payload.value("verdict", std::string{}) == "accept";
      result.rounds_run = m.payload.value("rounds", std::size_t{0});
      return result;
    } else {
      result.abort = m.payload.value("reason", std::string{"aborted"});
      return result;
    }
  }
}

DistributedRun run_forked(const SessionConfig& cfg, const Strategy& strategy) {
  auto [p_ref, p_peer] = channel_pair();
  auto [v_ref, v_peer] = channel_pair();
  int out[2];
  if (::pipe(out) != 0) throw Error(Errc::SessionFailure, std::string("pipe: ") + std::strerror(errno));

  const pid_t prover_pid = ::fork();
  if (prover_pid < 0) throw Error(Errc::SessionFailure, "fork failed");
  if (prover_pid == 0) {
    p_ref.reset();
    v_ref.reset();
    v_peer.reset();
    ::close(out[0]);
    ::close(out[1]);
    int code = 0;
    try {
      code = prover(*p_peer, cfg, strategy).abort ? 1 : 0;
    } catch (...) {
      code = 3;
    }
    ::_exit(code);
  }
  const pid_t verifier_pid = ::fork();
  if (verifier_pid < 0) throw Error(Errc::SessionFailure, "fork failed");
  if (verifier_pid == 0) {
    p_ref.reset();
    v_ref.reset();
    p_peer.reset();
    ::close(out[0]);
    int code = 0;
    std::string text;
    try {
      text = verifier(*v_peer, cfg).transcript.to_ndjson();
    } catch (...) {
      code = 3;
    }
    std::size_t done = 0;
    while (done < text.size()) {
      const ssize_t n = ::write(out[1], text.data() + done, text.size() - done);
      if (n <= 0) break;
      done += static_cast<std::size_t>(n);
    }
    ::close(out[1]);
    ::_exit(code);
  }
  p_peer.reset();
  v_peer.reset();
  ::close(out[1]);

  DistributedRun run;
  std::exception_ptr failure;
  try {
    run.referee = referee(*p_ref, *v_ref, cfg);
  } catch (...) {
    failure = std::current_exception();
  }
  p_ref.reset();
  v_ref.reset();
  std::string text;
  char chunk[4096];
  for (ssize_t n; (n = ::read(out[0], chunk, sizeof chunk)) > 0;) text.append(chunk, static_cast<std::size_t>(n));
  ::close(out[0]);
  int status = 0;
  ::waitpid(prover_pid, &status, 0);
  ::waitpid(verifier_pid, &status, 0);
  if (failure) std::rethrow_exception(failure);
  run.verifier_view = Transcript::from_ndjson(text);
  return run;
}

}  // namespace pzk::session
