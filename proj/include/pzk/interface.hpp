#pragma once

// Two-process sessions: a referee owns the table and the shuffle, the prover
// and the verifier run elsewhere and talk to it over line-framed JSON.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pzk/games.hpp"
#include "pzk/harness.hpp"
#include "pzk/physical.hpp"

namespace pzk::session {

struct Message {
  std::string session;
  std::uint64_t seq = 0;
  Role role = Role::Referee;
  std::string action;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Message&, const Message&) = default;
};

const char* role_name(Role role);
Role role_from_string(std::string_view name);  // throws MalformedFrame
const std::set<std::string>& known_actions();

/// One line, newline-terminated.
std::string encode_message(const Message& m);
/// Throws MalformedFrame on bad JSON, missing fields or an unknown action.
Message decode_message(std::string_view line);

/// Line transport. receive_line returns nullopt once the peer has gone.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send_line(const std::string& line) = 0;
  virtual std::optional<std::string> receive_line() = 0;
};

/// Channel over a connected stream socket; owns the descriptor.
class FdChannel : public Channel {
 public:
  explicit FdChannel(int fd) : fd_(fd) {}
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void send_line(const std::string& line) override;
  std::optional<std::string> receive_line() override;
  int fd() const { return fd_; }

 private:
  int fd_;
  std::string buffer_;
};

/// A pair of connected channels.
std::pair<std::unique_ptr<FdChannel>, std::unique_ptr<FdChannel>> channel_pair();

/// "host:port"; throws SessionFailure when unreachable.
std::unique_ptr<FdChannel> connect_tcp(const std::string& address);

class Listener {
 public:
  explicit Listener(const std::string& address);  // port 0 picks a free one
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  std::unique_ptr<FdChannel> accept();
  int port() const { return port_; }

 private:
  int fd_ = -1;
  int port_ = 0;
};

/// One side of a connection: stamps outgoing messages and checks incoming
/// ones for session, sender role, sequence and expected action.
class Endpoint {
 public:
  Endpoint(Channel& channel, std::string session, Role self, Role peer)
      : channel_(channel), session_(std::move(session)), self_(self), peer_(peer) {}

  void send(const std::string& action, nlohmann::json payload = nlohmann::json::object());
  /// Throws SessionFailure on disconnect, MalformedFrame on a bad line and
  /// ProtocolViolation on anything out of place.
  Message receive(const std::set<std::string>& allowed);

 private:
  Channel& channel_;
  std::string session_;
  Role self_;
  Role peer_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t last_seen_ = 0;
};

struct SessionConfig {
  std::string session = "pzk";
  AnyInstance instance;
  std::size_t rounds = 1;
  std::uint64_t seed = 0;
};

struct SessionResult {
  bool accepted = false;
  std::size_t rounds_run = 0;
  Transcript transcript;             // as seen by this party
  std::optional<std::string> abort;  // protocol violation that ended the session
};

/// Runs the rounds with the two peers already connected. A protocol
/// violation by either peer aborts the session with a reject; a lost
/// connection throws SessionFailure.
SessionResult referee(Channel& prover, Channel& verifier, const SessionConfig& cfg);
/// Accepts two connections and sorts them by their hello.
SessionResult referee(Listener& listener, const SessionConfig& cfg);

SessionResult prover(Channel& channel, const SessionConfig& cfg, const Strategy& strategy);
SessionResult verifier(Channel& channel, const SessionConfig& cfg);

struct DistributedRun {
  SessionResult referee;
  Transcript verifier_view;
};

/// Forks a prover and a verifier process connected to this one by socket
/// pairs; this process referees.
DistributedRun run_forked(const SessionConfig& cfg, const Strategy& strategy);

}  // namespace pzk::session
