// pzk: solve, check and prove knowledge of puzzle solutions with the
// physical protocols; run the statistical experiments; serve sessions.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pzk/error.hpp"
#include "pzk/games.hpp"
#include "pzk/harness.hpp"
#include "pzk/interface.hpp"
#include "pzk/stats.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace pzk;

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;
constexpr int kSessionFailure = 3;

struct Options {
  std::string game;
  std::string instance;
  std::string solution;
  std::string transcript;
  std::string cheat;
  std::string listen;
  std::string connect;
  std::string role = "referee";
  std::size_t rounds = 1;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1000;
  std::size_t limit = 2;
  unsigned threads = 0;
  int n_min = 3;
  int n_max = 16;
  std::size_t per_n = 5;
  bool rounds_given = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("PZK_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error(Errc::InvalidArgument, std::string("PZK_SEED is not an integer: ") + env);
    return v;
  }
  return 0;
}

struct Loaded {
  Game game;
  AnyInstance instance;
  std::optional<AnySolution> solution;
};

/// Instance from --instance, or the built-in example when absent; the
/// example's solution comes along unless --solution says otherwise.
Loaded load(const Options& o) {
  const Game g = game_from_string(o.game);
  Loaded l{g, parse_instance(g, o.instance.empty() ? std::string(fixture_instance_text(g)) : read_file(o.instance)), {}};
  if (!o.solution.empty()) l.solution = parse_solution(l.instance, read_file(o.solution));
  else if (o.instance.empty()) l.solution = parse_solution(l.instance, fixture_solution_text(g));
  return l;
}

/// A solution to build cheats around: the given one, else the solver's.
AnySolution reference(const Loaded& l) {
  if (l.solution) return *l.solution;
  const auto sols = solve(l.instance, 1);
  if (sols.empty()) throw Error(Errc::InvalidArgument, "the instance has no solution to deviate from; pass --solution");
  return sols.front();
}

Strategy strategy_for(const Options& o, const Loaded& l) {
  if (!o.cheat.empty()) return make_cheat(l.instance, reference(l), o.cheat).strategy;
  if (!l.solution) throw Error(Errc::InvalidArgument, "--solution is required");
  return honest_strategy(l.instance, *l.solution);
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

int cmd_solve(const Options& o) {
  const auto l = load(o);
  const auto sols = solve(l.instance, o.limit);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    if (i) std::cout << '\n';
    std::cout << serialize(l.instance, sols[i]);
  }
  if (sols.empty()) std::cerr << "no solution\n";
  return sols.empty() ? kReject : kAccept;
}

int cmd_validate(const Options& o) {
  const auto l = load(o);
  if (!l.solution) throw Error(Errc::InvalidArgument, "--solution is required");
  const auto violations = validate(l.instance, *l.solution);
  json list = json::array();
  for (const auto& v : violations) list.push_back({{"rule", v.rule}, {"location", v.location}});
  emit({{"valid", violations.empty()}, {"violations", list}});
  return violations.empty() ? kAccept : kReject;
}

int cmd_prove(const Options& o) {
  const auto l = load(o);
  const auto result = run_protocol(strategy_for(o, l), {l.game, o.rounds, resolve_seed(o)});
  if (!o.transcript.empty()) {
    std::ofstream out(o.transcript, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write " + o.transcript);
    out << result.transcript.to_ndjson();
  }
  emit({{"verdict", result.accepted ? "accept" : "reject"}, {"rounds", result.rounds_run}});
  return result.accepted ? kAccept : kReject;
}

/// Audits a recorded transcript: consecutive rounds, each closed by a
/// verdict, all accepting (and exactly --rounds of them when given).
int cmd_verify(const Options& o) {
  if (o.transcript.empty()) throw Error(Errc::InvalidArgument, "--transcript is required");
  const Transcript t = Transcript::from_ndjson(read_file(o.transcript));
  std::size_t rounds = 0;
  bool ok = !t.empty();
  bool open = false;
  std::string why;
  for (const auto& e : t.events()) {
    if (!open) {
      if (e.round != rounds) {
        ok = false;
        why = "round " + std::to_string(e.round) + " out of order";
        break;
      }
      open = true;
    } else if (e.round != rounds) {
      ok = false;
      why = "round " + std::to_string(rounds) + " has no verdict";
      break;
    }
    if (e.kind == EventKind::VerdictRecorded) {
      open = false;
      ++rounds;
      if (e.detail != "accept") {
        ok = false;
        why = "round " + std::to_string(rounds - 1) + " rejected";
      }
    }
  }
  if (ok && open) {
    ok = false;
    why = "last round has no verdict";
  }
  if (ok && o.rounds_given && rounds != o.rounds) {
    ok = false;
    why = std::to_string(rounds) + " rounds recorded, " + std::to_string(o.rounds) + " required";
  }
  json j{{"verdict", ok ? "accept" : "reject"}, {"rounds", rounds}};
  if (!ok) j["reason"] = why.empty() ? "empty transcript" : why;
  emit(j);
  return ok ? kAccept : kReject;
}

int cmd_soundness(const Options& o) {
  if (o.cheat.empty()) throw Error(Errc::InvalidArgument, "--cheat is required");
  const auto l = load(o);
  const auto plan = make_cheat(l.instance, reference(l), o.cheat);
  const auto report = estimate_soundness(plan, o.trials, resolve_seed(o), true, o.threads);
  json j = report.to_json();
  j["game"] = to_string(l.game);
  j["description"] = plan.description;
  j["within_three_sigma"] = report.within_three_sigma();
  emit(j);
  return kAccept;
}

int cmd_zk(const Options& o) {
  const auto l = load(o);
  if (!l.solution) throw Error(Errc::InvalidArgument, "--solution is required");
  json out = json::array();
  for (const auto& k : zk_classes(l.instance, *l.solution, resolve_seed(o))) {
    json j{{"game", to_string(l.game)}, {"class", k.name}, {"simulator", compare_transcripts(k.real, k.simulated, o.trials).to_json()}};
    if (k.leaky) j["leaky"] = compare_transcripts(k.real, k.leaky, o.trials).to_json();
    out.push_back(j);
  }
  emit(out);
  return kAccept;
}

int cmd_cost(const Options& o) {
  const auto points = measure_verifier_cost(o.n_min, o.n_max, o.per_n, resolve_seed(o));
  std::vector<double> xs, ys;
  json list = json::array();
  for (const auto& p : points) {
    xs.push_back(p.n);
    ys.push_back(p.operations);
    list.push_back({{"n", p.n}, {"operations", p.operations}});
  }
  emit({{"points", list}, {"loglog_slope", points.size() > 1 ? stats::loglog_slope(xs, ys) : 0.0}});
  return kAccept;
}

int cmd_serve(const Options& o) {
  const auto l = load(o);
  session::SessionConfig cfg{"pzk", l.instance, o.rounds, resolve_seed(o)};
  if (o.role == "referee") {
    if (o.listen.empty()) throw Error(Errc::InvalidArgument, "the referee needs --listen");
    session::Listener listener(o.listen);
    std::cerr << "listening on port " << listener.port() << '\n';
    const auto r = session::referee(listener, cfg);
    json j{{"verdict", r.accepted ? "accept" : "reject"}, {"rounds", r.rounds_run}};
    if (r.abort) j["abort"] = *r.abort;
    emit(j);
    return r.accepted ? kAccept : kReject;
  }
  if (o.connect.empty()) throw Error(Errc::InvalidArgument, "the " + o.role + " needs --connect");
  auto channel = session::connect_tcp(o.connect);
  session::SessionResult r;
  if (o.role == "prover") {
    r = session::prover(*channel, cfg, strategy_for(o, l));
  } else if (o.role == "verifier") {
    r = session::verifier(*channel, cfg);
    if (!o.transcript.empty()) {
      std::ofstream out(o.transcript, std::ios::binary);
      out << r.transcript.to_ndjson();
    }
  } else {
    throw Error(Errc::InvalidArgument, "unknown role '" + o.role + "'");
  }
  json j{{"verdict", r.accepted ? "accept" : "reject"}, {"rounds", r.rounds_run}};
  if (r.abort) j["abort"] = *r.abort;
  emit(j);
  return r.accepted ? kAccept : kReject;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--game", o.game, "akari | takuzu | kakuro | kenken")->required();
  app->add_option("--instance", o.instance, "puzzle file (default: the built-in example)");
  app->add_option("--seed", o.seed, "random seed (default: $PZK_SEED, else 0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physical zero-knowledge proofs for Akari, Takuzu, Kakuro and KenKen"};
  app.require_subcommand(1);
  Options o;

  auto* solve_cmd = app.add_subcommand("solve", "print the solutions of an instance");
  add_common(solve_cmd, o);
  solve_cmd->add_option("file", o.instance, "puzzle file");
  solve_cmd->add_option("--limit", o.limit, "stop after this many solutions");

  auto* validate_cmd = app.add_subcommand("validate", "check a solution against the rules");
  add_common(validate_cmd, o);
  validate_cmd->add_option("--solution", o.solution);

  auto* prove_cmd = app.add_subcommand("prove", "run K rounds of the protocol in process");
  add_common(prove_cmd, o);
  prove_cmd->add_option("--solution", o.solution);
  prove_cmd->add_option("--rounds", o.rounds, "security parameter K")->check(CLI::PositiveNumber);
  prove_cmd->add_option("--cheat", o.cheat, "play a cheating prover");
  prove_cmd->add_option("--transcript", o.transcript, "write the transcript here");

  auto* verify_cmd = app.add_subcommand("verify", "audit a recorded transcript");
  verify_cmd->add_option("--game", o.game);
  verify_cmd->add_option("--instance", o.instance);
  verify_cmd->add_option("--transcript", o.transcript)->required();
  auto* verify_rounds = verify_cmd->add_option("--rounds", o.rounds, "required number of rounds");

  auto* exp_cmd = app.add_subcommand("experiment", "statistical experiments");
  exp_cmd->require_subcommand(1);
  auto* sound_cmd = exp_cmd->add_subcommand("soundness", "escape rate of a cheating prover");
  add_common(sound_cmd, o);
  sound_cmd->add_option("--solution", o.solution);
  sound_cmd->add_option("--cheat", o.cheat)->required();
  sound_cmd->add_option("--trials", o.trials);
  sound_cmd->add_option("--threads", o.threads);
  auto* zk_cmd = exp_cmd->add_subcommand("zk", "real against simulated transcripts");
  add_common(zk_cmd, o);
  zk_cmd->add_option("--solution", o.solution);
  zk_cmd->add_option("--trials", o.trials);
  auto* cost_cmd = exp_cmd->add_subcommand("cost", "KenKen verifier operations against n");
  cost_cmd->add_option("--game", o.game)->check(CLI::IsMember({"kenken"}));
  cost_cmd->add_option("--seed", o.seed);
  cost_cmd->add_option("--n-min", o.n_min);
  cost_cmd->add_option("--n-max", o.n_max);
  cost_cmd->add_option("--per-n", o.per_n);

  auto* serve_cmd = app.add_subcommand("serve", "one party of a networked session");
  add_common(serve_cmd, o);
  serve_cmd->add_option("--role", o.role)->check(CLI::IsMember({"referee", "prover", "verifier"}));
  serve_cmd->add_option("--listen", o.listen, "host:port for the referee");
  serve_cmd->add_option("--connect", o.connect, "host:port of the referee");
  serve_cmd->add_option("--solution", o.solution);
  serve_cmd->add_option("--rounds", o.rounds)->check(CLI::PositiveNumber);
  serve_cmd->add_option("--cheat", o.cheat);
  serve_cmd->add_option("--transcript", o.transcript, "verifier: write the observed transcript here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  o.rounds_given = verify_rounds->count() > 0;

  try {
    if (*solve_cmd) return cmd_solve(o);
    if (*validate_cmd) return cmd_validate(o);
    if (*prove_cmd) return cmd_prove(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*sound_cmd) return cmd_soundness(o);
    if (*zk_cmd) return cmd_zk(o);
    if (*cost_cmd) return cmd_cost(o);
    if (*serve_cmd) return cmd_serve(o);
  } catch (const Error& e) {
    std::cerr << "pzk: " << e.what() << '\n';
    return e.code() == Errc::SessionFailure ? kSessionFailure : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pzk: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
