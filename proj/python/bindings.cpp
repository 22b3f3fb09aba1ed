// Python module: text in, text or JSON strings out. The package wrapper
// decodes the JSON.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pzk/error.hpp"
#include "pzk/harness.hpp"

namespace py = pybind11;
using namespace pzk;

namespace {

struct Loaded {
  AnyInstance inst;
  std::optional<AnySolution> sol;
};

/// Empty instance text means the built-in example, with its solution.
Loaded load(const std::string& game, const std::string& instance, const std::string& solution) {
  const Game g = game_from_string(game);
  Loaded l{parse_instance(g, instance.empty() ? std::string(fixture_instance_text(g)) : instance), {}};
  if (!solution.empty()) l.sol = parse_solution(l.inst, solution);
  else if (instance.empty()) l.sol = parse_solution(l.inst, fixture_solution_text(g));
  return l;
}

AnySolution reference(const Loaded& l) {
  if (l.sol) return *l.sol;
  const auto sols = solve(l.inst, 1);
  if (sols.empty()) throw Error(Errc::InvalidArgument, "the instance has no solution; pass one");
  return sols.front();
}

}  // namespace

PYBIND11_MODULE(_pzk, m) {
  m.doc() = "Physical zero-knowledge proofs for pencil puzzles";

  static py::exception<Error> error(m, "PzkError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  m.def("games", [] {
    std::vector<std::string> out;
    for (Game g : kGames) out.emplace_back(to_string(g));
    return out;
  });
  m.def("cheats", [](const std::string& game) { return cheat_names(game_from_string(game)); }, py::arg("game"));
  m.def(
      "fixture",
      [](const std::string& game) {
        const Game g = game_from_string(game);
        return std::pair<std::string, std::string>(fixture_instance_text(g), fixture_solution_text(g));
      },
      py::arg("game"));

  m.def(
      "solve",
      [](const std::string& game, const std::string& instance, std::size_t limit) {
        const auto l = load(game, instance, "");
        std::vector<std::string> out;
        for (const auto& s : solve(l.inst, limit)) out.push_back(serialize(l.inst, s));
        return out;
      },
      py::arg("game"), py::arg("instance"), py::arg("limit") = 2);

  m.def(
      "validate",
      [](const std::string& game, const std::string& instance, const std::string& solution) {
        const auto l = load(game, instance, solution);
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : validate(l.inst, *l.sol)) out.emplace_back(v.rule, v.location);
        return out;
      },
      py::arg("game"), py::arg("instance"), py::arg("solution"));

  m.def(
      "prove",
      [](const std::string& game, const std::string& instance, const std::string& solution, std::size_t rounds,
         std::uint64_t seed, const std::string& cheat) {
        const auto l = load(game, instance, solution);
        Strategy s;
        if (!cheat.empty()) {
          s = make_cheat(l.inst, reference(l), cheat).strategy;
        } else {
          if (!l.sol) throw Error(Errc::InvalidArgument, "a solution is required");
          s = honest_strategy(l.inst, *l.sol);
        }
        ProtocolResult r;
        {
          py::gil_scoped_release release;
          r = run_protocol(s, {game_of(l.inst), rounds, seed});
        }
        return py::make_tuple(r.accepted, r.rounds_run, r.transcript.to_ndjson());
      },
      py::arg("game"), py::arg("instance") = "", py::arg("solution") = "", py::arg("rounds") = 1,
      py::arg("seed") = 0, py::arg("cheat") = "");

  m.def(
      "soundness",
      [](const std::string& game, const std::string& cheat, std::size_t trials, std::uint64_t seed,
         const std::string& instance, const std::string& solution) {
        const auto l = load(game, instance, solution);
        const auto plan = make_cheat(l.inst, reference(l), cheat);
        py::gil_scoped_release release;
        return estimate_soundness(plan, trials, seed).to_json().dump();
      },
      py::arg("game"), py::arg("cheat"), py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("instance") = "",
      py::arg("solution") = "");

  m.def(
      "verifier_cost",
      [](int n_min, int n_max, std::size_t per_n, std::uint64_t seed) {
        std::vector<std::pair<int, double>> out;
        for (const auto& p : measure_verifier_cost(n_min, n_max, per_n, seed)) out.emplace_back(p.n, p.operations);
        return out;
      },
      py::arg("n_min") = 3, py::arg("n_max") = 8, py::arg("per_n") = 2, py::arg("seed") = 0);
}
