"""Physical zero-knowledge proofs for Akari, Takuzu, Kakuro and KenKen."""

import json
from dataclasses import dataclass

from ._pzk import PzkError, cheats, fixture, games, solve, validate, verifier_cost
from . import _pzk

__all__ = ["PzkError", "ProofRun", "cheats", "fixture", "games", "prove", "soundness", "solve", "validate",
           "verifier_cost"]


@dataclass
class ProofRun:
    accepted: bool
    rounds: int
    transcript: list

    @property
    def verdict(self):
        return "accept" if self.accepted else "reject"


def prove(game, instance="", solution="", rounds=1, seed=0, cheat=""):
    """Runs `rounds` protocol rounds in process. Empty instance text means the built-in example."""
    accepted, run, ndjson = _pzk.prove(game, instance, solution, rounds, seed, cheat)
    return ProofRun(accepted, run, [json.loads(line) for line in ndjson.splitlines() if line])


def soundness(game, cheat, trials=1000, seed=0, instance="", solution=""):
    """Escape-rate report of a named cheating prover, as a dict."""
    return json.loads(_pzk.soundness(game, cheat, trials, seed, instance, solution))
