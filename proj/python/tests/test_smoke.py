import os

import pytest

import pzk

DATA = os.environ.get("PZK_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "tests", "data"))


def read(name):
    with open(os.path.join(DATA, name)) as f:
        return f.read()


def test_games_and_cheats():
    assert pzk.games() == ["akari", "takuzu", "kakuro", "kenken"]
    assert "deviant-envelope" in pzk.cheats("kakuro")


@pytest.mark.parametrize("game", ["akari", "takuzu", "kakuro", "kenken"])
def test_fixture_files_prove(game):
    run = pzk.prove(game, read(f"fig.{game}"), read(f"fig.{game}.sol"), rounds=10, seed=4)
    assert run.accepted and run.rounds == 10 and run.verdict == "accept"
    assert run.transcript[-1]["event"] == "VerdictRecorded"
    assert all("uid" not in e for e in run.transcript)


def test_runs_are_reproducible():
    a = pzk.prove("takuzu", rounds=3, seed=5)
    b = pzk.prove("takuzu", rounds=3, seed=5)
    assert a.transcript == b.transcript


def test_solve_and_validate():
    inst, sol = pzk.fixture("kakuro")
    sols = pzk.solve("kakuro", inst)
    assert len(sols) == 1
    assert pzk.validate("kakuro", inst, sols[0]) == []
    bad = sol.replace("1", "7", 1)
    assert pzk.validate("kakuro", inst, bad)


def test_cheat_rejected_and_soundness():
    assert not pzk.prove("kakuro", cheat="non-solution", rounds=20).accepted
    rep = pzk.soundness("kakuro", "deviant-envelope", trials=4000, seed=1)
    assert rep["exact"] == "1/4"
    assert abs(rep["escape_rate"] - 0.25) < 0.03


def test_errors_raise():
    with pytest.raises(pzk.PzkError):
        pzk.prove("chess")
    with pytest.raises(pzk.PzkError):
        pzk.prove("akari", rounds=0)
    with pytest.raises(ValueError):
        pzk.prove("kakuro", "X 4\\-\n-\\3 .\n")


def test_verifier_cost_increases():
    pts = pzk.verifier_cost(3, 5, 1, 0)
    assert [n for n, _ in pts] == [3, 4, 5]
    assert pts[0][1] < pts[-1][1]
