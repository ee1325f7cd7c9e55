"""Exit criteria, one test per criterion (``test_ac<k>_...``)."""
import json
import time
from fractions import Fraction

import pytest

from monty_lab.analysis import (covers, never_final_doors, unlucky_doors, uniform_win_prob,
                                win_matrix, win_set)
from monty_lab.cli import main
from monty_lab.game_core import AtOnce
from monty_lab.randomized import (SwitchAtLastMinute, UniformRandomMonte, exact_prob_sequential,
                                  simulate, slm_exact)
from monty_lab.signaling import (ALL_KEYS, ROTATION_F, cooperative_play, f_decode, f_encode,
                                 family_member, ordered_injective, unordered_collisions)
from monty_lab.strategy import (always_switch, enumerate_conie, enumerate_monte,
                                parse_conie_label)

import oracles


def test_ac1_conie_strategy_counts():
    start = time.perf_counter()
    n3 = len(enumerate_conie(AtOnce(3)))
    n4 = len(enumerate_conie(AtOnce(4)))
    assert time.perf_counter() - start < 1.0
    assert (n3, n4) == (12, 32)


def test_ac2_win_case_reproduction():
    d = AtOnce(3)
    one_ss = parse_conie_label("1SS", 3)
    one_hs = parse_conie_label("1HS", 3)
    monte = enumerate_monte(d)
    assert len(monte) == 8
    assert all(win_set(one_ss, ms, d).doors == [2, 3] for ms in monte)
    offers_2 = [ms for ms in monte if ms.offer(1) == 2]
    offers_3 = [ms for ms in monte if ms.offer(1) == 3]
    assert len(offers_2) == len(offers_3) == 4
    assert all(win_set(one_hs, ms, d).doors == [1, 3] for ms in offers_2)
    assert all(win_set(one_hs, ms, d).doors == [3] for ms in offers_3)


def test_ac3_unlucky_door_theorem():
    start = time.perf_counter()
    sizes, bad = [], []
    for n in (3, 4, 5, 6):
        d = AtOnce(n)
        strategies = enumerate_conie(d)
        sizes.append(len(strategies))
        for cs in strategies:
            nf, ud = never_final_doors(cs, d), unlucky_doors(cs, d)
            if not nf or not nf <= ud:
                bad.append((n, str(cs)))
    elapsed = time.perf_counter() - start
    assert sizes == [12, 32, 80, 192]
    assert bad == []
    assert elapsed < 10.0
    # full Monte enumeration, independent code path
    for n in (3, 4):
        for label in oracles.conie_labels(n):
            nf = oracles.never_final(label, n)
            assert nf and nf <= oracles.unlucky(label, n)


def test_ac4_dominance_by_always_switch():
    bad = []
    for n in (3, 4, 5, 6):
        d = AtOnce(n)
        for cs in enumerate_conie(d):
            for u in unlucky_doors(cs, d):
                if not covers(always_switch(u, n), cs, d):
                    bad.append((n, str(cs), u))
    assert bad == []
    for n in (3, 4):
        for label in oracles.conie_labels(n):
            for u in oracles.unlucky(label, n):
                assert oracles.covers(f"{u}" + "S" * (n - 1), label, n)


@pytest.mark.parametrize("n, ceiling", [(3, Fraction(2, 3)), (4, Fraction(3, 4))])
def test_ac5_probability_ceilings(n, ceiling):
    d = AtOnce(n)
    m = win_matrix(d)
    best = max(Fraction(len(m.cell(i, j)), n)
               for i in range(len(m.rows)) for j in range(len(m.cols)))
    assert best == ceiling
    for x in range(1, n + 1):
        s = always_switch(x, n)
        assert all(uniform_win_prob(s, ms, d) == ceiling for ms in m.cols)


def test_ac6_signaling_correctness():
    assert [f_encode(p, 1) for p in (1, 2, 3, 4)] == [(2, 3), (3, 4), (4, 2), (3, 2)]
    assert all(f_decode(x, *f_encode(p, x)) == p for p in range(1, 5) for x in range(1, 5))
    wins = sum(cooperative_play(p, x, family_member(key)).win
               for key in ALL_KEYS for p in range(1, 5) for x in range(1, 5))
    assert len(ALL_KEYS) == 24
    assert wins == 384


def test_ac7_sequential_vs_at_once_separation():
    assert set(f_encode(1, 1)) == set(f_encode(4, 1)) == {2, 3}
    assert f_encode(1, 1) != f_encode(4, 1)
    assert (1, 4) in unordered_collisions(ROTATION_F, 1)
    assert all(ordered_injective(ROTATION_F, x) for x in range(1, 5))


def test_ac8_switch_at_last_minute(capsys):
    assert slm_exact(1) == Fraction(3, 4)
    assert exact_prob_sequential(SwitchAtLastMinute(), UniformRandomMonte(), 1) == Fraction(3, 4)
    res = simulate(SwitchAtLastMinute(), UniformRandomMonte(), x=1, trials=100_000, seed=42)
    assert res.sigma() * 4 == pytest.approx(0.0055, abs=5e-5)
    assert abs(float(res.frequency) - 0.75) <= 4 * res.sigma()
    argv = ["simulate", "slm", "--trials", "100000", "--seed", "42", "--format", "json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["wins"] == res.wins


def test_ac9_monte_count_discrepancy_reported(capsys):
    assert main(["enumerate", "--doors", "3", "--side", "monte", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["count"] == 8
    assert obj["published_count"] == 6
    assert obj["note"]
