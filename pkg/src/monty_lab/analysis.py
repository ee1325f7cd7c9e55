"""Win sets, unlucky doors, covering and exact probabilities for at-once games.

When Conie's guess misses the prize Monte's move is forced, so the outcome at
prize door ``p`` depends on Monte's strategy only through ``y(p)``.  The
exhaustive checks below therefore range over ``(p, y(p))`` pairs, which is
the same as ranging over every Monte strategy but costs ``n**2`` plays per
Conie strategy instead of ``n * (n-1)**n``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .game_core import AtOnce, DomainError, doors, play_at_once
from .strategy import (ConieStrategy, MonteStrategy, always_switch, enumerate_conie,
                       enumerate_monte)

SCHEMA = "monty-lab/v1"
MATRIX_MAX_DOORS = 6


class SizeError(DomainError):
    pass


@dataclass(frozen=True)
class WinSet:
    """Bit ``p - 1`` of ``mask`` is set iff Conie wins with the prize behind ``p``."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < 1 << self.n:
            raise DomainError(f"mask {self.mask:#x} has bits outside doors 1..{self.n}")

    @classmethod
    def of(cls, n: int, winning_doors) -> WinSet:
        mask = 0
        for d in winning_doors:
            mask |= 1 << (d - 1)
        return cls(n, mask)

    @property
    def doors(self) -> list[int]:
        return [d for d in doors(self.n) if self.mask >> (d - 1) & 1]

    def __contains__(self, d: int) -> bool:
        return bool(self.mask >> (d - 1) & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def __le__(self, other: WinSet) -> bool:
        return self.mask & ~other.mask == 0

    def bitstring(self) -> str:
        return "".join("1" if d in self else "0" for d in doors(self.n))


def _representative_monte(n: int, p: int, y: int) -> MonteStrategy:
    # any strategy with y(p) = y; the other entries are never consulted at p
    return MonteStrategy(n, tuple(y if q == p and y != p else (2 if q == 1 else 1)
                                  for q in doors(n)))


@lru_cache(maxsize=4096)
def outcome_table(cs: ConieStrategy) -> dict[int, dict[int, tuple[int, bool]]]:
    """``table[p][y] = (final door, win)`` for every offer ``y`` Monte can make at ``p``."""
    design = AtOnce(cs.n)
    table = {}
    for p in doors(cs.n):
        offers = [p] if p != cs.x else [y for y in doors(cs.n) if y != p]
        table[p] = {}
        for y in offers:
            t = play_at_once(design, cs, _representative_monte(cs.n, p, y), p)
            table[p][y] = (t.final, t.win)
    return table


def _check(cs: ConieStrategy, design: AtOnce) -> None:
    if not isinstance(design, AtOnce):
        raise DomainError(f"{design} is not an at-once design")
    if cs.n != design.n:
        raise DomainError(f"strategy for {cs.n} doors used with {design.n} doors")


def win_set(cs: ConieStrategy, ms: MonteStrategy, design: AtOnce) -> WinSet:
    return WinSet.of(design.n, (p for p in doors(design.n)
                                if play_at_once(design, cs, ms, p).win))


def never_final_doors(cs: ConieStrategy, design: AtOnce) -> set[int]:
    _check(cs, design)
    finals = {final for row in outcome_table(cs).values() for final, _ in row.values()}
    return set(doors(design.n)) - finals


def unlucky_doors(cs: ConieStrategy, design: AtOnce) -> set[int]:
    _check(cs, design)
    return {p for p, row in outcome_table(cs).items()
            if not any(win for _, win in row.values())}


def covers(s2: ConieStrategy, s1: ConieStrategy, design: AtOnce) -> bool:
    """True iff ``s2`` wins in every (Monte strategy, prize) case where ``s1`` wins."""
    _check(s1, design)
    _check(s2, design)
    t1, t2 = outcome_table(s1), outcome_table(s2)
    return not any(_win_at(t1, s1, p, y) and not _win_at(t2, s2, p, y)
                   for p in doors(design.n) for y in doors(design.n) if y != p)


def strictly_better(s2: ConieStrategy, s1: ConieStrategy, design: AtOnce) -> bool:
    """True iff some (Monte strategy, prize) case is won by ``s2`` and lost by ``s1``."""
    _check(s1, design)
    _check(s2, design)
    t1, t2 = outcome_table(s1), outcome_table(s2)
    return any(_win_at(t2, s2, p, y) and not _win_at(t1, s1, p, y)
               for p in doors(design.n) for y in doors(design.n) if y != p)


def _win_at(table, cs: ConieStrategy, p: int, y: int) -> bool:
    # y is Monte's y(p); it only matters when p == x
    row = table[p]
    return row[y][1] if p == cs.x else row[p][1]


def max_wins(cs: ConieStrategy, design: AtOnce) -> int:
    """Largest number of prize doors won against any single Monte strategy."""
    _check(cs, design)
    return sum(any(w for _, w in row.values()) for row in outcome_table(cs).values())


def min_wins(cs: ConieStrategy, design: AtOnce) -> int:
    """Number of prize doors won against Monte's least favourable strategy."""
    _check(cs, design)
    return sum(all(w for _, w in row.values()) for row in outcome_table(cs).values())


def uniform_win_prob(cs: ConieStrategy, ms: MonteStrategy, design: AtOnce) -> Fraction:
    return Fraction(len(win_set(cs, ms, design)), design.n)


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# -- the full matrix -------------------------------------------------------

@dataclass
class WinMatrix:
    design: AtOnce
    rows: list[ConieStrategy]
    cols: list[MonteStrategy]
    masks: np.ndarray  # shape (len(rows), len(cols)), integer win-set masks

    def cell(self, i: int, j: int) -> WinSet:
        return WinSet(self.design.n, int(self.masks[i, j]))

    def row_of(self, cs: ConieStrategy) -> int:
        return self.rows.index(cs)

    def col_of(self, ms: MonteStrategy) -> int:
        return self.cols.index(ms)

    def to_csv(self) -> str:
        n = self.design.n
        bits = [WinSet(n, m).bitstring() for m in range(1 << n)]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["conie"] + [str(ms) for ms in self.cols])
        for cs, row in zip(self.rows, self.masks.tolist()):
            w.writerow([str(cs)] + [bits[m] for m in row])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "win-matrix",
            "design": self.design.name,
            "doors": self.design.n,
            "conie": [str(cs) for cs in self.rows],
            "monte": [str(ms) for ms in self.cols],
            "cells": [[self.cell(i, j).doors for j in range(len(self.cols))]
                      for i in range(len(self.rows))],
        }


def win_matrix(design: AtOnce) -> WinMatrix:
    if not isinstance(design, AtOnce):
        raise DomainError(f"{design} is not an at-once design")
    if design.n > MATRIX_MAX_DOORS:
        raise SizeError(f"win matrix limited to {MATRIX_MAX_DOORS} doors, got {design.n}")
    n = design.n
    rows = enumerate_conie(design)
    cols = enumerate_monte(design)
    offers = np.array([ms.offers for ms in cols], dtype=np.int64)  # (cols, n)
    masks = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, cs in enumerate(rows):
        table = outcome_table(cs)
        # win[p - 1, y - 1]; only column y = y(p) is read for each p
        win = np.zeros((n, n), dtype=np.int64)
        for p, row in table.items():
            for y in doors(n):
                if y != p:
                    win[p - 1, y - 1] = _win_at(table, cs, p, y)
        for p in doors(n):
            masks[i] |= win[p - 1, offers[:, p - 1] - 1] << (p - 1)
    return WinMatrix(design, rows, cols, masks)


# -- theorem suite ---------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    counterexamples: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "counterexamples": self.counterexamples}


@dataclass
class TheoremReport:
    design: AtOnce
    checks: list[Check]
    max_probability: Fraction
    attains_max_somewhere: list[str]
    attains_max_always: list[str]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "design": self.design.name,
            "doors": self.design.n,
            "passed": self.passed,
            "max_uniform_prob": format_fraction(self.max_probability),
            "attains_max_against_some_monte": self.attains_max_somewhere,
            "attains_max_against_every_monte": self.attains_max_always,
            "checks": [c.to_dict() for c in self.checks],
        }

    def lines(self) -> list[str]:
        out = [f"{self.design.name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            out.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
            out.extend(f"      counterexample: {e}" for e in c.counterexamples)
        out.append(f"  max uniform prob = {format_fraction(self.max_probability)}")
        out.append(f"  attain it against every Monte strategy: {', '.join(self.attains_max_always)}")
        out.append(f"  attain it against some Monte strategy: {', '.join(self.attains_max_somewhere)}")
        return out


def _label(cs: ConieStrategy) -> str:
    if cs.n <= 9:
        return str(cs)
    return f"x={cs.x} {''.join(cs.responses)}"


def verify_theorem_suite(design: AtOnce) -> TheoremReport:
    if design.n > MATRIX_MAX_DOORS:
        raise SizeError(f"theorem suite limited to {MATRIX_MAX_DOORS} doors, got {design.n}")
    n = design.n
    strategies = enumerate_conie(design)
    ceiling = Fraction(n - 1, n)

    bad_unlucky = []
    bad_cover = []
    best = 0
    somewhere, always = [], []
    for cs in strategies:
        nf = never_final_doors(cs, design)
        ud = unlucky_doors(cs, design)
        if not nf or not nf <= ud:
            bad_unlucky.append(f"{_label(cs)} never-final={sorted(nf)} unlucky={sorted(ud)}")
        for u in sorted(ud):
            if not covers(always_switch(u, n), cs, design):
                bad_cover.append(f"{_label(always_switch(u, n))} does not cover {_label(cs)}")
        hi, lo = max_wins(cs, design), min_wins(cs, design)
        best = max(best, hi)
        if Fraction(hi, n) == ceiling:
            somewhere.append(_label(cs))
        if Fraction(lo, n) == ceiling:
            always.append(_label(cs))

    bad_switch = [_label(always_switch(x, n)) for x in doors(n)
                  if Fraction(min_wins(always_switch(x, n), design), n) != ceiling]
    max_prob = Fraction(best, n)
    checks = [
        Check("unlucky door",
              not bad_unlucky,
              f"{len(strategies)} strategies, never-final doors nonempty and unlucky",
              bad_unlucky),
        Check("dominance",
              not bad_cover,
              "every strategy covered by always-switch at each of its unlucky doors",
              bad_cover),
        Check("probability ceiling",
              max_prob == ceiling,
              f"max uniform prob = {format_fraction(max_prob)}, "
              f"expected {format_fraction(ceiling)}",
              [] if max_prob == ceiling else [f"max {format_fraction(max_prob)}"]),
        Check("always-switch attains ceiling",
              not bad_switch,
              f"all {n} always-switch strategies win {n - 1}/{n} against every Monte strategy",
              bad_switch),
    ]
    return TheoremReport(design, checks, max_prob, somewhere, always)
