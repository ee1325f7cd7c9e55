"""Four-door sequential reveal used as a signal from Monte to Conie.

For ``x = 1`` Monte opens doors in the order::

    p=1 -> (2, 3)   p=2 -> (3, 4)   p=3 -> (4, 2)   p=4 -> (3, 2)

and for other ``x`` every label is shifted by ``x - 1`` (mod 4).  The ordered
pair always identifies ``p``, although the unordered pair does not
(``p=1`` and ``p=4`` both open doors 2 and 3 when ``x = 1``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .game_core import (DomainError, ProtocolViolation, Transcript, check_door,
                        play_sequential)

DOORS = (1, 2, 3, 4)

_BASE = {1: (2, 3), 2: (3, 4), 3: (4, 2), 4: (3, 2)}


class DecodeError(ProtocolViolation):
    """A reveal pair that the agreed signal function never produces."""


def f_base(p: int) -> tuple[int, int]:
    """Reveal order for prize ``p`` when Conie picked door 1."""
    check_door(p, 4, "p")
    return _BASE[p]


def rotate_door(d: int, k: int, n: int = 4) -> int:
    return (d - 1 + k) % n + 1


def f_encode(p: int, x: int) -> tuple[int, int]:
    check_door(p, 4, "p")
    check_door(x, 4, "x")
    k = x - 1
    r1, r2 = f_base(rotate_door(p, -k))
    return rotate_door(r1, k), rotate_door(r2, k)


def f_decode(x: int, r1: int, r2: int) -> int:
    return ROTATION_F.decode(x, r1, r2)


@dataclass(frozen=True)
class SignalFunction:
    """A table ``(p, x) -> (r1, r2)`` over doors 1..4.

    Construction only checks that the table is complete; whether it is a
    usable code is the job of :func:`verify_bijective`.
    """

    table: dict[tuple[int, int], tuple[int, int]] = field(hash=False)

    def __post_init__(self):
        keys = {(p, x) for p in DOORS for x in DOORS}
        if set(self.table) != keys:
            missing = sorted(keys - set(self.table))
            extra = sorted(set(self.table) - keys)
            raise DomainError(f"signal table incomplete: missing {missing}, unexpected {extra}")
        for k, pair in self.table.items():
            if len(pair) != 2:
                raise DomainError(f"entry {k} must be a pair of doors, got {pair!r}")
            for r in pair:
                check_door(r, 4, f"reveal for (p, x) = {k}")

    @classmethod
    def from_encoder(cls, encode) -> SignalFunction:
        return cls({(p, x): tuple(encode(p, x)) for p in DOORS for x in DOORS})

    def encode(self, p: int, x: int) -> tuple[int, int]:
        check_door(p, 4, "p")
        check_door(x, 4, "x")
        return self.table[p, x]

    def decode(self, x: int, r1: int, r2: int) -> int:
        check_door(x, 4, "x")
        hits = [p for p in DOORS if self.table[p, x] == (r1, r2)]
        if len(hits) != 1:
            why = "not a signal" if not hits else f"ambiguous between prizes {hits}"
            raise DecodeError(f"reveal order ({r1}, {r2}) with x={x} is {why}",
                              move=f"reveals ({r1}, {r2})")
        return hits[0]

    def to_json_obj(self) -> dict:
        return {str(x): {str(p): list(self.table[p, x]) for p in DOORS} for x in DOORS}

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj) -> SignalFunction:
        try:
            table = {(int(p), int(x)): tuple(int(r) for r in pair)
                     for x, row in obj.items() for p, pair in row.items()}
        except (AttributeError, TypeError, ValueError) as e:
            raise DomainError(f"malformed signal table: {e}") from None
        return cls(table)

    @classmethod
    def load(cls, path) -> SignalFunction:
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))


ROTATION_F = SignalFunction.from_encoder(f_encode)


@dataclass
class BijectivityReport:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


def verify_bijective(f: SignalFunction) -> BijectivityReport:
    violations = []
    for x in DOORS:
        seen: dict[tuple[int, int], int] = {}
        for p in DOORS:
            r1, r2 = f.table[p, x]
            if r1 == r2:
                violations.append(f"(p={p}, x={x}) -> ({r1}, {r2}): same door twice")
            for r in (r1, r2):
                if r in (p, x):
                    role = "prize" if r == p else "first guess"
                    violations.append(f"(p={p}, x={x}) -> ({r1}, {r2}): reveals the {role} {r}")
            if (r1, r2) in seen:
                violations.append(f"x={x}: p={seen[r1, r2]} and p={p} collide on ({r1}, {r2})")
            else:
                seen[r1, r2] = p
    return BijectivityReport(not violations, violations)


def unordered_collisions(f: SignalFunction, x: int) -> list[tuple[int, int]]:
    """Prize pairs whose reveals open the same two doors (in either order)."""
    return [(p, q) for p in DOORS for q in DOORS
            if p < q and set(f.table[p, x]) == set(f.table[q, x])]


def ordered_injective(f: SignalFunction, x: int) -> bool:
    return len({f.table[p, x] for p in DOORS}) == 4


# -- round-varying family --------------------------------------------------

@dataclass(frozen=True)
class RoundKey:
    """Relabelling ``d -> perm[d - 1]`` of the four doors."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(DOORS):
            raise DomainError(f"{self.perm} is not a permutation of 1..4")

    def __call__(self, d: int) -> int:
        return self.perm[d - 1]

    def inverse(self, d: int) -> int:
        return self.perm.index(d) + 1


ALL_KEYS = [RoundKey(p) for p in permutations(DOORS)]


def round_key(round_index: int) -> RoundKey:
    """Key both players derive from a shared round counter."""
    return ALL_KEYS[round_index % len(ALL_KEYS)]


def family_member(key: RoundKey, base: SignalFunction = ROTATION_F) -> SignalFunction:
    def encode(p, x):
        r1, r2 = base.table[key.inverse(p), key.inverse(x)]
        return key(r1), key(r2)
    return SignalFunction.from_encoder(encode)


# -- policies --------------------------------------------------------------

class _Keyed:
    def __init__(self, f: SignalFunction = ROTATION_F, rotating: bool = False):
        self.f = f
        self.rotating = rotating
        self._family = [family_member(k, f) for k in ALL_KEYS] if rotating else None

    def signal_for(self, round_index: int) -> SignalFunction:
        if self._family is None:
            return self.f
        return self._family[round_index % len(self._family)]


class FPlayer(_Keyed):
    """Monte revealing doors in the order the signal function prescribes."""

    name = "f-player"

    def reveal_distribution(self, p, x, revealed, round_index=0):
        pair = self.signal_for(round_index).encode(p, x)
        return {pair[len(revealed)]: Fraction(1)}


class Decoder(_Keyed):
    """Conie reading the prize location off the reveal order.

    With ``fallback="switch"`` an unrecognised reveal order makes her switch;
    with ``fallback=None`` it raises :class:`DecodeError`.
    """

    name = "decode"

    def __init__(self, f: SignalFunction = ROTATION_F, rotating: bool = False,
                 fallback: str | None = "switch"):
        super().__init__(f, rotating)
        if fallback not in ("switch", None):
            raise DomainError(f"unknown decode fallback {fallback!r}")
        self.fallback = fallback

    def decoded_prize(self, x, reveals, round_index=0) -> int | None:
        try:
            return self.signal_for(round_index).decode(x, *reveals)
        except DecodeError:
            if self.fallback is None:
                raise
            return None

    def final_distribution(self, x, reveals, offer, round_index=0):
        p = self.decoded_prize(x, reveals, round_index)
        return {x if p == x else offer: Fraction(1)}


def cooperative_play(p: int, x: int, f: SignalFunction = ROTATION_F) -> Transcript:
    return play_sequential(Decoder(f, fallback=None), FPlayer(f), p, x)


def no_universally_unlucky_door_check(f: SignalFunction = ROTATION_F) -> bool:
    """True iff the decoding strategy, for every first guess, wins at every prize door."""
    return all(cooperative_play(u, x, f).win for x in DOORS for u in DOORS)
