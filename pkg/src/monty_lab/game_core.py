"""Doors, game designs, move legality and the deterministic play engine.

Doors are 1-based integers everywhere.  Two families of designs exist:

* ``AtOnce(n)``: Monte reveals ``n - 2`` doors in one go.  ``AtOnce(3)`` is
  the classic three-door game.
* ``Sequential4``: four doors, two of which are revealed one after the other
  so that the reveal order is visible to Conie.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import TYPE_CHECKING, Mapping, Protocol, Union

if TYPE_CHECKING:
    from .randomized import SplitMix64
    from .strategy import ConieStrategy, MonteStrategy

MAX_DOORS = 16


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ProtocolViolation(DomainError):
    """A policy produced a move the rules do not allow."""

    def __init__(self, message: str, move: str | None = None):
        super().__init__(message)
        self.move = move


def check_door(d: int, n: int, what: str = "door") -> int:
    if isinstance(d, bool) or not isinstance(d, int):
        raise DomainError(f"{what} must be an integer label, got {d!r}")
    if not 1 <= d <= n:
        raise DomainError(f"{what} {d} outside 1..{n}")
    return d


@dataclass(frozen=True)
class AtOnce:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise DomainError(f"door count must be an integer, got {self.n!r}")
        if not 3 <= self.n <= MAX_DOORS:
            raise DomainError(f"AtOnce needs 3 <= n <= {MAX_DOORS}, got {self.n}")

    @property
    def reveals(self) -> int:
        return self.n - 2

    @property
    def name(self) -> str:
        return f"at-once-{self.n}"


@dataclass(frozen=True)
class Sequential4:
    n: int = 4
    reveals: int = 2

    def __post_init__(self):
        if self.n != 4 or self.reveals != 2:
            raise DomainError("Sequential4 is fixed at 4 doors and 2 reveals")

    @property
    def name(self) -> str:
        return "sequential-4"


Design = Union[AtOnce, Sequential4]


def doors(n: int) -> range:
    return range(1, n + 1)


@dataclass(frozen=True)
class Transcript:
    """One complete play.  Construction validates every structural rule."""

    n: int
    p: int
    x: int
    reveals: tuple[int, ...]
    offer: int
    final: int

    def __post_init__(self):
        for name in ("p", "x", "offer", "final"):
            check_door(getattr(self, name), self.n, name)
        for r in self.reveals:
            check_door(r, self.n, "revealed door")
        if len(self.reveals) != self.n - 2:
            raise DomainError(f"expected {self.n - 2} reveals, got {len(self.reveals)}")
        if len(set(self.reveals)) != len(self.reveals):
            raise DomainError(f"repeated reveal in {self.reveals}")
        if self.p in self.reveals or self.x in self.reveals:
            raise DomainError(f"reveals {self.reveals} hit the prize or the first guess")
        if self.offer == self.x or self.offer in self.reveals:
            raise DomainError(f"offer {self.offer} is not the remaining closed door")
        if self.final not in (self.x, self.offer):
            raise DomainError(f"final choice {self.final} is neither x nor the offer")

    @property
    def win(self) -> bool:
        return self.final == self.p

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "x": self.x,
            "reveals": list(self.reveals),
            "offer": self.offer,
            "final": self.final,
            "win": self.win,
        }


def legal_reveal_sets(design: Design, p: int, x: int) -> list[tuple[int, ...]]:
    """Every legal reveal choice for Monte given prize ``p`` and guess ``x``.

    At-once choices are ascending tuples (unordered sets); sequential choices
    are ordered pairs, listed lexicographically.
    """
    n = design.n
    check_door(p, n, "p")
    check_door(x, n, "x")
    free = [d for d in doors(n) if d not in (p, x)]
    if isinstance(design, Sequential4):
        return list(permutations(free, 2))
    return list(combinations(free, n - 2))


def offered_door(x: int, reveals, n: int) -> int:
    """The one door left closed besides ``x``."""
    check_door(x, n, "x")
    revealed = set(reveals)
    if len(revealed) != len(tuple(reveals)):
        raise DomainError(f"repeated reveal in {tuple(reveals)}")
    for r in revealed:
        check_door(r, n, "revealed door")
    if len(revealed) != n - 2:
        raise DomainError(f"need {n - 2} reveals for {n} doors, got {len(revealed)}")
    if x in revealed:
        raise DomainError(f"first guess {x} cannot be revealed")
    (y,) = [d for d in doors(n) if d != x and d not in revealed]
    return y


def play_at_once(design: AtOnce, cs: ConieStrategy, ms: MonteStrategy, p: int) -> Transcript:
    n = design.n
    if cs.n != n or ms.n != n:
        raise DomainError(f"strategies for {cs.n}/{ms.n} doors used in a {n}-door design")
    check_door(p, n, "p")
    x = cs.x
    y = p if p != x else ms.offer(p)
    reveals = tuple(d for d in doors(n) if d not in (x, y))
    final = y if cs.switches(y) else x
    return Transcript(n, p, x, reveals, y, final)


# -- sequential play -------------------------------------------------------

Distribution = Mapping[int, Fraction]


class SequentialMontePolicy(Protocol):
    name: str

    def reveal_distribution(self, p: int, x: int, revealed: tuple[int, ...],
                            round_index: int = 0) -> Distribution: ...


class SequentialConiePolicy(Protocol):
    name: str

    def final_distribution(self, x: int, reveals: tuple[int, ...], offer: int,
                           round_index: int = 0) -> Distribution: ...


def check_distribution(dist: Distribution, what: str) -> dict[int, Fraction]:
    """Normalise a finitely supported distribution to exact fractions."""
    out = {}
    for k, v in dist.items():
        v = Fraction(v)
        if v < 0:
            raise DomainError(f"{what}: negative weight {v} on {k}")
        if v:
            out[k] = v
    total = sum(out.values(), Fraction(0))
    if total != 1:
        raise DomainError(f"{what}: weights sum to {total}, not 1")
    return out


def check_reveal(door: int, p: int, x: int, revealed: tuple[int, ...], step: int) -> None:
    move = f"reveal #{step + 1} = {door!r}"
    if isinstance(door, bool) or not isinstance(door, int) or not 1 <= door <= 4:
        raise ProtocolViolation(f"{move}: not a door label", move)
    if door == p:
        raise ProtocolViolation(f"{move}: reveals the prize", move)
    if door == x:
        raise ProtocolViolation(f"{move}: reveals the first guess", move)
    if door in revealed:
        raise ProtocolViolation(f"{move}: door already open", move)


def sample(dist: dict[int, Fraction], rng: SplitMix64 | None, what: str) -> int:
    if len(dist) == 1:
        return next(iter(dist))
    if rng is None:
        raise DomainError(f"{what} is random but no generator was supplied")
    return rng.choice_weighted(dist)


def play_sequential(conie: SequentialConiePolicy, monte: SequentialMontePolicy, p: int,
                    x: int = 1, rng: SplitMix64 | None = None, round_index: int = 0,
                    memo: dict | None = None) -> Transcript:
    """Play one Sequential4 round; illegal moves raise ``ProtocolViolation``.

    Randomness is drawn from ``rng`` in move order: first reveal, second
    reveal, final choice (only where the policy is actually random).
    ``memo`` caches validated policy distributions across calls, which is
    sound because policies are pure functions of their arguments.
    """
    check_door(p, 4, "p")
    check_door(x, 4, "x")
    revealed: tuple[int, ...] = ()
    for step in range(2):
        key = ("reveal", p, x, revealed, round_index)
        dist = memo.get(key) if memo is not None else None
        if dist is None:
            dist = check_distribution(
                monte.reveal_distribution(p, x, revealed, round_index), f"{monte.name} reveal")
            for d in dist:
                check_reveal(d, p, x, revealed, step)
            if memo is not None:
                memo[key] = dist
        revealed += (sample(dist, rng, f"{monte.name} reveal"),)
    offer = offered_door(x, revealed, 4)
    key = ("final", x, revealed, offer, round_index)
    dist = memo.get(key) if memo is not None else None
    if dist is None:
        dist = check_distribution(
            conie.final_distribution(x, revealed, offer, round_index), f"{conie.name} choice")
        for d in dist:
            if d not in (x, offer):
                move = f"final choice = {d!r}"
                raise ProtocolViolation(f"{move}: must be {x} or {offer}", move)
        if memo is not None:
            memo[key] = dist
    final = sample(dist, rng, f"{conie.name} choice")
    return Transcript(4, p, x, revealed, offer, final)
