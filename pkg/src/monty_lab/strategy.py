"""Pure strategies for the at-once designs, with their text labels.

Label grammar::

    conie := digit {H|S}^(n-1)      e.g. "1SH": pick 1, switch to 2, hold against 3
    monte := digit^n, digit[p] != p e.g. "212": offer 2 when p=x=1, 1 when p=x=2, ...

Conie's letters are keyed by the offered door, doors other than ``x`` in
ascending order.  Labels use one character per door, so they only exist for
``n <= 9``; the strategy objects themselves work up to ``MAX_DOORS``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .game_core import AtOnce, DomainError, check_door, doors

HOLD = "H"
SWITCH = "S"


class ParseError(DomainError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True, order=True)
class ConieStrategy:
    n: int
    x: int
    responses: tuple[str, ...]

    def __post_init__(self):
        check_door(self.x, self.n, "x")
        if len(self.responses) != self.n - 1:
            raise DomainError(f"need {self.n - 1} responses, got {len(self.responses)}")
        if any(r not in (HOLD, SWITCH) for r in self.responses):
            raise DomainError(f"responses must be H or S: {self.responses}")

    @property
    def offers(self) -> list[int]:
        """Possible offered doors, in the order ``responses`` is keyed."""
        return [d for d in doors(self.n) if d != self.x]

    def response(self, y: int) -> str:
        if y == self.x:
            raise DomainError(f"door {y} is the first guess, never an offer")
        check_door(y, self.n, "offer")
        return self.responses[y - 1 if y < self.x else y - 2]

    def switches(self, y: int) -> bool:
        return self.response(y) == SWITCH

    @property
    def is_always_switch(self) -> bool:
        return all(r == SWITCH for r in self.responses)

    def __str__(self):
        return format_conie_label(self)


@dataclass(frozen=True, order=True)
class MonteStrategy:
    """Offer ``y(p)`` used when Conie's guess hits the prize at ``p``."""

    n: int
    offers: tuple[int, ...]

    def __post_init__(self):
        if len(self.offers) != self.n:
            raise DomainError(f"need {self.n} offers, got {len(self.offers)}")
        for p, y in enumerate(self.offers, 1):
            check_door(y, self.n, "offer")
            if y == p:
                raise DomainError(f"offer for p={p} cannot be door {p} itself")

    def offer(self, p: int) -> int:
        return self.offers[p - 1]

    def __str__(self):
        return format_monte_label(self)


def enumerate_conie(design: AtOnce) -> list[ConieStrategy]:
    n = design.n
    return [ConieStrategy(n, x, resp)
            for x in doors(n)
            for resp in product((HOLD, SWITCH), repeat=n - 1)]


def enumerate_monte(design: AtOnce) -> list[MonteStrategy]:
    n = design.n
    choices = [[y for y in doors(n) if y != p] for p in doors(n)]
    return [MonteStrategy(n, ys) for ys in product(*choices)]


def always_switch(x: int, n: int) -> ConieStrategy:
    return ConieStrategy(n, x, (SWITCH,) * (n - 1))


def _check_label_size(n: int) -> None:
    if not 3 <= n <= 9:
        raise DomainError(f"labels exist only for 3..9 doors, got {n}")


def format_conie_label(cs: ConieStrategy) -> str:
    _check_label_size(cs.n)
    return f"{cs.x}{''.join(cs.responses)}"


def parse_conie_label(text: str, n: int) -> ConieStrategy:
    _check_label_size(n)
    if len(text) != n:
        raise ParseError(f"expected {n} characters, got {len(text)}", text, len(text))
    if not text[0].isdigit() or not 1 <= int(text[0]) <= n:
        raise ParseError(f"first guess must be a door 1..{n}", text, 0)
    for i, c in enumerate(text[1:], 1):
        if c not in (HOLD, SWITCH):
            raise ParseError(f"expected H or S, got {c!r}", text, i)
    return ConieStrategy(n, int(text[0]), tuple(text[1:]))


def format_monte_label(ms: MonteStrategy) -> str:
    _check_label_size(ms.n)
    return "".join(map(str, ms.offers))


def parse_monte_label(text: str, n: int) -> MonteStrategy:
    _check_label_size(n)
    if len(text) != n:
        raise ParseError(f"expected {n} digits, got {len(text)}", text, len(text))
    for i, c in enumerate(text):
        if not c.isdigit() or not 1 <= int(c) <= n:
            raise ParseError(f"expected a door 1..{n}, got {c!r}", text, i)
        if int(c) == i + 1:
            raise ParseError(f"offer for p={i + 1} is the prize door itself", text, i)
    return MonteStrategy(n, tuple(int(c) for c in text))
