"""Exact and simulated win probabilities under randomized play.

Simulations draw from :class:`SplitMix64` so that a (seed, parameters) pair
reproduces the same result on any platform.  Per trial, draws happen in this
order: prize door, first guess (only when ``x`` is random), then whatever the
policies need in move order.  Trials are split into ``shards`` contiguous
blocks; block ``i`` uses the stream seeded with ``seed + i``.  The result
depends on ``shards`` but never on ``workers``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .analysis import SCHEMA, format_fraction, uniform_win_prob
from .game_core import (AtOnce, DomainError, check_distribution, check_reveal,
                        offered_door, play_at_once, play_sequential)
from .signaling import Decoder, FPlayer
from .strategy import ConieStrategy, MonteStrategy

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, k: int) -> int:
        """Uniform integer in ``[0, k)`` by rejection, without modulo bias."""
        if not 1 <= k <= 1 << 64:
            raise DomainError(f"randbelow bound {k} out of range")
        limit = ((1 << 64) // k) * k
        while True:
            v = self.next_u64()
            if v < limit:
                return v % k

    def choice_weighted(self, dist: dict[int, Fraction]) -> int:
        keys = sorted(dist)
        den = math.lcm(*(dist[k].denominator for k in keys))
        pick = self.randbelow(den)
        acc = 0
        for k in keys:
            acc += dist[k].numerator * (den // dist[k].denominator)
            if pick < acc:
                return k
        raise AssertionError("weights do not sum to 1")


# -- named sequential policies ---------------------------------------------

class SwitchAtLastMinute:
    """Always take the offered door once two doors are left closed."""

    name = "slm"

    def final_distribution(self, x, reveals, offer, round_index=0):
        return {offer: Fraction(1)}


class HoldAlways:
    name = "hold"

    def final_distribution(self, x, reveals, offer, round_index=0):
        return {x: Fraction(1)}


class UniformRandomMonte:
    """Each reveal uniform over the doors that are neither prize, guess nor open."""

    name = "uniform"

    def reveal_distribution(self, p, x, revealed, round_index=0):
        options = [d for d in range(1, 5) if d not in (p, x) and d not in revealed]
        return {d: Fraction(1, len(options)) for d in options}


CONIE_POLICIES = {"slm": SwitchAtLastMinute, "hold": HoldAlways, "decode": Decoder}
MONTE_POLICIES = {"uniform": UniformRandomMonte, "f": FPlayer}


def _period(*policies) -> int:
    return max(24 if getattr(pol, "rotating", False) else 1 for pol in policies)


# -- exact expectation -----------------------------------------------------

def exact_prob_sequential(conie, monte, x: int | None = 1, round_index: int = 0) -> Fraction:
    """Win probability with a uniform prize, expanding every random branch exactly.

    ``x=None`` averages over a uniform first guess as well.
    """
    if x is None:
        return sum((exact_prob_sequential(conie, monte, g, round_index) for g in range(1, 5)),
                   Fraction(0)) / 4

    def expand(p, revealed, weight):
        if len(revealed) == 2:
            offer = offered_door(x, revealed, 4)
            dist = check_distribution(
                conie.final_distribution(x, revealed, offer, round_index),
                f"{conie.name} choice")
            for d in dist:
                if d not in (x, offer):
                    raise DomainError(f"{conie.name} picks {d}, not {x} or {offer}")
            return weight * dist.get(p, Fraction(0))
        dist = check_distribution(monte.reveal_distribution(p, x, revealed, round_index),
                                  f"{monte.name} reveal")
        total = Fraction(0)
        for d, w in sorted(dist.items()):
            check_reveal(d, p, x, revealed, len(revealed))
            total += expand(p, revealed + (d,), weight * w)
        return total

    return sum((expand(p, (), Fraction(1, 4)) for p in range(1, 5)), Fraction(0))


def slm_exact(x: int = 1) -> Fraction:
    return exact_prob_sequential(SwitchAtLastMinute(), UniformRandomMonte(), x)


# -- simulation ------------------------------------------------------------

@dataclass(frozen=True)
class SimResult:
    design: str
    conie: str
    monte: str
    x: int | None
    trials: int
    seed: int
    wins: int
    exact: Fraction | None
    shards: int = 1
    fallbacks: int | None = None

    def __post_init__(self):
        if not 0 <= self.wins <= self.trials:
            raise DomainError(f"wins {self.wins} outside 0..{self.trials}")

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.wins, self.trials)

    @property
    def abs_error(self) -> Fraction | None:
        return None if self.exact is None else abs(self.frequency - self.exact)

    def sigma(self) -> float | None:
        """Binomial standard error of the frequency around the exact value."""
        if self.exact is None:
            return None
        q = float(self.exact)
        return math.sqrt(q * (1 - q) / self.trials)

    def to_json_obj(self) -> dict:
        out = {
            "schema": SCHEMA,
            "design": self.design,
            "conie": self.conie,
            "monte": self.monte,
            "x": "random" if self.x is None else self.x,
            "trials": self.trials,
            "seed": self.seed,
            "shards": self.shards,
            "wins": self.wins,
            "frequency": f"{float(self.frequency):.6f}",
            "exact": None if self.exact is None else format_fraction(self.exact),
            "abs_error": None if self.abs_error is None else format_fraction(self.abs_error),
        }
        if self.fallbacks is not None:
            out["decode_fallback"] = "switch"
            out["fallbacks"] = self.fallbacks
        return out


def _shard_bounds(trials: int, shards: int) -> list[tuple[int, int]]:
    base, extra = divmod(trials, shards)
    bounds, start = [], 0
    for i in range(shards):
        stop = start + base + (i < extra)
        bounds.append((start, stop))
        start = stop
    return bounds


def _run_shard(conie, monte, x, seed, start, stop):
    rng = SplitMix64(seed)
    wins = fallbacks = 0
    decoding = isinstance(conie, Decoder)
    period = _period(conie, monte)
    memo: dict = {}
    for t in range(start, stop):
        # keyed policies depend on the round only through t mod period
        r = t % period
        p = rng.randbelow(4) + 1
        guess = x if x is not None else rng.randbelow(4) + 1
        tr = play_sequential(conie, monte, p, guess, rng, round_index=r, memo=memo)
        wins += tr.win
        if decoding and conie.decoded_prize(guess, tr.reveals, r) is None:
            fallbacks += 1
    return wins, fallbacks


def simulate(conie, monte, x: int | None = 1, trials: int = 100_000, seed: int = 0,
             shards: int = 1, workers: int = 1) -> SimResult:
    """Monte Carlo estimate for a Sequential4 policy pair, with its exact value."""
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if not 1 <= shards <= trials:
        raise DomainError(f"shards must be in 1..{trials}")
    jobs = [(conie, monte, x, seed + i, a, b) for i, (a, b) in enumerate(_shard_bounds(trials, shards))]
    if workers > 1 and shards > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_shard, *zip(*jobs)))
    else:
        parts = [_run_shard(*job) for job in jobs]
    wins = sum(w for w, _ in parts)

    period = _period(conie, monte)
    per_round = [exact_prob_sequential(conie, monte, x, k) for k in range(period)]
    counts = [len(range(k, trials, period)) for k in range(period)]
    exact = sum((q * c for q, c in zip(per_round, counts)), Fraction(0)) / trials

    return SimResult(
        design="sequential-4",
        conie=conie.name + ("-rotating" if getattr(conie, "rotating", False) else ""),
        monte=monte.name + ("-rotating" if getattr(monte, "rotating", False) else ""),
        x=x, trials=trials, seed=seed, wins=wins, exact=exact, shards=shards,
        fallbacks=sum(f for _, f in parts) if isinstance(conie, Decoder) else None,
    )


def simulate_at_once(cs: ConieStrategy, ms: MonteStrategy, trials: int, seed: int) -> SimResult:
    """Uniform prize, fixed pure strategies in an at-once design."""
    if trials < 1:
        raise DomainError("trials must be at least 1")
    design = AtOnce(cs.n)
    rng = SplitMix64(seed)
    wins = sum(play_at_once(design, cs, ms, rng.randbelow(cs.n) + 1).win for _ in range(trials))
    return SimResult(design=design.name, conie=str(cs), monte=str(ms), x=cs.x, trials=trials,
                     seed=seed, wins=wins, exact=uniform_win_prob(cs, ms, design))
