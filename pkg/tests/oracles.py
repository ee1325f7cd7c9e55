"""Brute-force references that share no code with the package.

Strategies are plain strings here: Conie "1SH", Monte "212".
"""
from fractions import Fraction
from itertools import permutations, product


def conie_labels(n):
    return [str(x) + "".join(r) for x in range(1, n + 1) for r in product("HS", repeat=n - 1)]


def monte_labels(n):
    digits = "".join(str(d) for d in range(1, n + 1))
    return ["".join(s) for s in product(digits, repeat=n)
            if all(int(c) != i for i, c in enumerate(s, 1))]


def play(conie, monte, p, n):
    """Literal play: Monte opens doors, Conie looks at the closed ones."""
    x = int(conie[0])
    keep = p if p != x else int(monte[p - 1])  # door Monte leaves closed
    opened = [d for d in range(1, n + 1) if d not in (x, keep)]
    assert p not in opened and x not in opened
    closed = [d for d in range(1, n + 1) if d not in opened and d != x]
    (y,) = closed
    others = [d for d in range(1, n + 1) if d != x]
    letter = conie[1 + others.index(y)]
    z = y if letter == "S" else x
    return z, z == p


def win_doors(conie, monte, n):
    return {p for p in range(1, n + 1) if play(conie, monte, p, n)[1]}


def never_final(conie, n):
    finals = {play(conie, m, p, n)[0] for m in monte_labels(n) for p in range(1, n + 1)}
    return set(range(1, n + 1)) - finals


def unlucky(conie, n):
    wins = [win_doors(conie, m, n) for m in monte_labels(n)]
    return {u for u in range(1, n + 1) if all(u not in w for w in wins)}


def covers(s2, s1, n):
    return all(win_doors(s1, m, n) <= win_doors(s2, m, n) for m in monte_labels(n))


def sequential_uniform_prob(final_rule, x, reveal_rule=None):
    """Exact win probability with uniform p and one-by-one uniform reveals.

    ``final_rule(x, r1, r2, offer) -> z``; ``reveal_rule(p, x)`` gives a fixed
    ordered pair and replaces the uniform reveals when supplied.
    """
    total = Fraction(0)
    for p in range(1, 5):
        if reveal_rule is not None:
            seqs = [reveal_rule(p, x)]
        else:
            seqs = list(permutations([d for d in range(1, 5) if d not in (p, x)], 2))
        for r1, r2 in seqs:
            (offer,) = [d for d in range(1, 5) if d not in (x, r1, r2)]
            if final_rule(x, r1, r2, offer) == p:
                total += Fraction(1, 4 * len(seqs))
    return total
