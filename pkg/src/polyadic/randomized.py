"""Random instances for property checks.

All generators take an explicit :class:`random.Random` so runs are reproducible.
"""

from __future__ import annotations

import functools
import itertools
import random
from typing import Iterator

from .core import HGTriple, associative_on, dornte_on, retract
from .free import FreePolyadicGroup, hg_triple
from .words import Alphabet, Homomorphism, Word, WordGroup

__all__ = ["random_word", "random_element", "random_triple", "property_failures", "iter_configs", "TRIPLE_FAMILIES"]

TRIPLE_FAMILIES = ("conjugation", "permutation", "extracted", "rank-one")


@functools.lru_cache(maxsize=None)
def _letter_choices(r: int) -> dict[int, list[int]]:
    """Allowed next letters, keyed by the previous letter (0 at the start)."""
    letters = [x for x in range(-r, r + 1) if x]
    return {last: [x for x in letters if x != -last] for last in [0] + letters}


def _random_letters(r: int, rng: random.Random, max_len: int) -> list[int]:
    table = _letter_choices(r)
    letters: list[int] = []
    last = 0
    for _ in range(rng.randint(0, max_len)):
        last = rng.choice(table[last])
        letters.append(last)
    return letters


def random_word(alphabet: Alphabet, rng: random.Random, max_len: int = 16) -> Word:
    return Word.from_letters(alphabet, _random_letters(len(alphabet), rng, max_len))


def _height_class(group) -> tuple[int, int] | None:
    """``(modulus, residue)`` when membership depends only on the height."""
    base = getattr(group, "base", group)
    if isinstance(base, WordGroup):
        return base.modulus, base.pivot.ht() % base.modulus
    if isinstance(base, FreePolyadicGroup):
        return base.n - 1, 1 % (base.n - 1)
    return None


def random_element(group, rng: random.Random, max_len: int = 16) -> Word:
    """Random word in the carrier of ``group`` (anything with ``alphabet`` and ``contains``)."""
    cls = _height_class(group)
    r = len(group.alphabet)
    while True:
        letters = _random_letters(r, rng, max_len)
        if cls is not None and (sum(1 if x > 0 else -1 for x in letters) - cls[1]) % cls[0]:
            continue
        w = Word.from_letters(group.alphabet, letters)
        if group.contains(w):
            return w


def _permutation_of_order_dividing(r: int, d: int, rng: random.Random) -> list[int]:
    """A permutation of ``range(r)`` whose cycle lengths all divide ``d``."""
    perm = list(range(r))
    items = list(range(r))
    rng.shuffle(items)
    lengths = [c for c in range(1, d + 1) if d % c == 0]
    pos = 0
    while pos < r:
        c = rng.choice([c for c in lengths if c <= r - pos])
        cycle = items[pos : pos + c]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            perm[a] = b
        pos += c
    return perm


def random_triple(rng: random.Random, rank: int, n: int, max_len: int = 4, family: str | None = None) -> HGTriple:
    """A valid Hosszu-Gluskin triple over a free base.

    Families: ``conjugation`` (theta = conjugation by c, b = c^(n-1)),
    ``permutation`` (theta permutes generators with order dividing n-1,
    b = 1), ``extracted`` (the free n-ary group's own triple) and
    ``rank-one`` (theta = +-1 on Z with b a power of the generator).
    """
    a = Alphabet.standard(rank)
    if family is None:
        family = rng.choice(TRIPLE_FAMILIES)
    if family == "conjugation":
        c = random_word(a, rng, max_len)
        theta = Homomorphism.conjugation(c)
        return HGTriple(WordGroup(a), n, theta, Homomorphism.conjugation(~c), c ** (n - 1))
    if family == "permutation":
        perm = _permutation_of_order_dividing(rank, n - 1, rng)
        inv = [0] * rank
        for i, p in enumerate(perm):
            inv[p] = i
        theta = Homomorphism(a, a, tuple(a.gen(p) for p in perm))
        theta_inv = Homomorphism(a, a, tuple(a.gen(p) for p in inv))
        return HGTriple(WordGroup(a), n, theta, theta_inv, a.identity())
    if family == "extracted":
        return hg_triple(FreePolyadicGroup(a, n))
    if family == "rank-one":
        a1 = Alphabet.standard(1)
        x = a1.gen(0)
        if (n - 1) % 2 == 0 and rng.random() < 0.5:
            flip = Homomorphism(a1, a1, (~x,))
            return HGTriple(WordGroup(a1), n, flip, flip, a1.identity())
        ident = Homomorphism.identity(a1)
        return HGTriple(WordGroup(a1), n, ident, ident, x ** rng.randint(-5, 5))
    raise ValueError(f"unknown family {family!r}")


def property_failures(rng: random.Random, n: int, rank: int, trials: int, max_len: int = 16,
                      solve: bool = True) -> dict[str, int]:
    """Failure counts of the associativity / Dornte / retract / solve checks.

    Each trial draws a fresh random triple (for ``eval_derived``) and fresh
    carrier words.  ``solve=False`` skips the equation-solving check.
    """
    g = FreePolyadicGroup(Alphabet.standard(rank), n)
    names = ["f_free", "skew_free", "eval_derived", "retract"] + (["solve"] if solve else [])
    fails = dict.fromkeys(names, 0)
    for _ in range(trials):
        xs = [random_element(g, rng, max_len) for _ in range(2 * n - 1)]
        if associative_on(g, xs) is not None:
            fails["f_free"] += 1
        x, y = xs[0], xs[1]
        if dornte_on(g, x, y) is not None or g.f(*([x] * (n - 1) + [g.skew(x)])) != x:
            fails["skew_free"] += 1
        t = random_triple(rng, rank, n)
        ts = [random_element(t, rng, max_len) for _ in range(2 * n - 1)]
        if associative_on(t, ts) is not None or dornte_on(t, ts[0], ts[1]) is not None:
            fails["eval_derived"] += 1
        for grp, (p, q, r) in ((g, xs[:3]), (t, ts[:3])):
            ret = retract(grp, xs[2] if grp is g else ts[2])
            e = ret.identity
            ok = (ret.mul(ret.mul(p, q), r) == ret.mul(p, ret.mul(q, r))
                  and ret.mul(p, e) == p and ret.mul(e, p) == p
                  and ret.mul(p, ret.inverse(p)) == e and ret.mul(ret.inverse(p), p) == e)
            if not ok:
                fails["retract"] += 1
        if not solve:
            continue
        pos = rng.randint(1, n)
        coeffs = list(ts[:n])
        rhs = ts[n]
        coeffs[pos - 1] = None
        sol = t.solve(pos, coeffs, rhs)
        coeffs[pos - 1] = sol
        if not t.contains(sol) or t.f(*coeffs) != rhs:
            fails["solve"] += 1
    return fails


def iter_configs(max_n: int = 5, max_rank: int = 3) -> Iterator[tuple[int, int]]:
    return itertools.product(range(3, max_n + 1), range(1, max_rank + 1))
