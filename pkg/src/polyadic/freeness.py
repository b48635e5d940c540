"""Freeness of (theta, b)-derived n-ary groups over free base groups.

``der_{theta,b}(G)`` with ``G`` free of rank ``k`` is free of rank ``s > 1``
exactly when ``s = (k-1)/(n-1) + 1`` and some ``v_1..v_{s-1}`` in ``G`` make
``{b} U {theta^j(v_i) : 0 <= j <= n-2}`` a basis of ``G``.  The rank condition
is arithmetic; the witness condition is searched for up to a length bound,
so a failed search is never reported as a refutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .core import HGTriple
from .free import FreePolyadicGroup, extract_hg
from .subgroups import BasisCertificate, CosetMap, NOT_GENERATING, is_basis_of_kernel
from .words import Alphabet, Homomorphism, Word, WordError, WordGroup, render

__all__ = [
    "FREE_WITH_WITNESS",
    "RANK_OBSTRUCTION",
    "OUT_OF_SCOPE",
    "NO_WITNESS",
    "SEARCH_CUTOFF",
    "RankCondition",
    "FreenessQuery",
    "FreenessReport",
    "check_rank_condition",
    "check_witnesses",
    "search_witnesses",
    "decide",
    "candidate_words",
    "isomorphism_certificate",
    "plain_free_triple",
]

FREE_WITH_WITNESS = "free-with-witness"
RANK_OBSTRUCTION = "not-free-rank-obstruction"
OUT_OF_SCOPE = "out-of-theorem-scope"
NO_WITNESS = "no-witness-found-up-to-L"
SEARCH_CUTOFF = "search-cutoff"

DEFAULT_MAX_CANDIDATES = 200_000


@dataclass(frozen=True)
class RankCondition:
    k: int
    n: int
    s: int | None
    verdict: str | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict is None


def check_rank_condition(k: int, n: int) -> RankCondition:
    if k < 1 or n < 3:
        raise ValueError(f"need k >= 1 and n >= 3, got k={k}, n={n}")
    if (k - 1) % (n - 1):
        return RankCondition(k, n, None, RANK_OBSTRUCTION,
                             f"k-1 = {k - 1} is not divisible by n-1 = {n - 1}")
    s = (k - 1) // (n - 1) + 1
    if s == 1:
        return RankCondition(k, n, 1, OUT_OF_SCOPE, "s = 1: the criterion only covers rank s > 1")
    return RankCondition(k, n, s)


@dataclass(frozen=True)
class FreenessQuery:
    triple: HGTriple
    candidates: tuple[Word, ...] | None = None
    bound: int = 1
    max_candidates: int = DEFAULT_MAX_CANDIDATES

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("search bound must be nonnegative")
        if self.candidates is not None:
            object.__setattr__(self, "candidates", tuple(self.candidates))

    @property
    def n(self) -> int:
        return self.triple.n

    @property
    def k(self) -> int:
        return self.triple.base.rank


@dataclass(frozen=True)
class FreenessReport:
    verdict: str
    k: int
    n: int
    s: int | None
    witnesses: tuple[Word, ...] = ()
    certificate: BasisCertificate | None = None
    detail: str = ""
    tried: int = 0

    @property
    def is_free(self) -> bool:
        return self.verdict == FREE_WITH_WITNESS

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "s": self.s,
            "k": self.k,
            "n": self.n,
            "witnesses": [render(w) for w in self.witnesses],
            "basis": [render(w) for w in self.certificate.generators] if self.certificate else None,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "detail": self.detail,
            "candidates_tried": self.tried,
        }


def witness_set(t: HGTriple, witnesses: Sequence[Word]) -> list[Word]:
    """``[b] + [theta^j(v_i) for i, j]`` in that order."""
    return [t.b] + [t.theta_powers[j](v) for v in witnesses for j in range(t.n - 1)]


def _basis_in_base(base: WordGroup, words: Sequence[Word]) -> BasisCertificate:
    c = CosetMap.height(base.alphabet, base.modulus) if base.modulus > 1 else \
        CosetMap(base.alphabet, 1, (0,) * len(base.alphabet))
    cert = is_basis_of_kernel([base.to_kernel(w) for w in words], c)
    # report the certificate on the words as given, not their kernel translates
    return BasisCertificate(tuple(words), cert.verdict, cert.rank, cert.index, cert.reason, cert.graph)


def check_witnesses(q: FreenessQuery, witnesses: Sequence[Word]) -> BasisCertificate:
    t = q.triple
    rc = check_rank_condition(q.k, q.n)
    if rc.s is None:
        raise ValueError(f"rank condition fails: {rc.reason}")
    if len(witnesses) != rc.s - 1:
        raise ValueError(f"expected {rc.s - 1} witnesses, got {len(witnesses)}")
    for v in witnesses:
        if v.alphabet != t.alphabet:
            raise WordError("witness not over the base alphabet")
    outside = [render(v) for v in witnesses if not t.base.contains(v)]
    words = witness_set(t, witnesses)
    if outside:
        return BasisCertificate(tuple(words), NOT_GENERATING, 0, None,
                                f"witnesses outside the base carrier: {', '.join(outside)}")
    if len(set(words)) != len(words):
        return BasisCertificate(tuple(words), NOT_GENERATING, 0, None, "repeated elements")
    return _basis_in_base(t.base, words)


def _words_of_length(alphabet: Alphabet, length: int) -> Iterator[Word]:
    """Reduced words of exactly ``length`` letters in shortlex order (x1 < x1^-1 < x2 < ...)."""
    order = [s * (g + 1) for g in range(len(alphabet)) for s in (1, -1)]

    def rec(prefix: list[int]) -> Iterator[list[int]]:
        if len(prefix) == length:
            yield prefix
            return
        for x in order:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + [x])

    for letters in rec([]):
        yield Word.from_letters(alphabet, letters)


def candidate_words(base: WordGroup, max_length: int) -> Iterator[tuple[int, Word]]:
    """Carrier words by length, then shortlex; yields ``(length, word)``."""
    for length in range(1, max_length + 1):
        for w in _words_of_length(base.alphabet, length):
            if base.contains(w):
                yield length, w


def search_witnesses(q: FreenessQuery) -> FreenessReport:
    """Breadth-first search for witnesses.

    Round ``l`` tries every tuple of candidates of length ``<= l`` that uses at
    least one word of length exactly ``l``, in product order.  The first
    passing tuple is returned, so results are deterministic.
    """
    t = q.triple
    rc = check_rank_condition(q.k, q.n)
    if not rc.ok:
        return FreenessReport(rc.verdict, q.k, q.n, rc.s, detail=rc.reason)
    s = rc.s
    pool: list[Word] = []
    tried = 0
    by_length: dict[int, list[Word]] = {}
    for length, w in candidate_words(t.base, q.bound):
        by_length.setdefault(length, []).append(w)
    for length in range(1, q.bound + 1):
        fresh = by_length.get(length, [])
        start = len(pool)
        pool.extend(fresh)
        if not fresh:
            continue
        for combo in itertools.product(range(len(pool)), repeat=s - 1):
            if max(combo) < start:
                continue
            if tried >= q.max_candidates:
                return FreenessReport(SEARCH_CUTOFF, q.k, q.n, s, tried=tried,
                                      detail=f"stopped after {tried} candidate tuples at length {length}")
            tried += 1
            ws = [pool[i] for i in combo]
            if len(set(ws)) != len(ws):
                continue
            cert = check_witnesses(q, ws)
            if cert.is_basis:
                return FreenessReport(FREE_WITH_WITNESS, q.k, q.n, s, tuple(ws), cert, tried=tried)
    return FreenessReport(NO_WITNESS, q.k, q.n, s, tried=tried,
                          detail=f"no witness tuple among words of length <= {q.bound}")


def decide(q: FreenessQuery) -> FreenessReport:
    rc = check_rank_condition(q.k, q.n)
    if not rc.ok:
        return FreenessReport(rc.verdict, q.k, q.n, rc.s, detail=rc.reason)
    if q.candidates is None:
        return search_witnesses(q)
    cert = check_witnesses(q, q.candidates)
    if cert.is_basis:
        return FreenessReport(FREE_WITH_WITNESS, q.k, q.n, rc.s, q.candidates, cert, tried=1)
    return FreenessReport(NO_WITNESS, q.k, q.n, rc.s, q.candidates, cert, tried=1,
                          detail=f"given witnesses fail: {cert.reason}")


# ---------------------------------------------------------------------------
# certificates and fixtures


@dataclass(frozen=True)
class IsomorphismCertificate:
    """Generator map from a certified base basis to the free n-ary group on ``s`` letters."""

    source: tuple[Word, ...]
    target: tuple[Word, ...]
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def isomorphism_certificate(t: HGTriple, witnesses: Sequence[Word]) -> IsomorphismCertificate:
    """Check that ``b -> u^n``, ``theta^j(v_i) -> u^j v_i u^-j`` intertwines the two triples.

    The map sends the certified basis onto the basis B'' of the free n-ary
    group, so it is an isomorphism of base groups; it carries ``b`` to ``b'``,
    and compatibility with theta is checked on every basis element (using
    ``theta^(n-1)(v) = b v b^-1`` for the last element of each orbit).
    """
    n, s = t.n, len(witnesses) + 1
    target = extract_hg(FreePolyadicGroup.standard(s, n))
    t2 = target.triple
    G, G2 = t.base, t2.base
    u = target.group.u
    vs = target.group.alphabet.gens()[1:]
    src = witness_set(t, witnesses)
    img = [t2.b] + [u**j * v * u**-j for v in vs for j in range(n - 1)]
    checks = {
        "source is a basis": check_witnesses(FreenessQuery(t), list(witnesses)).is_basis,
        "target is a basis": _basis_in_base(G2, img).is_basis,
        "b fixed": t.theta(t.b) == t.b and t2.theta(t2.b) == t2.b,
    }
    ok = True
    for i in range(s - 1):
        for j in range(n - 1):
            e, a = src[1 + i * (n - 1) + j], img[1 + i * (n - 1) + j]
            if j < n - 2:
                ok &= t.theta(e) == src[2 + i * (n - 1) + j]
                ok &= t2.theta(a) == img[2 + i * (n - 1) + j]
            else:
                first, first_img = src[1 + i * (n - 1)], img[1 + i * (n - 1)]
                ok &= t.theta(e) == G.product([t.b, first, G.inv(t.b)])
                ok &= t2.theta(a) == G2.product([t2.b, first_img, G2.inv(t2.b)])
    checks["theta intertwined"] = ok
    return IsomorphismCertificate(tuple(src), tuple(img), checks)


def plain_free_triple(s: int, n: int) -> HGTriple:
    """A free ``der_{theta,b}`` on the plain free group of rank ``(s-1)(n-1)+1``.

    Generators ``b, y{i}_{j}`` with ``theta(y{i}_{j}) = y{i}_{j+1}`` and
    ``theta(y{i}_{n-2}) = b y{i}_0 b^-1``; the witnesses are ``y{i}_0``.
    """
    names = ["b"] + [f"y{i}x{j}" for i in range(1, s) for j in range(n - 1)]
    a = Alphabet(tuple(names))
    bw = a["b"]
    th, thi = [bw], [bw]
    for i in range(1, s):
        for j in range(n - 1):
            th.append(a[f"y{i}x{j + 1}"] if j < n - 2 else bw * a[f"y{i}x0"] * ~bw)
            thi.append(a[f"y{i}x{j - 1}"] if j > 0 else ~bw * a[f"y{i}x{n - 2}"] * bw)
    return HGTriple(WordGroup(a), n, Homomorphism(a, a, tuple(th)), Homomorphism(a, a, tuple(thi)), bw)
