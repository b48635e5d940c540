"""The free n-ary group on a finite alphabet and its Post cover.

The free polyadic group on ``X = (u, v1, ..., v_{s-1})`` is realized inside
the free group F(X) as the words of height ``1 mod (n-1)`` with the n-ary
product given by concatenation.  F(X) itself is the Post cover; the kernel
``H`` of height mod ``n-1`` is the normal subgroup whose coset ``H u`` is the
carrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import HGTriple, PolyadicError, Retract, _Polyadic, centered_retract
from .subgroups import (
    BasisCertificate,
    CosetMap,
    Transversal,
    is_basis_of_kernel,
    nielsen_replace,
    schreier_basis,
    schreier_transversal,
)
from .words import Alphabet, Homomorphism, Word, WordError, WordGroup, render

__all__ = [
    "FreePolyadicGroup",
    "PostCover",
    "ExtractedHG",
    "BasisPipeline",
    "CoverExtension",
    "f_free",
    "skew_free",
    "extract_hg",
    "hg_triple",
    "basis_pipeline",
    "cover_extend",
    "coset_of",
]


@dataclass(frozen=True)
class FreePolyadicGroup(_Polyadic):
    alphabet: Alphabet
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise PolyadicError(f"arity must be at least 3, got {self.n}")

    @classmethod
    def standard(cls, s: int, n: int) -> "FreePolyadicGroup":
        """Free n-ary group on ``u, v1, ..., v{s-1}``."""
        return cls(Alphabet.standard(s), n)

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    @property
    def u(self) -> Word:
        return self.alphabet.gen(0)

    def contains(self, w: Word) -> bool:
        return w.alphabet == self.alphabet and w.ht() % (self.n - 1) == 1 % (self.n - 1)

    def _check(self, words: Sequence[Word]) -> None:
        for w in words:
            if not isinstance(w, Word) or w.alphabet != self.alphabet:
                raise WordError("argument not a word over the group alphabet")
            if not self.contains(w):
                raise PolyadicError(
                    f"{render(w)} has height {w.ht()}, not 1 mod {self.n - 1}: outside the carrier")

    def f(self, *args: Word) -> Word:
        self._check_arity(args)
        self._check(args)
        out = self.alphabet.identity()
        for w in args:
            out = out * w
        return out

    def skew(self, w: Word) -> Word:
        self._check([w])
        return w ** (2 - self.n)

    def solve(self, position: int, coeffs: Sequence[Word | None], rhs: Word) -> Word:
        n = self.n
        if not 1 <= position <= n:
            raise PolyadicError(f"position must be in 1..{n}")
        if len(coeffs) != n:
            raise PolyadicError(f"expected {n} coefficients (hole included)")
        left, right = list(coeffs[: position - 1]), list(coeffs[position:])
        self._check(left + right + [rhs])
        e = self.alphabet.identity()
        lw = e
        for w in left:
            lw = lw * w
        rw = e
        for w in right:
            rw = rw * w
        return ~lw * rhs * ~rw

    def post_cover(self) -> "PostCover":
        return PostCover(self)


def f_free(g: FreePolyadicGroup, args: Sequence[Word]) -> Word:
    return g.f(*args)


def skew_free(g: FreePolyadicGroup, w: Word) -> Word:
    return g.skew(w)


# ---------------------------------------------------------------------------
# Post cover


@dataclass(frozen=True)
class PostCover:
    """F(X) as the Post cover of the free n-ary group, with ``H = ker(ht mod n-1)``."""

    group: FreePolyadicGroup

    @property
    def coset_map(self) -> CosetMap:
        return CosetMap.height(self.group.alphabet, self.group.n - 1)

    @property
    def transversal(self) -> Transversal:
        return schreier_transversal(self.coset_map)

    def coset_of(self, w: Word) -> int:
        return self.coset_map.residue(w)

    def check(self) -> list[str]:
        """Structural facts of the decomposition; empty when all hold."""
        g = self.group
        problems = []
        t = self.transversal
        u = g.u
        if [render(w) for w in t] != [render(u**i) for i in range(g.n - 1)]:
            problems.append("transversal is not 1, u, ..., u^(n-2)")
        if not self.coset_map.is_onto():
            problems.append("quotient F/H is not cyclic of order n-1")
        if self.coset_of(u) != 1 % (g.n - 1):
            problems.append("carrier is not the coset H u")
        if any(self.coset_of(x) != 1 % (g.n - 1) for x in g.alphabet.gens()):
            problems.append("generators are not in the carrier")
        return problems


def coset_of(p: PostCover, w: Word) -> int:
    return p.coset_of(w)


@dataclass(frozen=True)
class CoverExtension:
    """The ordinary homomorphism ``h: F(X) -> (target, *)`` extending ``beta``.

    ``h(w) = hom(w) * pivot`` where ``hom`` is the free homomorphism
    ``x -> beta(x) pivot^-1``; for a plain target ``hom`` is ``h`` itself.
    """

    hom: Homomorphism
    target: WordGroup
    n: int

    def __call__(self, w: Word) -> Word:
        return self.target.from_kernel(self.hom(w))

    def target_f(self, *args: Word) -> Word:
        """The derived n-ary product ``y_1 * ... * y_n`` of the target."""
        if len(args) != self.n:
            raise PolyadicError(f"expected {self.n} arguments")
        return self.target.product(args)


def cover_extend(g: FreePolyadicGroup, beta: Mapping[str, Word] | Sequence[Word],
                 target: WordGroup | None = None) -> CoverExtension:
    """Extend a map on the generators to the unique homomorphism on the Post cover."""
    if isinstance(beta, Mapping):
        missing = [x for x in g.alphabet.names if x not in beta]
        if missing:
            raise PolyadicError(f"beta undefined on {', '.join(missing)}")
        images = [beta[x] for x in g.alphabet.names]
    else:
        images = list(beta)
    if len(images) != len(g.alphabet):
        raise PolyadicError("beta must give one image per generator")
    if target is None:
        target = WordGroup(images[0].alphabet)
    for w in images:
        if not target.contains(w):
            raise PolyadicError(f"beta image {render(w)} is outside the target group")
    hom = Homomorphism(g.alphabet, target.alphabet, tuple(target.to_kernel(w) for w in images))
    return CoverExtension(hom, target, g.n)


# ---------------------------------------------------------------------------
# Hosszu-Gluskin extraction and the basis pipeline


@dataclass(frozen=True)
class BasisPipeline:
    """Schreier basis ``B`` of ``H``, its translate ``B' = B u``, and ``B''`` after Nielsen moves."""

    B: tuple[Word, ...]
    B_prime: tuple[Word, ...]
    B_double_prime: tuple[Word, ...]
    expected: tuple[Word, ...]
    kernel_certificate: BasisCertificate
    moves: tuple[tuple[int, int], ...] = ()

    @property
    def matches(self) -> bool:
        return set(self.B_double_prime) == set(self.expected) and len(self.B_double_prime) == len(self.expected)

    def to_dict(self) -> dict:
        return {
            "B": [render(w) for w in self.B],
            "B_prime": [render(w) for w in self.B_prime],
            "B_double_prime": [render(w) for w in self.B_double_prime],
            "expected": [render(w) for w in self.expected],
            "matches": self.matches,
            "certificate": self.kernel_certificate.to_dict(),
        }


@dataclass(frozen=True)
class ExtractedHG:
    group: FreePolyadicGroup
    triple: HGTriple
    retract: Retract = field(repr=False)
    pipeline: BasisPipeline

    @property
    def witnesses(self) -> list[Word]:
        return self.group.alphabet.gens()[1:]

    def eta(self, w: Word) -> Word:
        """``H -> G``, ``w -> w u``."""
        return w * self.group.u

    def to_dict(self) -> dict:
        d = self.triple.to_dict()
        d.update(self.pipeline.to_dict())
        d["identity"] = render(self.retract.identity)
        return d


def hg_triple(g: FreePolyadicGroup) -> HGTriple:
    """Just the triple of :func:`extract_hg`, without the basis pipeline."""
    return _triple_for(g)[0]


def _triple_for(g: FreePolyadicGroup) -> tuple[HGTriple, Retract]:
    n, u, a = g.n, g.u, g.alphabet
    ret = centered_retract(g, u)
    ubar = g.skew(u)
    theta_images = tuple(g.f(u, x, ubar, *([u] * (n - 3))) for x in a.gens())
    b = g.f(*([u] * n))
    theta = Homomorphism(a, a, theta_images)
    if theta != Homomorphism.conjugation(u) or b != u**n:
        raise AssertionError("Sokolov relations failed")  # unreachable for a free group
    theta_inv = Homomorphism.conjugation(~u)
    base = WordGroup(a, u, n - 1)
    return HGTriple(base, n, theta, theta_inv, b), ret


def basis_pipeline(g: FreePolyadicGroup) -> BasisPipeline:
    n, u, a = g.n, g.u, g.alphabet
    triple, _ = _triple_for(g)
    circ = triple.base
    c = CosetMap.height(a, n - 1)
    B = schreier_basis(c, schreier_transversal(c))
    B_prime = [w * u for w in B]
    b = u**n
    ib = B_prime.index(b)
    B2 = list(B_prime)
    moves = []
    for v in a.gens()[1:]:
        target = u ** (n - 2) * v * u
        k = B2.index(target)
        B2 = nielsen_replace(B2, k, ib, "right-inverse", group=circ)
        moves.append((k, ib))
    expected = [triple.b] + [triple.theta_powers[i](v) for v in a.gens()[1:] for i in range(n - 1)]
    cert = is_basis_of_kernel([circ.to_kernel(w) for w in B2], c)
    return BasisPipeline(tuple(B), tuple(B_prime), tuple(B2), tuple(expected), cert, tuple(moves))


def extract_hg(g: FreePolyadicGroup) -> ExtractedHG:
    """Hosszu-Gluskin triple of the free n-ary group, centered at ``u``.

    The binary group is ``w1 o w2 = w1 u^-1 w2`` on the carrier with identity
    ``u``; ``theta`` is conjugation by ``u`` and ``b = u^n``.
    """
    triple, ret = _triple_for(g)
    return ExtractedHG(g, triple, ret, basis_pipeline(g))
