"""Polyadic groups: (theta, b)-derived structures over words and finite tables.

Positions (solve holes, associativity cuts, identity slots) are 1-based,
matching the usual notation ``f(a_1, ..., a_n)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .words import Alphabet, Homomorphism, Word, WordError, WordGroup, parse, render

__all__ = [
    "PolyadicError",
    "AxiomFailure",
    "PolyadicSignature",
    "HGTriple",
    "FiniteNaryTable",
    "AxiomReport",
    "Retract",
    "eval_derived",
    "skew",
    "retract",
    "centered_retract",
    "solve",
    "detect_nary_identity",
    "verify_axioms",
    "associative_on",
    "dornte_on",
    "derived_triple",
    "b_derived_triple",
    "cyclic_b_derived",
    "max_table",
]

SCAN_LIMIT = 10**6


class PolyadicError(ValueError):
    """Bad polyadic data: arity, carrier membership, invalid triple."""


class AxiomFailure(PolyadicError):
    """A finite table is not a polyadic group (an equation has no unique solution)."""


@dataclass(frozen=True)
class PolyadicSignature:
    n: int
    alphabet: Alphabet | None = None
    q: int | None = None

    def __post_init__(self):
        if self.n < 3:
            raise PolyadicError(f"arity must be at least 3, got {self.n}")
        if (self.alphabet is None) == (self.q is None):
            raise PolyadicError("give exactly one of an alphabet or a finite carrier size")


class _Polyadic:
    """Operations every n-ary group here shares; subclasses provide ``f``."""

    n: int

    def f(self, *args):
        raise NotImplementedError

    def _check_arity(self, args: Sequence) -> None:
        if len(args) != self.n:
            raise PolyadicError(f"expected {self.n} arguments, got {len(args)}")


# ---------------------------------------------------------------------------
# Hosszu-Gluskin data over free words


@dataclass(frozen=True)
class HGTriple(_Polyadic):
    """``der_{theta,b}`` of a free group realized on words.

    ``f(x_1..x_n) = x_1 * theta(x_2) * ... * theta^(n-1)(x_n) * b`` with
    ``*`` the product of ``base``.  Construction validates ``theta(b) = b``,
    ``theta^(n-1)(x) = b * x * b^-1`` and ``theta_inv`` being a two-sided
    inverse.  The conjugation condition is checked on the generators of the
    ambient free group only: both sides are endomorphisms of that free group
    (the right side is conjugation by ``b pivot^-1``), so agreement on
    generators is agreement everywhere.
    """

    base: WordGroup
    n: int
    theta: Homomorphism
    theta_inv: Homomorphism
    b: Word

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise PolyadicError("invalid Hosszu-Gluskin triple: " + "; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        a = self.base.alphabet
        if self.n < 3:
            return [f"arity must be at least 3, got {self.n}"]
        for name, h in (("theta", self.theta), ("theta_inv", self.theta_inv)):
            if h.domain != a or h.codomain != a:
                return [f"{name} is not an endomorphism of F({','.join(a.names)})"]
        if self.b.alphabet != a:
            return ["b is not over the base alphabet"]
        if not self.base.contains(self.b):
            out.append(f"b = {render(self.b)} is not in the base carrier")
        gens = a.gens()
        if any(self.theta(self.theta_inv(x)) != x or self.theta_inv(self.theta(x)) != x for x in gens):
            out.append("theta_inv is not inverse to theta")
        p = self.base.pivot
        if self.theta(p) != p:
            out.append("theta does not fix the identity of the base group")
        m = self.base.modulus
        if m > 1 and any((self.theta(x).ht() - x.ht()) % m for x in gens):
            out.append("theta does not preserve the base carrier")
        if self.theta(self.b) != self.b:
            out.append("theta(b) != b")
        t = self.theta ** (self.n - 1)
        G = self.base
        for x in gens:
            if t(x) != G.mul(G.mul(self.b, x), G.inv(self.b)):
                out.append(f"theta^{self.n - 1}({render(x)}) != b {render(x)} b^-1")
                break
        return out

    @property
    def alphabet(self) -> Alphabet:
        return self.base.alphabet

    @cached_property
    def theta_powers(self) -> tuple[Homomorphism, ...]:
        """``theta^0 .. theta^(n-1)``."""
        out = [Homomorphism.identity(self.alphabet)]
        for _ in range(self.n - 1):
            out.append(self.theta.compose(out[-1]))
        return tuple(out)

    @cached_property
    def theta_inv_powers(self) -> tuple[Homomorphism, ...]:
        out = [Homomorphism.identity(self.alphabet)]
        for _ in range(self.n - 1):
            out.append(self.theta_inv.compose(out[-1]))
        return tuple(out)

    def contains(self, w: Word) -> bool:
        return self.base.contains(w)

    def _check_args(self, args: Sequence[Word]) -> None:
        self._check_arity(args)
        for w in args:
            if not isinstance(w, Word) or w.alphabet != self.alphabet:
                raise WordError("argument not a word over the base alphabet")
            if not self.base.contains(w):
                raise PolyadicError(f"{render(w)} is not in the carrier")

    def _terms(self, args: Sequence[Word], start: int) -> list[Word]:
        return [self.theta_powers[start + k](w) for k, w in enumerate(args)]

    def f(self, *args: Word) -> Word:
        self._check_args(args)
        return self.base.product(self._terms(args, 0) + [self.b])

    def skew(self, x: Word) -> Word:
        """Closed form: isolate ``theta^(n-1)(y)``, then undo it as conjugation by ``b``."""
        self._check_args([x] * self.n)
        G = self.base
        prefix = G.product(self._terms([x] * (self.n - 1), 0))
        z = G.product([G.inv(prefix), x, G.inv(self.b)])
        return G.product([G.inv(self.b), z, self.b])

    def solve(self, position: int, coeffs: Sequence[Word | None], rhs: Word) -> Word:
        n = self.n
        if not 1 <= position <= n:
            raise PolyadicError(f"position must be in 1..{n}")
        if len(coeffs) != n:
            raise PolyadicError(f"expected {n} coefficients (hole included)")
        others = [w for k, w in enumerate(coeffs) if k != position - 1]
        self._check_args(others + [rhs])
        G = self.base
        left = G.product(self._terms(coeffs[: position - 1], 0))
        right = G.product(self._terms(coeffs[position:], position) + [self.b])
        mid = G.product([G.inv(left), rhs, G.inv(right)])
        return self.theta_inv_powers[position - 1](mid)

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet.names),
            "n": self.n,
            "base": self.base.to_dict(),
            "theta": self.theta.to_dict(),
            "theta_inv": self.theta_inv.to_dict(),
            "b": render(self.b),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict, n: int | None = None) -> "HGTriple":
        a = Alphabet(tuple(data["alphabet"]))
        base_data = data.get("base") or {}
        base = WordGroup(a, parse(base_data.get("pivot", "1"), a), int(base_data.get("modulus", 1)))
        arity = n if n is not None else data.get("n")
        if arity is None:
            raise PolyadicError("arity n missing from triple data")

        def hom(images):
            if isinstance(images, dict):
                images = [images[name] for name in a.names]
            return Homomorphism.from_strings(a, a, images)

        return cls(base, int(arity), hom(data["theta"]), hom(data["theta_inv"]), parse(data["b"], a))

    @classmethod
    def from_json(cls, text: str, n: int | None = None) -> "HGTriple":
        return cls.from_dict(json.loads(text), n)


def derived_triple(alphabet: Alphabet, n: int) -> HGTriple:
    """``der^n(F)``: theta = id, b = 1."""
    ident = Homomorphism.identity(alphabet)
    return HGTriple(WordGroup(alphabet), n, ident, ident, alphabet.identity())


def b_derived_triple(alphabet: Alphabet, n: int, b: Word) -> HGTriple:
    """``der_b^n(F)``; ``b`` has to be central, so only ``b = 1`` survives in rank >= 2."""
    ident = Homomorphism.identity(alphabet)
    return HGTriple(WordGroup(alphabet), n, ident, ident, b)


def eval_derived(t: HGTriple, args: Sequence[Word]) -> Word:
    return t.f(*args)


# ---------------------------------------------------------------------------
# finite tables


@dataclass(frozen=True)
class AxiomReport:
    associative: bool
    solvable: bool
    dornte: bool | None = None
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.associative and self.solvable

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.ok else "fail",
            "associative": self.associative,
            "solvable": self.solvable,
            "dornte": self.dornte,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True, eq=False)
class FiniteNaryTable(_Polyadic):
    """Cayley hypertable of an n-ary operation on ``{0, ..., q-1}``."""

    q: int
    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.q < 1:
            raise PolyadicError("carrier must be nonempty")
        if self.n < 2:
            raise PolyadicError("arity must be at least 2")
        t = np.asarray(self.table, dtype=np.int64).reshape((self.q,) * self.n)
        if t.size and (t.min() < 0 or t.max() >= self.q):
            raise PolyadicError("table entries must lie in 0..q-1")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def from_function(cls, q: int, n: int, fn: Callable[..., int]) -> "FiniteNaryTable":
        flat = [fn(*xs) for xs in itertools.product(range(q), repeat=n)]
        return cls(q, n, np.array(flat, dtype=np.int64))

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteNaryTable":
        q, n = int(data["q"]), int(data["n"])
        flat = np.asarray(data["table"], dtype=np.int64)
        if flat.size != q**n:
            raise PolyadicError(f"table has {flat.size} cells, expected {q}^{n} = {q**n}")
        return cls(q, n, flat)

    @classmethod
    def from_json(cls, text: str) -> "FiniteNaryTable":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "table": self.table.reshape(-1).tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def contains(self, x: int) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= x < self.q

    def f(self, *args: int) -> int:
        self._check_arity(args)
        return int(self.table[tuple(args)])

    def _guard(self) -> None:
        if self.q**self.n > SCAN_LIMIT:
            raise PolyadicError(f"table with {self.q}^{self.n} cells exceeds the scan limit")

    def solutions(self, position: int, coeffs: Sequence[int | None], rhs: int) -> list[int]:
        if not 1 <= position <= self.n:
            raise PolyadicError(f"position must be in 1..{self.n}")
        if len(coeffs) != self.n:
            raise PolyadicError(f"expected {self.n} coefficients (hole included)")
        self._guard()
        idx = list(coeffs)
        idx[position - 1] = slice(None)
        line = self.table[tuple(idx)]
        return [int(x) for x in np.flatnonzero(line == rhs)]

    def solve(self, position: int, coeffs: Sequence[int | None], rhs: int) -> int:
        sols = self.solutions(position, coeffs, rhs)
        if len(sols) != 1:
            raise AxiomFailure(f"equation at position {position} with coefficients {list(coeffs)} "
                               f"and right side {rhs} has {len(sols)} solutions")
        return sols[0]

    def skew(self, x: int) -> int:
        return self.solve(self.n, [x] * (self.n - 1) + [None], x)

    def skews(self) -> list[int]:
        return [self.skew(x) for x in range(self.q)]

    # axioms -----------------------------------------------------------------

    def _placements(self) -> list[np.ndarray]:
        """Value of ``f(x_1^{i-1}, f(x_i^{n+i-1}), x_{n+i}^{2n-1})`` for each cut ``i``."""
        n, q = self.n, self.q
        grid = np.indices((q,) * (2 * n - 1), dtype=np.int64)
        out = []
        for i in range(n):
            inner = self.table[tuple(grid[i : i + n])]
            idx = tuple(grid[:i]) + (inner,) + tuple(grid[i + n :])
            out.append(self.table[idx])
        return out

    def verify_axioms(self, max_cells: int = 10**7) -> AxiomReport:
        """Exhaustive check of associativity (all cut pairs) and unique solvability.

        Counterexamples are the first in lexicographic order of cut pair, then tuple.
        """
        n, q = self.n, self.q
        if q ** (2 * n - 1) > max_cells:
            raise PolyadicError(f"{q}^{2 * n - 1} tuples exceed the enumeration limit {max_cells}")
        placed = self._placements()
        for i, j in itertools.combinations(range(n), 2):
            bad = np.argwhere(placed[i] != placed[j])
            if len(bad):
                xs = [int(v) for v in bad[0]]
                return AxiomReport(False, self.check_solvable() is None, None, {
                    "axiom": "associativity",
                    "cuts": [i + 1, j + 1],
                    "tuple": xs,
                    "values": [int(placed[i][tuple(xs)]), int(placed[j][tuple(xs)])],
                })
        failure = self.check_solvable()
        if failure is not None:
            return AxiomReport(True, False, None, failure)
        return AxiomReport(True, True, self.check_dornte() is None, None)

    def check_solvable(self) -> dict | None:
        """First equation without a unique solution, or ``None``."""
        n, q = self.n, self.q
        for pos in range(n):
            counts = np.stack([np.sum(self.table == r, axis=pos) for r in range(q)], axis=-1)
            bad = np.argwhere(counts != 1)
            if len(bad):
                cell = [int(v) for v in bad[0]]
                coeffs: list[int | None] = cell[:-1]
                coeffs.insert(pos, None)
                return {
                    "axiom": "solvability",
                    "position": pos + 1,
                    "coefficients": coeffs,
                    "rhs": cell[-1],
                    "solutions": int(counts[tuple(cell)]),
                }
        return None

    def check_dornte(self) -> dict | None:
        """Both Dornte identities for every x, y and 2 <= i <= n."""
        n = self.n
        sk = self.skews()
        for x, y in itertools.product(range(self.q), repeat=2):
            for i in range(2, n + 1):
                left = [x] * (i - 2) + [sk[x]] + [x] * (n - i) + [y]
                right = [y] + [x] * (n - i) + [sk[x]] + [x] * (i - 2)
                if self.f(*left) != y or self.f(*right) != y:
                    return {"axiom": "dornte", "x": x, "y": y, "i": i}
        return None


def cyclic_b_derived(q: int, n: int, b: int = 0) -> FiniteNaryTable:
    """``der_b^n(Z_q)``: ``f(x_1..x_n) = x_1 + ... + x_n + b mod q``."""
    return FiniteNaryTable.from_function(q, n, lambda *xs: (sum(xs) + b) % q)


def max_table(q: int, n: int) -> FiniteNaryTable:
    return FiniteNaryTable.from_function(q, n, lambda *xs: max(xs))


def verify_axioms(t: FiniteNaryTable) -> AxiomReport:
    return t.verify_axioms()


def detect_nary_identity(t: FiniteNaryTable) -> int | None:
    """Smallest ``a`` neutral in every slot, or ``None`` (then ``t`` is not derived)."""
    n = t.n
    xs = np.arange(t.q)
    for a in range(t.q):
        ok = True
        for i in range(n):
            idx = [a] * n
            idx[i] = xs
            if not np.array_equal(t.table[tuple(idx)], xs):
                ok = False
                break
        if ok:
            return a
    return None


# ---------------------------------------------------------------------------
# generic operations


def skew(g, x):
    return g.skew(x)


def solve(g, position: int, coeffs: Sequence, rhs):
    return g.solve(position, coeffs, rhs)


@dataclass(frozen=True)
class Retract:
    """A binary group carved out of an n-ary group ``g``.

    ``mul(x, y) = g.f(x, *middle, y)`` for a fixed middle block of ``n - 2``
    elements; ``identity`` and ``inverse`` come from the skew map.
    """

    group: Any
    a: Any
    middle: tuple
    identity: Any
    kind: str = "retract"

    def mul(self, x, y):
        return self.group.f(x, *self.middle, y)

    def product(self, items: Iterable):
        out = self.identity
        for x in items:
            out = self.mul(out, x)
        return out

    def inverse(self, x):
        g, n = self.group, self.group.n
        if self.kind == "retract":
            abar = self.identity
            return g.f(abar, *([x] * (n - 3)), g.skew(x), abar)
        # solve x o y = a for y
        return g.solve(n, [x, *self.middle, None], self.a)


def retract(g, a) -> Retract:
    """``x * y = f(x, a^(n-2), y)``; identity ``skew(a)``."""
    return Retract(g, a, (a,) * (g.n - 2), g.skew(a), "retract")


def centered_retract(g, a) -> Retract:
    """``x o y = f(x, skew(a), a^(n-3), y)``, the retract-type group whose identity is ``a``."""
    return Retract(g, a, (g.skew(a),) + (a,) * (g.n - 3), a, "centered")


def associative_on(g, xs: Sequence) -> tuple[int, int] | None:
    """Check every cut pair on one ``(2n-1)``-tuple; return the first failing pair."""
    n = g.n
    if len(xs) != 2 * n - 1:
        raise PolyadicError(f"need {2 * n - 1} elements")
    vals = [g.f(*xs[:i], g.f(*xs[i : i + n]), *xs[i + n :]) for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        if vals[i] != vals[j]:
            return (i + 1, j + 1)
    return None


def dornte_on(g, x, y) -> int | None:
    """Check both Dornte identities at ``x, y``; return the first failing ``i``."""
    n = g.n
    xb = g.skew(x)
    for i in range(2, n + 1):
        left = [x] * (i - 2) + [xb] + [x] * (n - i) + [y]
        right = [y] + [x] * (n - i) + [xb] + [x] * (i - 2)
        if g.f(*left) != y or g.f(*right) != y:
            return i
    return None
