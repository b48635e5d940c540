"""Freely reduced words over a finite alphabet.

A :class:`Word` stores its letters in run-length form: a tuple of
``(generator index, exponent)`` pairs with nonzero exponents and no two
adjacent runs on the same generator.  Every constructor goes through
:func:`reduce`, so equality of words is equality of group elements.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Alphabet",
    "Word",
    "Homomorphism",
    "WordGroup",
    "WordError",
    "ParseError",
    "reduce",
    "concat",
    "invert",
    "power",
    "ht",
    "apply",
    "parse",
    "render",
]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")
TERM_RE = re.compile(r"([A-Za-z][A-Za-z0-9]*)(?:\^([+-]?\d+))?\Z")


class WordError(ValueError):
    """Invalid word data: bad generator index, alphabet mismatch, ..."""


class ParseError(WordError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for name in names:
            if not isinstance(name, str) or not NAME_RE.match(name):
                raise WordError(f"invalid generator name {name!r}")
        if len(set(names)) != len(names):
            raise WordError(f"duplicate generator names in {names}")

    @classmethod
    def standard(cls, rank: int) -> "Alphabet":
        """``u, v1, ..., v{rank-1}``."""
        if rank < 1:
            raise WordError("alphabet rank must be at least 1")
        return cls(("u",) + tuple(f"v{i}" for i in range(1, rank)))

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        """Comma separated names, e.g. ``"u,v1,v2"``."""
        return cls(tuple(p.strip() for p in text.split(",") if p.strip()))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordError(f"unknown generator {name!r}") from None

    @property
    def rank(self) -> int:
        return len(self.names)

    def identity(self) -> "Word":
        return Word(self, ())

    def gen(self, i: int) -> "Word":
        return Word(self, ((i, 1),))

    def gens(self) -> list["Word"]:
        return [self.gen(i) for i in range(len(self.names))]

    def __getitem__(self, name: str) -> "Word":
        return self.gen(self.index(name))

    def to_json(self) -> str:
        return json.dumps(list(self.names))

    @classmethod
    def from_json(cls, text: str) -> "Alphabet":
        return cls(tuple(json.loads(text)))


def _reduce_runs(alphabet: Alphabet, runs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    size = len(alphabet)
    for gen, exp in runs:
        if not (isinstance(gen, int) and 0 <= gen < size):
            raise WordError(f"generator index {gen!r} out of range for {alphabet.names}")
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


def _join(a: tuple, b: tuple) -> tuple:
    """Concatenate two reduced run tuples; cancellation only happens at the seam."""
    if not a:
        return b
    if not b or a[-1][0] != b[0][0]:
        return a + b
    out = list(a)
    i = 0
    while out and i < len(b):
        g, e = b[i]
        if out[-1][0] != g:
            break
        total = out[-1][1] + e
        i += 1
        if total:
            out[-1] = (g, total)
            break
        out.pop()
    return tuple(out) + b[i:]


def _extend(out: list, b: tuple) -> None:
    """In-place version of :func:`_join` on a list of runs."""
    i = 0
    while out and i < len(b) and out[-1][0] == b[i][0]:
        g, e = out[-1]
        total = e + b[i][1]
        i += 1
        if total:
            out[-1] = (g, total)
            break
        out.pop()
    out.extend(b[i:])


@dataclass(frozen=True)
class Word:
    """An element of the free group on ``alphabet``, always freely reduced."""

    alphabet: Alphabet
    runs: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "runs", _reduce_runs(self.alphabet, self.runs))

    @classmethod
    def _trusted(cls, alphabet: Alphabet, runs: tuple) -> "Word":
        # runs already reduced and valid
        w = object.__new__(cls)
        object.__setattr__(w, "alphabet", alphabet)
        object.__setattr__(w, "runs", runs)
        return w

    # construction helpers -------------------------------------------------

    @classmethod
    def from_letters(cls, alphabet: Alphabet, letters: Iterable[int]) -> "Word":
        """Build from signed letters: ``+(i+1)`` is generator i, ``-(i+1)`` its inverse."""
        return cls(alphabet, ((abs(x) - 1, 1 if x > 0 else -1) for x in letters))

    # group operations ------------------------------------------------------

    def _check(self, other: "Word") -> None:
        if not isinstance(other, Word):
            raise TypeError(f"expected Word, got {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise WordError(f"alphabet mismatch: {self.alphabet.names} vs {other.alphabet.names}")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word._trusted(self.alphabet, _join(self.runs, other.runs))

    def __invert__(self) -> "Word":
        return Word._trusted(self.alphabet, tuple((g, -e) for g, e in reversed(self.runs)))

    def __pow__(self, e: int) -> "Word":
        if e == 0 or not self.runs:
            return self.alphabet.identity()
        if len(self.runs) == 1:
            g, x = self.runs[0]
            return Word(self.alphabet, ((g, x * e),))
        base = self if e > 0 else ~self
        # conjugate-reduce: w = p c p^-1 with c cyclically reduced, so w^e = p c^e p^-1
        runs = list(base.runs)
        prefix: list[tuple[int, int]] = []
        while len(runs) >= 2 and runs[0][0] == runs[-1][0]:
            g, a = runs[0]
            _, z = runs[-1]
            if a + z == 0:
                prefix.append(runs.pop(0))
                runs.pop()
            else:
                break
        p = Word(self.alphabet, tuple(prefix))
        core = Word(self.alphabet, tuple(runs))
        return p * Word(self.alphabet, core.runs * abs(e)) * ~p

    # queries ------------------------------------------------------------

    def is_identity(self) -> bool:
        return not self.runs

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.runs)

    def letters(self) -> list[int]:
        """Signed letters (see :meth:`from_letters`)."""
        out = []
        for g, e in self.runs:
            out.extend([(g + 1) if e > 0 else -(g + 1)] * abs(e))
        return out

    def ht(self) -> int:
        return sum(e for _, e in self.runs)

    def sort_key(self) -> tuple:
        """Shortlex key with letter order ``x1 < x1^-1 < x2 < x2^-1 < ...``."""
        return (len(self), tuple(2 * (abs(x) - 1) + (x < 0) for x in self.letters()))

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Word({render(self)!r})"


def reduce(alphabet: Alphabet, runs: Iterable[tuple[int, int]]) -> Word:
    return Word(alphabet, tuple(runs))


def concat(a: Word, b: Word) -> Word:
    return a * b


def invert(a: Word) -> Word:
    return ~a


def power(a: Word, e: int) -> Word:
    return a**e


def ht(w: Word) -> int:
    """Exponent sum: the height homomorphism onto the integers."""
    return w.ht()


@dataclass(frozen=True)
class Homomorphism:
    """Free group homomorphism given by the images of the domain generators."""

    domain: Alphabet
    codomain: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.domain):
            raise WordError(f"need {len(self.domain)} images, got {len(images)}")
        for w in images:
            if w.alphabet != self.codomain:
                raise WordError("image word not over the codomain alphabet")
        object.__setattr__(self, "_inverse_runs", tuple((~w).runs for w in images))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Homomorphism":
        return cls(alphabet, alphabet, tuple(alphabet.gens()))

    @classmethod
    def conjugation(cls, by: Word) -> "Homomorphism":
        """``x -> by x by^-1``."""
        a = by.alphabet
        return cls(a, a, tuple(by * x * ~by for x in a.gens()))

    @classmethod
    def from_strings(cls, domain: Alphabet, codomain: Alphabet, images: Sequence[str]) -> "Homomorphism":
        return cls(domain, codomain, tuple(parse(s, codomain) for s in images))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise WordError("cannot compose: alphabet mismatch")
        return Homomorphism(inner.domain, self.codomain, tuple(self(w) for w in inner.images))

    def __pow__(self, e: int) -> "Homomorphism":
        if e < 0:
            raise WordError("negative powers need an explicit inverse")
        if self.domain != self.codomain:
            raise WordError("only endomorphisms have powers")
        result = Homomorphism.identity(self.domain)
        base = self
        while e:
            if e & 1:
                result = base.compose(result)
            base = base.compose(base)
            e >>= 1
        return result

    def is_identity(self) -> bool:
        return self.domain == self.codomain and list(self.images) == self.domain.gens()

    def to_dict(self) -> dict:
        return {name: render(w) for name, w in zip(self.domain.names, self.images)}


def apply(h: Homomorphism, w: Word) -> Word:
    if w.alphabet != h.domain:
        raise WordError(f"alphabet mismatch: {w.alphabet.names} vs {h.domain.names}")
    out: list[tuple[int, int]] = []
    for g, e in w.runs:
        img = h.images[g].runs if e > 0 else h._inverse_runs[g]
        for _ in range(abs(e)):
            _extend(out, img)
    return Word._trusted(h.codomain, tuple(out))


@dataclass(frozen=True)
class WordGroup:
    """A free group realized on words of ``alphabet``.

    The product is ``x * y = x pivot^-1 y`` with identity ``pivot``, restricted
    to the coset of words whose height is congruent to ``ht(pivot)`` modulo
    ``modulus``.  With the defaults (``pivot = 1``, ``modulus = 1``) this is the
    ordinary free group F(alphabet).  With ``pivot = u`` and ``modulus = n-1``
    it is the retract at ``u`` of the free n-ary group on the alphabet.
    """

    alphabet: Alphabet
    pivot: Word | None = None
    modulus: int = 1

    def __post_init__(self):
        if self.pivot is None:
            object.__setattr__(self, "pivot", self.alphabet.identity())
        if self.pivot.alphabet != self.alphabet:
            raise WordError("pivot not over the group alphabet")
        if self.modulus < 1:
            raise WordError("modulus must be positive")

    @property
    def identity(self) -> Word:
        return self.pivot

    @property
    def is_plain(self) -> bool:
        return self.pivot.is_identity() and self.modulus == 1

    @property
    def rank(self) -> int:
        # kernel of ht mod m has index m, so Nielsen-Schreier gives m(r-1)+1
        return self.modulus * (len(self.alphabet) - 1) + 1

    def contains(self, w: Word) -> bool:
        return w.alphabet == self.alphabet and (w.ht() - self.pivot.ht()) % self.modulus == 0

    def mul(self, x: Word, y: Word) -> Word:
        return x * ~self.pivot * y

    def product(self, words: Iterable[Word]) -> Word:
        out = self.pivot
        for w in words:
            out = self.mul(out, w)
        return out

    def inv(self, x: Word) -> Word:
        return self.pivot * ~x * self.pivot

    def pow(self, x: Word, e: int) -> Word:
        # x^{*e} = (x p^-1)^e p
        return (x * ~self.pivot) ** e * self.pivot

    def to_kernel(self, w: Word) -> Word:
        """Isomorphism onto the subgroup ker(ht mod modulus): ``w -> w pivot^-1``."""
        return w * ~self.pivot

    def from_kernel(self, w: Word) -> Word:
        return w * self.pivot

    def to_dict(self) -> dict:
        return {"pivot": render(self.pivot), "modulus": self.modulus}


# ---------------------------------------------------------------------------
# text syntax

def render(w: Word) -> str:
    if not w.runs:
        return "1"
    names = w.alphabet.names
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in w.runs)


def parse(text: str, alphabet: Alphabet) -> Word:
    """Parse ``"1"`` or whitespace separated ``NAME`` / ``NAME^INT`` terms."""
    tokens = [(m.start(), m.group()) for m in re.finditer(r"\S+", text)]
    if not tokens:
        raise ParseError("empty word", 0)
    if len(tokens) == 1 and tokens[0][1] == "1":
        return alphabet.identity()
    runs = []
    for pos, tok in tokens:
        m = TERM_RE.match(tok)
        if not m:
            raise ParseError(f"bad term {tok!r}", pos)
        name, exp = m.group(1), m.group(2)
        if name not in alphabet.names:
            raise ParseError(f"unknown generator {name!r}", pos)
        e = 1 if exp is None else int(exp)
        if e == 0:
            raise ParseError(f"zero exponent in {tok!r}", pos)
        runs.append((alphabet.index(name), e))
    return Word(alphabet, tuple(runs))
