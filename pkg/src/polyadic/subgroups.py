"""Finite-index subgroups of free groups.

Schreier transversals and Nielsen-Schreier bases for kernels of maps onto
``Z_m``, Stallings folding of finitely generated subgroups, membership,
and basis certificates.

A certificate that a set of ``k`` words is a basis of a free group of rank
``k`` only needs to show that the set *generates*: free groups of finite rank
are Hopfian, so a surjection ``F_k -> F_k`` sending a basis onto the set is an
isomorphism.  Generation is decided by folding.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .words import Alphabet, Word, WordError, render

__all__ = [
    "CosetMap",
    "Transversal",
    "SubgroupGraph",
    "BasisCertificate",
    "IS_BASIS",
    "GENERATES_NOT_BASIS",
    "NOT_GENERATING",
    "schreier_transversal",
    "schreier_basis",
    "fold",
    "member",
    "is_basis_of_whole_group",
    "is_basis_of_kernel",
    "same_subgroup",
    "nielsen_replace",
    "NIELSEN_MODES",
]


@dataclass(frozen=True)
class CosetMap:
    """Homomorphism ``F(alphabet) -> Z_modulus`` given by one residue per generator."""

    alphabet: Alphabet
    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise WordError("modulus must be at least 1")
        res = tuple(r % self.modulus for r in self.residues)
        if len(res) != len(self.alphabet):
            raise WordError("one residue per generator required")
        object.__setattr__(self, "residues", res)

    @classmethod
    def height(cls, alphabet: Alphabet, modulus: int) -> "CosetMap":
        """``ht`` reduced mod ``modulus``: every generator maps to 1."""
        return cls(alphabet, modulus, (1,) * len(alphabet))

    def residue(self, w: Word) -> int:
        if w.alphabet != self.alphabet:
            raise WordError("alphabet mismatch")
        return sum(self.residues[g] * e for g, e in w.runs) % self.modulus

    def is_onto(self) -> bool:
        return math.gcd(self.modulus, *self.residues) == 1

    def kernel_rank(self) -> int:
        return self.modulus * (len(self.alphabet) - 1) + 1


@dataclass(frozen=True)
class Transversal:
    coset_map: CosetMap
    words: tuple[Word, ...]

    def rep(self, w: Word) -> Word:
        """The representative of the coset ``H w``."""
        return self.words[self.coset_map.residue(w)]

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)


def schreier_transversal(c: CosetMap) -> Transversal:
    """Shortlex-minimal positive words, one per residue class.

    Breadth-first over the Cayley graph of ``Z_m`` using only positive letters
    in alphabet order, so the result is prefix closed.  For the height map on
    ``(u, v1, ...)`` this gives ``1, u, ..., u^(m-1)``.
    """
    if not c.is_onto():
        raise WordError(f"residues {c.residues} do not generate Z_{c.modulus}")
    a = c.alphabet
    reps: dict[int, Word] = {0: a.identity()}
    queue = deque([0])
    while queue:
        r = queue.popleft()
        for i, step in enumerate(c.residues):
            nxt = (r + step) % c.modulus
            if nxt not in reps:
                reps[nxt] = reps[r] * a.gen(i)
                queue.append(nxt)
    return Transversal(c, tuple(reps[i] for i in range(c.modulus)))


def schreier_basis(c: CosetMap, t: Transversal | None = None) -> list[Word]:
    """Nontrivial Schreier generators ``t x (rep(t x))^-1`` of ``ker c``.

    Ordered by transversal element, then by generator.
    """
    if t is None:
        t = schreier_transversal(c)
    out = []
    for rep in t:
        for x in c.alphabet.gens():
            g = rep * x * ~t.rep(rep * x)
            if not g.is_identity():
                out.append(g)
    return out


# ---------------------------------------------------------------------------
# Stallings graphs


@dataclass(frozen=True)
class SubgroupGraph:
    """Folded, based, edge-labelled graph.

    ``out[v][g]`` is the head of the edge labelled ``g`` leaving ``v``; ``inc``
    holds the reverse lookup.  Vertices are numbered ``0..V-1`` in canonical
    breadth-first order from the base vertex ``0``.
    """

    alphabet: Alphabet
    out: tuple[dict[int, int], ...]
    inc: tuple[dict[int, int], ...]
    base: int = 0
    folded: bool = True

    @property
    def num_vertices(self) -> int:
        return len(self.out)

    @property
    def num_edges(self) -> int:
        return sum(len(d) for d in self.out)

    @property
    def rank(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def is_cover(self) -> bool:
        r = len(self.alphabet)
        return all(len(o) == r and len(i) == r for o, i in zip(self.out, self.inc))

    @property
    def index(self) -> int | None:
        """Index of the subgroup, or ``None`` when it is infinite."""
        return self.num_vertices if self.is_cover() else None

    def edges(self) -> list[tuple[int, int, int]]:
        return [(v, w, g) for v, d in enumerate(self.out) for g, w in sorted(d.items())]

    def canonical_form(self) -> tuple:
        return (self.alphabet.names, self.num_vertices, tuple(self.edges()))

    def to_json(self) -> dict:
        names = self.alphabet.names
        return {
            "vertices": list(range(self.num_vertices)),
            "base": self.base,
            "edges": [{"from": v, "to": w, "label": names[g]} for v, w, g in self.edges()],
        }

    def to_dot(self) -> str:
        names = self.alphabet.names
        lines = ["digraph subgroup {", f"  {self.base} [shape=doublecircle];"]
        for v, w, g in self.edges():
            lines.append(f'  {v} -> {w} [label="{names[g]}"];')
        lines.append("}")
        return "\n".join(lines)


def _fold_edges(num_vertices: int, edges: list[tuple[int, int, int]]) -> tuple[list[int], set[tuple[int, int, int]]]:
    """Identify vertices until no two edges with one label share a tail or a head."""
    parent = list(range(num_vertices))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    changed = True
    while changed:
        changed = False
        heads: dict[tuple[int, int], int] = {}
        tails: dict[tuple[int, int], int] = {}
        for v, w, g in edges:
            v, w = find(v), find(w)
            for table, key, val in ((heads, (v, g), w), (tails, (w, g), v)):
                other = table.setdefault(key, val)
                other = find(other)
                if other != find(val):
                    parent[find(val)] = other
                    changed = True
    return parent, {(find(v), find(w), g) for v, w, g in edges}


def _canonical_graph(alphabet: Alphabet, base: int, edges: set[tuple[int, int, int]]) -> SubgroupGraph:
    """Trim hanging trees and renumber by breadth-first search from the base."""
    edges = set(edges)
    while True:
        degree: dict[int, int] = {}
        for v, w, _ in edges:
            degree[v] = degree.get(v, 0) + 1
            degree[w] = degree.get(w, 0) + 1
        leaves = {v for v, d in degree.items() if d == 1 and v != base}
        if not leaves:
            break
        edges = {e for e in edges if e[0] not in leaves and e[1] not in leaves}
    out: dict[int, dict[int, int]] = {}
    inc: dict[int, dict[int, int]] = {}
    for v, w, g in edges:
        out.setdefault(v, {})[g] = w
        inc.setdefault(w, {})[g] = v
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for g in range(len(alphabet)):
            for nb in (out.get(v, {}).get(g), inc.get(v, {}).get(g)):
                if nb is not None and nb not in order:
                    order[nb] = len(order)
                    queue.append(nb)
    n = len(order)
    new_out: list[dict[int, int]] = [{} for _ in range(n)]
    new_inc: list[dict[int, int]] = [{} for _ in range(n)]
    for v, w, g in edges:
        new_out[order[v]][g] = order[w]
        new_inc[order[w]][g] = order[v]
    return SubgroupGraph(alphabet, tuple(new_out), tuple(new_inc), 0, True)


def fold(generators: Sequence[Word], alphabet: Alphabet | None = None) -> SubgroupGraph:
    """Stallings graph of the subgroup generated by ``generators``."""
    if alphabet is None:
        if not generators:
            raise WordError("alphabet required for an empty generating set")
        alphabet = generators[0].alphabet
    count = 1
    edges: list[tuple[int, int, int]] = []
    for w in generators:
        if w.alphabet != alphabet:
            raise WordError("generators over different alphabets")
        letters = w.letters()
        v = 0
        for pos, x in enumerate(letters):
            if pos == len(letters) - 1:
                nxt = 0
            else:
                nxt = count
                count += 1
            edges.append((v, nxt, abs(x) - 1) if x > 0 else (nxt, v, abs(x) - 1))
            v = nxt
    parent, folded = _fold_edges(count, edges)
    base = 0
    while parent[base] != base:
        base = parent[base]
    return _canonical_graph(alphabet, base, folded)


def member(graph: SubgroupGraph, w: Word) -> bool:
    """Does ``w`` read a closed path at the base vertex?"""
    if w.alphabet != graph.alphabet:
        raise WordError("alphabet mismatch")
    v = graph.base
    for x in w.letters():
        table = graph.out if x > 0 else graph.inc
        v = table[v].get(abs(x) - 1)
        if v is None:
            return False
    return v == graph.base


def same_subgroup(a: Sequence[Word], b: Sequence[Word], alphabet: Alphabet | None = None) -> bool:
    if alphabet is None:
        alphabet = (list(a) + list(b))[0].alphabet
    return fold(a, alphabet).canonical_form() == fold(b, alphabet).canonical_form()


# ---------------------------------------------------------------------------
# basis certificates

IS_BASIS = "is-basis"
GENERATES_NOT_BASIS = "generates-but-checked-by-rank"
NOT_GENERATING = "not-generating"


@dataclass(frozen=True)
class BasisCertificate:
    generators: tuple[Word, ...]
    verdict: str
    rank: int
    index: int | None
    reason: str = ""
    graph: SubgroupGraph | None = field(default=None, compare=False, repr=False)

    @property
    def is_basis(self) -> bool:
        return self.verdict == IS_BASIS

    def to_dict(self) -> dict:
        return {
            "generators": [render(w) for w in self.generators],
            "verdict": self.verdict,
            "rank": self.rank,
            "index": self.index,
            "reason": self.reason,
        }


def is_basis_of_kernel(candidate: Sequence[Word], c: CosetMap) -> BasisCertificate:
    """Certify ``candidate`` as a basis of ``ker c``.

    The candidate generates ``ker c`` iff every element lies in the kernel and
    the folded graph is a cover with ``m`` vertices.  A generating set whose
    size equals the kernel rank is a basis (Hopfian property).
    """
    cand = tuple(candidate)
    graph = fold(cand, c.alphabet)
    target = c.kernel_rank()
    outside = [render(w) for w in cand if c.residue(w) != 0]
    if outside:
        return BasisCertificate(cand, NOT_GENERATING, graph.rank, graph.index,
                                f"not in the subgroup: {', '.join(outside)}", graph)
    if graph.index != c.modulus:
        got = "infinite" if graph.index is None else str(graph.index)
        return BasisCertificate(cand, NOT_GENERATING, graph.rank, graph.index,
                                f"generated subgroup has index {got} in F, expected {c.modulus}", graph)
    if len(cand) != target:
        return BasisCertificate(cand, GENERATES_NOT_BASIS, graph.rank, graph.index,
                                f"generates, but has {len(cand)} elements for rank {target}", graph)
    return BasisCertificate(cand, IS_BASIS, graph.rank, graph.index, "", graph)


def is_basis_of_whole_group(candidate: Sequence[Word], alphabet: Alphabet | None = None) -> BasisCertificate:
    if alphabet is None:
        if not candidate:
            raise WordError("alphabet required for an empty candidate")
        alphabet = candidate[0].alphabet
    return is_basis_of_kernel(candidate, CosetMap(alphabet, 1, (0,) * len(alphabet)))


# ---------------------------------------------------------------------------
# Nielsen moves

NIELSEN_MODES = ("swap", "invert", "left", "right", "left-inverse", "right-inverse")


def nielsen_replace(basis: Sequence[Word], i: int, j: int | None = None, mode: str = "right",
                    group=None) -> list[Word]:
    """One elementary Nielsen move on ``basis``.

    ``left``: b_i <- b_j b_i, ``right``: b_i <- b_i b_j, ``left-inverse``:
    b_i <- b_j^-1 b_i, ``right-inverse``: b_i <- b_i b_j^-1, ``swap`` exchanges
    b_i and b_j, ``invert``: b_i <- b_i^-1.  ``group`` (an object with ``mul``
    and ``inv``, e.g. :class:`~polyadic.words.WordGroup`) replaces the free
    product when the basis lives in a twisted product.
    """
    out = list(basis)
    n = len(out)
    if mode not in NIELSEN_MODES:
        raise ValueError(f"unknown Nielsen mode {mode!r}")
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range")
    if mode != "invert":
        if j is None or not 0 <= j < n or i == j:
            raise IndexError(f"invalid second index {j!r}")
    mul = group.mul if group is not None else (lambda x, y: x * y)
    inv = group.inv if group is not None else (lambda x: ~x)
    if mode == "swap":
        out[i], out[j] = out[j], out[i]
    elif mode == "invert":
        out[i] = inv(out[i])
    elif mode == "left":
        out[i] = mul(out[j], out[i])
    elif mode == "right":
        out[i] = mul(out[i], out[j])
    elif mode == "left-inverse":
        out[i] = mul(inv(out[j]), out[i])
    else:
        out[i] = mul(out[i], inv(out[j]))
    return out


def graph_from_json(data: dict | str, alphabet: Alphabet) -> SubgroupGraph:
    if isinstance(data, str):
        data = json.loads(data)
    edges = {(e["from"], e["to"], alphabet.index(e["label"])) for e in data["edges"]}
    return _canonical_graph(alphabet, data["base"], edges)
