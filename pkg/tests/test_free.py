import random

import pytest
from hypothesis import given, settings, strategies as st

from polyadic.core import PolyadicError, associative_on, dornte_on
from polyadic.free import (
    FreePolyadicGroup, basis_pipeline, coset_of, cover_extend, extract_hg, f_free,
    hg_triple, skew_free,
)
from polyadic.randomized import random_element
from polyadic.subgroups import IS_BASIS
from polyadic.words import Alphabet, WordGroup, parse, render

from conftest import words

G3 = FreePolyadicGroup.standard(2, 3)
UV = G3.alphabet
U, V = UV.gens()


def P(text, a=UV):
    return parse(text, a)


def test_f_free_concatenates():
    assert f_free(G3, [U, V, P("v1^-1 u^-1 v1")]) == V
    assert render(f_free(G3, [U, U, U])) == "u^3"


def test_carrier_guard():
    with pytest.raises(PolyadicError, match="carrier"):
        f_free(G3, [U, P("u^2"), U])
    with pytest.raises(PolyadicError):
        f_free(G3, [U, U])
    with pytest.raises(PolyadicError):
        FreePolyadicGroup.standard(2, 2)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_skew_free(n):
    g = FreePolyadicGroup.standard(2, n)
    assert skew_free(g, U) == U ** (2 - n)
    w = P("u v1 u^-1") if n == 3 else U
    assert g.f(*([w] * (n - 1) + [g.skew(w)])) == w


def test_skew_n3_is_inverse():
    w = P("v1 u v1^-1")
    assert G3.skew(w) == ~w


def test_solve_free():
    g = FreePolyadicGroup.standard(2, 4)
    y = g.solve(2, [U, None, V, V], P("u v1 u^-1"))
    assert g.f(U, y, V, V) == P("u v1 u^-1")


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**6))
def test_free_axioms(n, seed):
    g = FreePolyadicGroup.standard(2, n)
    rng = random.Random(seed)
    xs = [random_element(g, rng, 8) for _ in range(2 * n - 1)]
    assert associative_on(g, xs) is None
    assert dornte_on(g, xs[0], xs[1]) is None


def test_post_cover():
    for n in (3, 4, 5):
        pc = FreePolyadicGroup.standard(3, n).post_cover()
        assert pc.check() == []
        assert [render(w) for w in pc.transversal] == ["1"] + [render(U**i) for i in range(1, n - 1)]
    pc = G3.post_cover()
    assert coset_of(pc, U) == 1 and coset_of(pc, P("u v1")) == 0


def test_extract_hg_n3():
    e = extract_hg(G3)
    t = e.triple
    assert t.b == P("u^3")
    assert t.theta(V) == P("u v1 u^-1")
    assert e.retract.identity == U
    assert e.retract.mul(V, V) == P("v1 u^-1 v1")
    d = e.to_dict()
    assert d["B"] == ["v1 u^-1", "u^2", "u v1"]
    assert d["B_prime"] == ["v1", "u^3", "u v1 u"]
    assert d["B_double_prime"] == ["v1", "u^3", "u v1 u^-1"]
    assert d["matches"] and d["identity"] == "u"
    assert e.eta(P("v1 u^-1")) == V
    assert [render(w) for w in e.witnesses] == ["v1"]


@pytest.mark.parametrize("s, n", [(2, 3), (2, 4), (3, 3), (3, 4), (2, 5)])
def test_pipeline(s, n):
    g = FreePolyadicGroup.standard(s, n)
    p = basis_pipeline(g)
    assert p.matches
    assert p.kernel_certificate.verdict == IS_BASIS
    assert len(p.B) == (n - 1) * (s - 1) + 1
    u = g.u
    assert set(p.B_double_prime) == {u**n} | {u**i * v * u**-i for v in g.alphabet.gens()[1:] for i in range(n - 1)}


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**6))
def test_hg_reconstructs_f(n, seed):
    g = FreePolyadicGroup.standard(2, n)
    t = hg_triple(g)
    rng = random.Random(seed)
    xs = [random_element(g, rng, 10) for _ in range(n)]
    assert t.f(*xs) == g.f(*xs)


def test_cover_extend_identity():
    h = cover_extend(G3, {"u": U, "v1": V})
    for w in (P("u v1^-3 u"), UV.identity()):
        assert h(w) == w


def test_cover_extend_collapse():
    a = Alphabet(("t",))
    t = a.gen(0)
    h = cover_extend(G3, [t, t])
    assert h(P("u v1^-3 u^5")) == t**3
    with pytest.raises(PolyadicError):
        cover_extend(G3, [t])
    with pytest.raises(PolyadicError):
        cover_extend(G3, {"u": t})


def test_cover_extend_into_pivoted_target():
    target = WordGroup(UV, U, 2)
    h = cover_extend(G3, [U, P("u v1 u^-1")], target)
    assert h(U) == U and h(V) == P("u v1 u^-1")
    assert h(UV.identity()) == target.pivot
    assert h.target_f(U, U, U) == target.product([U, U, U])
    with pytest.raises(PolyadicError):
        cover_extend(G3, [U, V * V], target)


@settings(max_examples=50)
@given(words(UV), words(UV))
def test_cover_extend_is_homomorphism(x, y):
    target = WordGroup(UV, U, 2)
    h = cover_extend(G3, [U, P("v1 u^-1 v1")], target)
    assert h(x * y) == target.mul(h(x), h(y))
    assert h(~x) == target.inv(h(x))


@settings(max_examples=30)
@given(words(UV))
def test_cover_extend_unique(w):
    # any homomorphism agreeing on generators agrees everywhere: compare with
    # the letter-by-letter evaluation in the target
    target = WordGroup(UV, U, 2)
    imgs = {1: U, 2: P("u^3 v1^-1 u^-1")}
    h = cover_extend(G3, [imgs[1], imgs[2]], target)
    acc = target.pivot
    for x in w.letters():
        y = imgs[abs(x)]
        acc = target.mul(acc, y if x > 0 else target.inv(y))
    assert h(w) == acc
