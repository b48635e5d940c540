import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyadic.core import (
    AxiomFailure, FiniteNaryTable, HGTriple, PolyadicError,
    associative_on, b_derived_triple, centered_retract, cyclic_b_derived,
    derived_triple, detect_nary_identity, dornte_on, eval_derived, max_table,
    retract, skew, solve, verify_axioms,
)
from polyadic.words import Alphabet, Homomorphism, WordGroup, parse, render

from conftest import words

UV = Alphabet(("u", "v1"))
U, V = UV.gens()


def P(text, a=UV):
    return parse(text, a)


# finite tables ---------------------------------------------------------------

def test_z4_plus_one():
    t = cyclic_b_derived(4, 3, 1)
    assert t.f(1, 2, 3) == 3
    # x + x + y + 1 = x  =>  y = -x - 1
    assert t.skew(0) == 3
    assert t.skews() == [3, 2, 1, 0]
    r = retract(t, 0)
    assert r.identity == 3
    assert all(r.mul(x, y) == (x + y + 1) % 4 for x in range(4) for y in range(4))
    assert all(r.mul(x, r.inverse(x)) == r.identity for x in range(4))
    assert detect_nary_identity(t) is None
    assert t.solve(2, [1, None, 2], 0) == 0
    assert verify_axioms(t).ok


@pytest.mark.parametrize("q", [2, 3])
def test_sum_tables_have_identity_zero(q):
    t = cyclic_b_derived(q, 3, 0)
    assert detect_nary_identity(t) == 0
    assert t.skew(0) == 0


def test_max_table_fails_solvability():
    rep = max_table(3, 3).verify_axioms()
    assert rep.associative and not rep.solvable and not rep.ok
    w = rep.counterexample
    assert w["axiom"] == "solvability"
    assert w["coefficients"].count(None) == 1
    t = max_table(3, 3)
    assert len(t.solutions(w["position"], w["coefficients"], w["rhs"])) == w["solutions"] != 1
    with pytest.raises(AxiomFailure):
        t.solve(w["position"], w["coefficients"], w["rhs"])


def test_nonassociative_table_reports_cut():
    t = FiniteNaryTable.from_function(3, 3, lambda x, y, z: (x * y + z) % 3)
    rep = t.verify_axioms()
    assert not rep.associative and rep.counterexample["axiom"] == "associativity"


def test_table_json_round_trip():
    t = cyclic_b_derived(3, 3, 2)
    back = FiniteNaryTable.from_json(t.to_json())
    assert np.array_equal(back.table, t.table) and (back.q, back.n) == (3, 3)
    with pytest.raises(PolyadicError):
        FiniteNaryTable.from_dict({"q": 2, "n": 3, "table": [0, 1]})
    with pytest.raises(PolyadicError):
        FiniteNaryTable.from_dict({"q": 2, "n": 3, "table": [0] * 7 + [5]})


def test_table_is_read_only():
    t = cyclic_b_derived(2, 3)
    with pytest.raises(ValueError):
        t.table[0, 0, 0] = 1


def test_dornte_on_tables():
    t = cyclic_b_derived(5, 4, 3)
    assert t.verify_axioms().dornte
    assert all(dornte_on(t, x, y) is None for x in range(5) for y in range(5))


# triples over free words -----------------------------------------------------

def test_derived_triple_is_concatenation():
    t = derived_triple(UV, 3)
    assert eval_derived(t, [U, V, U]) == P("u v1 u")
    assert t.skew(U) == P("u^-1")
    assert skew(t, P("u v1")) == P("v1^-1 u^-1")


def test_b_derived_rank_one():
    a = Alphabet.standard(1)
    x = a.gen(0)
    t = b_derived_triple(a, 3, x**2)
    assert t.f(x, x, x) == x**5
    assert t.skew(x) == x**-3


def test_b_derived_rejects_noncentral():
    with pytest.raises(PolyadicError, match="theta\\^2"):
        b_derived_triple(UV, 3, U)


def test_triple_validation():
    ident = Homomorphism.identity(UV)
    swap = Homomorphism(UV, UV, (V, U))
    with pytest.raises(PolyadicError, match="inverse"):
        HGTriple(WordGroup(UV), 3, swap, ident, UV.identity())
    # swap has order 2 = n-1 for n = 3, b = 1: valid
    HGTriple(WordGroup(UV), 3, swap, swap, UV.identity())
    # but not for n = 4
    with pytest.raises(PolyadicError):
        HGTriple(WordGroup(UV), 4, swap, swap, UV.identity())
    # theta(b) != b
    c = Homomorphism.conjugation(U)
    with pytest.raises(PolyadicError, match="theta\\(b\\)"):
        HGTriple(WordGroup(UV), 3, c, Homomorphism.conjugation(~U), V)
    # b outside a pivoted carrier
    with pytest.raises(PolyadicError, match="carrier"):
        HGTriple(WordGroup(UV, U, 2), 3, c, Homomorphism.conjugation(~U), U**2)


def test_triple_json_round_trip():
    c = Homomorphism.conjugation(P("u v1"))
    t = HGTriple(WordGroup(UV), 4, c, Homomorphism.conjugation(P("v1^-1 u^-1")), P("u v1") ** 3)
    data = json.loads(t.to_json())
    assert data["b"] == "u v1 u v1 u v1" and data["n"] == 4
    assert HGTriple.from_json(t.to_json()) == t
    with pytest.raises(PolyadicError):
        HGTriple.from_dict({k: v for k, v in data.items() if k != "n"})


def test_arity_and_carrier_errors():
    t = derived_triple(UV, 3)
    with pytest.raises(PolyadicError):
        t.f(U, V)
    with pytest.raises(PolyadicError):
        t.solve(4, [U, V, None], U)


def test_retract_kinds():
    t = derived_triple(UV, 4)
    r = retract(t, U)
    assert r.identity == P("u^-2")
    assert r.mul(V, V) == P("v1 u^2 v1")
    c = centered_retract(t, U)
    assert c.identity == U and c.mul(V, V) == P("v1 u^-1 v1")


def conj_triples(n):
    return st.builds(
        lambda c: HGTriple(WordGroup(UV), n, Homomorphism.conjugation(c),
                           Homomorphism.conjugation(~c), c ** (n - 1)),
        words(UV, max_runs=3))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5).flatmap(lambda n: st.tuples(conj_triples(n), st.lists(words(UV), min_size=2 * n - 1, max_size=2 * n - 1))))
def test_triple_axioms(data):
    t, xs = data
    n = t.n
    assert associative_on(t, xs) is None
    assert dornte_on(t, xs[0], xs[1]) is None
    s = t.skew(xs[0])
    assert t.f(*([xs[0]] * (n - 1) + [s])) == xs[0]
    for pos in range(1, n + 1):
        coeffs = list(xs[:n])
        coeffs[pos - 1] = None
        y = solve(t, pos, coeffs, xs[n])
        coeffs[pos - 1] = y
        assert t.f(*coeffs) == xs[n]
    r = retract(t, xs[1])
    p, q = xs[2], xs[3]
    assert r.mul(p, r.identity) == p == r.mul(r.identity, p)
    assert r.mul(p, r.inverse(p)) == r.identity
    assert r.mul(r.mul(p, q), xs[4]) == r.mul(p, r.mul(q, xs[4]))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(3, 4), st.data())
def test_cyclic_tables_solve(q, n, data):
    b = data.draw(st.integers(0, q - 1))
    t = cyclic_b_derived(q, n, b)
    xs = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    pos = data.draw(st.integers(1, n))
    coeffs = list(xs)
    coeffs[pos - 1] = None
    y = t.solve(pos, coeffs, xs[0])
    coeffs[pos - 1] = y
    assert t.f(*coeffs) == xs[0]
