import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from polyadic.subgroups import (
    GENERATES_NOT_BASIS, IS_BASIS, NOT_GENERATING,
    CosetMap, fold, graph_from_json, is_basis_of_kernel, is_basis_of_whole_group,
    member, nielsen_replace, same_subgroup, schreier_basis, schreier_transversal,
)
from polyadic.words import Alphabet, Word, WordError, WordGroup, parse, render

from conftest import words

UV = Alphabet(("u", "v1"))
U, V = UV.gens()


def P(text, a=UV):
    return parse(text, a)


# transversals and Schreier bases ----------------------------------------------

def test_transversal_whole_group():
    c = CosetMap(UV, 1, (0, 0))
    assert [render(w) for w in schreier_transversal(c)] == ["1"]


@pytest.mark.parametrize("n, expected", [(3, ["1", "u"]), (4, ["1", "u", "u^2"]),
                                         (5, ["1", "u", "u^2", "u^3"])])
def test_transversal_for_height_map(n, expected):
    t = schreier_transversal(CosetMap.height(UV, n - 1))
    assert [render(w) for w in t] == expected


def test_transversal_rejects_non_onto():
    with pytest.raises(WordError):
        schreier_transversal(CosetMap(UV, 4, (2, 2)))


def test_schreier_basis_index_one_is_alphabet():
    assert schreier_basis(CosetMap(UV, 1, (0, 0))) == UV.gens()


def test_schreier_basis_n3_by_hand():
    # t in {1, u}, x in {u, v1}:
    #   1*u*rep(u)^-1 = u u^-1 = 1 (dropped); 1*v1*rep(v1)^-1 = v1 u^-1
    #   u*u*rep(u^2)^-1 = u^2;                u*v1*rep(u v1)^-1 = u v1
    basis = schreier_basis(CosetMap.height(UV, 2))
    assert sorted(map(render, basis)) == sorted(["v1 u^-1", "u^2", "u v1"])
    assert len(basis) == 2 * (2 - 1) + 1
    # same subgroup as the set displayed for this case, {u^2, v1 u^-1, u v1 u^-2}
    assert same_subgroup(basis, [P("u^2"), P("v1 u^-1"), P("u v1 u^-2")])


def test_schreier_basis_rank_three_alphabet():
    a = Alphabet.standard(3)
    assert len(schreier_basis(CosetMap.height(a, 2))) == 5


@settings(max_examples=60)
@given(st.integers(1, 4), st.integers(1, 6), st.data())
def test_rank_formula_and_kernel(r, m, data):
    a = Alphabet.standard(r)
    residues = data.draw(st.lists(st.integers(0, m - 1), min_size=r, max_size=r))
    c = CosetMap(a, m, tuple(residues))
    if not c.is_onto():
        return
    t = schreier_transversal(c)
    # prefix closed
    reps = set(t.words)
    for w in t:
        letters = w.letters()
        assert all(Word.from_letters(a, letters[:i]) in reps for i in range(len(letters)))
    basis = schreier_basis(c, t)
    assert len(basis) == m * (r - 1) + 1
    assert all(c.residue(b) == 0 for b in basis)
    g = fold(basis, a)
    assert g.index == m and g.rank == m * (r - 1) + 1


# folding ---------------------------------------------------------------------

def test_fold_empty():
    g = fold([], UV)
    assert g.num_vertices == 1 and g.rank == 0 and g.index is None


def test_fold_full_alphabet_is_rose():
    g = fold(UV.gens())
    assert g.num_vertices == 1 and g.rank == 2 and g.index == 1


def test_fold_index_two_example():
    g = fold([P("u^2"), P("v1 u^-1"), P("u v1 u^-2")])
    assert (g.rank, g.index) == (3, 2)


def test_fold_is_folded():
    g = fold([P("u v1 u^-1 v1"), P("u^2 v1^-1"), P("v1 u v1")])
    for table in (g.out, g.inc):
        for d in table:
            assert len(d) == len(set(d))  # dict keys are labels; at most one edge per label
    # every vertex reachable, base present
    assert g.base == 0


def test_fold_non_cyclically_reduced():
    g = fold([P("u v1 u^-1")])
    assert g.rank == 1 and g.num_vertices == 2
    assert member(g, P("u v1^5 u^-1")) and not member(g, P("v1"))


def test_membership_examples():
    g = fold([P("u^2"), V])
    assert member(g, UV.identity())
    assert member(g, P("u^2")) and member(g, V)
    assert not member(g, U)


def test_graph_json_and_dot():
    g = fold([P("u^2"), P("v1 u^-1"), P("u v1")])
    data = g.to_json()
    assert data["base"] == 0 and len(data["vertices"]) == 2
    assert {e["label"] for e in data["edges"]} == {"u", "v1"}
    assert graph_from_json(data, UV).canonical_form() == g.canonical_form()
    dot = g.to_dot()
    assert dot.startswith("digraph") and 'label="v1"' in dot


# basis certificates ----------------------------------------------------------

def test_alphabet_is_basis():
    assert is_basis_of_whole_group(UV.gens()).verdict == IS_BASIS


def test_u_squared_v_not_generating():
    cert = is_basis_of_whole_group([P("u^2"), V])
    assert cert.verdict == NOT_GENERATING
    # <u^2, v1> has infinite index: its graph is not a cover
    assert cert.index is None


def test_free_polyadic_basis_is_basis():
    from polyadic.free import FreePolyadicGroup, hg_triple
    t = hg_triple(FreePolyadicGroup.standard(2, 3))
    cand = [t.b, t.theta_powers[0](V), t.theta_powers[1](V)]
    cert = is_basis_of_kernel([t.base.to_kernel(w) for w in cand], CosetMap.height(UV, 2))
    assert cert.verdict == IS_BASIS and cert.rank == 3


def test_size_mismatch_reported():
    cert = is_basis_of_whole_group([U, V, P("u v1")])
    assert cert.verdict == GENERATES_NOT_BASIS
    assert not is_basis_of_whole_group([U]).is_basis
    assert is_basis_of_whole_group([U], UV).verdict == NOT_GENERATING


def test_nielsen_moves():
    a, b = P("u"), P("v1")
    assert nielsen_replace([a, b], 0, 1, "swap") == [b, a]
    ab = P("u v1")
    assert nielsen_replace([ab, b], 0, 1, "right-inverse") == [a, b]
    assert nielsen_replace([a, b], 0, mode="invert") == [~a, b]
    assert nielsen_replace([a, b], 1, 0, "left") == [a, P("u v1")]
    assert nielsen_replace([a, b], 1, 0, "left-inverse") == [a, P("u^-1 v1")]
    with pytest.raises(IndexError):
        nielsen_replace([a, b], 0, 0, "right")
    with pytest.raises(IndexError):
        nielsen_replace([a, b], 2, 0, "right")
    with pytest.raises(ValueError):
        nielsen_replace([a, b], 0, 1, "twist")


@pytest.mark.parametrize("n", [3, 4, 5])
def test_nielsen_step_in_circle_group(n):
    circ = WordGroup(UV, U, n - 1)
    basis = [U**n, U ** (n - 2) * V * U]
    out = nielsen_replace(basis, 1, 0, "right-inverse", group=circ)
    assert out[1] == U ** (n - 2) * V * U ** -(n - 2)


@settings(max_examples=50)
@given(st.lists(words(UV, max_runs=4), min_size=2, max_size=4), st.data())
def test_nielsen_preserves_subgroup(basis, data):
    i = data.draw(st.integers(0, len(basis) - 1))
    j = data.draw(st.integers(0, len(basis) - 1).filter(lambda k: k != i))
    mode = data.draw(st.sampled_from(["swap", "invert", "left", "right", "left-inverse", "right-inverse"]))
    out = nielsen_replace(basis, i, j, mode)
    ga, gb = fold(basis, UV), fold(out, UV)
    assert ga.num_vertices <= 50
    assert ga.canonical_form() == gb.canonical_form()


# membership against an independent oracle ----------------------------------------

def _transitive_actions(m):
    perms = list(itertools.permutations(range(m)))
    for pu, pv in itertools.product(perms, repeat=2):
        seen, todo = {0}, [0]
        while todo:
            x = todo.pop()
            for p in (pu, pv):
                for y in (p[x], p.index(x)):
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
        if len(seen) == m:
            yield pu, pv


def _act(perms, point, w):
    for x in w.letters():
        p = perms[abs(x) - 1]
        point = p[point] if x > 0 else p.index(point)
    return point


def _stabilizer_generators(perms, m):
    """Schreier generators of Stab(0), written out independently of the package."""
    reps = {0: []}
    order = [0]
    for x in order:
        for g in (1, 2):
            y = perms[g - 1][x]
            if y not in reps:
                reps[y] = reps[x] + [g]
                order.append(y)
    gens = []
    for x, rep in reps.items():
        for g in (1, 2):
            y = perms[g - 1][x]
            letters = rep + [g] + [-l for l in reversed(reps[y])]
            w = Word.from_letters(UV, letters)
            if not w.is_identity():
                gens.append(w)
    return gens


def _all_words(a, max_len):
    r = len(a)
    frontier = [[]]
    yield a.identity()
    for _ in range(max_len):
        nxt = []
        for letters in frontier:
            for x in list(range(1, r + 1)) + list(range(-r, 0)):
                if letters and letters[-1] == -x:
                    continue
                nxt.append(letters + [x])
        for letters in nxt:
            yield Word.from_letters(a, letters)
        frontier = nxt


ALL_WORDS_8 = list(_all_words(UV, 8))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_member_matches_permutation_oracle(m):
    rng = random.Random(m)
    actions = list(_transitive_actions(m))
    for perms in rng.sample(actions, min(6, len(actions))):
        gens = _stabilizer_generators(perms, m)
        g = fold(gens, UV)
        assert g.index == m
        for w in ALL_WORDS_8:
            assert member(g, w) == (_act(perms, 0, w) == 0), render(w)
