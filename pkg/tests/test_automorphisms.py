import numpy as np
import pytest

import oracles
from autl import kernels
from autl.automorphisms import (
    Automorphism,
    AutomorphismSet,
    absolute_central_automorphisms,
    absolute_centre,
    autl_fixing_centre,
    autocommutator,
    automorphism_group,
    central_automorphisms,
    constrained_autl,
    inner_automorphisms,
    is_automorphism,
    restricted_automorphisms,
)
from autl.constructions import NONABELIAN_CORPUS, builtin, builtin_corpus
from autl.core import centre, trivial_subgroup, whole_group
from autl.errors import EnumerationCapExceeded, ParentMismatch, SearchTimeout


def _as_set(rows):
    return {tuple(map(int, r)) for r in rows}


@pytest.mark.parametrize("name", ["C1", "C2", "C3", "C4", "C2xC2", "C6", "Q8", "D8", "C4xC2"])
def test_aut_matches_brute_force(name):
    G = builtin(name)
    A = automorphism_group(G)
    assert _as_set(A.images) == set(oracles.all_automorphisms(G))


def test_aut_spot_orders(q8, d8):
    assert automorphism_group(builtin("C2")).order == 1
    assert automorphism_group(builtin("C2xC2")).order == 6
    assert automorphism_group(q8).order == 24
    assert automorphism_group(d8).order == 8


def test_aut_is_representation_independent(q8, q8_perm):
    assert automorphism_group(q8_perm).order == automorphism_group(q8).order == 24


def test_absolute_centre_examples(q8, heis3):
    C2 = builtin("C2")
    assert absolute_centre(C2, automorphism_group(C2)).order == 2
    Lq = absolute_centre(q8, automorphism_group(q8))
    assert Lq.order == 2 and Lq == centre(q8)
    assert absolute_centre(heis3, automorphism_group(heis3)).order == 1


def test_absolute_centre_oracle():
    for name in ["Q8", "D8", "C4xC2", "C4"]:
        G = builtin(name)
        fixed = {g for g in range(G.order) if all(a[g] == g for a in oracles.all_automorphisms(G))}
        assert set(absolute_centre(G, automorphism_group(G)).elements.tolist()) == fixed


def test_autocommutator_examples(q8):
    ident = np.arange(8)
    assert all(autocommutator(q8, g, ident) == 0 for g in range(8))
    m = oracles.mul_fn(q8)
    order4 = [g for g in range(8) if oracles.element_order(q8, g) == 4]
    i = order4[0]
    j = next(x for x in order4 if m(i, x) != m(x, i))
    jinv = oracles.inverse(q8, j)
    conj_j = np.array([m(m(j, x), jinv) for x in range(8)])
    minus_one = next(g for g in range(8) if oracles.element_order(q8, g) == 2)
    assert autocommutator(q8, i, conj_j) == minus_one
    assert autocommutator(q8, j, Automorphism(q8, conj_j)) == 0


def test_inner_examples(q8, heis3):
    assert inner_automorphisms(builtin("C4xC2")).order == 1
    assert inner_automorphisms(q8).order == 4
    assert inner_automorphisms(heis3).order == 9


def test_restricted_examples(q8):
    A = automorphism_group(q8)
    assert restricted_automorphisms(A, whole_group(q8), trivial_subgroup(q8)) == A
    assert restricted_automorphisms(A, trivial_subgroup(q8), trivial_subgroup(q8)).order == 1
    L = absolute_centre(q8, A)
    assert restricted_automorphisms(A, L, trivial_subgroup(q8)).order == 4
    with pytest.raises(ParentMismatch):
        restricted_automorphisms(A, centre(builtin("D8")), trivial_subgroup(q8))


def test_restricted_oracle(d8):
    A = automorphism_group(d8)
    Z = set(centre(d8).elements.tolist())
    m = oracles.mul_fn(d8)
    want = {a for a in oracles.all_automorphisms(d8)
            if all(m(oracles.inverse(d8, x), a[x]) in Z for x in range(8))}
    assert _as_set(central_automorphisms(A).images) == want


def test_constrained_examples(q8, d8, heis3):
    for G in (q8, d8):
        A = automorphism_group(G)
        L = absolute_centre(G, A)
        c = constrained_autl(G, L)
        assert c.order == 4 and c == absolute_central_automorphisms(A, L)
    assert constrained_autl(heis3, trivial_subgroup(heis3)).order == 1


@pytest.mark.parametrize("name", NONABELIAN_CORPUS)
def test_engine_invariants(name):
    G = builtin(name)
    A = automorphism_group(G)
    Z = centre(G)
    inn = inner_automorphisms(G)
    L = absolute_centre(G, A)
    autc = central_automorphisms(A)
    autl = absolute_central_automorphisms(A, L)
    for S in (A, inn, autc, autl):
        assert S.is_closed()
        assert all(is_automorphism(G, r) for r in S.images[S.generators])
    assert inn.order * Z.order == G.order
    assert inn.issubset(A) and inn.is_normal_in(A)
    assert autl.issubset(autc) and autc.issubset(A)
    assert autl.is_abelian and autl.is_normal_in(A)
    assert L <= Z
    assert all(set(a[L.elements].tolist()) == set(L.elements.tolist()) for a in A.images)
    assert constrained_autl(G, L) == autl
    assert autl_fixing_centre(A, L).issubset(autl)


def test_full_hom_check_every_member():
    for name in ["D16", "heisenberg3", "C2xQ8"]:
        G = builtin(name)
        A = automorphism_group(G)
        assert all(is_automorphism(G, r) for r in A.images)


def test_automorphism_value_type(q8):
    A = automorphism_group(q8)
    a, b = A.elements[3], A.elements[7]
    assert (a * b)(5) == a(b(5))
    assert (a * a.inverse()) == Automorphism(q8, np.arange(8))
    assert a.is_valid()
    assert a in A
    assert not Automorphism(q8, np.array([1, 0, 2, 3, 4, 5, 6, 7])).is_valid()
    assert not Automorphism(q8, np.array([0, 1, 2, 3, 4, 5, 6, 6])).is_valid()


def test_set_equality_ignores_input_order(q8):
    A = automorphism_group(q8)
    shuffled = AutomorphismSet(q8, A.images[::-1].copy())
    assert shuffled == A
    assert np.array_equal(shuffled.images, A.images)


def test_cap_exceeded_reports_partial_count():
    G = builtin("C2xC2xC2")  # |Aut| = 168
    with pytest.raises(EnumerationCapExceeded) as exc:
        automorphism_group(G, cap=50)
    assert exc.value.partial_count >= 50


def test_timeout():
    G = builtin("C2xC2xC2xC2xC2")  # |Aut| = 9999360
    with pytest.raises(SearchTimeout):
        automorphism_group(G, timeout=0.2)


@pytest.mark.parametrize("G", builtin_corpus(64), ids=lambda G: G.label)
def test_backends_agree(G):
    a = automorphism_group(G, search=kernels.compiled_search or kernels.python_search)
    b = automorphism_group(G, search=kernels.python_search)
    assert np.array_equal(a.images, b.images)
