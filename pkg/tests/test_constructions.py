import itertools

import numpy as np
import pytest

import oracles
from autl.automorphisms import are_isomorphic, find_isomorphism
from autl.constructions import (
    ABELIAN_CORPUS,
    NONABELIAN_CORPUS,
    builtin,
    builtin_corpus,
    cyclic,
    dihedral,
    direct_product,
    extraspecial_p2,
    generalized_quaternion,
    heisenberg,
    modular_group,
    semidirect_cyclic,
)
from autl.core import Group, centre, derived_subgroup, exponent, nilpotency_class
from autl.errors import InvalidParameter


def test_dihedral_8():
    G = dihedral(8)
    assert G.order == 8 and not G.is_abelian and exponent(G) == 4


def test_heisenberg_3():
    G = heisenberg(3)
    assert G.order == 27 and exponent(G) == 3 and centre(G).order == 3


def test_semidirect_gives_d8():
    S, D = semidirect_cyclic(4, 2, 3), dihedral(8)
    assert are_isomorphic(S, D)
    assert oracles.isomorphic(S, D)
    iso = find_isomorphism(S, D)
    assert oracles.is_hom(S, D, iso.tolist())


def test_q8_not_d8():
    assert not are_isomorphic(builtin("Q8"), builtin("D8"))
    assert not oracles.isomorphic(builtin("Q8"), builtin("D8"))


def test_builders_are_deterministic():
    for f, arg in [(dihedral, 16), (generalized_quaternion, 32), (heisenberg, 5), (modular_group, 81)]:
        assert np.array_equal(f(arg).table, f(arg).table)


@pytest.mark.parametrize("call", [
    lambda: dihedral(7), lambda: dihedral(2), lambda: generalized_quaternion(12),
    lambda: generalized_quaternion(4), lambda: semidirect_cyclic(5, 2, 3),
    lambda: semidirect_cyclic(4, 2, 2), lambda: heisenberg(2), lambda: heisenberg(9),
    lambda: extraspecial_p2(4), lambda: modular_group(8), lambda: modular_group(9),
    lambda: modular_group(12), lambda: cyclic(0),
])
def test_invalid_parameters(call):
    with pytest.raises(InvalidParameter):
        call()


@pytest.mark.parametrize("k", [3, 4, 5])
def test_quaternion_unique_involution(k):
    G = generalized_quaternion(2 ** k)
    assert int(np.sum(G.elem_order == 2)) == 1


@pytest.mark.parametrize("order", [8, 12, 16, 32])
def test_dihedral_involutions(order):
    G = dihedral(order)
    assert int(np.sum(G.elem_order == 2)) == order // 2 + 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_heisenberg_centre_is_derived(p):
    G = heisenberg(p)
    assert centre(G) == derived_subgroup(G) and centre(G).order == p
    assert exponent(G) == p


@pytest.mark.parametrize("p", [3, 5])
def test_extraspecial_p2(p):
    G = extraspecial_p2(p)
    assert G.order == p ** 3 and exponent(G) == p * p
    assert centre(G) == derived_subgroup(G) and centre(G).order == p


@pytest.mark.parametrize("order", [16, 32, 27, 81])
def test_modular(order):
    G = modular_group(order)
    assert G.order == order and not G.is_abelian
    assert exponent(G) == order // min(p for p in (2, 3) if order % p == 0)
    assert derived_subgroup(G).order == min(p for p in (2, 3) if order % p == 0)


def test_direct_product():
    G = direct_product(builtin("C2"), builtin("Q8"))
    assert G.order == 16 and centre(G).order == 4 and nilpotency_class(G) == 2


def test_builtin_names():
    assert builtin("C4xC2xC2").order == 16
    assert builtin("extraspecial3").order == 27
    assert builtin("semidirect8_4_3").order == 32
    with pytest.raises(InvalidParameter):
        builtin("nonsense")


def test_corpus_contents():
    labels8 = {G.label for G in builtin_corpus(8)}
    assert {"D8", "Q8"} <= labels8
    labels27 = {G.label for G in builtin_corpus(27)}
    assert {"heisenberg3", "extraspecial3"} <= labels27
    nonab16 = [G for G in builtin_corpus(16) if G.order == 16 and not G.is_abelian]
    assert len(nonab16) >= 6
    orders = {G.order for G in builtin_corpus(243) if not G.is_abelian}
    assert {8, 16, 27, 32, 64, 81} <= orders
    assert all(G.order <= 32 for G in builtin_corpus(32))


def test_every_builtin_is_a_valid_group():
    for G in builtin_corpus(243):
        Group(np.array(G.table), G.label)  # full re-validation


def test_corpus_pairwise_non_isomorphic():
    groups = [builtin(n) for n in NONABELIAN_CORPUS + ABELIAN_CORPUS]
    for a, b in itertools.combinations(groups, 2):
        if a.order == b.order:
            assert not are_isomorphic(a, b), (a.label, b.label)


def test_isomorphism_search_against_oracle_order_8():
    groups = [builtin(n) for n in ("C8", "C4xC2", "C2xC2xC2", "D8", "Q8")] + [semidirect_cyclic(4, 2, 3)]
    for a, b in itertools.combinations(groups, 2):
        assert are_isomorphic(a, b) == oracles.isomorphic(a, b)
