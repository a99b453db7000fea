from itertools import combinations, product

import pytest
from hypothesis import given

from archmon.arch import arch_class, gamma
from archmon.core import (
    NotASubmonoid,
    additive_closure,
    eqv_classes,
    is_cofinal,
    nmul,
    upper_bound_quotient,
)
from archmon.sa import (
    CarrierTooLarge,
    cbar,
    cbar_omega,
    cbar_set,
    complement_dual,
    complement_dual_report,
    enumerate_sa,
    is_sa,
    is_union_of_blocks,
    least_sa_containing,
    omega_chain_holds,
    sa_closure,
    sa_witness,
    w_of,
    zero_class,
)

from .conftest import monoid_and_subset, monoids, pair


def all_sa(O):
    """SA-submonoids by scanning every subset that contains 0."""
    rest = [x for x in range(O.n) if x != O.zero]
    out = []
    for r in range(len(rest) + 1):
        for c in combinations(rest, r):
            W = frozenset(c) | {O.zero}
            if all((O.table[x, y] in W) == (x in W and y in W) for x, y in product(range(O.n), repeat=2)):
                out.append(W)
    return out


def test_is_sa_examples(T3, Z2):
    assert is_sa(T3.monoid, {0})
    assert not is_sa(Z2.monoid, {0})
    assert sa_witness(Z2, {0}) == ("absorb", 1, 1)
    assert is_sa(T3.monoid, range(4))


def test_cbar_examples(T3):
    assert cbar(T3, 3) == {0, 1, 2, 3}
    assert cbar(T3, 1) == {0}
    assert all(0 in cbar(T3, x) for x in range(4))


def test_cbar_set_examples(T3, D33, C3):
    assert cbar_set(T3, {1, 2, 3}) == set(range(4))
    assert cbar_set(C3, {1}) == cbar(C3, 1)
    row = {pair(x, 0) for x in (1, 2, 3)}
    assert cbar_set(D33, row) == {pair(x, 0) for x in range(4)}


def test_cbar_omega_examples(T3, D33):
    assert cbar_omega(T3, 1) == set(range(4))
    assert cbar_omega(T3, 0) == cbar(T3, 0)
    assert cbar_omega(D33, pair(1, 0)) == {pair(x, 0) for x in range(4)}


def test_w_of_examples(T3, D33):
    assert w_of(T3, 1).elements == set(range(4))
    assert w_of(T3, 0).elements == cbar(T3, 0)
    assert w_of(D33, pair(1, 0)).elements == {pair(x, 0) for x in range(4)}


def test_sa_closure_examples(T3):
    assert sa_closure(T3, {1}).elements == set(range(4))
    assert sa_closure(T3, set()).elements == {0}
    assert sa_closure(T3, range(4)).elements == set(range(4))


def test_enumerate_sa_small(T3, Z2, one):
    # {0,1} and {0,1,2} are down-sets of T3 but 1+1 = 2 and 1+2 = 3 leave them
    assert [s.elements for s in enumerate_sa(T3)] == [{0}, {0, 1, 2, 3}]
    assert [s.elements for s in enumerate_sa(Z2)] == [{0, 1}]
    assert len(enumerate_sa(one)) == 1


def test_enumerate_sa_bound(D33):
    with pytest.raises(CarrierTooLarge):
        enumerate_sa(D33)
    assert len(enumerate_sa(D33, bound=16)) == len(all_sa(D33))


def test_enumerate_sa_env_bound(T3, monkeypatch):
    monkeypatch.setenv("ARCHMON_SA_BOUND", "3")
    with pytest.raises(CarrierTooLarge):
        enumerate_sa(T3)


@given(monoids())
def test_enumerate_sa_matches_subset_scan(O):
    assert sorted(map(sorted, (s.elements for s in enumerate_sa(O)))) == sorted(map(sorted, all_sa(O)))


@given(monoids())
def test_sa_sets_are_down_closed(O):
    for W in all_sa(O):
        assert all(x in W for x, y in product(range(O.n), W) if O.rel[x, y])


@given(monoids())
def test_cbar_is_sa_and_monotone(O):
    for x in range(O.n):
        assert is_sa(O.monoid, cbar(O, x))
        assert cbar(O, x) == {u for u in range(O.n) if O.equiv(O.table[u, x], x)}
    for x, y in product(range(O.n), repeat=2):
        if O.leq(x, y):
            assert cbar(O, x) <= cbar(O, y)


@given(monoids())
def test_cbar_omega_closure_and_chain(O):
    M = O.monoid
    for x in range(O.n):
        assert omega_chain_holds(O, x)
        assert cbar_omega(O, x) == cbar_set(O, additive_closure(M, {x}))
        for y in range(O.n):
            for m in range(1, O.n + 2):
                if O.leq(x, nmul(M, m, y)):
                    assert cbar_omega(O, x) <= cbar_omega(O, y)
            if y in arch_class(O, x):
                assert cbar_omega(O, x) == cbar_omega(O, y)


@given(monoid_and_subset(), monoid_and_subset())
def test_cofinal_sets_share_cbar(c1, c2):
    O, S = c1
    M = O.monoid
    X = additive_closure(M, S)
    Y = additive_closure(M, c2[1] & frozenset(range(O.n)))
    if X and Y and is_cofinal(O, X, Y):
        assert cbar_set(O, X) == cbar_set(O, Y)


@given(monoids())
def test_triple_agreement_for_w(O):
    sas = enumerate_sa(O)
    G = gamma(O)
    for c in G.classes:
        w = w_of(O, c.representative).elements
        assert w == sa_closure(O, c.elements).elements == least_sa_containing(sas, c.elements)
        assert all(w_of(O, y).elements == w for y in c.elements)
        assert cbar_set(O, w) == cbar_set(O, c.elements)


@given(monoids())
def test_sa_through_upper_bound_quotient(O):
    Obar, proj = upper_bound_quotient(O)
    C = eqv_classes(O.order, O.monoid)
    for W in all_sa(O):
        assert is_union_of_blocks(C, W)
        assert is_sa(Obar.monoid, {proj.map[x] for x in W})


@given(monoids())
def test_diamond_or_chain_around_each_class(O):
    z = zero_class(O)
    assert z == arch_class(O, O.zero).elements
    for c in gamma(O).classes:
        A, D = c.elements, cbar_set(O, c.elements)
        if A & D:
            assert z <= A | z <= D
        else:
            assert (A | z) & D == z


def test_complement_dual_examples(T3, Z2):
    # {0,1} is not a submonoid of T3 (1+1 = 2)
    with pytest.raises(NotASubmonoid):
        complement_dual(T3, {0, 1})
    assert complement_dual(T3, range(4)) == cbar(T3, 0)
    r = complement_dual_report(Z2, {0})
    assert r["U"] == {0, 1} and not r["W_sa"] and not r["complement_additive"]


@given(monoids())
def test_complement_dual_forward_direction(O):
    # only "W SA => U submonoid and V - W additive" survives on finite monoids
    for W in all_sa(O):
        r = complement_dual_report(O, W)
        assert r["U_submonoid"] and r["complement_additive"]


def test_union_of_blocks_examples(T3, Z2):
    assert is_union_of_blocks(eqv_classes(T3.order, T3.monoid), {1, 3})
    assert not is_union_of_blocks(eqv_classes(Z2.order, Z2.monoid), {0})
    assert is_union_of_blocks(eqv_classes(Z2.order, Z2.monoid), set())

