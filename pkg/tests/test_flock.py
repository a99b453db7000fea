from itertools import combinations_with_replacement

import pytest
from hypothesis import given

from archmon.arch import gamma
from archmon.core import idempotent_power, is_submonoid, submonoid_closure
from archmon.flock import (
    ClassNotInS,
    NotAChain,
    NotPrincipal,
    all_flocks,
    attractor_classes,
    center_unique,
    chain_part_convex,
    class_cbar,
    classify_dichotomy,
    classify_inessential,
    compatible,
    down_set,
    down_set_by_w,
    entourages,
    essential_classes,
    flock_of_principal,
    flocks_in_chain,
    is_flock,
    is_grounded,
    max_flock,
    min_flock,
    principal_reason,
    principal_set_of_flock,
    s_f_of,
    s_f_oracle,
)
from archmon.gen import chain, semilattice
from archmon.core import ordered
from archmon.sa import cbar, cbar_omega, is_sa
from archmon.strat import abstract_flock
from archmon.verify import instance, principal_sets

from .conftest import monoids, pair


def test_entourage_examples(T3, one, D33):
    es = entourages(T3)
    assert [e.elements for e in es] == [{0}, {0, 1, 2, 3}]
    assert es[1].witnesses == (1, 2, 3)
    assert len(entourages(one)) == 1
    col = {pair(x, 0) for x in range(4)}
    row = {pair(0, y) for y in range(4)}
    assert {e.elements for e in entourages(D33)} == {frozenset({0}), frozenset(col), frozenset(row),
                                                       frozenset(range(16))}


@given(monoids())
def test_entourages_are_sa(O):
    for e in entourages(O):
        assert is_sa(O.monoid, e.elements)
        assert all(cbar_omega(O, x) == e.elements for x in e.witnesses)


def test_attractor_examples(T3, D33):
    assert attractor_classes(T3, range(4)) == {1}
    assert attractor_classes(T3, {0}) == {0}
    col = {pair(x, 0) for x in range(4)}
    assert attractor_classes(D33, col) == {gamma(D33).proj[pair(1, 0)]}


def test_dichotomy_examples(T3):
    r = classify_dichotomy(T3, 1)
    assert r.centered and r.evidence == 3
    r = classify_dichotomy(T3, 0)
    assert r.centered and r.evidence == 0
    F = abstract_flock(chain(3), [1, 2], "disjoint")
    assert classify_dichotomy(F, 1).tag == "disjoint"


@given(monoids())
def test_finite_monoids_are_centered(O):
    for a in gamma(O).ids:
        r = classify_dichotomy(O, a)
        assert r.centered
        z = r.evidence
        assert O.equiv(O.table[z, z], z)
        _, e = idempotent_power(O.monoid, gamma(O).classes[a].representative)
        assert e in r.meeting


def test_center_uniqueness_only_up_to_archimedean_class(T3):
    # 1 and 3 both lie in [1] and in V; they are archimedean-equivalent but not order-equivalent
    r = classify_dichotomy(T3, 1)
    assert center_unique(T3, r) == (1, 2)
    idem = [z for z in r.meeting if T3.equiv(T3.table[z, z], z)]
    assert idem == [3]


def test_compatibility_examples(T3, D33):
    G = gamma(D33)
    assert compatible(T3, 1, 1)
    assert not compatible(D33, G.proj[pair(1, 0)], G.proj[pair(0, 1)])


def test_max_flock_examples(T3, D33):
    assert max_flock(T3, 1).class_ids == {1}
    assert max_flock(T3, 0).class_ids == {0}
    a = gamma(D33).proj[pair(1, 0)]
    assert max_flock(D33, a).class_ids == {a}


def test_min_flock_examples(T3, C3):
    assert min_flock(T3, 1).class_ids == {1}
    for a in range(3):
        assert min_flock(C3, a).class_ids == {a}


def test_down_set_examples(T3):
    C4 = ordered(chain(4))
    assert down_set(gamma(T3), 1) == {0, 1}
    assert down_set(gamma(T3), 0) == {0}
    assert down_set(gamma(C4), 3) == {0, 1, 2, 3}


@given(monoids())
def test_down_set_via_w(O):
    G = gamma(O)
    for a in G.ids:
        assert down_set(G, a) == down_set_by_w(O, a)


@given(monoids())
def test_flocks_satisfy_axioms_and_min_is_intersection(O):
    G = gamma(O)
    flocks = all_flocks(O)
    for F in flocks:
        assert is_flock(O, F.class_ids)
        assert all(class_cbar(O, a) == F.entourage for a in F.class_ids)
    for a in G.ids:
        mx = max_flock(O, a)
        assert not mx.violations and a in mx
        containing = [F.class_ids for F in flocks if a in F.class_ids]
        mn = min_flock(O, a).class_ids
        assert mn == frozenset.intersection(*containing)
        assert mn == attractor_classes(O, class_cbar(O, a)) & down_set(G, a)


@given(monoids())
def test_min_flock_monotone_and_joins(O):
    G = gamma(O)
    flocks = [F.class_ids for F in all_flocks(O)]
    for a in G.ids:
        fl = max_flock(O, a).class_ids
        for b in fl:
            if G.leq(a, b):
                assert min_flock(O, a).class_ids <= min_flock(O, b).class_ids
        for a1, a2 in combinations_with_replacement(sorted(fl), 2):
            both = min_flock(O, a1).class_ids | min_flock(O, a2).class_ids
            least = frozenset.intersection(*[F for F in flocks if both <= F])
            assert min_flock(O, G.add(a1, a2)).class_ids == least


def test_principal_round_trip(T3):
    assert principal_set_of_flock(T3, {1}) == {1, 2, 3}
    assert flock_of_principal(T3, {1, 2, 3}).class_ids == {1}
    assert flock_of_principal(T3, {0}).class_ids == {0}
    with pytest.raises(NotPrincipal):
        flock_of_principal(T3, {1, 2})


@given(monoids())
def test_principal_correspondence(O):
    G = gamma(O)
    for a in G.ids:
        F = max_flock(O, a).class_ids
        S = principal_set_of_flock(O, F)
        assert principal_reason(O, S) is None
        assert flock_of_principal(O, S).class_ids == F
        assert is_grounded(O, S)


def test_inessential_labels(T3):
    assert classify_inessential(T3, range(4), 1) == "essential"
    assert classify_inessential(T3, range(4), 0) == "controlled"
    with pytest.raises(ClassNotInS):
        classify_inessential(T3, {1, 2, 3}, 0)


@given(monoids())
def test_no_class_is_ever_excessive(O):
    # A + B lies in S, so C(A+B) cannot exceed C(S) = D
    G = gamma(O)
    for S in principal_sets(instance(O)):
        D = class_cbar(O, min(essential_classes(O, S)))
        for b in G.classes_of(S):
            assert classify_inessential(O, S, b) in ("essential", "controlled")
            for a in essential_classes(O, S):
                assert class_cbar(O, G.add(a, b)) == D


def test_grounded_abstract():
    F = abstract_flock(chain(4), [1, 2, 3], "disjoint")
    assert is_grounded(F, {1, 2, 3})
    assert is_grounded(F, {1, 2})
    assert not is_grounded(F, {2, 3})


def test_s_f_examples(T3, D33):
    assert s_f_of(T3, 1) == set(range(4))
    assert s_f_of(T3, 0) == {0}
    a = gamma(D33).proj[pair(1, 0)]
    assert s_f_of(D33, a) == {pair(x, 0) for x in range(4)}


@given(monoids())
def test_s_f_is_generated_submonoid(O):
    for a in gamma(O).ids:
        S = s_f_of(O, a)
        assert S == s_f_oracle(O, a)
        assert is_submonoid(O.monoid, S)
        assert S == submonoid_closure(O.monoid, S)


def test_chain_partitions(T3):
    C4 = ordered(chain(4))
    assert flocks_in_chain(C4, range(4)) == tuple(frozenset({a}) for a in range(4))
    assert flocks_in_chain(T3, [0, 1]) == (frozenset({0}), frozenset({1}))
    assert flocks_in_chain(T3, [1]) == (frozenset({1}),)


def test_non_chain_rejected(diamond):
    with pytest.raises(NotAChain) as e:
        flocks_in_chain(diamond, [1, 2])
    assert e.value.witness == (1, 2)


@given(monoids())
def test_chain_parts_convex(O):
    G = gamma(O)
    covers = dict(G.covers())
    J, a = [G.zero], G.zero
    while a in covers:
        a = covers[a]
        J.append(a)
    for part in flocks_in_chain(O, J):
        assert chain_part_convex(G, J, part)


def test_cbar_of_idempotent_class_member(diamond):
    # on a semilattice C(x) is the down-set of x
    for x in range(4):
        assert cbar(diamond, x) == {u for u in range(4) if diamond.leq(u, x)}


def test_semilattice_fixture():
    M = semilattice(3, [(0, 1), (1, 2)])
    assert M.table.tolist() == [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
