from itertools import product

import numpy as np
import pytest
from hypothesis import given

from archmon.core import (
    BadIdentity,
    EmptyInput,
    NotACongruence,
    NotAHomomorphism,
    NotASubmonoid,
    NotAssociative,
    NotCommutative,
    OrderError,
    additive_closure,
    compose,
    congruence_closure,
    conv,
    d_order,
    dominated,
    eqv_classes,
    explicit_order,
    frac,
    homomorphism,
    idempotent_power,
    is_additive,
    is_cofinal,
    is_convex,
    is_submonoid,
    lcm_frac_law,
    msum,
    nmul,
    orbit,
    ordered,
    quotient,
    restrict,
    set_sum,
    submonoid_closure,
    upper_bound_quotient,
    v_order,
    validate_monoid,
)
from archmon.gen import cyclic, semilattice, truncated

from .conftest import monoid_and_subset, monoids


# -- validation ------------------------------------------------------------------


def test_z2_table_accepted():
    M = validate_monoid(2, [[0, 1], [1, 0]])
    assert M.order == 2 and M.table[1, 1] == 0


def test_non_associative_table_has_witness():
    with pytest.raises(NotAssociative) as e:
        validate_monoid(3, [[0, 1, 2], [1, 0, 0], [2, 0, 1]])
    x, y, z = e.value.witness
    t = np.array([[0, 1, 2], [1, 0, 0], [2, 0, 1]])
    assert t[t[x, y], z] != t[x, t[y, z]]


def test_non_commutative_and_bad_identity_rejected():
    with pytest.raises(NotCommutative):
        validate_monoid(2, [[0, 1], [0, 1]])
    with pytest.raises(BadIdentity):
        validate_monoid(2, [[1, 1], [1, 1]])


def test_add_examples(T3, Z2):
    assert T3.add(1, 2) == 3 and T3.add(3, 3) == 3
    assert Z2.add(1, 1) == 0


def test_nmul_examples(T3, Z2):
    assert nmul(T3.monoid, 5, 1) == 3
    assert nmul(Z2.monoid, 2, 1) == 0
    assert all(nmul(T3.monoid, 1, x) == x for x in range(4))


def test_orbit_examples(T3, Z2, C3):
    o = orbit(T3.monoid, 1)
    assert (o.values, o.index, o.period) == ((1, 2, 3), 3, 1)
    o = orbit(Z2.monoid, 1)
    assert o.values == (1, 0) and o.period == 2
    assert orbit(C3.monoid, 2).values == (2,)


def test_idempotent_power_examples(T3, Z2, C3):
    assert idempotent_power(T3.monoid, 1) == (3, 3)
    assert idempotent_power(Z2.monoid, 1) == (2, 0)
    assert idempotent_power(C3.monoid, 1) == (1, 1)


@given(monoids())
def test_orbit_closes_up(O):
    M = O.monoid
    for x in range(O.n):
        o = orbit(M, x)
        assert list(o.values) == [nmul(M, k, x) for k in range(1, len(o.values) + 1)]
        k, e = idempotent_power(M, x)
        assert M.table[e, e] == e and nmul(M, k, x) == e


# -- orders ------------------------------------------------------------------------


def test_derived_order_on_t3_is_numeric(T3):
    assert np.array_equal(T3.rel, np.array([[x <= y for y in range(4)] for x in range(4)]))


def test_trivial_d_gives_equality(T3):
    assert np.array_equal(d_order(T3.monoid, {0}).rel, np.eye(4, dtype=bool))


def test_z2_order_is_total(Z2):
    assert v_order(Z2.monoid).rel.all()


def test_trivial_monoid_order(one):
    assert one.rel.tolist() == [[True]]


def test_explicit_order_must_be_compatible(T3):
    rel = np.eye(4, dtype=bool)
    rel[2, 1] = True                      # 2 <= 1 but 2+1 = 3 not <= 1+1 = 2
    with pytest.raises(OrderError):
        explicit_order(T3.monoid, rel)


@given(monoids())
def test_d_order_matches_brute_force(O):
    M = O.monoid
    for D in (frozenset({0}), frozenset(range(O.n)), submonoid_closure(M, {O.n - 1})):
        rel = d_order(M, D).rel
        for x, y in product(range(O.n), repeat=2):
            assert rel[x, y] == any(M.table[x, d] == y for d in D)


# -- equivalence blocks, quotients ---------------------------------------------------


def test_blocks_examples(T3, Z2, C3):
    assert eqv_classes(T3.order, T3.monoid).blocks == ((0,), (1,), (2,), (3,))
    assert eqv_classes(Z2.order, Z2.monoid).blocks == ((0, 1),)
    assert len(eqv_classes(C3.order, C3.monoid).blocks) == 3


def test_upper_bound_quotient_examples(T3, Z2):
    assert upper_bound_quotient(Z2)[0].n == 1
    Obar, proj = upper_bound_quotient(T3)
    assert Obar.n == 4 and np.array_equal(Obar.table, T3.table)


def test_quotient_by_blocks_reproduces_upper_bound(T3):
    for O in (T3, ordered(cyclic(4))):
        C = eqv_classes(O.order, O.monoid)
        Q, _ = quotient(O.monoid, C)
        assert np.array_equal(Q.table, upper_bound_quotient(O)[0].table)


def test_quotient_extremes(T3):
    Q, _ = quotient(T3.monoid, congruence_closure(T3.monoid, []))
    assert np.array_equal(Q.table, T3.table)
    Q, _ = quotient(T3.monoid, congruence_closure(T3.monoid, [(0, 1)]))
    assert Q.order == 1


def test_bad_congruence_rejected(T3):
    from archmon.core import Congruence

    with pytest.raises(NotACongruence):
        quotient(T3.monoid, Congruence(((0, 3), (1,), (2,)), (0, 1, 2, 0)))


@given(monoids())
def test_congruence_closure_is_compatible(O):
    M = O.monoid
    pairs = [(0, O.n - 1)]
    C = congruence_closure(M, pairs)
    b = C.block_of
    for x, y, z in product(range(O.n), repeat=3):
        if b[x] == b[y]:
            assert b[M.table[x, z]] == b[M.table[y, z]]


# -- homomorphisms ---------------------------------------------------------------------


def test_mod2_map_rejected(T3, Z2):
    with pytest.raises(NotAHomomorphism):
        homomorphism(T3, Z2, [x % 2 for x in range(4)])


def test_composition(T3):
    double = homomorphism(T3, T3, [nmul(T3.monoid, 2, x) for x in range(4)])
    four = compose(double, double)
    assert list(four.map) == [nmul(T3.monoid, 4, x) for x in range(4)]


# -- sets -------------------------------------------------------------------------------


def test_convexity_examples(T3):
    assert is_convex(T3, {1, 2})
    assert not is_convex(T3, {0, 2})
    assert is_convex(T3, range(4))


def test_conv_examples(T3):
    assert conv(T3, {0, 2}) == {0, 1, 2}
    assert conv(T3, {3}) == {3}
    with pytest.raises(EmptyInput):
        conv(T3, set())


@given(monoid_and_subset())
def test_conv_is_least_convex_superset(case):
    O, S = case
    if S:
        H = conv(O, S)
        assert S <= H and is_convex(O, H) and conv(O, H) == H


def test_frac_examples(T3):
    assert frac(T3, 2, {3}) == {2, 3}
    assert frac(T3, 1, {1, 2}) == {1, 2}
    assert frac(T3, 2, {1, 2, 3}) == {1, 2, 3}


def test_msum_examples(T3):
    assert msum(T3.monoid, 2, {1}) == {2}
    assert msum(T3.monoid, 2, {1, 3}) == {2, 3}
    assert msum(T3.monoid, 1, {1, 3}) == {1, 3}


def test_cofinal_examples(T3):
    assert is_cofinal(T3, {3}, {1, 2, 3})
    assert is_cofinal(T3, {2}, {2})
    assert not is_cofinal(T3, {1}, {3})
    assert dominated(T3, {1, 2}, {3}) and not dominated(T3, {3}, {1})


@given(monoid_and_subset())
def test_closures(case):
    O, S = case
    M = O.monoid
    A = additive_closure(M, S)
    assert S <= A and is_additive(M, A)
    W = submonoid_closure(M, S)
    assert is_submonoid(M, W) and A <= W


@given(monoid_and_subset())
def test_lcm_law_on_additive_sets(case):
    O, S = case
    A = additive_closure(O.monoid, S)
    for n1, n2 in product(range(1, 5), repeat=2):
        assert lcm_frac_law(O.monoid, n1, n2, A)


def test_set_sum(T3):
    assert set_sum(T3.monoid, {1}, {1, 2}) == {2, 3}


def test_restrict_keeps_order(T3):
    sub, old = restrict(T3, {0, 2, 3})
    assert old == (0, 2, 3)
    assert sub.rel.tolist() == T3.rel[np.ix_(old, old)].tolist()
    with pytest.raises(NotASubmonoid):
        restrict(T3, {0, 1})


def test_semilattice_requires_join():
    from archmon.gen import NotAJoinSemilattice

    with pytest.raises(NotAJoinSemilattice):
        semilattice(3, [(0, 1), (0, 2)])


def test_truncated_small_cases():
    assert truncated(1).table.tolist() == [[0, 1], [1, 1]]
    assert truncated(2).order == 3
