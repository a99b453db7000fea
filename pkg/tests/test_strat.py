import numpy as np
import pytest
from hypothesis import given, strategies as st

from archmon.arch import gamma
from archmon.flock import max_flock
from archmon.gen import boolean, chain, random_abstract_flock, random_composed
from archmon.strat import (
    CaseNotApplicable,
    EmptyFlock,
    NotApplicable,
    NotInFlock,
    Ordinal,
    OverlappingParts,
    abstract_flock,
    compose_abstract,
    height,
    is_centered,
    is_tight,
    minimal_classes,
    peel,
    peel_abstract,
    stratify,
    theorem_3_2_decomposition,
    tightness_report,
    transfinite_height,
)

from .conftest import monoids, seeds


def test_free_semilattice_layers():
    F = abstract_flock(boolean(2), [1, 2, 3])
    S = stratify(F)
    assert S.layers == (frozenset({1, 2}), frozenset({3}))
    assert S.depth == 2 and S.case_tag == "I"
    assert height(S, 3) == 2
    with pytest.raises(NotInFlock):
        height(S, 0)


def test_chain_heights_count_up():
    F = abstract_flock(chain(5), [1, 2, 3, 4])
    assert stratify(F).heights() == {1: 1, 2: 2, 3: 3, 4: 4}


def test_composed_heights():
    lower = abstract_flock(chain(4), [1, 2, 3])
    upper = abstract_flock(chain(3), [1, 2])
    C, pf, pg = compose_abstract(lower, upper)
    h = transfinite_height(stratify(pf, C), stratify(pg, C))
    assert [str(h[a]) for a in sorted(h)] == ["1", "2", "3", "w+1", "w+2"]
    assert sorted(h.values()) == [h[a] for a in sorted(h)]
    with pytest.raises(OverlappingParts):
        transfinite_height(stratify(pf, C), stratify(pf, C))


def test_ordinal_arithmetic():
    two, w1 = Ordinal.finite(2), Ordinal.omega_plus(1)
    assert two + Ordinal.finite(3) == Ordinal.finite(5)
    assert two + w1 == w1
    assert w1 + two == Ordinal.omega_plus(3)
    assert Ordinal.finite(10**6) < w1
    assert w1.to_json() == {"omega_plus": 1} and two.to_json() == 2
    with pytest.raises(OverflowError):
        w1 + w1
    with pytest.raises(ValueError):
        Ordinal.finite(0)


@given(st.integers(1, 50), st.booleans(), st.integers(1, 50), st.booleans(), st.integers(1, 50), st.booleans())
def test_ordinal_addition_associative(a, x, b, y, c, z):
    p, q, r = Ordinal(a, x), Ordinal(b, y), Ordinal(c, z)
    try:
        left = (p + q) + r
    except OverflowError:
        left = None
    try:
        right = p + (q + r)
    except OverflowError:
        right = None
    assert left == right


def test_stratify_rejects_empty():
    with pytest.raises(EmptyFlock):
        stratify(frozenset(), np.eye(1, dtype=bool))


@given(seeds)
def test_layers_partition_and_heights_increase(seed):
    F = random_abstract_flock(seed)
    S = stratify(F)
    assert S.case_tag == "I" and S.members == F.members
    assert sum(len(layer) for layer in S.layers) == len(F.members)
    h = S.heights()
    for a in F.members:
        for b in F.members:
            if F.less(a, b):
                assert h[a] < h[b]
        if h[a] > 1:
            assert any(F.less(b, a) and h[b] == h[a] - 1 for b in F.members)


@given(seeds)
def test_peel_removes_the_bottom_layer(seed):
    F = random_abstract_flock(seed)
    S = stratify(F)
    P = peel_abstract(F)
    if S.depth == 1:
        assert P is None
    else:
        assert stratify(P).layers == S.layers[1:]
        assert peel(F) is not None


def test_peel_declared_centered_rejected():
    F = abstract_flock(chain(3), [1, 2], "centered")
    with pytest.raises(CaseNotApplicable):
        peel(F)
    with pytest.raises(NotApplicable):
        theorem_3_2_decomposition(F, 1)


def test_concrete_peel_not_applicable(T3, D33):
    with pytest.raises(CaseNotApplicable):
        peel(T3, max_flock(T3, 1))
    a = gamma(D33).ids[-1]
    with pytest.raises(CaseNotApplicable):
        peel(D33, max_flock(D33, a))


@given(monoids())
def test_concrete_flocks_never_peel(O):
    for a in gamma(O).ids:
        with pytest.raises(CaseNotApplicable):
            peel(O, max_flock(O, a))
        with pytest.raises(NotApplicable):
            theorem_3_2_decomposition(O, a)


def test_abstract_decomposition_on_a_chain():
    F = abstract_flock(chain(4), [1, 2, 3])
    d = theorem_3_2_decomposition(F, 1)
    assert d.holds and d.minimal == {1} and d.w == {0, 1}
    with pytest.raises(NotApplicable):
        theorem_3_2_decomposition(F, 2)
    with pytest.raises(NotInFlock):
        theorem_3_2_decomposition(F, 0)


def test_tightness_examples(T3):
    assert is_tight(T3, 1) and is_tight(T3, 0)
    assert tightness_report(T3, 1) == {"definition": True, "corollary": True, "elementwise": None}
    assert minimal_classes(T3, range(4)) == {1}
    assert is_centered(T3, range(4))


@given(monoids())
def test_tightness_criteria_agree(O):
    for a in gamma(O).ids:
        r = tightness_report(O, a)
        assert r["definition"] == r["corollary"]
        assert r["elementwise"] in (None, r["definition"])


@given(monoids())
def test_every_entourage_is_centered(O):
    from archmon.flock import entourages

    for e in entourages(O):
        assert is_centered(O, e.elements)


@given(seeds)
def test_composed_flocks_split_into_finite_and_transfinite(seed):
    C, pf, pg = random_composed(seed)
    h = transfinite_height(stratify(pf, C), stratify(pg, C))
    assert set(h) == pf | pg
    for a in pf:
        for b in pg:
            assert h[a] < h[b]
