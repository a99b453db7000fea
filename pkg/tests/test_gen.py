import random
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given

from archmon.core import ordered, validate_monoid
from archmon.gen import (
    BoundExceeded,
    NotCancellative,
    Recipe,
    RecipeError,
    adjoin_top,
    boolean,
    build,
    canonical_form,
    chain,
    cyclic,
    direct_sum,
    enumerate_monoids,
    enumerate_tables,
    lex_product,
    monogenic,
    parse_recipe,
    random_abstract_flock,
    random_monoid,
    random_recipe,
    truncated,
    truncated_vec,
    union_closed,
)

from .conftest import seeds


def brute_count(n):
    """Isomorphism classes of commutative monoids on n points with identity 0, from scratch."""
    free = [(i, j) for i in range(1, n) for j in range(i, n)]
    found = set()
    for vals in product(range(n), repeat=len(free)):
        t = [[0] * n for _ in range(n)]
        for i in range(n):
            t[0][i] = t[i][0] = i
        for (i, j), v in zip(free, vals):
            t[i][j] = t[j][i] = v
        if all(t[t[x][y]][z] == t[x][t[y][z]] for x in range(n) for y in range(n) for z in range(n)):
            keys = []
            for p in permutations(range(1, n)):
                p = (0,) + p
                inv = [0] * n
                for a, b in enumerate(p):
                    inv[b] = a
                keys.append(tuple(p[t[inv[x]][inv[y]]] for x in range(n) for y in range(n)))
            found.add(min(keys))
    return len(found)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counts_match_brute_force(n):
    assert len(enumerate_tables(n)) == brute_count(n)


def test_known_counts():
    assert [len(enumerate_tables(n)) for n in range(1, 6)] == [1, 2, 5, 19, 78]


def test_backtrack_and_filter_agree():
    for n in range(1, 5):
        assert enumerate_tables(n, "backtrack") == enumerate_tables(n, "filter")


def test_enumerated_monoids_are_valid_and_distinct():
    ms = enumerate_monoids(4)
    assert len({canonical_form(M.table) for M in ms}) == len(ms) == 19
    assert all(M.zero == 0 for M in ms)
    assert ms[0].name == "M4_0"


def test_enumeration_bound(monkeypatch):
    monkeypatch.setenv("ARCHMON_MAX_ORDER", "3")
    with pytest.raises(BoundExceeded):
        enumerate_tables(4)
    with pytest.raises(BoundExceeded):
        enumerate_tables(5, "filter")
    with pytest.raises(ValueError):
        enumerate_tables(0)


@given(seeds)
def test_canonical_form_is_invariant(seed):
    M = random_monoid(seed, 5)
    rng = random.Random(seed)
    rest = list(range(1, M.order))
    rng.shuffle(rest)
    p = np.array([0] + rest)
    inv = np.argsort(p)
    t = p[M.table[np.ix_(inv, inv)]]
    assert canonical_form(t) == canonical_form(M.table)


def test_constructors():
    assert truncated(3).table[2, 3] == 3
    assert cyclic(3).table[2, 2] == 1
    m = monogenic(2, 2)
    assert m.order == 4
    assert chain(3).table.tolist() == [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
    assert boolean(2).order == 4
    assert truncated_vec(1, 2).order == 6
    u = union_closed([frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})])
    assert u.table.tolist() == boolean(2).table.tolist()


def test_direct_sum_indexing():
    D = direct_sum(truncated(3), truncated(3))
    assert D.order == 16
    assert D.table[1 * 4 + 2, 1 * 4 + 1] == 2 * 4 + 3


def test_adjoin_top():
    M = adjoin_top(cyclic(2))
    assert M.table.tolist() == [[0, 1, 2], [1, 0, 2], [2, 2, 2]]


def test_lex_product_examples():
    O = lex_product(cyclic(2), truncated(1))
    assert O.rel.astype(int).tolist() == [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    with pytest.raises(NotCancellative) as e:
        lex_product(truncated(3), truncated(1))
    a, b, c = e.value.witness
    T = truncated(3).table
    assert a != b and T[a, c] == T[b, c]


def test_recipes_parse_and_print():
    r = parse_recipe("dsum(trunc(3),trunc(3))")
    assert r == Recipe("dsum", (Recipe("trunc", (3,)), Recipe("trunc", (3,))))
    assert str(r) == "dsum(trunc(3),trunc(3))"
    assert Recipe.from_json(r.to_json()) == r
    assert build(r).name == "dsum(trunc(3),trunc(3))"
    assert parse_recipe("trivial") == Recipe("trivial")


def test_recipe_nodes():
    assert build("slat(3,[(0,1),(1,2)])").table.tolist() == chain(3).table.tolist()
    assert build("quot(trunc(3),[(2,3)])").order == 3
    assert build("top(cyclic(2))").order == 3
    assert build("table([[0,1],[1,0]])").table.tolist() == cyclic(2).table.tolist()
    O = build("lex(cyclic(2),trunc(1))")
    assert O.monoid.name == "lex(cyclic(2),trunc(1))"


@pytest.mark.parametrize("text", ["dsum(trunc(3)", "nosuch(1)", "trunc(x=1)", "3", "trunc()",
                                  "dsum(lex(cyclic(2),trunc(1)),trivial)"])
def test_bad_recipes(text):
    with pytest.raises(RecipeError):
        build(text)


@given(seeds)
def test_random_recipes_round_trip(seed):
    r = random_recipe(random.Random(seed), 6)
    M = build(r)
    assert M.order <= 6
    assert parse_recipe(str(r)) == r
    assert build(str(r)).table.tolist() == M.table.tolist()
    validate_monoid(M.order, M.table, M.zero)


def test_random_is_deterministic():
    assert random_monoid(7).table.tolist() == random_monoid(7).table.tolist()
    assert random_abstract_flock(7).members == random_abstract_flock(7).members


@given(seeds)
def test_random_abstract_flocks_are_closed(seed):
    F = random_abstract_flock(seed)
    G = F.gamma
    assert all(G.table[x, x] == x for x in range(G.order))
    assert all(F.add(a, b) in F.members for a in F.members for b in F.members)


def test_ordered_lex_is_an_order():
    O = build("lex(cyclic(3),chain(2))")
    R = O.rel
    assert R.diagonal().all()
    assert not (R & R.T & ~np.eye(O.n, dtype=bool)).any()
    assert ordered(O.monoid).n == O.n
