"""Fixture constructors, recipe trees, small-monoid enumeration and random instances."""

from __future__ import annotations

import ast
import os
import random
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

from .core import (
    FiniteMonoid,
    MonoidError,
    OrderedMonoid,
    congruence_closure,
    explicit_order,
    quotient,
    transitive_closure,
    v_order,
    validate_monoid,
)
from .strat import AbstractFlock, abstract_flock


class NotAJoinSemilattice(MonoidError):
    pass


class NotCancellative(MonoidError):
    pass


class BoundExceeded(MonoidError):
    pass


class RecipeError(MonoidError):
    pass


DEFAULT_ENUM_BOUND = 6


def max_order() -> int:
    return int(os.environ.get("ARCHMON_MAX_ORDER", DEFAULT_ENUM_BOUND))


# ---------------------------------------------------------------------------
# constructors


def trivial() -> FiniteMonoid:
    return validate_monoid(1, [[0]], 0, "trivial")


def truncated(t: int) -> FiniteMonoid:
    """{0..t} with a + b = min(a + b, t)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    table = [[min(a + b, t) for b in range(t + 1)] for a in range(t + 1)]
    return validate_monoid(t + 1, table, 0, f"trunc({t})")


def truncated_vec(*ts: int) -> FiniteMonoid:
    if not ts:
        raise ValueError("need at least one bound")
    M = truncated(ts[0])
    for t in ts[1:]:
        M = direct_sum(M, truncated(t))
    return _renamed(M, "truncvec(" + ",".join(map(str, ts)) + ")")


def cyclic(n: int) -> FiniteMonoid:
    """The group Z/n."""
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return validate_monoid(n, table, 0, f"cyclic({n})")


def monogenic(index: int, period: int) -> FiniteMonoid:
    """{0, x, 2x, ...} with (index + period) x = index x; carrier size index + period."""
    if index < 1 or period < 1:
        raise ValueError("index and period must be >= 1")
    top = index + period - 1

    def red(k):
        return k if k <= top else index + (k - index) % period

    n = top + 1
    table = [[red(a + b) if a and b else a + b for b in range(n)] for a in range(n)]
    return validate_monoid(n, table, 0, f"mono({index},{period})")


def semilattice(n: int, pairs: Sequence[tuple[int, int]], name: str | None = None) -> FiniteMonoid:
    """Join-semilattice from order (or covering) pairs (a, b) meaning a <= b.

    The bottom becomes the zero; x + y is the join.
    """
    rel = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        rel[a, b] = True
    rel = transitive_closure(rel)
    anti = np.argwhere(rel & rel.T & ~np.eye(n, dtype=bool))
    if len(anti):
        a, b = (int(v) for v in anti[0])
        raise NotAJoinSemilattice(f"{a} and {b} are mutually below each other", (a, b))
    bottoms = [x for x in range(n) if rel[x].all()]
    if not bottoms:
        raise NotAJoinSemilattice("no bottom element")
    table = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(x, n):
            ub = np.flatnonzero(rel[x] & rel[y])
            least = [u for u in ub if rel[u, ub].all()]
            if not least:
                raise NotAJoinSemilattice(f"{x} and {y} have no join", (x, y))
            table[x, y] = table[y, x] = least[0]
    M = validate_monoid(n, table, bottoms[0], name or "semilattice")
    assert np.array_equal(v_order(M).rel, rel.T) or np.array_equal(v_order(M).rel, rel)
    return M


def chain(n: int) -> FiniteMonoid:
    return semilattice(n, [(i, i + 1) for i in range(n - 1)], f"chain({n})")


def boolean(k: int) -> FiniteMonoid:
    """Subsets of a k-set under union."""
    n = 1 << k
    table = [[a | b for b in range(n)] for a in range(n)]
    return validate_monoid(n, table, 0, f"boolean({k})")


def union_closed(sets: Sequence[frozenset], name: str | None = None) -> FiniteMonoid:
    """Semilattice of a union-closed family (the empty set is added)."""
    fam = sorted({frozenset()} | {frozenset(s) for s in sets}, key=lambda s: (len(s), sorted(s)))
    idx = {s: i for i, s in enumerate(fam)}
    table = [[idx.get(a | b, -1) for b in fam] for a in fam]
    if any(-1 in row for row in table):
        raise NotAJoinSemilattice("family not closed under union")
    return validate_monoid(len(fam), table, 0, name or "union_closed")


def direct_sum(M1: FiniteMonoid, M2: FiniteMonoid) -> FiniteMonoid:
    """Componentwise addition; (x1, x2) is stored at index x1 * n2 + x2."""
    n1, n2 = M1.order, M2.order
    t = (M1.table[:, None, :, None] * n2 + M2.table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    name = f"dsum({M1.name},{M2.name})" if M1.name and M2.name else None
    return validate_monoid(n1 * n2, t, M1.zero * n2 + M2.zero, name)


def pair_index(M2: FiniteMonoid, x1: int, x2: int) -> int:
    return x1 * M2.order + x2


def cancellation_witness(M: FiniteMonoid):
    for c in range(M.order):
        col = M.table[:, c]
        seen: dict[int, int] = {}
        for a in range(M.order):
            v = int(col[a])
            if v in seen:
                return (seen[v], a, c)
            seen[v] = a
    return None


def lex_product(M1: FiniteMonoid, M2: FiniteMonoid) -> OrderedMonoid:
    """M1 (+) M2 with (x1,x2) <= (y1,y2) iff x1 < y1, or x1 = y1 and x2 <= y2.

    ``<`` is the strict part of the order of M1.  M1 must be cancellative; the
    lexicographic order is validated against addition.
    """
    w = cancellation_witness(M1)
    if w is not None:
        a, b, c = w
        raise NotCancellative(f"{a}+{c} = {b}+{c} in the first factor", w)
    M = direct_sum(M1, M2)
    r1 = v_order(M1).rel
    r2 = v_order(M2).rel
    strict1 = r1 & ~r1.T
    eq1 = np.eye(M1.order, dtype=bool)
    rel = (strict1[:, None, :, None] | (eq1[:, None, :, None] & r2[None, :, None, :]))
    rel = rel.reshape(M.order, M.order)
    name = f"lex({M1.name},{M2.name})" if M1.name and M2.name else None
    M = _renamed(M, name)
    return OrderedMonoid(M, explicit_order(M, rel))


def adjoin_top(M: FiniteMonoid) -> FiniteMonoid:
    """Add an absorbing element at index n."""
    n = M.order
    t = np.full((n + 1, n + 1), n, dtype=np.int64)
    t[:n, :n] = M.table
    return validate_monoid(n + 1, t, M.zero, f"top({M.name})" if M.name else None)


def _renamed(M: FiniteMonoid, name: str | None) -> FiniteMonoid:
    return FiniteMonoid(M.order, M.table, M.zero, name)


# ---------------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class Recipe:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        def fmt(a):
            if isinstance(a, Recipe):
                return str(a)
            return repr(a).replace(" ", "") if not isinstance(a, int) else str(a)
        return f"{self.op}({','.join(fmt(a) for a in self.args)})"

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "args": [a.to_json() if isinstance(a, Recipe) else _plain(a) for a in self.args],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Recipe":
        args = tuple(
            cls.from_json(a) if isinstance(a, dict) and "op" in a else _hashable(a)
            for a in data.get("args", [])
        )
        return cls(data["op"], args)


def _plain(a):
    if isinstance(a, (tuple, list)):
        return [_plain(x) for x in a]
    return a


def _hashable(a):
    if isinstance(a, list):
        return tuple(_hashable(x) for x in a)
    return a


_LEAVES = {
    "trivial": lambda: trivial(),
    "trunc": truncated,
    "truncvec": truncated_vec,
    "cyclic": cyclic,
    "mono": monogenic,
    "chain": chain,
    "boolean": boolean,
}


def parse_recipe(text: str) -> Recipe:
    """Parse strings like ``dsum(trunc(3),trunc(3))`` into a `Recipe`."""
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as e:
        raise RecipeError(f"cannot parse recipe {text!r}: {e.msg}") from None

    def conv(n):
        if isinstance(n, ast.Call) and isinstance(n.func, ast.Name):
            if n.keywords:
                raise RecipeError("recipes take positional arguments only")
            return Recipe(n.func.id, tuple(conv(a) for a in n.args))
        if isinstance(n, ast.Name):
            return Recipe(n.id, ())
        try:
            return _hashable(_listify(ast.literal_eval(n)))
        except ValueError:
            raise RecipeError(f"bad recipe argument {ast.dump(n)}") from None

    r = conv(node)
    if not isinstance(r, Recipe):
        raise RecipeError(f"not a recipe: {text!r}")
    return r


def _listify(v):
    if isinstance(v, tuple):
        return [_listify(x) for x in v]
    if isinstance(v, list):
        return [_listify(x) for x in v]
    return v


def build(recipe: Recipe | str) -> FiniteMonoid | OrderedMonoid:
    """Evaluate a recipe; ``lex`` nodes give an `OrderedMonoid`, everything else a `FiniteMonoid`."""
    if isinstance(recipe, str):
        recipe = parse_recipe(recipe)
    op, args = recipe.op, recipe.args

    def sub(i) -> FiniteMonoid:
        m = build(args[i])
        if isinstance(m, OrderedMonoid):
            raise RecipeError(f"{op} needs plain monoids as arguments")
        return m

    try:
        if op in _LEAVES:
            M = _LEAVES[op](*args)
        elif op == "dsum":
            M = direct_sum(sub(0), sub(1))
        elif op == "top":
            M = adjoin_top(sub(0))
        elif op == "lex":
            O = lex_product(sub(0), sub(1))
            return OrderedMonoid(_renamed(O.monoid, str(recipe)), O.order)
        elif op == "slat":
            n, pairs = args
            M = semilattice(n, [tuple(p) for p in pairs])
        elif op == "sets":
            (fam,) = args
            M = union_closed([frozenset(s) for s in fam])
        elif op == "quot":
            base = sub(0)
            C = congruence_closure(base, [tuple(p) for p in args[1]])
            M, _ = quotient(base, C)
        elif op == "table":
            (rows,) = args
            M = validate_monoid(len(rows), [list(r) for r in rows], 0)
        else:
            raise RecipeError(f"unknown recipe node {op!r}")
    except TypeError as e:
        raise RecipeError(f"bad arguments for {op}: {e}") from None
    return _renamed(M, str(recipe))


# ---------------------------------------------------------------------------
# enumeration up to isomorphism


def _perm_arrays(n: int):
    perms = np.array([(0,) + p for p in permutations(range(1, n))], dtype=np.int64).reshape(-1, n)
    inv = np.argsort(perms, axis=1)
    return perms, inv


def canonical_form(table: np.ndarray, zero: int = 0) -> tuple:
    """Lexicographically least relabelled table over permutations fixing the zero."""
    t = np.asarray(table, dtype=np.int64)
    n = len(t)
    if zero != 0:
        swap = np.arange(n)
        swap[0], swap[zero] = zero, 0
        t = swap[t[np.ix_(swap, swap)]]
    return _canonical(t)


def _canonical(t: np.ndarray) -> tuple:
    n = len(t)
    perms, inv = _perm_cache(n)
    # relabelled[k][i][j] = p_k[t[inv_k[i], inv_k[j]]]
    inner = t[inv[:, :, None], inv[:, None, :]].reshape(len(perms), -1)
    relab = np.take_along_axis(perms, inner, axis=1)
    order = np.lexsort(relab.T[::-1])
    return tuple(int(v) for v in relab[order[0]])


_PERMS: dict[int, tuple] = {}


def _perm_cache(n: int):
    if n not in _PERMS:
        _PERMS[n] = _perm_arrays(n)
    return _PERMS[n]


def _assoc_ok(t: np.ndarray) -> bool:
    """Associativity on every triple whose four lookups are already filled."""
    xy = t  # -1 where unknown
    known = xy >= 0
    # (x+y)+z
    left = np.where(known[:, :, None], t[np.clip(xy, 0, None)], -1)
    left = np.where(known[:, :, None] & (left >= 0), left, -1)
    # x+(y+z)
    right = np.where(known[None, :, :], t[:, np.clip(xy, 0, None)], -1)
    right = np.where(known[None, :, :] & (right >= 0), right, -1)
    both = (left >= 0) & (right >= 0)
    return bool(np.all(left[both] == right[both]))


def _backtrack_tables(n: int) -> Iterator[np.ndarray]:
    t = -np.ones((n, n), dtype=np.int64)
    t[0, :] = np.arange(n)
    t[:, 0] = np.arange(n)
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]

    def rec(k):
        if k == len(cells):
            yield t.copy()
            return
        i, j = cells[k]
        for v in range(n):
            t[i, j] = t[j, i] = v
            if _assoc_ok(t):
                yield from rec(k + 1)
        t[i, j] = t[j, i] = -1

    if n == 1:
        yield np.zeros((1, 1), dtype=np.int64)
        return
    yield from rec(0)


def _filter_tables(n: int) -> Iterator[np.ndarray]:
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]
    base = np.zeros((n, n), dtype=np.int64)
    base[0, :] = np.arange(n)
    base[:, 0] = np.arange(n)
    for values in product(range(n), repeat=len(cells)):
        t = base.copy()
        for (i, j), v in zip(cells, values):
            t[i, j] = t[j, i] = v
        if np.array_equal(t[t], t[:, t]):
            yield t


def enumerate_tables(n: int, method: str = "backtrack") -> list:
    """Canonical tables (flattened tuples) of all commutative monoids of order n, sorted."""
    if n < 1:
        raise ValueError("order must be >= 1")
    bound = max_order()
    if n > bound:
        raise BoundExceeded(f"order {n} exceeds enumeration bound {bound}")
    if method == "backtrack":
        source = _backtrack_tables(n)
    elif method == "filter":
        if n > 4:
            raise BoundExceeded("the raw filter is limited to order 4")
        source = _filter_tables(n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted({_canonical(t) for t in source})


def enumerate_monoids(n: int, method: str = "backtrack") -> list:
    """All commutative monoids of order n up to isomorphism (zero at index 0)."""
    out = []
    for i, flat in enumerate(enumerate_tables(n, method)):
        table = np.array(flat, dtype=np.int64).reshape(n, n)
        out.append(validate_monoid(n, table, 0, f"M{n}_{i}"))
    return out


# ---------------------------------------------------------------------------
# random instances


def random_union_closed(rng: random.Random, max_size: int, ground: int | None = None) -> list:
    """A random union-closed family with at most ``max_size`` members (including the empty set)."""
    ground = ground or rng.randint(1, 5)
    while True:
        k = rng.randint(1, 4)
        gens = [
            frozenset(i for i in range(ground) if rng.random() < 0.5) for _ in range(k)
        ]
        fam = {frozenset()}
        for g in gens:
            fam |= {s | g for s in fam}
        if len(fam) <= max_size:
            return sorted(fam, key=lambda s: (len(s), sorted(s)))
        ground = max(1, ground - 1)


def random_semilattice(rng: random.Random, max_size: int) -> FiniteMonoid:
    fam = random_union_closed(rng, max_size)
    desc = "sets(" + repr([sorted(s) for s in fam]).replace(" ", "") + ")"
    return _renamed(union_closed(fam), desc)


def _random_congruence_pairs(rng: random.Random, n: int) -> list:
    if n < 2:
        return []
    k = rng.randint(1, 2)
    return [tuple(sorted(rng.sample(range(n), 2))) for _ in range(k)]


def random_recipe(rng: random.Random, hint: int, depth: int = 0) -> Recipe:
    """A recipe whose monoid has at most ``hint`` elements (hint >= 1)."""
    if hint <= 1:
        return Recipe("trivial")
    choices = ["trunc", "cyclic", "mono", "slat"]
    if depth < 2 and hint >= 4:
        choices.append("dsum")
    if depth < 2 and hint >= 3:
        choices += ["top", "quot"]
    op = rng.choice(choices)
    if op == "trunc":
        return Recipe("trunc", (rng.randint(1, hint - 1),))
    if op == "cyclic":
        return Recipe("cyclic", (rng.randint(2, hint),))
    if op == "mono":
        index = rng.randint(1, hint - 1)
        period = rng.randint(1, hint - index)
        return Recipe("mono", (index, period))
    if op == "slat":
        fam = random_union_closed(rng, hint)
        return Recipe("sets", (tuple(tuple(sorted(s)) for s in fam),))
    if op == "dsum":
        a = rng.randint(2, hint // 2)
        b = hint // a
        return Recipe("dsum", (random_recipe(rng, a, depth + 1), random_recipe(rng, b, depth + 1)))
    if op == "top":
        return Recipe("top", (random_recipe(rng, hint - 1, depth + 1),))
    base = random_recipe(rng, hint, depth + 1)
    n = build(base).order
    return Recipe("quot", (base, tuple(_random_congruence_pairs(rng, n))))


def random_monoid(seed: int, hint: int = 6) -> FiniteMonoid:
    """Deterministic in ``seed``; composed from structured recipe nodes."""
    rng = random.Random(seed)
    return build(random_recipe(rng, hint))


def random_abstract_flock(seed: int, max_size: int = 12) -> AbstractFlock:
    """A random semilattice (at most ``max_size`` elements) with members closed under joins."""
    rng = random.Random(seed)
    G = random_semilattice(rng, max_size)
    nonzero = [x for x in range(G.order) if x != G.zero]
    if not nonzero:
        members = frozenset({G.zero})
    elif rng.random() < 0.5:
        members = frozenset(nonzero)
    else:
        from .core import additive_closure
        picks = rng.sample(nonzero, rng.randint(1, len(nonzero)))
        members = additive_closure(G, picks)
    return abstract_flock(G, members, "disjoint", name=f"abstract#{seed}")


def random_composed(seed: int, max_size: int = 8):
    """Two random abstract flocks stacked by ordinal sum: (flock, initial part, transfinite part)."""
    from .strat import compose_abstract
    rng = random.Random(seed)
    lower = random_abstract_flock(rng.randrange(1 << 30), max_size)
    upper = random_abstract_flock(rng.randrange(1 << 30), max_size)
    while upper.gamma.order < 2:    # the transfinite part needs a nonzero class
        upper = random_abstract_flock(rng.randrange(1 << 30), max_size)
    if upper.gamma.zero in upper.members:
        upper = AbstractFlock(upper.gamma, upper.members - {upper.gamma.zero}, "disjoint")
        if not upper.members:
            upper = AbstractFlock(upper.gamma, frozenset(range(upper.gamma.order)) - {upper.gamma.zero}, "disjoint")
    return compose_abstract(lower, upper, name=f"composed#{seed}")
