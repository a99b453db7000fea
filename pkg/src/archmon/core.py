"""Finite commutative monoids given by Cayley tables, and their D-orders.

Elements are the indices ``0..n-1``; the neutral element sits at a declared
index.  Element sets are passed around as ``frozenset`` and reported as
sorted tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce, wraps
from math import lcm
from typing import Iterable, Sequence

import numpy as np


class MonoidError(ValueError):
    """Base class for structural errors; ``witness`` names the offending elements."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = tuple(witness)


class NotAssociative(MonoidError):
    pass


class NotCommutative(MonoidError):
    pass


class BadIdentity(MonoidError):
    pass


class NotASubmonoid(MonoidError):
    pass


class NotACongruence(MonoidError):
    pass


class NotAHomomorphism(MonoidError):
    pass


class OrderError(MonoidError):
    """An explicit order that is not reflexive, transitive or compatible with +."""


class EmptyInput(MonoidError):
    pass


def memoized(fn):
    """Cache ``fn(obj, *args)`` on ``obj`` itself.

    All structures here are immutable after construction, so derived data can be
    stored alongside them.  Arguments must be hashable.
    """
    key = fn.__qualname__

    @wraps(fn)
    def wrapper(obj, *args):
        memo = obj.__dict__.setdefault("_memo", {})
        k = (key, args)
        try:
            return memo[k]
        except KeyError:
            value = memo[k] = fn(obj, *args)
            return value

    return wrapper


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def as_set(xs: Iterable[int]) -> frozenset:
    return frozenset(int(x) for x in xs)


def sorted_tuple(xs: Iterable[int]) -> tuple:
    return tuple(sorted(int(x) for x in xs))


# ---------------------------------------------------------------------------
# monoids


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    order: int
    table: np.ndarray
    zero: int = 0
    name: str | None = None

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def carrier(self) -> frozenset:
        return frozenset(range(self.order))

    def add(self, x: int, y: int) -> int:
        return add(self, x, y)

    def same_table(self, other: "FiniteMonoid") -> bool:
        return (
            self.order == other.order
            and self.zero == other.zero
            and np.array_equal(self.table, other.table)
        )

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteMonoid{label} n={self.order} zero={self.zero}>"


def validate_monoid(order: int, table, zero: int = 0, name: str | None = None) -> FiniteMonoid:
    """Check the table exhaustively and return a `FiniteMonoid`.

    Raises `NotCommutative`, `BadIdentity` or `NotAssociative` with the first
    violating pair or triple (in index order).
    """
    t = np.asarray(table, dtype=np.int64)
    n = int(order)
    if n < 1 or t.shape != (n, n):
        raise MonoidError(f"table must be {n}x{n}, got shape {t.shape}")
    if t.min() < 0 or t.max() >= n:
        bad = tuple(int(v) for v in np.argwhere((t < 0) | (t >= n))[0])
        raise MonoidError(f"table entry out of range at {bad}", bad)
    if not 0 <= zero < n:
        raise BadIdentity(f"zero index {zero} out of range", (zero,))
    asym = np.argwhere(t != t.T)
    if len(asym):
        x, y = sorted(int(v) for v in asym[0])
        raise NotCommutative(f"{x}+{y} != {y}+{x}", (x, y))
    bad_id = np.flatnonzero(t[zero] != np.arange(n))
    if len(bad_id):
        x = int(bad_id[0])
        raise BadIdentity(f"{zero}+{x} = {int(t[zero, x])}, expected {x}", (x,))
    # left[x, y, z] = (x+y)+z, right[x, y, z] = x+(y+z)
    left = t[t]
    right = t[:, t]
    bad = np.argwhere(left != right)
    if len(bad):
        x, y, z = (int(v) for v in bad[0])
        raise NotAssociative(f"({x}+{y})+{z} != {x}+({y}+{z})", (x, y, z))
    return FiniteMonoid(n, _frozen(t), int(zero), name)


def add(M: FiniteMonoid, x: int, y: int) -> int:
    if not (0 <= x < M.order and 0 <= y < M.order):
        raise IndexError(f"element out of range for monoid of order {M.order}: {x}, {y}")
    return int(M.table[x, y])


def nmul(M: FiniteMonoid, n: int, x: int) -> int:
    """``n*x`` for ``n >= 1``."""
    if n < 1:
        raise ValueError("nmul needs n >= 1; use nmul0 for n = 0")
    # double-and-add
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else int(M.table[result, base])
        base = int(M.table[base, base])
        n >>= 1
    return result


def nmul0(M: FiniteMonoid, n: int, x: int) -> int:
    """``n*x`` for ``n >= 0`` with ``0*x = zero``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return M.zero if n == 0 else nmul(M, n, x)


@dataclass(frozen=True)
class Orbit:
    values: tuple
    index: int
    period: int


@memoized
def orbit(M: FiniteMonoid, x: int) -> Orbit:
    """Multiples ``1x, 2x, ...`` up to the first repeat.

    ``index`` is the least k such that kx recurs and ``period`` the cycle
    length, so ``values[index-1:]`` is the cycle.
    """
    seen: dict[int, int] = {}
    values = []
    v = x
    k = 1
    while v not in seen:
        seen[v] = k
        values.append(v)
        v = int(M.table[v, x])
        k += 1
    start = seen[v]
    return Orbit(tuple(values), start, k - start)


def multiples(M: FiniteMonoid, x: int) -> frozenset:
    """The set ``N x`` (all nx with n >= 1)."""
    return frozenset(orbit(M, x).values)


def idempotent_power(M: FiniteMonoid, x: int) -> tuple[int, int]:
    """Least k >= 1 with kx idempotent, and that idempotent."""
    for k, v in enumerate(orbit(M, x).values, start=1):
        if M.table[v, v] == v:
            return k, v
    raise AssertionError("finite orbit without idempotent")  # pragma: no cover


def is_idempotent_monoid(M: FiniteMonoid) -> bool:
    return bool(np.all(np.diag(M.table) == np.arange(M.order)))


def is_submonoid(M: FiniteMonoid, S: Iterable[int]) -> bool:
    S = as_set(S)
    if M.zero not in S:
        return False
    idx = np.array(sorted(S))
    return set(M.table[np.ix_(idx, idx)].ravel().tolist()) <= S


def is_additive(M: FiniteMonoid, S: Iterable[int]) -> bool:
    """``S + S`` is contained in ``S``."""
    S = as_set(S)
    if not S:
        return True
    idx = np.array(sorted(S))
    return set(M.table[np.ix_(idx, idx)].ravel().tolist()) <= S


def additivity_witness(M: FiniteMonoid, S: Iterable[int]):
    S = as_set(S)
    for x in sorted(S):
        for y in sorted(S):
            if y < x:
                continue
            if int(M.table[x, y]) not in S:
                return (x, y)
    return None


def additive_closure(M: FiniteMonoid, X: Iterable[int]) -> frozenset:
    """Least set containing X and closed under +."""
    S = set(as_set(X))
    frontier = list(S)
    while frontier:
        new = []
        for x in frontier:
            for y in list(S):
                z = int(M.table[x, y])
                if z not in S:
                    S.add(z)
                    new.append(z)
        frontier = new
    return frozenset(S)


def submonoid_closure(M: FiniteMonoid, X: Iterable[int]) -> frozenset:
    return additive_closure(M, as_set(X) | {M.zero})


def msum(M: FiniteMonoid, m: int, A: Iterable[int]) -> frozenset:
    """``A + ... + A`` (m summands)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    A = as_set(A)
    result = A
    for _ in range(m - 1):
        result = frozenset(int(M.table[a, b]) for a in result for b in A)
    return result


def set_sum(M: FiniteMonoid, A: Iterable[int], B: Iterable[int]) -> frozenset:
    return frozenset(int(M.table[a, b]) for a in as_set(A) for b in as_set(B))


# ---------------------------------------------------------------------------
# orders


@dataclass(frozen=True, eq=False)
class QuasiOrder:
    """``rel[x, y]`` means x <= y."""

    carrier_size: int
    rel: np.ndarray
    origin: object = "explicit"  # "explicit" or the frozenset D it was derived from

    @property
    def derived(self) -> bool:
        return self.origin != "explicit"

    def leq(self, x: int, y: int) -> bool:
        return bool(self.rel[x, y])

    def equiv(self, x: int, y: int) -> bool:
        return bool(self.rel[x, y] and self.rel[y, x])

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.rel)]


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean composition."""
    r = np.asarray(rel, dtype=bool) | np.eye(len(rel), dtype=bool)
    while True:
        nxt = r | ((r.astype(np.int64) @ r.astype(np.int64)) > 0)
        if np.array_equal(nxt, r):
            return r
        r = nxt


def check_quasiorder(rel: np.ndarray, M: FiniteMonoid | None = None) -> None:
    rel = np.asarray(rel, dtype=bool)
    n = len(rel)
    missing = np.flatnonzero(~np.diag(rel))
    if len(missing):
        x = int(missing[0])
        raise OrderError(f"not reflexive at {x}", (x,))
    comp = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    bad = np.argwhere(comp & ~rel)
    if len(bad):
        x, z = (int(v) for v in bad[0])
        y = next(y for y in range(n) if rel[x, y] and rel[y, z])
        raise OrderError(f"not transitive: {x}<={y}<={z} but not {x}<={z}", (x, y, z))
    if M is not None:
        t = M.table
        for x, y in np.argwhere(rel):
            bad_z = np.flatnonzero(~rel[t[x], t[y]])
            if len(bad_z):
                z = int(bad_z[0])
                raise OrderError(
                    f"not compatible with +: {x}<={y} but not {x}+{z}<={y}+{z}",
                    (int(x), int(y), z),
                )


def explicit_order(M: FiniteMonoid, rel) -> QuasiOrder:
    rel = np.asarray(rel, dtype=bool)
    if rel.shape != (M.order, M.order):
        raise OrderError(f"relation must be {M.order}x{M.order}")
    check_quasiorder(rel, M)
    return QuasiOrder(M.order, _frozen(rel), "explicit")


def d_order(M: FiniteMonoid, D: Iterable[int]) -> QuasiOrder:
    """x <= y iff x + d = y for some d in D."""
    D = as_set(D)
    if M.zero not in D:
        raise NotASubmonoid("D must contain zero", (M.zero,))
    w = additivity_witness(M, D)
    if w is not None:
        raise NotASubmonoid(f"{w[0]}+{w[1]} not in D", w)
    rel = np.zeros((M.order, M.order), dtype=bool)
    idx = np.array(sorted(D))
    for x in range(M.order):
        rel[x, M.table[x, idx]] = True
    check_quasiorder(rel)
    return QuasiOrder(M.order, _frozen(rel), D)


def v_order(M: FiniteMonoid) -> QuasiOrder:
    return d_order(M, M.carrier)


@dataclass(frozen=True, eq=False)
class OrderedMonoid:
    monoid: FiniteMonoid
    order: QuasiOrder

    def __post_init__(self):
        if self.order.carrier_size != self.monoid.order:
            raise OrderError("order and monoid have different carriers")

    @property
    def rel(self) -> np.ndarray:
        return self.order.rel

    @property
    def n(self) -> int:
        return self.monoid.order

    @property
    def table(self) -> np.ndarray:
        return self.monoid.table

    @property
    def zero(self) -> int:
        return self.monoid.zero

    @property
    def name(self) -> str | None:
        return self.monoid.name

    def leq(self, x: int, y: int) -> bool:
        return bool(self.order.rel[x, y])

    def equiv(self, x: int, y: int) -> bool:
        return self.order.equiv(x, y)

    def add(self, x: int, y: int) -> int:
        return int(self.monoid.table[x, y])

    def __repr__(self) -> str:
        kind = "derived" if self.order.derived else "explicit"
        return f"<OrderedMonoid {self.monoid!r} {kind}>"


def ordered(M: FiniteMonoid, rel=None) -> OrderedMonoid:
    """Pair M with its derived order, or with an explicit (validated) one."""
    return OrderedMonoid(M, v_order(M) if rel is None else explicit_order(M, rel))


# ---------------------------------------------------------------------------
# congruences, quotients, homomorphisms


@dataclass(frozen=True)
class Congruence:
    blocks: tuple  # tuple of sorted tuples, ordered by least member
    block_of: tuple

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Congruence":
        groups: dict[int, list[int]] = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        blocks = tuple(sorted(tuple(g) for g in groups.values()))
        block_of = [0] * len(labels)
        for i, b in enumerate(blocks):
            for x in b:
                block_of[x] = i
        return cls(blocks, tuple(block_of))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int) -> "Congruence":
        labels = [-1] * n
        for i, b in enumerate(blocks):
            for x in b:
                if labels[x] != -1:
                    raise NotACongruence(f"element {x} in two blocks", (x,))
                labels[x] = i
        if -1 in labels:
            x = labels.index(-1)
            raise NotACongruence(f"element {x} in no block", (x,))
        return cls.from_labels(labels)

    def __len__(self) -> int:
        return len(self.blocks)


def congruence_witness(M: FiniteMonoid, C: Congruence):
    """(x, x', z) with x ~ x' but x+z !~ x'+z, or None."""
    lab = np.array(C.block_of)
    t = M.table
    for block in C.blocks:
        first = block[0]
        for other in block[1:]:
            bad = np.flatnonzero(lab[t[first]] != lab[t[other]])
            if len(bad):
                return (first, other, int(bad[0]))
    return None


def eqv_classes(Q: QuasiOrder, M: FiniteMonoid | None = None) -> Congruence:
    """Blocks of mutual <=.

    With ``M`` given, the blocks are checked to form a congruence; derived
    orders always pass.
    """
    rel = Q.rel
    sym = rel & rel.T
    labels = [int(np.flatnonzero(sym[x])[0]) for x in range(Q.carrier_size)]
    C = Congruence.from_labels(labels)
    if M is not None:
        w = congruence_witness(M, C)
        if w is not None:
            raise NotACongruence(f"{w[0]} ~ {w[1]} but {w[0]}+{w[2]} !~ {w[1]}+{w[2]}", w)
    return C


def congruence_closure(M: FiniteMonoid, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence identifying the given pairs."""
    parent = list(range(M.order))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
            return True
        return False

    for x, y in pairs:
        union(x, y)
    changed = True
    while changed:
        changed = False
        for x in range(M.order):
            for y in range(x + 1, M.order):
                if find(x) != find(y):
                    continue
                for z in range(M.order):
                    if union(int(M.table[x, z]), int(M.table[y, z])):
                        changed = True
    return Congruence.from_labels([find(x) for x in range(M.order)])


def quotient(M: FiniteMonoid, C: Congruence) -> tuple[FiniteMonoid, tuple]:
    """Block monoid M/C and the projection (element -> block index)."""
    w = congruence_witness(M, C)
    if w is not None:
        raise NotACongruence(f"{w[0]} ~ {w[1]} but {w[0]}+{w[2]} !~ {w[1]}+{w[2]}", w)
    k = len(C.blocks)
    reps = [b[0] for b in C.blocks]
    table = [[C.block_of[int(M.table[reps[i], reps[j]])] for j in range(k)] for i in range(k)]
    name = f"{M.name}/~" if M.name else None
    Q = validate_monoid(k, table, C.block_of[M.zero], name)
    return Q, C.block_of


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: OrderedMonoid
    target: OrderedMonoid
    map: tuple

    def __call__(self, x: int) -> int:
        return self.map[x]


def homomorphism(source: OrderedMonoid, target: OrderedMonoid, mapping: Sequence[int]) -> Homomorphism:
    f = np.asarray(mapping, dtype=np.int64)
    if f.shape != (source.n,):
        raise NotAHomomorphism(f"map must have {source.n} entries")
    if f.min() < 0 or f.max() >= target.n:
        raise NotAHomomorphism("map leaves the target carrier")
    if f[source.zero] != target.zero:
        raise NotAHomomorphism(f"zero maps to {int(f[source.zero])}", (source.zero,))
    bad = np.argwhere(f[source.table] != target.table[np.ix_(f, f)])
    if len(bad):
        x, y = (int(v) for v in bad[0])
        raise NotAHomomorphism(f"f({x}+{y}) != f({x})+f({y})", (x, y))
    return Homomorphism(source, target, tuple(int(v) for v in f))


def compose(psi: Homomorphism, phi: Homomorphism) -> Homomorphism:
    """``psi o phi``."""
    return homomorphism(phi.source, psi.target, [psi.map[v] for v in phi.map])


def identity_hom(O: OrderedMonoid) -> Homomorphism:
    return Homomorphism(O, O, tuple(range(O.n)))


def upper_bound_quotient(O: OrderedMonoid) -> tuple[OrderedMonoid, Homomorphism]:
    """V / (mutual <=_V) with its induced order, and the projection."""
    C = eqv_classes(O.order, O.monoid)
    Mbar, proj = quotient(O.monoid, C)
    k = Mbar.order
    reps = [b[0] for b in C.blocks]
    rel = O.rel[np.ix_(reps, reps)]
    if O.order.derived:
        Obar = ordered(Mbar)
        if not np.array_equal(Obar.rel, rel):
            raise OrderError("induced order differs from the quotient's own order")
    else:
        Obar = OrderedMonoid(Mbar, explicit_order(Mbar, rel))
    sym = Obar.rel & Obar.rel.T
    assert np.array_equal(sym, np.eye(k, dtype=bool)), "quotient order not antisymmetric"
    return Obar, Homomorphism(O, Obar, tuple(proj))


# ---------------------------------------------------------------------------
# convexity and scaled sets


def is_convex(O: OrderedMonoid, S: Iterable[int]) -> bool:
    S = as_set(S)
    if not S:
        return True
    idx = sorted(S)
    above = O.rel[idx].any(axis=0)      # s1 <= s for some s1 in S
    below = O.rel[:, idx].any(axis=1)   # s <= s2 for some s2 in S
    return set(np.flatnonzero(above & below).tolist()) <= S


def conv(O: OrderedMonoid, T: Iterable[int]) -> frozenset:
    """Interval hull {s | t1 <= s <= t2 for some t1, t2 in T}."""
    T = as_set(T)
    if not T:
        raise EmptyInput("convex hull of the empty set")
    idx = sorted(T)
    above = O.rel[idx].any(axis=0)
    below = O.rel[:, idx].any(axis=1)
    return frozenset(np.flatnonzero(above & below).tolist())


def frac(M: FiniteMonoid | OrderedMonoid, n: int, A: Iterable[int]) -> frozenset:
    """{x | nx in A}."""
    if isinstance(M, OrderedMonoid):
        M = M.monoid
    A = as_set(A)
    return frozenset(x for x in M.elements if nmul(M, n, x) in A)


def is_cofinal(O: OrderedMonoid, S: Iterable[int], T: Iterable[int]) -> bool:
    """Mutual cofinality: each side is dominated elementwise by the other."""
    return dominated(O, T, S) and dominated(O, S, T)


def dominated(O: OrderedMonoid, T: Iterable[int], S: Iterable[int]) -> bool:
    """Every t in T lies below some s in S."""
    S, T = sorted(as_set(S)), sorted(as_set(T))
    if not T:
        return True
    if not S:
        return False
    return bool(O.rel[np.ix_(T, S)].any(axis=1).all())


def restrict(O: OrderedMonoid, S: Iterable[int], name: str | None = None) -> tuple[OrderedMonoid, tuple]:
    """Submonoid S with the restricted order; returns it and the list of old indices."""
    S = as_set(S)
    if not is_submonoid(O.monoid, S):
        w = additivity_witness(O.monoid, S) or (O.zero,)
        raise NotASubmonoid("not a submonoid", w)
    old = sorted(S)
    new = {x: i for i, x in enumerate(old)}
    table = [[new[int(O.table[x, y])] for y in old] for x in old]
    M = validate_monoid(len(old), table, new[O.zero], name)
    rel = O.rel[np.ix_(old, old)]
    return OrderedMonoid(M, QuasiOrder(M.order, _frozen(rel), "explicit")), tuple(old)


def lcm_frac_law(M: FiniteMonoid, n1: int, n2: int, A: Iterable[int]) -> bool:
    """frac(n1,A) + frac(n2,A) lies inside frac(lcm(n1,n2), A) (for additive A)."""
    lhs = set_sum(M, frac(M, n1, A), frac(M, n2, A))
    return lhs <= frac(M, lcm(n1, n2), A)


def fold(M: FiniteMonoid, xs: Iterable[int]) -> int:
    return reduce(lambda a, b: int(M.table[a, b]), xs, M.zero)
