"""Archimedean quasiorder, archimedean classes and the idempotent monoid Gamma(V)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import (
    FiniteMonoid,
    Homomorphism,
    MonoidError,
    OrderedMonoid,
    as_set,
    additivity_witness,
    conv,
    is_additive,
    is_convex,
    memoized,
    orbit,
    set_sum,
    validate_monoid,
)


class IllFormedOrder(MonoidError):
    """Class addition or class order is not representative-independent."""


class NotAdditive(MonoidError):
    pass


@memoized
def arch_matrix(O: OrderedMonoid) -> np.ndarray:
    """``m[x, y]``: x <= n*y for some n >= 1."""
    m = np.zeros((O.n, O.n), dtype=bool)
    for y in range(O.n):
        vals = list(orbit(O.monoid, y).values)
        m[:, y] = O.rel[:, vals].any(axis=1)
    m.setflags(write=False)
    return m


def arch_leq(O: OrderedMonoid, x: int, y: int) -> bool:
    return bool(arch_matrix(O)[x, y])


def arch_equiv(O: OrderedMonoid, x: int, y: int) -> bool:
    m = arch_matrix(O)
    return bool(m[x, y] and m[y, x])


@dataclass(frozen=True)
class ArchClass:
    class_id: int
    elements: frozenset
    representative: int

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)


@memoized
def _class_labels(O: OrderedMonoid) -> tuple:
    m = arch_matrix(O)
    sym = m & m.T
    return tuple(int(np.flatnonzero(sym[x])[0]) for x in range(O.n))


def arch_class(O: OrderedMonoid, x: int) -> ArchClass:
    G = gamma(O, check=False)
    return G.classes[G.proj[x]]


@dataclass(frozen=True, eq=False)
class GammaMonoid:
    classes: tuple
    table: np.ndarray
    order: np.ndarray   # order[a, b]: class a <=_Gamma class b
    proj: tuple
    zero: int

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def ids(self) -> range:
        return range(len(self.classes))

    def add(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def leq(self, a: int, b: int) -> bool:
        return bool(self.order[a, b])

    def less(self, a: int, b: int) -> bool:
        return a != b and bool(self.order[a, b])

    def members(self, a: int) -> frozenset:
        return self.classes[a].elements

    def union(self, ids: Iterable[int]) -> frozenset:
        out = set()
        for a in ids:
            out |= self.classes[a].elements
        return frozenset(out)

    def classes_of(self, S: Iterable[int]) -> frozenset:
        return frozenset(self.proj[x] for x in S)

    def as_monoid(self) -> FiniteMonoid:
        return validate_monoid(len(self), self.table, self.zero, "Gamma")

    def order_pairs(self) -> list:
        return [(int(a), int(b)) for a, b in np.argwhere(self.order)]

    def covers(self) -> list:
        """Hasse edges (a, b): a < b with nothing strictly between."""
        lt = self.order & ~np.eye(len(self), dtype=bool)
        out = []
        for a, b in np.argwhere(lt):
            if not np.any(lt[a] & lt[:, b]):
                out.append((int(a), int(b)))
        return out


def gamma_witness(O: OrderedMonoid, labels: tuple):
    """First (x, x', y) with x ~ x' but x+y !~ x'+y, or None."""
    lab = np.array(labels)
    t = O.table
    reps: dict[int, int] = {}
    for x in range(O.n):
        r = reps.setdefault(labels[x], x)
        if r == x:
            continue
        bad = np.flatnonzero(lab[t[r]] != lab[t[x]])
        if len(bad):
            return (r, x, int(bad[0]))
    return None


@memoized
def _gamma(O: OrderedMonoid, check: bool) -> GammaMonoid:
    labels = _class_labels(O)
    groups: dict[int, list[int]] = {}
    for x, lab in enumerate(labels):
        groups.setdefault(lab, []).append(x)
    reps = sorted(groups)  # least member of each class
    cid = {r: i for i, r in enumerate(reps)}
    proj = tuple(cid[labels[x]] for x in range(O.n))
    classes = tuple(
        ArchClass(i, frozenset(groups[r]), r) for i, r in enumerate(reps)
    )
    k = len(reps)
    m = arch_matrix(O)
    table = np.array([[proj[int(O.table[a, b])] for b in reps] for a in reps], dtype=np.int64).reshape(k, k)
    order = m[np.ix_(reps, reps)].copy()
    if check:
        w = gamma_witness(O, labels)
        if w is not None:
            x, x2, y = w
            raise IllFormedOrder(
                f"class sum not well defined: {x} ~ {x2} but {x}+{y} !~ {x2}+{y}", w
            )
        p = np.array(proj)
        bad = np.argwhere(m != order[np.ix_(p, p)])
        if len(bad):
            x, y = (int(v) for v in bad[0])
            raise IllFormedOrder(f"class order not well defined at ({x}, {y})", (x, y))
        diag = np.flatnonzero(np.diag(table) != np.arange(k))
        if len(diag):
            raise IllFormedOrder(f"class {int(diag[0])} not idempotent", (int(diag[0]),))
    table.setflags(write=False)
    order.setflags(write=False)
    return GammaMonoid(classes, table, order, proj, proj[O.zero])


def gamma(O: OrderedMonoid, check: bool = True) -> GammaMonoid:
    """Archimedean classes with class addition, class order and projection.

    Class ids follow the least member.  With ``check`` the addition and order
    are verified to be representative-independent (``IllFormedOrder``
    otherwise), which can only fail for explicit orders.
    """
    if check:
        return _gamma(O, True)
    return _gamma(O, False)


def gamma_map(phi: Homomorphism) -> tuple:
    """Class map [x] -> [phi(x)], checked to be a monotone homomorphism making the square commute."""
    GV = gamma(phi.source)
    GW = gamma(phi.target)
    cmap = [GW.proj[phi.map[c.representative]] for c in GV.classes]
    for x in range(phi.source.n):
        if GW.proj[phi.map[x]] != cmap[GV.proj[x]]:
            raise MonoidError(f"square does not commute at {x}", (x,))
    for a in GV.ids:
        for b in GV.ids:
            if cmap[GV.add(a, b)] != GW.add(cmap[a], cmap[b]):
                raise MonoidError(f"class map not additive at ({a}, {b})", (a, b))
            if GV.leq(a, b) and not GW.leq(cmap[a], cmap[b]):
                raise MonoidError(f"class map not monotone at ({a}, {b})", (a, b))
    if cmap[GV.zero] != GW.zero:
        raise MonoidError("class map does not preserve zero")
    return tuple(cmap)


def saturate(O: OrderedMonoid, X: Iterable[int]) -> frozenset:
    """Union of the classes meeting the additive set X."""
    X = as_set(X)
    w = additivity_witness(O.monoid, X)
    if w is not None:
        raise NotAdditive(f"{w[0]}+{w[1]} leaves X", w)
    G = gamma(O, check=False)
    return G.union(G.classes_of(X))


def cprime(O: OrderedMonoid, A: ArchClass, B: ArchClass) -> frozenset:
    """Union over n of frac(n, conv(A+B)): elements with a multiple in conv(A+B)."""
    hull = conv(O, set_sum(O.monoid, A.elements, B.elements))
    return frozenset(
        x for x in range(O.n) if hull.intersection(orbit(O.monoid, x).values)
    )


def cprime_report(O: OrderedMonoid, A: ArchClass, B: ArchClass) -> dict:
    """C'(A,B) together with the three properties claimed for it."""
    G = gamma(O, check=False)
    C = cprime(O, A, B)
    target = G.members(G.add(A.class_id, B.class_id))
    return {
        "set": C,
        "convex": is_convex(O, C),
        "additive": is_additive(O.monoid, C),
        "inside_sum_class": C <= target,
    }


def direct_sum_class_iso(G1: GammaMonoid, G2: GammaMonoid, G: GammaMonoid, n2: int) -> dict:
    """Map (class of x1, class of x2) -> class of (x1, x2) in V1 (+) V2.

    Elements of the direct sum are indexed ``x1 * n2 + x2``.
    """
    iso = {}
    for a in G1.ids:
        for b in G2.ids:
            x = G1.classes[a].representative * n2 + G2.classes[b].representative
            iso[(a, b)] = G.proj[x]
    return iso


def check_product_iso(G1: GammaMonoid, G2: GammaMonoid, G: GammaMonoid, iso: dict):
    """Return None if ``iso`` is an ordered-monoid isomorphism Gamma1 x Gamma2 -> Gamma, else a witness."""
    if sorted(iso.values()) != list(G.ids):
        return ("not bijective",)
    for (a1, b1), c1 in iso.items():
        for (a2, b2), c2 in iso.items():
            if iso[(G1.add(a1, a2), G2.add(b1, b2))] != G.add(c1, c2):
                return ("sum", (a1, b1), (a2, b2))
            if (G1.leq(a1, a2) and G2.leq(b1, b2)) != G.leq(c1, c2):
                return ("order", (a1, b1), (a2, b2))
    if iso[(G1.zero, G2.zero)] != G.zero:
        return ("zero",)
    return None
