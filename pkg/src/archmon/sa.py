"""Summand-absorbing submonoids and the operators C(x), C(S), C_omega(x), W(x)."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .arch import NotAdditive, arch_matrix, gamma
from .core import (
    Congruence,
    FiniteMonoid,
    MonoidError,
    NotASubmonoid,
    OrderedMonoid,
    additive_closure,
    additivity_witness,
    as_set,
    eqv_classes,
    is_additive,
    is_submonoid,
    memoized,
    orbit,
    ordered,
    sorted_tuple,
)


class CarrierTooLarge(MonoidError):
    pass


DEFAULT_SA_BOUND = 14


@dataclass(frozen=True)
class SASubmonoid:
    elements: frozenset
    certificate: frozenset = frozenset({"contains_zero", "additive", "sa_checked"})

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))


def _as_ordered(M) -> OrderedMonoid:
    return M if isinstance(M, OrderedMonoid) else _derived(M)


@memoized
def _derived_cached(M: FiniteMonoid) -> OrderedMonoid:
    return ordered(M)


def _derived(M: FiniteMonoid) -> OrderedMonoid:
    return _derived_cached(M)


def sa_witness(M: FiniteMonoid | OrderedMonoid, W: Iterable[int]):
    """Why W is not an SA-submonoid: ('zero',), ('sum', x, y) or ('absorb', x, y); None if it is."""
    if isinstance(M, OrderedMonoid):
        M = M.monoid
    W = as_set(W)
    if M.zero not in W:
        return ("zero",)
    w = additivity_witness(M, W)
    if w is not None:
        return ("sum",) + w
    inside = np.isin(M.table, sorted(W))
    for x, y in np.argwhere(inside):
        if x <= y and (x not in W or y not in W):
            return ("absorb", int(x), int(y))
    return None


def is_sa(M: FiniteMonoid | OrderedMonoid, W: Iterable[int]) -> bool:
    return sa_witness(M, W) is None


def cbar(O: OrderedMonoid, x: int) -> frozenset:
    """{u | u + x is order-equivalent to x}."""
    return _cbar(O, x)


@memoized
def _cbar(O: OrderedMonoid, x: int) -> frozenset:
    s = O.table[:, x]
    ok = O.rel[s, x] & O.rel[x, s]
    return frozenset(np.flatnonzero(ok).tolist())


def zero_class(O: OrderedMonoid) -> frozenset:
    """The SA-submonoid C(0), which is also the archimedean class of 0."""
    return cbar(O, O.zero)


def cbar_set(O: OrderedMonoid, S: Iterable[int]) -> frozenset:
    """Union of C(s) over an additive set S."""
    S = as_set(S)
    w = additivity_witness(O.monoid, S)
    if w is not None:
        raise NotAdditive(f"{w[0]}+{w[1]} leaves S", w)
    return _cbar_union(O, S)


def _cbar_union(O: OrderedMonoid, S: frozenset) -> frozenset:
    out: set = set()
    for s in S:
        out |= cbar(O, s)
    return frozenset(out)


def cbar_omega(O: OrderedMonoid, x: int) -> frozenset:
    """Union of C(nx) over n >= 1 (the entourage generated by x)."""
    return _cbar_union(O, frozenset(orbit(O.monoid, x).values))


def omega_chain_holds(O: OrderedMonoid, x: int) -> bool:
    """C(nx) is contained in C((n+1)x) along the whole orbit, including the wrap-around."""
    vals = orbit(O.monoid, x).values
    nxt = [int(O.table[v, x]) for v in vals]
    return all(cbar(O, v) <= cbar(O, w) for v, w in zip(vals, nxt))


def w_of(O: OrderedMonoid, x: int) -> SASubmonoid:
    """{y | y <= nx for some n >= 1}: the least SA-submonoid containing the class of x."""
    col = arch_matrix(O)[:, x]
    return SASubmonoid(frozenset(np.flatnonzero(col).tolist()))


def w_of_class(O: OrderedMonoid, class_id: int) -> frozenset:
    G = gamma(O, check=False)
    return w_of(O, G.classes[class_id].representative).elements


def sa_closure(M: FiniteMonoid | OrderedMonoid, X: Iterable[int]) -> SASubmonoid:
    """Least SA-submonoid containing X: alternate submonoid closure and summand absorption."""
    if isinstance(M, OrderedMonoid):
        M = M.monoid
    W = set(as_set(X)) | {M.zero}
    while True:
        W = set(additive_closure(M, W))
        inside = np.isin(M.table, sorted(W))
        xs, ys = np.nonzero(inside)
        grown = W | set(xs.tolist()) | set(ys.tolist())
        if grown == W:
            return SASubmonoid(frozenset(W))
        W = grown


def _down_sets(rel: np.ndarray, must: int):
    """All down-closed block sets of a partial order containing block ``must``."""
    k = len(rel)
    below = [frozenset(np.flatnonzero(rel[:, b]).tolist()) - {b} for b in range(k)]
    # linear extension: blocks with fewer predecessors first
    order = sorted(range(k), key=lambda b: (len(below[b]), b))
    out = []

    def rec(i, chosen: frozenset, excluded: frozenset):
        if i == k:
            out.append(chosen)
            return
        b = order[i]
        if below[b] <= chosen:
            rec(i + 1, chosen | {b}, excluded)
        if b != must:
            rec(i + 1, chosen, excluded | {b})

    rec(0, frozenset(), frozenset())
    return out


def enumerate_sa(M: FiniteMonoid | OrderedMonoid, bound: int | None = None) -> list:
    """All SA-submonoids, found among unions of down-closed sets of V-bar blocks."""
    O = _as_ordered(M)
    if bound is None:
        bound = int(os.environ.get("ARCHMON_SA_BOUND", DEFAULT_SA_BOUND))
    if O.n > bound:
        raise CarrierTooLarge(f"carrier of size {O.n} exceeds bound {bound}")
    C = eqv_classes(O.order, O.monoid)
    reps = [b[0] for b in C.blocks]
    rel = O.rel[np.ix_(reps, reps)]
    found = []
    for blocks in _down_sets(rel, C.block_of[O.zero]):
        W = frozenset(x for b in blocks for x in C.blocks[b])
        if is_sa(O.monoid, W):
            found.append(SASubmonoid(W))
    return sorted(found, key=lambda s: (len(s.elements), sorted_tuple(s.elements)))


def least_sa_containing(sas: list, X: Iterable[int]) -> frozenset | None:
    """Intersection of the listed SA-submonoids containing X (None if none do)."""
    X = as_set(X)
    hits = [s.elements for s in sas if X <= s.elements]
    if not hits:
        return None
    out = hits[0]
    for h in hits[1:]:
        out = out & h
    return out


def complement_dual(M: FiniteMonoid | OrderedMonoid, W: Iterable[int]) -> frozenset:
    """(V \\ W) together with the zero class C(0)."""
    O = _as_ordered(M)
    W = as_set(W)
    if not is_submonoid(O.monoid, W):
        raise NotASubmonoid("W must be a submonoid", additivity_witness(O.monoid, W) or ())
    return (frozenset(range(O.n)) - W) | zero_class(O)


def complement_dual_report(O: OrderedMonoid, W: Iterable[int]) -> dict:
    """The four parts of the complement duality evaluated on one submonoid W."""
    W = as_set(W)
    U = complement_dual(O, W)
    rest = frozenset(range(O.n)) - W
    C = eqv_classes(O.order, O.monoid)
    w_sa = is_sa(O.monoid, W)
    report = {
        "U": U,
        "W_sa": w_sa,
        "U_submonoid": is_submonoid(O.monoid, U),
        "complement_additive": is_additive(O.monoid, rest),
        "W_saturated": is_union_of_blocks(C, W),
        "U_saturated": is_union_of_blocks(C, U),
    }
    return report


def is_union_of_blocks(C: Congruence, S: Iterable[int]) -> bool:
    S = as_set(S)
    return all(all(y in S for y in C.blocks[C.block_of[x]]) for x in S)
