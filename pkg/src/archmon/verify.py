"""Statement registry: every numbered claim becomes a property check on one instance.

A check returns one of four statuses: ``pass``, ``fail`` (with a witness),
``vacuous`` (hypotheses never met on this instance) or ``observational``
(recorded data for claims that are in tension with computation).

Checks call the library through an `Ops` object and compare against
brute-force oracles written inline, so a corrupted operation (see `FAULTS`)
shows up as a failure with a witness.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import lcm
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import arch as _arch
from .arch import IllFormedOrder
from . import flock as _flock
from . import sa as _sa
from . import strat as _strat
from .core import (
    FiniteMonoid,
    Homomorphism,
    MonoidError,
    OrderedMonoid,
    additive_closure,
    compose,
    eqv_classes,
    frac,
    homomorphism,
    identity_hom,
    is_additive,
    is_submonoid,
    ordered,
    restrict,
    set_sum,
    submonoid_closure,
    upper_bound_quotient,
    validate_monoid,
)
from .gen import BoundExceeded, direct_sum, enumerate_monoids, lex_product, max_order, trivial, truncated, cyclic
from .strat import AbstractFlock


class UnknownStatementId(MonoidError):
    pass


# ---------------------------------------------------------------------------
# operations under test


class Ops:
    """Library entry points used by the checks; keyword overrides replace them."""

    gamma = staticmethod(_arch.gamma)
    arch_matrix = staticmethod(_arch.arch_matrix)
    gamma_map = staticmethod(_arch.gamma_map)
    saturate = staticmethod(_arch.saturate)
    cprime = staticmethod(_arch.cprime)
    frac = staticmethod(frac)
    is_sa = staticmethod(_sa.is_sa)
    cbar = staticmethod(_sa.cbar)
    cbar_set = staticmethod(_sa.cbar_set)
    cbar_omega = staticmethod(_sa.cbar_omega)
    w_of = staticmethod(lambda O, x: _sa.w_of(O, x).elements)
    sa_closure = staticmethod(lambda M, X: _sa.sa_closure(M, X).elements)
    enumerate_sa = staticmethod(_sa.enumerate_sa)
    complement_dual = staticmethod(_sa.complement_dual)
    class_cbar = staticmethod(_flock.class_cbar)
    dichotomy = staticmethod(_flock.classify_dichotomy)
    max_flock = staticmethod(lambda O, a: _flock.max_flock(O, a).class_ids)
    min_flock = staticmethod(lambda O, a: _flock.min_flock(O, a).class_ids)
    down_set = staticmethod(_flock.down_set)
    s_f_of = staticmethod(_flock.s_f_of)
    flocks_in_chain = staticmethod(_flock.flocks_in_chain)
    classify_inessential = staticmethod(_flock.classify_inessential)
    is_grounded = staticmethod(_flock.is_grounded)
    is_tight = staticmethod(_strat.is_tight)
    stratify = staticmethod(_strat.stratify)
    peel = staticmethod(_strat.peel)
    decomposition = staticmethod(_strat.theorem_3_2_decomposition)

    def __init__(self, **overrides):
        for k, v in overrides.items():
            if not hasattr(type(self), k):
                raise AttributeError(f"no operation named {k!r}")
            setattr(self, k, v)


@dataclass(eq=False)
class Instance:
    obj: OrderedMonoid | AbstractFlock
    name: str
    parts: tuple | None = None          # (initial part, transfinite part) for composed flocks
    ops: Ops = field(default_factory=Ops)
    cache: dict = field(default_factory=dict)

    @property
    def abstract(self) -> bool:
        return isinstance(self.obj, AbstractFlock)

    @property
    def derived(self) -> bool:
        return not self.abstract and self.obj.order.derived

    def memo(self, key, fn):
        if key not in self.cache:
            self.cache[key] = fn()
        return self.cache[key]


def instance(obj, name: str | None = None, parts=None, ops: Ops | None = None) -> Instance:
    if isinstance(obj, FiniteMonoid):
        obj = ordered(obj)
    label = name or getattr(obj, "name", None) or "instance"
    return Instance(obj, label, parts, ops or Ops())


# ---------------------------------------------------------------------------
# outcomes


@dataclass(frozen=True)
class Result:
    id: str
    status: str
    witness: dict | None = None
    note: str | None = None
    runtime: float = 0.0

    def to_json(self) -> dict:
        out = {"id": self.id, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


class _Outcome:
    def __init__(self, status, witness=None, note=None):
        self.status, self.witness, self.note = status, witness, note


def fail(note: str, **witness) -> _Outcome:
    return _Outcome("fail", _js(witness), note)


def vacuous(note: str) -> _Outcome:
    return _Outcome("vacuous", None, note)


def observe(note: str, **data) -> _Outcome:
    return _Outcome("observational", _js(data), note)


def _js(v):
    if isinstance(v, dict):
        return {str(k): _js(x) for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))}
    if isinstance(v, (set, frozenset)):
        return sorted(_js(x) for x in v)
    if isinstance(v, (list, tuple)):
        return [_js(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, _strat.Ordinal):
        return v.to_json()
    return v


# ---------------------------------------------------------------------------
# brute-force oracles (loops over the raw table and relation)


def _multiples(M: FiniteMonoid, x: int) -> list:
    out, v = [], x
    while v not in out:
        out.append(v)
        v = int(M.table[v, x])
    return out


def _arch_oracle(O: OrderedMonoid) -> np.ndarray:
    m = np.zeros((O.n, O.n), dtype=bool)
    for y in range(O.n):
        for v in _multiples(O.monoid, y):
            for x in range(O.n):
                if O.rel[x, v]:
                    m[x, y] = True
    return m


def _cbar_oracle(O: OrderedMonoid, x: int) -> frozenset:
    return frozenset(
        u for u in range(O.n)
        if O.rel[int(O.table[u, x]), x] and O.rel[x, int(O.table[u, x])]
    )


def _cbar_set_oracle(O: OrderedMonoid, S) -> frozenset:
    out = set()
    for s in S:
        out |= _cbar_oracle(O, s)
    return frozenset(out)


def _w_oracle(O: OrderedMonoid, x: int) -> frozenset:
    mult = _multiples(O.monoid, x)
    return frozenset(y for y in range(O.n) if any(O.rel[y, v] for v in mult))


def _sa_oracle(M: FiniteMonoid, W) -> bool:
    W = set(W)
    if M.zero not in W:
        return False
    for x in range(M.order):
        for y in range(M.order):
            s = int(M.table[x, y])
            if x in W and y in W and s not in W:
                return False
            if s in W and (x not in W or y not in W):
                return False
    return True


def _classes_oracle(O: OrderedMonoid) -> list:
    m = _arch_oracle(O)
    seen, out = set(), []
    for x in range(O.n):
        if x in seen:
            continue
        c = frozenset(y for y in range(O.n) if m[x, y] and m[y, x])
        seen |= c
        out.append(c)
    return out


def _closure_family(M: FiniteMonoid, closure, cap: int) -> tuple[list, bool]:
    """All sets reachable by closing under one more element at a time, breadth first."""
    start = [closure(M, [x]) for x in range(M.order)]
    seen = set(start)
    queue = list(start)
    i = 0
    while i < len(queue):
        S = queue[i]
        i += 1
        for x in range(M.order):
            if x in S:
                continue
            T = closure(M, S | {x})
            if T not in seen:
                if len(seen) >= cap:
                    return sorted(seen, key=_setkey), True
                seen.add(T)
                queue.append(T)
    return sorted(seen, key=_setkey), False


def _setkey(s):
    return (len(s), sorted(s))


def submonoids(inst: Instance, cap: int = 3000) -> list:
    M = inst.obj.monoid
    return inst.memo(("submonoids", cap), lambda: _closure_family(M, submonoid_closure, cap)[0])


def additive_sets(inst: Instance, cap: int = 40) -> list:
    M = inst.obj.monoid
    return inst.memo(("additive", cap), lambda: _closure_family(M, additive_closure, cap)[0])


def convex_sets(inst: Instance) -> list:
    O = inst.obj
    out = {frozenset(range(O.n))}
    for x in range(O.n):
        for y in range(O.n):
            if O.rel[x, y]:
                out.add(frozenset(s for s in range(O.n) if O.rel[x, s] and O.rel[s, y]))
    for c in _classes_oracle(O):
        out.add(c)
    return sorted(out, key=_setkey)


def _gamma_subsets(G, cap: int = 2000) -> list:
    """Nonempty subsets of Gamma closed under class addition."""
    ids = list(G.ids)

    def close(S):
        S = set(S)
        while True:
            new = {G.add(a, b) for a in S for b in S} - S
            if not new:
                return frozenset(S)
            S |= new

    seen = {close({a}) for a in ids}
    queue = list(seen)
    i = 0
    while i < len(queue) and len(seen) < cap:
        S = queue[i]
        i += 1
        for a in ids:
            if a not in S:
                T = close(S | {a})
                if T not in seen:
                    seen.add(T)
                    queue.append(T)
    return sorted(seen, key=_setkey)


def principal_sets(inst: Instance) -> list:
    O = inst.obj

    def build():
        G = _arch.gamma(O)
        out = []
        for ids in _gamma_subsets(G):
            S = G.union(ids)
            if _flock.principal_reason(O, S) is None:
                out.append(S)
        return out

    return inst.memo("principal", build)


def homs(inst: Instance) -> list:
    """A few homomorphisms out of V: identity, x -> 2x, x -> 3x, the projections to V-bar and Gamma, and to 0."""
    O = inst.obj

    def build():
        M = O.monoid
        out = [("id", identity_hom(O))]
        for k in (2, 3):
            mp = [_multiples(M, x)[0] for x in range(O.n)]
            mp = [int(M.table[x, x]) if k == 2 else int(M.table[int(M.table[x, x]), x]) for x in range(O.n)]
            out.append((f"times{k}", homomorphism(O, O, mp)))
        Obar, proj = upper_bound_quotient(O)
        out.append(("to_upper_bound", proj))
        G = _arch.gamma(O)
        OG = ordered(G.as_monoid())
        out.append(("to_gamma", homomorphism(O, OG, G.proj)))
        T = ordered(trivial())
        out.append(("to_trivial", homomorphism(O, T, [0] * O.n)))
        return out

    return inst.memo("homs", build)


def _fmt_set(s):
    return sorted(s)


# ---------------------------------------------------------------------------
# registry


REGISTRY: dict[str, Callable[[Instance], _Outcome | None]] = {}
CONCRETE_ONLY: set = set()
ANY_ORDER = {"L1.1", "L1.2", "T1.3", "L1.6", "S1.7"}


def statement(sid: str, concrete: bool = True):
    def deco(fn):
        REGISTRY[sid] = fn
        if concrete:
            CONCRETE_ONLY.add(sid)
        fn.statement_id = sid
        return fn
    return deco


# -- preliminaries -----------------------------------------------------------


@statement("P13.1")
def check_p13_1(inst):
    O = inst.obj
    M = O.monoid
    Obar, proj = upper_bound_quotient(O)
    C = eqv_classes(O.order, M)
    for S in submonoids(inst):
        lhs = inst.ops.is_sa(M, S)
        union = _sa.is_union_of_blocks(C, S)
        image = frozenset(proj.map[x] for x in S)
        rhs = union and inst.ops.is_sa(Obar.monoid, image)
        if lhs != _sa_oracle(M, S):
            return fail("is_sa disagrees with the pair scan", S=S, is_sa=lhs)
        if lhs != rhs:
            return fail("SA in V but not (union of blocks and SA image), or conversely",
                        S=S, sa=lhs, union_of_blocks=union)


@statement("P13.2")
def check_p13_2(inst):
    O = inst.obj
    cs = [inst.ops.cbar(O, x) for x in range(O.n)]
    for x in range(O.n):
        if cs[x] != _cbar_oracle(O, x):
            return fail("C(x) differs from {u | u+x = x up to equivalence}", x=x, got=cs[x],
                        expected=_cbar_oracle(O, x))
        if not _sa_oracle(O.monoid, cs[x]):
            return fail("C(x) is not an SA-submonoid", x=x, C=cs[x])
    for x in range(O.n):
        for y in range(O.n):
            if O.rel[x, y] and not cs[x] <= cs[y]:
                return fail("x <= x' but C(x) not inside C(x')", x=x, x_prime=y)
            if O.equiv(x, y) and cs[x] != cs[y]:
                return fail("x = x' up to equivalence but C(x) != C(x')", x=x, x_prime=y)


@statement("E13.5")
def check_e13_5(inst):
    O = inst.obj
    for x in range(O.n):
        mult = _multiples(O.monoid, x)
        for v in mult:
            w = int(O.table[v, x])
            if not inst.ops.cbar(O, v) <= inst.ops.cbar(O, w):
                return fail("C(nx) not inside C((n+1)x)", x=x, nx=v, next=w)


@statement("E13.7")
def check_e13_7(inst):
    O = inst.obj
    for x in range(O.n):
        got = inst.ops.cbar_omega(O, x)
        by_orbit = _cbar_set_oracle(O, _multiples(O.monoid, x))
        by_closure = _cbar_set_oracle(O, additive_closure(O.monoid, [x]))
        if not got == by_orbit == by_closure:
            return fail("C_omega(x) differs from C(Nx)", x=x, got=got, expected=by_closure)
        if not _sa_oracle(O.monoid, got):
            return fail("C_omega(x) is not SA", x=x, C_omega=got)


@statement("P13.7")
def check_p13_7(inst):
    O = inst.obj
    M = O.monoid
    arch = _arch_oracle(O)
    for x in range(O.n):
        for y in range(O.n):
            for my in _multiples(M, y):
                if O.rel[x, my]:
                    if not inst.ops.cbar(O, x) <= inst.ops.cbar(O, my):
                        return fail("x <= my but C(x) not inside C(my)", x=x, y=y, my=my)
                    if not inst.ops.cbar_omega(O, x) <= inst.ops.cbar_omega(O, y):
                        return fail("x <= my but C_omega(x) not inside C_omega(y)", x=x, y=y)
            if arch[x, y] and arch[y, x] and inst.ops.cbar_omega(O, x) != inst.ops.cbar_omega(O, y):
                return fail("same archimedean class but different C_omega", x=x, y=y)


@statement("COF")
def check_cofinal(inst):
    O = inst.obj
    fam = additive_sets(inst)
    tested = 0
    for S, T in combinations(fam, 2):
        st = all(any(O.rel[t, s] for s in S) for t in T)
        ts = all(any(O.rel[s, t] for t in T) for s in S)
        if st and ts:
            tested += 1
            a, b = inst.ops.cbar_set(O, S), inst.ops.cbar_set(O, T)
            if a != b:
                return fail("cofinal additive sets with different C", S=S, T=T, C_S=a, C_T=b)
    if not tested:
        return vacuous("no distinct cofinal pair among the sampled additive sets")


# -- archimedean classes and Gamma ---------------------------------------------


@statement("L1.1")
def check_l1_1(inst):
    O = inst.obj
    N = O.n + 1
    for A in convex_sets(inst):
        for n in range(1, N + 1):
            F = inst.ops.frac(O, n, A)
            oracle = frozenset(x for x in range(O.n) if _nmul(O.monoid, n, x) in A)
            if F != oracle:
                return fail("frac(n, A) differs from {x | nx in A}", n=n, A=A, got=F)
            if not _convex_oracle(O, F):
                return fail("frac(n, A) not convex for convex A", n=n, A=A, frac=F)


def _nmul(M, n, x):
    v = x
    for _ in range(n - 1):
        v = int(M.table[v, x])
    return v


def _convex_oracle(O, S) -> bool:
    return all(
        s in S
        for a in S for b in S for s in range(O.n)
        if O.rel[a, s] and O.rel[s, b]
    )


@statement("L1.2")
def check_l1_2(inst):
    O = inst.obj
    M = O.monoid
    for A in additive_sets(inst):
        for n1 in range(1, 5):
            for n2 in range(1, 5):
                lhs = set_sum(M, inst.ops.frac(O, n1, A), inst.ops.frac(O, n2, A))
                rhs = inst.ops.frac(O, lcm(n1, n2), A)
                if not lhs <= rhs:
                    return fail("frac(n1,A)+frac(n2,A) not inside frac(lcm,A)",
                                A=A, n1=n1, n2=n2, outside=lhs - rhs)


@statement("T1.3")
def check_t1_3(inst):
    O = inst.obj
    M = O.monoid
    G = inst.ops.gamma(O)
    oracle = sorted(_classes_oracle(O), key=min)
    got = sorted((c.elements for c in G.classes), key=min)
    if got != oracle:
        return fail("archimedean classes differ from the brute-force partition",
                    got=got, expected=oracle)
    for c in G.classes:
        A = c.elements
        if not _convex_oracle(O, A):
            return fail("class not convex", cls=c.class_id, members=A)
        if not is_additive(M, A):
            return fail("class not closed under addition", cls=c.class_id, members=A)
        for n in range(1, O.n + 2):
            if frozenset(x for x in range(O.n) if _nmul(M, n, x) in A) != A:
                return fail("A != frac(n, A)", cls=c.class_id, n=n)
    for a in G.ids:
        for b in G.ids:
            s = set_sum(M, G.members(a), G.members(b))
            target = G.members(G.add(a, b))
            if not s <= target:
                return fail("A+B not inside the class A +_Gamma B",
                            a=a, b=b, sum_class=G.add(a, b), outside=s - target)
            hull = frozenset(
                x for x in range(O.n)
                if any(O.rel[p, x] for p in s) and any(O.rel[x, q] for q in s)
            )
            cp = inst.ops.cprime(O, G.classes[a], G.classes[b])
            oracle_cp = frozenset(x for x in range(O.n) if set(_multiples(M, x)) & hull)
            if cp != oracle_cp:
                return fail("C'(A,B) differs from the union of frac(n, conv(A+B))", a=a, b=b, got=cp)
            if not (cp <= target and _convex_oracle(O, cp) and is_additive(M, cp)):
                return fail("C'(A,B) not convex, additive and inside A +_Gamma B", a=a, b=b, cprime=cp)


@statement("L1.6")
def check_l1_6(inst):
    O = inst.obj
    M = O.monoid
    if not all(int(M.table[x, x]) == x for x in range(O.n)):
        return vacuous("not idempotent")
    arch = inst.ops.arch_matrix(O)
    for x in range(O.n):
        for y in range(O.n):
            if x != y and O.rel[x, y] and O.rel[y, x]:
                return fail("idempotent but not upper bound", x=x, y=y)
            if bool(O.rel[y, x]) != (int(M.table[x, y]) == x):
                return fail("y <= x differs from x + y = x", x=x, y=y)
            if bool(arch[x, y]) != bool(O.rel[x, y]):
                return fail("archimedean order differs from <=_V", x=x, y=y)


@statement("S1.7")
def check_s1_7(inst):
    O = inst.obj
    M = O.monoid
    G = inst.ops.gamma(O)
    C = eqv_classes(O.order, M)
    a = all(G.members(G.proj[x]) == frozenset(C.blocks[C.block_of[x]]) for x in range(O.n))
    # (b) read on V-bar: the induced map from equivalence blocks to classes is bijective
    block_to_class = {C.block_of[x]: G.proj[x] for x in range(O.n)}
    b = len(set(block_to_class.values())) == len(C.blocks) == len(G)
    for x in range(O.n):
        for y in range(O.n):
            if G.proj[int(M.table[x, y])] != G.add(G.proj[x], G.proj[y]):
                return fail("projection is not a homomorphism", x=x, y=y)
    if a != b:
        return fail("(a) and (b) disagree", a=a, b=b)
    idem = all(int(M.table[x, x]) == x for x in range(O.n))
    if idem:
        if not a or len(G) != O.n:
            return fail("idempotent but projection not bijective", classes=len(G), n=O.n)
        for x in range(O.n):
            for y in range(O.n):
                if G.leq(G.proj[x], G.proj[y]) != bool(O.rel[x, y]):
                    return fail("idempotent but projection not an order isomorphism", x=x, y=y)


@statement("L1.8")
def check_l1_8(inst):
    O = inst.obj
    arch = _arch_oracle(O)
    for label, phi in homs(inst):
        W = phi.target
        archW = _arch_oracle(W)
        for x in range(O.n):
            for y in range(O.n):
                if arch[x, y] and not archW[phi.map[x], phi.map[y]]:
                    return fail("x <=_a x' but phi(x) not <=_a phi(x')", hom=label, x=x, y=y)
        for cls in _classes_oracle(O):
            img = {phi.map[x] for x in cls}
            hit = [c for c in _classes_oracle(W) if img <= c]
            if len(hit) != 1:
                return fail("phi(A) not inside a unique class", hom=label, A=cls)


@statement("T1.9")
def check_t1_9(inst):
    O = inst.obj
    hs = dict(homs(inst))
    for label, phi in hs.items():
        GV, GW = inst.ops.gamma(phi.source), inst.ops.gamma(phi.target)
        try:
            cmap = inst.ops.gamma_map(phi)
        except MonoidError as e:
            return fail(f"Gamma(phi) rejected: {e}", hom=label)
        for x in range(O.n):
            if GW.proj[phi.map[x]] != cmap[GV.proj[x]]:
                return fail("square does not commute", hom=label, x=x)
        for a in GV.ids:
            for b in GV.ids:
                if cmap[GV.add(a, b)] != GW.add(cmap[a], cmap[b]):
                    return fail("Gamma(phi) not additive", hom=label, a=a, b=b)
    ident = inst.ops.gamma_map(hs["id"])
    if list(ident) != list(range(len(ident))):
        return fail("Gamma(id) is not the identity", got=ident)
    for l1, l2 in (("times2", "to_upper_bound"), ("times2", "times3"), ("to_upper_bound", "id")):
        phi, psi = hs[l1], hs[l2]
        if phi.target is not psi.source:
            continue
        comp = inst.ops.gamma_map(compose(psi, phi))
        g1, g2 = inst.ops.gamma_map(phi), inst.ops.gamma_map(psi)
        if list(comp) != [g2[v] for v in g1]:
            return fail("Gamma(psi phi) != Gamma(psi) Gamma(phi)", phi=l1, psi=l2)
    if all(int(O.table[x, x]) == x for x in range(O.n)):
        G = inst.ops.gamma(O)
        if sorted(G.proj) != list(range(O.n)):
            return fail("idempotent but projection not bijective", proj=G.proj)


@statement("E1.10")
def check_e1_10(inst):
    O = inst.obj
    M = O.monoid
    partners = [truncated(1), cyclic(2)]
    if M.order <= 4:
        partners.append(M)
    G1 = inst.ops.gamma(O)
    for P in partners:
        S = ordered(direct_sum(M, P))
        OP = ordered(P)
        n2 = P.order
        r1, r2 = O.rel, OP.rel
        prod = (r1[:, None, :, None] & r2[None, :, None, :]).reshape(S.n, S.n)
        if not np.array_equal(prod, S.rel):
            bad = np.argwhere(prod != S.rel)[0]
            return fail("order on the direct sum is not componentwise", partner=P.name,
                        pair=[int(bad[0]), int(bad[1])])
        G2, G = inst.ops.gamma(OP), inst.ops.gamma(S)
        iso = _arch.direct_sum_class_iso(G1, G2, G, n2)
        w = _arch.check_product_iso(G1, G2, G, iso)
        if w is not None:
            return fail("Gamma(V1 + V2) is not Gamma(V1) x Gamma(V2)", partner=P.name, witness=list(map(str, w)))


@statement("E1.12")
def check_e1_12(inst):
    O = inst.obj
    L = lex_product(trivial(), O.monoid)
    GL, G = inst.ops.gamma(L), inst.ops.gamma(O)
    for x in range(O.n):
        if GL.proj[x] != G.proj[x]:
            return fail("Gamma(trivial x_lex V2) is not {0} x Gamma(V2)", element=x,
                        lex_class=GL.proj[x], plain_class=G.proj[x])
    for a, b in combinations_with_replacement(G.ids, 2):
        if GL.table[a, b] != G.table[a, b] or GL.order[a, b] != G.order[a, b]:
            return fail("Gamma(trivial x_lex V2) is not {0} x Gamma(V2)", classes=(a, b),
                        lex_sum=int(GL.table[a, b]), sum=int(G.table[a, b]))


# -- entourages, attractors and flocks ---------------------------------------


def _classes(inst):
    return inst.ops.gamma(inst.obj)


@statement("D2.2")
def check_d2_2(inst):
    O = inst.obj
    G = _classes(inst)
    for a in G.ids:
        A = G.members(a)
        D = _cbar_set_oracle(O, A)
        res = inst.ops.dichotomy(O, a)
        meet = A & D
        if meet:
            if not res.centered:
                return fail("class meets its entourage but was classified disjoint", cls=a, meet=meet)
            if res.evidence not in meet:
                return fail("center evidence outside A and D", cls=a, evidence=res.evidence)
            z = res.evidence
            if not O.equiv(int(O.table[z, z]), z):
                return fail("center evidence z has z+z not equivalent to z", cls=a, z=z)
            idem = [z for z in meet if O.equiv(int(O.table[z, z]), z)]
            for z1, z2 in combinations(sorted(idem), 2):
                if not O.equiv(z1, z2):
                    return fail("two centers in A and D are not equivalent", cls=a, z1=z1, z2=z2)
        else:
            if res.centered:
                return fail("classified center but A and D are disjoint", cls=a)
            if O.n and inst.derived:
                return fail("finite-centering violated: disjoint class on a finite derived-order monoid", cls=a)
            for x in A:
                mult = _multiples(O.monoid, x)
                cs = [_cbar_oracle(O, v) for v in mult]
                if any(not c1 < c2 for c1, c2 in zip(cs, cs[1:])):
                    return fail("case II chain not strict", cls=a, x=x)
                if _cbar_set_oracle(O, mult) != D:
                    return fail("case II: D != C_omega(x)", cls=a, x=x)


def _saturate_oracle(O, X):
    classes = _classes_oracle(O)
    return frozenset().union(*[c for c in classes if c & set(X)]) if X else frozenset()


@statement("R2.5")
def check_r2_5(inst):
    O = inst.obj
    M = O.monoid
    fam = additive_sets(inst, 12)
    for X in fam:
        sat = inst.ops.saturate(O, X)
        if sat != _saturate_oracle(O, X):
            return fail("saturation differs from the union of classes met", X=X, got=sat)
    for X, Y in combinations(fam, 2):
        xy = set_sum(M, X, Y)
        mid = set_sum(M, inst.ops.saturate(O, X), inst.ops.saturate(O, Y))
        if not (xy <= mid <= inst.ops.saturate(O, xy)):
            return fail("X+Y, X_sat+Y_sat, (X+Y)_sat not nested", X=X, Y=Y)
    G = inst.ops.gamma(O)
    for a in G.ids:
        for b in G.ids:
            s = inst.ops.saturate(O, set_sum(M, G.members(a), G.members(b)))
            if s != G.members(G.add(a, b)):
                return fail("A1 +_Gamma A2 != (A1 + A2)_sat", a=a, b=b)
    for label, phi in homs(inst):
        W = phi.target
        GW = _arch.gamma(W)
        for c in G.classes:
            img = frozenset(phi.map[x] for x in c.elements)
            B = inst.ops.saturate(W, img)
            if B != GW.members(GW.proj[phi.map[c.representative]]):
                return fail("phi(A)_sat is not the class of phi(x)", hom=label, cls=c.class_id)
            D = _cbar_set_oracle(O, c.elements)
            E = inst.ops.saturate(W, frozenset(phi.map[x] for x in D))
            if not any(_cbar_set_oracle(W, _multiples(W.monoid, w)) == E for w in range(W.n)):
                return fail("phi(D)_sat is not an entourage", hom=label, cls=c.class_id, E=E)
            if _cbar_set_oracle(W, B) != E:
                return fail("phi(A)_sat does not attract phi(D)_sat", hom=label, cls=c.class_id,
                            C_B=_cbar_set_oracle(W, B), E=E)


@statement("P2.7")
def check_p2_7(inst):
    O = inst.obj
    G = _classes(inst)
    try:
        family = inst.ops.enumerate_sa(O.monoid)
    except _sa.CarrierTooLarge:
        family = [S for S in submonoids(inst) if _sa_oracle(O.monoid, S)]
    for Wsa in family:
        W = Wsa.elements if hasattr(Wsa, "elements") else frozenset(Wsa)
        OW, old = restrict(O, W)
        GW = _arch.gamma(OW)
        for c in G.classes:
            A = c.elements
            if A & W:
                if not A <= W:
                    return fail("class meets SA W but is not inside it", W=W, cls=c.class_id)
                D = _cbar_set_oracle(O, A)
                if not D <= W:
                    return fail("entourage of A not inside W", W=W, cls=c.class_id)
                new = old.index(c.representative)
                inner = frozenset(old[i] for i in _sa.cbar_omega(OW, new))
                if inner != D:
                    return fail("entourage inside W attracted by A differs from D", W=W, cls=c.class_id,
                                inner=inner, D=D)
        inside = {frozenset(old[i] for i in cw.elements) for cw in GW.classes}
        expected = {c.elements for c in G.classes if c.elements & W}
        if inside != expected:
            return fail("Gamma(W) is not the set of classes of V meeting W", W=W)


@statement("R2.8")
def check_r2_8(inst):
    O = inst.obj
    M = O.monoid
    G = _classes(inst)
    zero_bar = G.members(G.proj[O.zero])
    if inst.ops.cbar(O, O.zero) != zero_bar:
        return fail("C(0) differs from the class of 0", C0=inst.ops.cbar(O, O.zero), cls0=zero_bar)
    for c in G.classes:
        A = c.elements
        CA = inst.ops.cbar_set(O, A)
        gen = A | zero_bar
        if not is_submonoid(M, gen) or _saturate_oracle(O, gen) != gen:
            return fail("A + 0-bar is not a saturated submonoid", cls=c.class_id)
        if _saturate_oracle(O, submonoid_closure(M, A)) != gen:
            return fail("A + 0-bar is not the submonoid generated by A", cls=c.class_id)
        if not A & CA:
            if gen & CA != zero_bar:
                return fail("diamond case: (A + 0-bar) meet C(A) != 0-bar", cls=c.class_id)
        elif not (zero_bar <= gen <= CA):
            return fail("chain case: 0-bar, A + 0-bar, C(A) not nested", cls=c.class_id, C=CA)
        if _saturate_oracle(O, CA) != CA:
            return fail("C(A) not saturated", cls=c.class_id)


@statement("T2.9")
def check_t2_9(inst):
    O = inst.obj
    M = O.monoid
    G = _classes(inst)
    sas = [s.elements for s in inst.ops.enumerate_sa(M)] if O.n <= _sa.DEFAULT_SA_BOUND else None
    for c in G.classes:
        A = c.elements
        x = c.representative
        W1 = inst.ops.w_of(O, x)
        W2 = inst.ops.sa_closure(M, A)
        oracle = _w_oracle(O, x)
        if W1 != oracle:
            return fail("W(x) differs from {y | y <= nx}", cls=c.class_id, got=W1, expected=oracle)
        if W2 != oracle:
            return fail("SA closure of A differs from W(A)", cls=c.class_id, got=W2, expected=oracle)
        if sas is not None:
            above = [S for S in sas if A <= S]
            least = frozenset.intersection(*above) if above else None
            if least != oracle:
                return fail("least SA-submonoid over A differs from W(A)", cls=c.class_id, least=least)
        for y in A:
            if inst.ops.w_of(O, y) != W1:
                return fail("W depends on the representative", cls=c.class_id, x=x, y=y)
        CA = _cbar_set_oracle(O, A)
        if not (A | CA) <= W1:
            return fail("A + C(A) not inside W(A)", cls=c.class_id)
        for S in (W1, A | CA):
            if _flock.principal_reason(O, S) is not None:
                return fail("W(A) or A + C(A) is not principal additive", cls=c.class_id, S=S,
                            reason=_flock.principal_reason(O, S))
            if _cbar_set_oracle(O, S) != CA:
                return fail("C(W(A)) or C(A + C(A)) differs from C(A)", cls=c.class_id, S=S)


@statement("T2.10")
def check_t2_10(inst):
    O = inst.obj
    G = _classes(inst)
    ws = [_w_oracle(O, c.representative) for c in G.classes]
    for a in G.ids:
        got = inst.ops.down_set(G, a)
        expected = frozenset(b for b in G.ids if ws[b] <= ws[a])
        if got != expected:
            return fail("A-down differs from {B | W(B) inside W(A)}", cls=a, got=got, expected=expected)


def _fl_oracle(O, G, a):
    C = [_cbar_set_oracle(O, G.members(b)) for b in G.ids]
    return frozenset(b for b in G.ids if C[a] == C[b] == C[G.add(a, b)])


@statement("P2.12")
def check_p2_12(inst):
    O = inst.obj
    M = O.monoid
    G = _classes(inst)
    for a in G.ids:
        got = inst.ops.s_f_of(O, a)
        D = _cbar_set_oracle(O, G.members(a))
        oracle = submonoid_closure(M, D | G.union(_fl_oracle(O, G, a)))
        if got != oracle:
            return fail("S_F(A) is not the submonoid generated by D and Fl(A)", cls=a, got=got,
                        expected=oracle)


def _chains(G, cap: int = 40) -> list:
    covers = {}
    for a, b in G.covers():
        covers.setdefault(a, []).append(b)
    out = []

    def walk(path):
        if len(out) >= cap:
            return
        nxt = covers.get(path[-1], [])
        if not nxt:
            out.append(tuple(path))
            return
        for b in sorted(nxt):
            walk(path + [b])

    walk([G.zero])
    pairs = [(a, b) for a, b in G.order_pairs() if a != b]
    out += [p for p in pairs[:cap]]
    return out


@statement("E2.13")
def check_e2_13(inst):
    O = inst.obj
    G = _classes(inst)
    ws = [_w_oracle(O, c.representative) for c in G.classes]
    Ds = [_cbar_set_oracle(O, G.members(a)) for a in G.ids]
    for J in _chains(G):
        Jset = frozenset(J)
        parts = inst.ops.flocks_in_chain(O, Jset)
        if sorted(x for p in parts for x in p) != sorted(Jset):
            return fail("chain parts do not partition J", J=J, parts=parts)
        for a in J:
            expected = Jset & _fl_oracle(O, G, a)
            if not any(frozenset(p) == expected for p in parts):
                return fail("part of A differs from J meet Fl(A)", J=J, cls=a, expected=expected)
        for p in parts:
            for lo in p:
                for hi in p:
                    for c in Jset - set(p):
                        if G.leq(lo, c) and G.leq(c, hi):
                            return fail("maximal flock in J not convex", J=J, part=p, between=c)
        for lam, mu in combinations(J, 2):
            if not G.less(lam, mu):
                lam, mu = mu, lam
            if not Ds[lam] <= Ds[mu]:
                return fail("lambda < mu but D_lambda not inside D_mu", J=J, lam=lam, mu=mu)
            strict = ws[lam] < ws[mu]
            jl = frozenset(b for b in Jset if G.members(b) <= ws[lam])
            jm = frozenset(b for b in Jset if G.members(b) <= ws[mu])
            if not (strict and jl < jm):
                return fail("lambda < mu without strict growth of W", J=J, lam=lam, mu=mu)


def _all_flocks_oracle(O, G) -> list:
    C = [_cbar_set_oracle(O, G.members(b)) for b in G.ids]
    by_d = {}
    for a in G.ids:
        by_d.setdefault(C[a], []).append(a)
    out = []
    for D, ids in by_d.items():
        if len(ids) > 12:
            raise BoundExceeded("too many attractors for flock enumeration")
        for r in range(1, len(ids) + 1):
            for sub in combinations(ids, r):
                ok = all(C[G.add(a, b)] == D and G.add(a, b) in sub for a in sub for b in sub)
                if ok:
                    out.append(frozenset(sub))
    return out


@statement("P2.14")
def check_p2_14(inst):
    O = inst.obj
    G = _classes(inst)
    flocks = inst.memo("flocks", lambda: _all_flocks_oracle(O, G))
    for a in G.ids:
        got = inst.ops.min_flock(O, a)
        containing = [F for F in flocks if a in F]
        inter = frozenset.intersection(*containing)
        down = frozenset(b for b in G.ids if G.add(b, a) == a)
        if got != _fl_oracle(O, G, a) & down:
            return fail("Fl_min(A) != Fl(A) meet A-down", cls=a, got=got)
        if got != inter:
            return fail("Fl_min(A) is not the intersection of flocks containing A", cls=a, got=got,
                        expected=inter)
        D = _cbar_set_oracle(O, G.members(a))
        T = frozenset(b for b in G.ids if _cbar_set_oracle(O, G.members(b)) == D)
        if got != T & down:
            return fail("Fl_min(A) is not the down-set of A in T(D)", cls=a, got=got)


@statement("R2.15")
def check_r2_15(inst):
    O = inst.obj
    G = _classes(inst)
    flocks = inst.memo("flocks", lambda: _all_flocks_oracle(O, G))
    for a in G.ids:
        fl = _fl_oracle(O, G, a)
        for b in fl:
            if G.leq(a, b) and not inst.ops.min_flock(O, a) <= inst.ops.min_flock(O, b):
                return fail("A <= B in one flock but Fl_min(A) not inside Fl_min(B)", a=a, b=b)
        for a1, a2 in combinations_with_replacement(sorted(fl), 2):
            both = inst.ops.min_flock(O, a1) | inst.ops.min_flock(O, a2)
            over = [F for F in flocks if both <= F]
            least = frozenset.intersection(*over) if over else None
            got = inst.ops.min_flock(O, G.add(a1, a2))
            if got != least:
                return fail("Fl_min(A1 + A2) is not the least flock over both", a1=a1, a2=a2,
                            got=got, expected=least)


@statement("D2.16")
def check_d2_16(inst):
    O = inst.obj
    G = _classes(inst)
    seen = 0
    for S in principal_sets(inst):
        D = _cbar_set_oracle(O, S)
        ids = sorted(G.classes_of(S))
        ess = [a for a in ids if _cbar_set_oracle(O, _multiples(O.monoid, G.classes[a].representative)) == D]
        for b in ids:
            try:
                label = inst.ops.classify_inessential(O, S, b)
            except _flock.ChoiceDependence as e:
                return fail("controlled/excessive label depends on the essential class", S=S,
                            witness=list(e.witness))
            if b in ess:
                expected = "essential"
            else:
                seen += 1
                labels = {
                    "controlled" if _cbar_set_oracle(O, G.members(G.add(a, b))) == D else "excessive"
                    for a in ess
                }
                if len(labels) != 1:
                    return fail("label depends on the essential class", S=S, cls=b)
                expected = labels.pop()
            if label != expected:
                return fail("wrong essential/controlled/excessive label", S=S, cls=b, got=label,
                            expected=expected)
    if not seen:
        return vacuous("no inessential class in any principal additive set")


@statement("E2.17")
def check_e2_17(inst):
    O = inst.obj
    G = _classes(inst)
    ran = False
    for a in G.ids:
        if inst.ops.dichotomy(O, a).centered:
            continue
        ran = True
        D = inst.ops.class_cbar(O, a)
        down = frozenset(b for b in G.ids if G.leq(b, a))
        S1 = G.union(down)
        S2 = S1 | D
        for S in (S1, S2):
            if _cbar_set_oracle(O, S) != D:
                return fail("S1 or S2 does not attract D", cls=a, S=S)
        T = frozenset(b for b in G.ids if _cbar_set_oracle(O, G.members(b)) == D)
        for S in (S1, S2):
            ess = frozenset(_flock.essential_classes(O, S))
            if ess != down & T:
                return fail("essential classes differ from A-down meet T(D)", cls=a, S=S, ess=ess)
        for b in sorted(G.classes_of(S1) - T):
            if _flock.classify_inessential(O, S1, b) != "controlled":
                return fail("S1 is not controlled", cls=a, inessential=b)
    if not ran:
        return vacuous("every class meets its entourage (finite centering)")


@statement("E2.18")
def check_e2_18(inst):
    O = inst.obj
    G = _classes(inst)
    rows = []
    for z in G.ids:
        D = _cbar_set_oracle(O, G.members(z))
        if not G.members(z) <= D:
            continue
        T = frozenset(b for b in G.ids if _cbar_set_oracle(O, G.members(b)) == D)
        up = frozenset(b for b in G.ids if G.add(z, b) == b)
        kind = "equal" if T == up else ("strict" if T < up else "not_contained")
        rows.append({"center": z, "T": T, "Z_up": up, "relation": kind})
    counts = {k: sum(r["relation"] == k for r in rows) for k in ("equal", "strict", "not_contained")}
    return observe("T(D) against Z-up for each centered class", counts=counts, rows=rows)


@statement("D2.21")
def check_d2_21(inst):
    O = inst.obj
    G = _classes(inst)
    done = set()
    for a in G.ids:
        F = _fl_oracle(O, G, a)
        if F in done:
            continue
        done.add(F)
        S = G.union(F)
        if _flock.principal_reason(O, S) is not None:
            return fail("S_F of a maximal flock is not principal additive", cls=a, S=S,
                        reason=_flock.principal_reason(O, S))
        if not inst.ops.is_grounded(O, S):
            return fail("S_F of a maximal flock is not grounded", cls=a, S=S)


# -- minimal classes, tightness, peeling and heights ---------------------------


def _all_centered(inst) -> tuple[bool, int | None]:
    O = inst.obj
    G = _classes(inst)
    for a in G.ids:
        if not inst.ops.dichotomy(O, a).centered:
            return False, a
    return True, None


@statement("T3.2", concrete=False)
def check_t3_2(inst):
    if inst.abstract:
        F = inst.obj
        if F.declared_entourage_tag == "centered":
            return vacuous("declared centered")
        S = inst.ops.stratify(F)
        for a in sorted(S.layers[0]):
            dec = inst.ops.decomposition(F, a)
            if not dec.holds:
                extra = dec.w - dec.minimal - dec.entourage - {F.gamma.zero}
                return fail("W(A) is not the disjoint union of the minimal classes and D", cls=a,
                            minimal=dec.minimal, w=dec.w, unexplained=extra)
        return None
    centered, a = _all_centered(inst)
    if centered:
        return vacuous("every entourage is centered")
    if inst.derived:
        return fail("finite-centering violated: a non-centered class on a finite derived-order monoid", cls=a)
    dec = inst.ops.decomposition(inst.obj, a)
    if not dec.holds:
        return fail("W(A) is not the disjoint union of the minimal classes and D", cls=a)


@statement("C3.4")
def check_c3_4(inst):
    O = inst.obj
    G = _classes(inst)
    for a in G.ids:
        A = G.members(a)
        CA = _cbar_set_oracle(O, A)
        by_def = (A | CA) == _w_oracle(O, G.classes[a].representative)
        got = inst.ops.is_tight(O, a)
        if got != by_def:
            return fail("is_tight differs from A + C(A) = W(A)", cls=a, got=got)
        T = [b for b in G.ids if _cbar_set_oracle(O, G.members(b)) == CA]
        centered = any(G.members(b) & CA for b in T)
        by_cor = A <= CA or (not centered and _fl_oracle(O, G, a) == {a})
        if by_cor != by_def:
            return fail("tight by definition differs from the central/flock criterion", cls=a,
                        definition=by_def, corollary=by_cor)


@statement("S3.5")
def check_s3_5(inst):
    O = inst.obj
    G = _classes(inst)
    ran = False
    for a in G.ids:
        if inst.ops.dichotomy(O, a).centered:
            continue
        ran = True
        x = G.classes[a].representative
        mult = _multiples(O.monoid, x)
        elem = True
        for y in range(O.n):
            if any(O.rel[y, v] for v in mult):
                up = any(O.rel[x, v] for v in _multiples(O.monoid, y))
                absorbed = any(int(O.table[y, v]) == v for v in mult)
                if not (up or absorbed):
                    elem = False
        if inst.ops.is_tight(O, a) != elem:
            return fail("elementwise tightness criterion disagrees", cls=a, elementwise=elem)
    if not ran:
        return vacuous("every entourage is centered")


@statement("P3.6")
def check_p3_6(inst):
    O = inst.obj
    M = O.monoid
    V = frozenset(range(O.n))
    C = eqv_classes(O.order, M)
    arch = _arch_oracle(O)
    for W in submonoids(inst):
        U = inst.ops.complement_dual(M, W)
        zero_bar = _cbar_oracle(O, O.zero)
        if U != (V - W) | zero_bar:
            return fail("U differs from (V - W) + 0-bar", W=W, U=U)
        sa = _sa_oracle(M, W)
        u_sub = is_submonoid(M, U)
        comp = is_additive(M, V - W)
        if not (sa == u_sub == comp):
            return fail("(a): W SA, U submonoid, V - W additive are not equivalent",
                        W=W, U=U, W_sa=sa, U_submonoid=u_sub, complement_additive=comp)
        ws, us = _sa.is_union_of_blocks(C, W), _sa.is_union_of_blocks(C, U)
        if ws != us:
            return fail("(b): W saturated and U saturated disagree", W=W, U=U, W_saturated=ws,
                        U_saturated=us)
        if sa:
            for S in (W, U):
                idx = sorted(S)
                sub, old = restrict(O, S)
                own = ordered(sub.monoid)
                if not np.array_equal(own.rel, O.rel[np.ix_(idx, idx)]):
                    return fail("(c): <=_V does not restrict to the order of the submonoid", W=W, S=S)
                if not np.array_equal(_arch_oracle(own), arch[np.ix_(idx, idx)]):
                    return fail("(d): archimedean order does not restrict", W=W, S=S)


@statement("L3.7")
def check_l3_7(inst):
    O = inst.obj
    M = O.monoid
    G = _classes(inst)
    flocks = inst.memo("flocks", lambda: _all_flocks_oracle(O, G))
    tested = 0
    for F1 in flocks:
        D = _cbar_set_oracle(O, G.members(min(F1)))
        U = inst.ops.complement_dual(M, D) if is_submonoid(M, D) else None
        if U is None or not is_submonoid(M, U):
            continue
        SF1 = G.union(F1)
        if not SF1 <= U:
            continue
        OU, old = restrict(O, U)
        GU = _arch.gamma(OU)
        target = frozenset(old.index(x) for x in SF1)
        for F2 in _all_flocks_oracle(OU, GU):
            if _cbar_set_oracle(OU, GU.members(min(F2))) != target:
                continue
            tested += 1
            lifted = frozenset(G.proj[old[GU.classes[b].representative]] for b in F2)
            union = F1 | lifted
            ok = all(
                inst.ops.class_cbar(O, x) == D
                and inst.ops.class_cbar(O, G.add(x, y)) == D
                and G.add(x, y) in union
                for x in union for y in union
            )
            if not ok:
                return fail("F1 + F2 is not a flock attracting D", F1=F1, F2=lifted, D=D)
    if not tested:
        return vacuous("no flock F2 in the complement attracts S_F1")


@statement("T3.7", concrete=False)
def check_t3_7(inst):
    if inst.abstract:
        F = inst.obj
        if F.declared_entourage_tag == "centered":
            return vacuous("declared centered")
        S = inst.ops.stratify(F)
        rest = inst.ops.peel(F, None)
        expected = F.members - S.layers[0]
        got = rest.members if rest is not None else frozenset()
        if got != expected:
            return fail("peeling did not remove exactly F_min", removed=F.members - got,
                        F_min=S.layers[0])
        if rest is not None:
            if any(F.add(a, b) not in got for a in got for b in got):
                return fail("F - F_min is not closed under addition", rest=got)
            if inst.ops.stratify(rest).layers != S.layers[1:]:
                return fail("layers of F - F_min are not the later layers of F")
        return None
    centered, a = _all_centered(inst)
    if centered:
        return vacuous("every entourage is centered")
    if inst.derived:
        return fail("finite-centering violated: a non-centered class on a finite derived-order monoid", cls=a)
    F = _flock.max_flock(inst.obj, a)
    V1, D1, rest = inst.ops.peel(inst.obj, F)
    if rest.violations:
        return fail("F - F_min is not a flock of V1", cls=a)


@statement("C3.8", concrete=False)
def check_c3_8(inst):
    if inst.abstract:
        flocks = [(inst.obj.members, inst.obj.leq, inst.obj)]
    else:
        O = inst.obj
        G = _classes(inst)
        flocks = [(_fl_oracle(O, G, a), G.leq, G) for a in G.ids]
    for members, leq, order in flocks:
        S = inst.ops.stratify(inst.obj if inst.abstract else frozenset(members), None if inst.abstract else order)
        if S.case_tag != "I":
            return fail("finite flock did not end in case I", members=members, residue=S.residue)
        rest = set(members)
        for k, layer in enumerate(S.layers, start=1):
            mins = frozenset(a for a in rest if not any(b != a and leq(b, a) for b in rest))
            if layer != mins:
                return fail("layer is not the minimal set of the remainder", members=members, k=k,
                            layer=layer, expected=mins)
            rest -= layer
        if rest:
            return fail("layers do not exhaust the flock", members=members, left=rest)


@statement("T3.9", concrete=False)
def check_t3_9(inst):
    if inst.abstract:
        F = inst.obj
        if F.declared_entourage_tag == "centered":
            return vacuous("declared centered")
        S = inst.ops.stratify(F)
        if S.case_tag != "I":
            return fail("not case I", residue=S.residue)
        top = S.layers[-1]
        if len(top) != 1:
            return fail("top layer is not a single class", top=top)
        (tau,) = top
        if not all(F.leq(a, tau) for a in F.members):
            return fail("tau is not the maximum of F", tau=tau)
        if F.members != frozenset(b for b in F.members if F.leq(b, tau)):
            return fail("F != tau-down meet T(D)", tau=tau)
        return None
    centered, a = _all_centered(inst)
    if centered:
        return vacuous("every entourage is centered")
    if inst.derived:
        return fail("finite-centering violated: a non-centered class on a finite derived-order monoid", cls=a)


def _height_laws(members, add, leq, h, plus, restrict_c=None):
    less = lambda a, b: a != b and leq(a, b)
    for a in sorted(members):
        for b in sorted(members):
            s = add(a, b)
            if s not in h:
                return {"law": "closure", "a": a, "b": b}
            top = max(h[a], h[b])
            if not top <= h[s]:
                return {"law": "a", "a": a, "b": b}
            incomparable = not leq(a, b) and not leq(b, a)
            if (top < h[s]) != incomparable:
                return {"law": "b", "a": a, "b": b}
            if (restrict_c is None or restrict_c(a, b)) and not h[s] <= plus(h[a], h[b]):
                return {"law": "c", "a": a, "b": b, "sum": s}
            if less(a, b) and not h[a] < h[b]:
                return {"law": "d", "a": a, "b": b}
    return None


@statement("T3.11", concrete=False)
def check_t3_11(inst):
    if inst.abstract:
        F = inst.obj
        S = inst.ops.stratify(F)
        cases = [(F.members, F.add, F.leq, S)]
    else:
        O = inst.obj
        G = _classes(inst)
        cases = []
        for members in {_fl_oracle(O, G, a) for a in G.ids}:
            cases.append((members, G.add, G.leq, inst.ops.stratify(members, G)))
    for members, add, leq, S in cases:
        h = S.heights()
        w = _height_laws(members, add, leq, h, lambda p, q: p + q)
        if w is not None:
            w.update({"h_a": h[w["a"]], "h_b": h[w["b"]]})
            if "sum" in w:
                w["h_sum"] = h[w["sum"]]
            return fail(f"height law ({w['law']}) violated", members=members, layers=S.layers, **w)


@statement("T3.12", concrete=False)
def check_t3_12(inst):
    if not inst.abstract or inst.parts is None:
        return vacuous("no transfinite part")
    F = inst.obj
    part_f, part_g = inst.parts
    HF = inst.ops.stratify(part_f, F)
    HG = inst.ops.stratify(part_g, F)
    hp = _strat.transfinite_height(HF, HG)
    w = _height_laws(
        part_f | part_g, F.add, F.leq, hp, lambda p, q: p + q,
        restrict_c=lambda a, b: a in part_f or b in part_f,
    )
    if w is not None:
        return fail(f"transfinite height law ({w['law']}) violated", **w,
                    h_a=hp[w["a"]], h_b=hp[w["b"]])


# ---------------------------------------------------------------------------
# running


ALL_IDS = tuple(REGISTRY)


def _select(selection) -> tuple:
    if selection is None or selection == "all":
        return ALL_IDS
    if isinstance(selection, str):
        selection = [s for s in selection.split(",") if s]
    unknown = [s for s in selection if s not in REGISTRY]
    if unknown:
        raise UnknownStatementId(f"unknown statement id(s): {', '.join(unknown)}", tuple(unknown))
    return tuple(s for s in ALL_IDS if s in set(selection))


def run_check(inst: Instance, sid: str) -> Result:
    t0 = time.perf_counter()
    fn = REGISTRY[sid]
    if sid in CONCRETE_ONLY and inst.abstract:
        out = vacuous("needs element-level data")
    elif not inst.abstract and not inst.derived and sid not in ANY_ORDER and sid in CONCRETE_ONLY:
        out = vacuous("stated for the derived order")
    else:
        try:
            out = fn(inst)
        except IllFormedOrder as e:
            if inst.abstract or inst.derived:
                out = fail(f"IllFormedOrder: {e}", error=list(map(_js, e.witness or ())))
            else:
                # Gamma is only promised for upper bound orders; an explicit one may not be
                out = vacuous(f"Gamma ill-formed under the explicit order: {e}")
        except MonoidError as e:
            out = fail(f"{type(e).__name__}: {e}", error=list(map(_js, e.witness or ())))
    dt = time.perf_counter() - t0
    if out is None:
        return Result(sid, "pass", runtime=dt)
    return Result(sid, out.status, out.witness, out.note, dt)


@dataclass(frozen=True)
class TheoremReport:
    instance: str
    results: tuple

    @property
    def failed(self) -> tuple:
        return tuple(r for r in self.results if r.status == "fail")

    def status(self, sid: str) -> str:
        return next(r.status for r in self.results if r.id == sid)

    def result(self, sid: str) -> Result:
        return next(r for r in self.results if r.id == sid)

    def to_json(self) -> dict:
        return {"instance": self.instance, "results": [r.to_json() for r in self.results]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def run_suite(inst, selection="all") -> TheoremReport:
    if not isinstance(inst, Instance):
        inst = instance(inst)
    ids = _select(selection)
    return TheoremReport(inst.name, tuple(run_check(inst, sid) for sid in ids))


# ---------------------------------------------------------------------------
# shrinking and sweeps


def shrink(inst: Instance, sid: str, limit: int = 50) -> Instance:
    """Drop elements (keeping a submonoid) or merge pairs (by congruence) while ``sid`` still fails."""
    from .core import congruence_closure, quotient

    if inst.abstract:
        return inst
    cur = inst
    for _ in range(limit):
        M = cur.obj.monoid
        found = None
        cands = []
        for x in range(M.order):
            if x != M.zero and is_submonoid(M, frozenset(range(M.order)) - {x}):
                sub, _ = restrict(cur.obj, frozenset(range(M.order)) - {x})
                cands.append(sub.monoid)
        for x, y in combinations(range(M.order), 2):
            C = congruence_closure(M, [(x, y)])
            if len(C.blocks) < M.order:
                cands.append(quotient(M, C)[0])
        for N in cands:
            cand = Instance(ordered(FiniteMonoid(N.order, N.table, N.zero, f"{cur.name}~")), f"{cur.name}~",
                            ops=cur.ops)
            try:
                if run_check(cand, sid).status == "fail":
                    found = cand
                    break
            except Exception:
                continue
        if found is None:
            return cur
        cur = found
    return cur


@dataclass(frozen=True)
class SweepReport:
    orders: tuple
    instances: int
    counts: dict          # id -> {status: count}
    failures: tuple       # (instance name, id, witness)
    files: tuple = ()

    @property
    def fail_count(self) -> int:
        return len(self.failures)

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "instances": self.instances,
            "counts": {k: dict(sorted(v.items())) for k, v in sorted(self.counts.items())},
            "failures": [{"instance": n, "id": i, "witness": w} for n, i, w in self.failures],
        }


def _suite_job(args):
    order, idx, table, zero, name, ids = args
    try:
        M = validate_monoid(order, table, zero, name)
        inst = instance(M)
    except MonoidError as e:
        # a broken enumerator must surface, not crash the sweep
        return name, [("input", "fail", {"error": type(e).__name__, "witness": list(e.witness or ())})]
    rep = run_suite(inst, ids)
    return name, [(r.id, r.status, r.witness) for r in rep.results]


def sweep(orders: Iterable[int], selection="all", out_dir=None, jobs: int = 1,
          enumerator: Callable[[int], list] | None = None) -> SweepReport:
    orders = tuple(orders)
    bound = max_order()
    if orders and max(orders) > bound:
        raise BoundExceeded(f"order {max(orders)} exceeds enumeration bound {bound}")
    ids = _select(selection)
    enum = enumerator or enumerate_monoids
    monoids = [M for n in orders for M in enum(n)]
    jobs_in = [(M.order, i, M.table.tolist(), M.zero, M.name or f"M{M.order}_{i}", ids)
               for i, M in enumerate(monoids)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outs = list(ex.map(_suite_job, jobs_in))
    else:
        outs = [_suite_job(j) for j in jobs_in]
    counts: dict = {sid: {} for sid in ids}
    failures = []
    for name, rows in outs:
        for sid, status, witness in rows:
            counts.setdefault(sid, {})
            counts[sid][status] = counts[sid].get(status, 0) + 1
            if status == "fail":
                failures.append((name, sid, witness))
    files = []
    if out_dir is not None and failures:
        from .export import dump_monoid
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        by_name = {j[4]: M for j, M in zip(jobs_in, monoids)}
        for name, sid, _ in failures:
            small = shrink(instance(by_name[name]), sid)
            path = out / f"fail_{sid}_{name}.json".replace("/", "_")
            path.write_text(dump_monoid(small.obj.monoid))
            files.append(str(path))
    return SweepReport(orders, len(monoids), counts, tuple(failures), tuple(files))


# ---------------------------------------------------------------------------
# fault fixtures


def _corrupt_gamma(G, a=None, b=None, value=None):
    t = np.array(G.table)
    k = len(G)
    if a is None:
        a, b = k - 1, k - 1
    t[a, b] = t[b, a] = value if value is not None else (t[a, b] + 1) % k
    t.setflags(write=False)
    return _arch.GammaMonoid(G.classes, t, G.order, G.proj, G.zero)


def _swap_zero(S):
    S = set(S)
    return frozenset(S ^ {0})


def _fault_instances() -> dict:
    from .gen import build, chain, semilattice

    T3 = ordered(truncated(3))
    Z2 = ordered(cyclic(2))
    D33 = ordered(build("dsum(trunc(3),trunc(3))"))
    B4 = ordered(build("boolean(2)"))
    C3 = ordered(chain(3))
    n5 = semilattice(5, [(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)], "pentagon")
    centered_lie = lambda O, a: _flock.DichotomyResult("disjoint", a, None)
    never_centered = dict(dichotomy=centered_lie)

    def bad_gamma(O, check=True):
        return _corrupt_gamma(_arch.gamma(O), value=0)

    def f(obj, name, **ops):
        return instance(obj, f"fault:{name}", ops=Ops(**ops))

    pent = _strat.abstract_flock(n5, [1, 2, 3, 4], "disjoint", name="pentagon")
    two = _strat.abstract_flock(B4.monoid, [1, 2, 3], "disjoint", name="free2")
    comp, pf, pg = _strat.compose_abstract(
        _strat.abstract_flock(B4.monoid, [1, 2, 3], name="lower"),
        _strat.abstract_flock(n5, [1, 2, 3, 4], name="upper"),
        name="composed",
    )
    return {
        "P13.1": f(T3, "is_sa", is_sa=lambda M, W: not _sa.is_sa(M, W)),
        "P13.2": f(T3, "cbar", cbar=lambda O, x: _sa.cbar(O, x) - {0}),
        "E13.5": f(T3, "cbar", cbar=lambda O, x: frozenset(range(O.n)) if x == 1 else _sa.cbar(O, x)),
        "E13.7": f(T3, "cbar_omega", cbar_omega=lambda O, x: _sa.cbar(O, x)),
        "P13.7": f(D33, "cbar_omega", cbar_omega=lambda O, x: frozenset({x, 0})),
        "COF": f(T3, "cbar_set", cbar_set=lambda O, S: frozenset(S) | {0}),
        "L1.1": f(T3, "frac", frac=lambda O, n, A: frozenset(A) - {2} if n == 1 else frozenset(A)),
        "L1.2": f(T3, "frac", frac=lambda O, n, A: frozenset(A) if n > 1 else frozenset(A) | {1}),
        "T1.3": f(T3, "gamma_table", gamma=bad_gamma),
        "L1.6": f(C3, "arch", arch_matrix=lambda O: np.ones((O.n, O.n), dtype=bool)),
        "S1.7": f(C3, "gamma_table", gamma=bad_gamma),
        "L1.8": instance(T3, "fault:hom_target"),
        "T1.9": f(T3, "gamma_map", gamma_map=lambda phi: tuple(0 for _ in _arch.gamma(phi.source).ids)),
        "E1.10": f(T3, "gamma_table", gamma=bad_gamma),
        "E1.12": f(T3, "gamma_explicit", gamma=lambda O, check=True: bad_gamma(O) if not O.order.derived
                   else _arch.gamma(O)),
        "D2.2": f(T3, "dichotomy", **never_centered),
        "R2.5": f(T3, "saturate", saturate=lambda O, X: frozenset(X)),
        "P2.7": f(T3, "enumerate_sa", enumerate_sa=lambda M: [frozenset({0, 1})]),
        "R2.8": f(T3, "cbar_set", cbar_set=lambda O, S: frozenset(range(1, O.n))),
        "T2.9": f(D33, "w_of", w_of=lambda O, x: _sa.cbar(O, x)),
        "T2.10": f(D33, "down_set", down_set=lambda G, a: frozenset({a})),
        "P2.12": f(D33, "s_f_of", s_f_of=lambda O, a: _arch.gamma(O).members(a)),
        "E2.13": f(C3, "flocks_in_chain", flocks_in_chain=lambda O, J: (frozenset(J),)),
        "P2.14": f(B4, "min_flock", min_flock=lambda O, a: frozenset(_arch.gamma(O).ids)),
        "R2.15": f(C3, "min_flock", min_flock=lambda O, a: frozenset(_arch.gamma(O).ids)),
        "D2.16": f(ordered(adjoin_top_of(T3.monoid)), "classify",
                   classify_inessential=lambda O, S, b: "excessive"),
        "E2.17": f(D33, "dichotomy", class_cbar=lambda O, a: frozenset({0}), **never_centered),
        "D2.21": f(D33, "grounded", is_grounded=lambda O, S: False),
        "T3.2": instance(pent, "fault:pentagon"),
        "C3.4": f(D33, "is_tight", is_tight=lambda O, a: False),
        "S3.5": f(D33, "dichotomy_tight", is_tight=lambda O, a: False, **never_centered),
        "P3.6": instance(Z2, "fault:Z2"),
        "L3.7": f(T3, "class_cbar", class_cbar=lambda O, a: frozenset()),
        "T3.7": f(two, "peel", peel=lambda F, _: None),
        "C3.8": f(two, "stratify", stratify=lambda F, order=None: _strat.Stratification((F.members,), "I")),
        "T3.9": f(two, "stratify", stratify=lambda F, order=None: _strat.Stratification(
            (frozenset({1}), frozenset({2, 3})), "I") if isinstance(F, AbstractFlock) else None),
        "T3.11": instance(pent, "fault:pentagon"),
        "T3.12": Instance(comp, "fault:composed", (pf, pg), Ops(
            stratify=lambda F, order=None: _strat.Stratification((frozenset(F),), "I"))),
    }


def adjoin_top_of(M):
    from .gen import adjoin_top
    return adjoin_top(M)


def _l1_8_fault(inst):
    # an unchecked map from trunc(3) into the 3-chain reversing 0 and 1
    from .gen import chain
    O = inst.obj
    return [("reverse", Homomorphism(O, ordered(chain(3)), (2, 0, 0, 0)))]


def fault_instance(sid: str) -> Instance:
    """An instance (possibly with corrupted operations) on which check ``sid`` must fail."""
    if sid not in REGISTRY:
        raise UnknownStatementId(sid, (sid,))
    inst = _fault_instances()[sid]
    if sid == "L1.8":
        inst.cache["homs"] = _l1_8_fault(inst)
    return inst


FAULTS = tuple(s for s in REGISTRY if s != "E2.18")  # observational ids cannot fail
