"""Minimal classes, tightness, layered peeling of flocks and height functions.

Besides concrete flocks of a finite monoid, everything here also accepts an
`AbstractFlock`: a finite idempotent monoid (standing in for Gamma(V)) with a
declared member set.  Finite monoids with the derived order only produce
centered entourages, so the statements about non-centered flocks are only
reachable through this mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable

import numpy as np

from .arch import gamma
from .core import (
    FiniteMonoid,
    MonoidError,
    OrderedMonoid,
    additivity_witness,
    as_set,
    is_idempotent_monoid,
    is_submonoid,
    orbit,
    restrict,
    validate_monoid,
)
from .flock import (
    DichotomyResult,
    Flock,
    attractor_classes,
    class_cbar,
    classify_dichotomy,
    flock_violations,
    max_flock,
)
from .sa import sa_closure, w_of_class, zero_class


class EmptyFlock(MonoidError):
    pass


class NotInFlock(MonoidError):
    pass


class OverlappingParts(MonoidError):
    pass


class CaseNotApplicable(MonoidError):
    pass


class NotMaximalFlock(MonoidError):
    pass


class NotApplicable(MonoidError):
    pass


# ---------------------------------------------------------------------------
# abstract mode


@dataclass(frozen=True, eq=False)
class AbstractFlock:
    gamma: FiniteMonoid
    members: frozenset
    declared_entourage_tag: str = "disjoint"    # or "centered"
    entourage_classes: frozenset = frozenset()  # classes lying inside the entourage, if declared
    name: str | None = None

    @property
    def ids(self) -> range:
        return range(self.gamma.order)

    def add(self, a: int, b: int) -> int:
        return int(self.gamma.table[a, b])

    def leq(self, a: int, b: int) -> bool:
        return int(self.gamma.table[a, b]) == b

    def less(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def dichotomy(self, a: int) -> DichotomyResult:
        if a not in self.members:
            raise NotInFlock(f"{a} is not a member", (a,))
        if self.declared_entourage_tag == "centered":
            return DichotomyResult("center", a, a, frozenset({a}))
        return DichotomyResult("disjoint", a, None)

    def grounded(self, S: Iterable[int]) -> bool:
        """The members inside S are down-closed among all members."""
        F = as_set(S) & self.members
        return not any(self.less(b, a) for b in self.members - F for a in F)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<AbstractFlock{label} |Gamma|={self.gamma.order} members={sorted(self.members)}>"


def abstract_flock(
    gamma_monoid: FiniteMonoid,
    members: Iterable[int],
    tag: str = "disjoint",
    entourage_classes: Iterable[int] = (),
    name: str | None = None,
) -> AbstractFlock:
    members = as_set(members)
    if not is_idempotent_monoid(gamma_monoid):
        x = int(np.flatnonzero(np.diag(gamma_monoid.table) != np.arange(gamma_monoid.order))[0])
        raise MonoidError(f"{x}+{x} != {x}: not idempotent", (x,))
    if not members:
        raise EmptyFlock("an abstract flock needs members")
    w = additivity_witness(gamma_monoid, members)
    if w is not None:
        raise MonoidError(f"members not closed: {w[0]}+{w[1]}", w)
    if tag not in ("disjoint", "centered"):
        raise ValueError(f"unknown entourage tag {tag!r}")
    return AbstractFlock(gamma_monoid, members, tag, as_set(entourage_classes), name)


def compose_abstract(lower: AbstractFlock, upper: AbstractFlock, name: str | None = None):
    """Ordinal sum: every element of ``upper`` (except its zero) sits above all of ``lower``.

    Returns the combined flock and the member sets of the two parts, in the
    combined indexing.
    """
    n1, n2 = lower.gamma.order, upper.gamma.order
    up = [y for y in range(n2) if y != upper.gamma.zero]
    index = {y: n1 + i for i, y in enumerate(up)}
    index[upper.gamma.zero] = lower.gamma.zero
    n = n1 + len(up)
    t = np.zeros((n, n), dtype=np.int64)
    t[:n1, :n1] = lower.gamma.table
    for y1 in up:
        for y2 in up:
            t[index[y1], index[y2]] = index[int(upper.gamma.table[y1, y2])]
        t[index[y1], :n1] = index[y1]
        t[:n1, index[y1]] = index[y1]
    G = validate_monoid(n, t, lower.gamma.zero, name)
    part_f = frozenset(lower.members)
    part_g = frozenset(index[y] for y in upper.members)
    if part_f & part_g:
        raise OverlappingParts("parts overlap", tuple(sorted(part_f & part_g)))
    return abstract_flock(G, part_f | part_g, lower.declared_entourage_tag, name=name), part_f, part_g


# ---------------------------------------------------------------------------
# ordinals below omega + omega


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    k: int
    omega: bool = False   # True for omega + k

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("heights start at 1 (and at omega + 1)")

    @classmethod
    def finite(cls, k: int) -> "Ordinal":
        return cls(k, False)

    @classmethod
    def omega_plus(cls, k: int) -> "Ordinal":
        return cls(k, True)

    def _key(self):
        return (self.omega, self.k)

    def __lt__(self, other: "Ordinal") -> bool:
        return self._key() < other._key()

    def __add__(self, other: "Ordinal") -> "Ordinal":
        # n + (omega + k) = omega + k; the sum must stay below omega + omega
        if not other.omega:
            return Ordinal(self.k + other.k, self.omega)
        if self.omega:
            raise OverflowError("sum reaches omega + omega")
        return other

    def to_json(self):
        return {"omega_plus": self.k} if self.omega else self.k

    def __str__(self) -> str:
        return f"w+{self.k}" if self.omega else str(self.k)


# ---------------------------------------------------------------------------
# minimal classes and tightness


def minimal_classes(O: OrderedMonoid, D) -> frozenset:
    """T(D)_min: attractors of D with no strictly smaller attractor of D."""
    G = gamma(O)
    T = attractor_classes(O, D)
    return frozenset(a for a in T if not any(G.less(b, a) for b in T))


def is_centered(O: OrderedMonoid, D: Iterable[int]) -> bool:
    """Some attractor of D meets D."""
    D = as_set(getattr(D, "elements", D))
    G = gamma(O)
    return any(G.members(a) & D for a in attractor_classes(O, D))


def is_tight(O: OrderedMonoid, a: int) -> bool:
    G = gamma(O)
    return G.members(a) | class_cbar(O, a) == w_of_class(O, a)


def tightness_report(O: OrderedMonoid, a: int) -> dict:
    """Tightness by definition, by the central/flock criterion, and elementwise.

    The elementwise criterion is reported as None when C(A) is centered.
    """
    G = gamma(O)
    A = G.members(a)
    D = class_cbar(O, a)
    central = A <= D
    centered = is_centered(O, D)
    by_cor = central or (not centered and max_flock(O, a).class_ids == {a})
    by_elem = None
    if not centered:
        x = G.classes[a].representative
        mult = orbit(O.monoid, x).values
        by_elem = True
        for y in range(O.n):
            if not any(O.leq(y, v) for v in mult):
                continue
            up = any(O.leq(x, v) for v in orbit(O.monoid, y).values)
            absorbed = any(int(O.table[y, v]) == v for v in mult)
            if not (up or absorbed):
                by_elem = False
                break
    return {"definition": is_tight(O, a), "corollary": by_cor, "elementwise": by_elem}


# ---------------------------------------------------------------------------
# stratification


@dataclass(frozen=True)
class Stratification:
    layers: tuple          # tuple of frozensets F_1, F_2, ...
    case_tag: str          # "I" or "III"
    residue: frozenset = frozenset()

    @property
    def members(self) -> frozenset:
        out = set()
        for layer in self.layers:
            out |= layer
        return frozenset(out)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def heights(self) -> dict:
        return {a: k for k, layer in enumerate(self.layers, start=1) for a in layer}


def _leq_fn(order):
    if order is None:
        raise ValueError("an order is required for concrete flocks")
    if isinstance(order, np.ndarray):
        return lambda a, b: bool(order[a, b])
    return order.leq


def stratify(F, order=None) -> Stratification:
    """Peel minimal layers: F_1 = F_min, F_2 = (F - F_1)_min, ...

    ``F`` is a `Flock`, an `AbstractFlock` or a plain id set; ``order`` is a
    `GammaMonoid`, an `AbstractFlock` or a boolean matrix (ignored for abstract
    flocks, which carry their own order).
    """
    if isinstance(F, AbstractFlock):
        members, leq = F.members, F.leq
    else:
        members = F.class_ids if isinstance(F, Flock) else as_set(F)
        leq = _leq_fn(order)
    if not members:
        raise EmptyFlock("cannot stratify an empty flock")
    rest = set(members)
    layers = []
    while rest:
        layer = frozenset(
            a for a in rest if not any(b != a and leq(b, a) for b in rest)
        )
        if not layer:
            return Stratification(tuple(layers), "III", frozenset(rest))
        layers.append(layer)
        rest -= layer
    return Stratification(tuple(layers), "I")


def height(S: Stratification, a: int) -> int:
    for k, layer in enumerate(S.layers, start=1):
        if a in layer:
            return k
    raise NotInFlock(f"{a} is in no layer", (a,))


def transfinite_height(H_F: Stratification, H_G: Stratification) -> dict:
    """Finite heights on the initial part, omega + h_G on the transfinite part."""
    overlap = H_F.members & H_G.members
    if overlap:
        raise OverlappingParts("initial and transfinite parts overlap", tuple(sorted(overlap)))
    out = {a: Ordinal.finite(k) for a, k in H_F.heights().items()}
    out.update({a: Ordinal.omega_plus(k) for a, k in H_G.heights().items()})
    return out


# ---------------------------------------------------------------------------
# peeling and the minimal-class decomposition


def peel_abstract(F: AbstractFlock) -> AbstractFlock | None:
    """Drop the minimal layer; None once nothing is left."""
    S = stratify(F)
    rest = F.members - S.layers[0]
    if not rest:
        return None
    return AbstractFlock(F.gamma, rest, F.declared_entourage_tag, F.entourage_classes, F.name)


def peel(O, F=None):
    """V1 = (W(F) - D) + C(0), D1 = (union of F_min) + C(0), and F - F_min.

    Needs a flock whose entourage misses every member and has minimal
    classes; otherwise raises `CaseNotApplicable`.  Abstract flocks are peeled
    with `peel_abstract`.
    """
    if isinstance(O, AbstractFlock):
        if O.declared_entourage_tag == "centered":
            raise CaseNotApplicable("declared centered")
        return peel_abstract(O)
    G = gamma(O)
    ids = F.class_ids
    D = F.entourage
    for a in sorted(ids):
        if classify_dichotomy(O, a).centered:
            raise CaseNotApplicable(f"class {a} meets its entourage (centered)", (a,))
    strat = stratify(F, G)
    if strat.case_tag != "I" or not strat.layers:
        raise CaseNotApplicable("no minimal classes")
    fmin = strat.layers[0]
    WF = sa_closure(O.monoid, G.union(ids)).elements
    zero_bar = zero_class(O)
    V1_set = (WF - D) | zero_bar
    if not is_submonoid(O.monoid, V1_set):
        raise NotMaximalFlock("V1 is not a submonoid", additivity_witness(O.monoid, V1_set) or ())
    V1, old = restrict(O, V1_set)
    new = {x: i for i, x in enumerate(old)}
    D1 = frozenset(new[x] for x in G.union(fmin) | zero_bar)
    G1 = gamma(V1)
    rest_ids = frozenset(G1.proj[new[G.classes[a].representative]] for a in ids - fmin)
    if rest_ids:
        probe = next(iter(rest_ids))
        fl = max_flock(V1, probe)
        if fl.class_ids != rest_ids or class_cbar(V1, probe) != D1:
            raise NotMaximalFlock("F - F_min is not the maximal flock of D1 in V1")
    return V1, D1, Flock(rest_ids, D1, flock_violations(V1, rest_ids) if rest_ids else ())


@dataclass(frozen=True)
class Decomposition:
    minimal: frozenset         # minimal classes among the relatives of A
    entourage: frozenset       # elements (concrete) or class ids (abstract) of D
    w: frozenset               # W(A) as elements (concrete) or classes below A (abstract)
    holds: bool


def theorem_3_2_decomposition(O, a: int) -> Decomposition:
    """W(A) against the disjoint union of the minimal relatives of A and D."""
    if isinstance(O, AbstractFlock):
        if O.declared_entourage_tag == "centered":
            raise NotApplicable("declared centered")
        if a not in O.members:
            raise NotInFlock(f"{a} is not a member", (a,))
        strat = stratify(O)
        if a not in strat.layers[0]:
            raise NotApplicable(f"class {a} is not minimal")
        minimal = strat.layers[0]
        below = frozenset(b for b in O.ids if O.leq(b, a))
        Dc = O.entourage_classes | {O.gamma.zero}  # D is a submonoid, so it holds the zero class
        holds = not (minimal & Dc) and below == minimal | Dc
        return Decomposition(minimal, Dc, below, holds)
    if classify_dichotomy(O, a).centered:
        raise NotApplicable("entourage is centered")
    G = gamma(O)
    D = class_cbar(O, a)
    if a not in minimal_classes(O, D):
        raise NotApplicable(f"class {a} is not minimal")
    minimal = max_flock(O, a).class_ids & minimal_classes(O, D)
    W = w_of_class(O, a)
    parts = [G.members(b) for b in minimal] + [D]
    disjoint = sum(len(p) for p in parts) == len(frozenset().union(*parts))
    holds = disjoint and W == frozenset().union(*parts)
    return Decomposition(minimal, D, W, holds)
