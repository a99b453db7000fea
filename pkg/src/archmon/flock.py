"""Entourages, attractors, flocks and the essential/controlled/excessive taxonomy.

Flocks are sets of class ids of ``gamma(O)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .arch import gamma
from .core import (
    MonoidError,
    OrderedMonoid,
    as_set,
    idempotent_power,
    is_additive,
    memoized,
    sorted_tuple,
    submonoid_closure,
)
from .sa import cbar_omega, cbar_set, w_of_class


class NotPrincipal(MonoidError):
    pass


class ClassNotInS(MonoidError):
    pass


class ChoiceDependence(MonoidError):
    """The controlled/excessive label changed with the essential class used."""


class NotAChain(MonoidError):
    pass


@dataclass(frozen=True)
class Entourage:
    elements: frozenset
    witnesses: tuple

    def __contains__(self, x) -> bool:
        return x in self.elements


@dataclass(frozen=True)
class Flock:
    class_ids: frozenset
    entourage: frozenset
    violations: tuple = ()

    def __iter__(self):
        return iter(sorted(self.class_ids))

    def __len__(self) -> int:
        return len(self.class_ids)

    def __contains__(self, a) -> bool:
        return a in self.class_ids


@dataclass(frozen=True)
class DichotomyResult:
    tag: str          # "center" or "disjoint"
    class_id: int
    evidence: int | None
    meeting: frozenset = frozenset()

    @property
    def centered(self) -> bool:
        return self.tag == "center"


@memoized
def class_cbar(O: OrderedMonoid, a: int) -> frozenset:
    """C(A) for the class with id ``a``."""
    return cbar_set(O, gamma(O).members(a))


def entourages(O: OrderedMonoid) -> list:
    groups: dict[frozenset, list[int]] = {}
    for x in range(O.n):
        groups.setdefault(cbar_omega(O, x), []).append(x)
    out = [Entourage(D, tuple(ws)) for D, ws in groups.items()]
    return sorted(out, key=lambda e: (len(e.elements), sorted_tuple(e.elements)))


def attractor_classes(O: OrderedMonoid, D) -> frozenset:
    """T(D): classes A with C(A) = D."""
    D = D.elements if isinstance(D, Entourage) else as_set(D)
    return frozenset(a for a in gamma(O).ids if class_cbar(O, a) == D)


def classify_dichotomy(O, a: int) -> DichotomyResult:
    if not isinstance(O, OrderedMonoid):
        return O.dichotomy(a)
    G = gamma(O)
    A = G.members(a)
    D = class_cbar(O, a)
    meet = A & D
    if not meet:
        return DichotomyResult("disjoint", a, None, frozenset())
    _, e = idempotent_power(O.monoid, G.classes[a].representative)
    evidence = e if e in meet else min(meet)
    return DichotomyResult("center", a, evidence, frozenset(meet))


def center_unique(O: OrderedMonoid, result: DichotomyResult):
    """Any two meeting elements are <=_V-equivalent; returns a violating pair or None."""
    for z1, z2 in combinations(sorted(result.meeting), 2):
        if not O.equiv(z1, z2):
            return (z1, z2)
    return None


def compatible(O: OrderedMonoid, a1: int, a2: int) -> bool:
    G = gamma(O)
    c = class_cbar(O, a1)
    return c == class_cbar(O, a2) == class_cbar(O, G.add(a1, a2))


def flock_violations(O: OrderedMonoid, ids: Iterable[int]) -> tuple:
    """Pairs breaking compatibility or closure under class addition."""
    G = gamma(O)
    ids = sorted(set(ids))
    out = []
    for i, b in enumerate(ids):
        for c in ids[i:]:
            if not compatible(O, b, c):
                out.append(("incompatible", b, c))
            if G.add(b, c) not in ids:
                out.append(("not_closed", b, c))
    return tuple(out)


def is_flock(O: OrderedMonoid, ids: Iterable[int]) -> bool:
    ids = frozenset(ids)
    return bool(ids) and not flock_violations(O, ids)


def _fl(O: OrderedMonoid, a: int) -> frozenset:
    G = gamma(O)
    D = class_cbar(O, a)
    return frozenset(
        b for b in G.ids if class_cbar(O, b) == D and class_cbar(O, G.add(a, b)) == D
    )


def max_flock(O: OrderedMonoid, a: int) -> Flock:
    """Fl(A) = {A' | C(A) = C(A') = C(A + A')}; flock axioms are checked, not assumed."""
    ids = _fl(O, a)
    return Flock(ids, class_cbar(O, a), flock_violations(O, ids))


def down_set(G, a: int) -> frozenset:
    """{B | B + A = A}."""
    return frozenset(b for b in G.ids if G.add(b, a) == a)


def up_set(G, a: int) -> frozenset:
    """{B | A + B = B}."""
    return frozenset(b for b in G.ids if G.add(a, b) == b)


def down_set_by_w(O: OrderedMonoid, a: int) -> frozenset:
    """{B | W(B) inside W(A)}."""
    G = gamma(O)
    wa = w_of_class(O, a)
    return frozenset(b for b in G.ids if w_of_class(O, b) <= wa)


def min_flock(O: OrderedMonoid, a: int) -> Flock:
    ids = _fl(O, a) & down_set(gamma(O), a)
    return Flock(ids, class_cbar(O, a), flock_violations(O, ids))


def all_flocks(O: OrderedMonoid, bound: int = 14) -> list:
    """Every flock, by brute force over subsets of each T(D)."""
    G = gamma(O)
    by_d: dict[frozenset, list[int]] = {}
    for a in G.ids:
        by_d.setdefault(class_cbar(O, a), []).append(a)
    out = []
    for D, ids in by_d.items():
        if len(ids) > bound:
            raise MonoidError(f"{len(ids)} attractors of one entourage exceed bound {bound}")
        for r in range(1, len(ids) + 1):
            for sub in combinations(ids, r):
                if is_flock(O, sub):
                    out.append(Flock(frozenset(sub), D))
    return out


def is_principal_additive(O: OrderedMonoid, S: Iterable[int]) -> bool:
    return principal_reason(O, S) is None


def principal_reason(O: OrderedMonoid, S: Iterable[int]):
    S = as_set(S)
    if not S:
        return "empty"
    if not is_additive(O.monoid, S):
        return "not additive"
    G = gamma(O)
    if G.union(G.classes_of(S)) != S:
        return "not saturated"
    D = cbar_set(O, S)
    if not any(cbar_omega(O, x) == D for x in S):
        return "no essential element"
    return None


def essential_classes(O: OrderedMonoid, S: Iterable[int]) -> frozenset:
    S = as_set(S)
    G = gamma(O)
    D = cbar_set(O, S)
    return frozenset(
        a for a in G.ids if G.members(a) <= S and class_cbar(O, a) == D
    )


def principal_set_of_flock(O: OrderedMonoid, F) -> frozenset:
    """S_F: union of the member classes."""
    ids = F.class_ids if isinstance(F, Flock) else as_set(F)
    return gamma(O).union(ids)


def flock_of_principal(O: OrderedMonoid, S: Iterable[int]) -> Flock:
    """F_S: the essential classes of a principal additive set."""
    S = as_set(S)
    reason = principal_reason(O, S)
    if reason is not None:
        raise NotPrincipal(f"not principal additive: {reason}", tuple(sorted(S)))
    ids = essential_classes(O, S)
    return Flock(ids, cbar_set(O, S), flock_violations(O, ids))


def _inessential_label(O: OrderedMonoid, a: int, b: int, D: frozenset) -> str:
    return "controlled" if class_cbar(O, gamma(O).add(a, b)) == D else "excessive"


def classify_inessential(O: OrderedMonoid, S: Iterable[int], b: int) -> str:
    """'essential', 'controlled' or 'excessive' for class ``b`` inside principal S.

    The label is computed against every essential class; disagreement raises
    `ChoiceDependence`.
    """
    S = as_set(S)
    reason = principal_reason(O, S)
    if reason is not None:
        raise NotPrincipal(f"not principal additive: {reason}", tuple(sorted(S)))
    G = gamma(O)
    if not G.members(b) <= S:
        raise ClassNotInS(f"class {b} is not inside S", (b,))
    D = cbar_set(O, S)
    if cbar_omega(O, G.classes[b].representative) == D:
        return "essential"
    essentials = sorted(essential_classes(O, S))
    labels = {a: _inessential_label(O, a, b, D) for a in essentials}
    first = labels[essentials[0]]
    for a, lab in labels.items():
        if lab != first:
            raise ChoiceDependence(
                f"class {b} is {first} against {essentials[0]} but {lab} against {a}",
                (b, essentials[0], a),
            )
    return first


def is_grounded(O, S) -> bool:
    """F_S is down-closed inside T(D): no attractor of D sits below a member of F_S unless it is one."""
    if not isinstance(O, OrderedMonoid):
        return O.grounded(S)
    S = as_set(S)
    F = flock_of_principal(O, S).class_ids
    G = gamma(O)
    T = attractor_classes(O, cbar_set(O, S))
    return not any(
        G.less(b, a) for b in T - F for a in F
    )


def s_f_of(O: OrderedMonoid, a: int) -> frozenset:
    """Union of A' and D over A' in Fl(A)."""
    G = gamma(O)
    D = class_cbar(O, a)
    out = set(D)
    for b in _fl(O, a):
        out |= G.members(b)
    return frozenset(out)


def s_f_oracle(O: OrderedMonoid, a: int) -> frozenset:
    """Submonoid generated by D and all classes of Fl(A)."""
    G = gamma(O)
    return submonoid_closure(O.monoid, class_cbar(O, a) | G.union(_fl(O, a)))


def chain_witness(G, J: Iterable[int]):
    J = sorted(set(J))
    for a, b in combinations(J, 2):
        if not (G.leq(a, b) or G.leq(b, a)):
            return ("incomparable", a, b)
        if G.add(a, b) not in (a, b):
            return ("not_bipotent", a, b)
    return None


def flocks_in_chain(O: OrderedMonoid, J: Iterable[int]) -> tuple:
    """Parts J & Fl(A) for A in a chain J of classes, each sorted bottom-up."""
    G = gamma(O)
    J = frozenset(J)
    w = chain_witness(G, J)
    if w is not None:
        raise NotAChain(f"{w[0]}: {w[1]}, {w[2]}", w[1:])
    parts = {J & _fl(O, a) for a in J}
    return tuple(sorted(parts, key=lambda p: (min(p), sorted(p))))


def chain_part_convex(G, J: Iterable[int], part: Iterable[int]) -> bool:
    J, part = set(J), set(part)
    return not any(
        G.leq(lo, c) and G.leq(c, hi)
        for lo in part for hi in part for c in J - part
    )
