"""Monoid files, input resolution, and JSON/DOT views of Gamma, SA lattices, flocks and strata.

Everything produced here is deterministic: keys are sorted, sets are listed in
increasing order, and DOT statements come out in a fixed order.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .arch import gamma
from .core import FiniteMonoid, MonoidError, OrderedMonoid, eqv_classes, ordered, validate_monoid
from .flock import (
    DichotomyResult,
    NotPrincipal,
    class_cbar,
    classify_dichotomy,
    classify_inessential,
    entourages,
    max_flock,
    principal_reason,
)
from .gen import build
from .sa import CarrierTooLarge, enumerate_sa
from .strat import stratify

VIEWS = ("gamma", "sa", "flock", "strata")


class InputError(MonoidError):
    """The input is neither a readable monoid file nor a recipe."""


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _sorted(s) -> list:
    return sorted(int(x) for x in s)


# ---------------------------------------------------------------------------
# monoid files


def monoid_json(O: OrderedMonoid | FiniteMonoid) -> dict:
    if isinstance(O, FiniteMonoid):
        O = ordered(O)
    out = {
        "name": O.name,
        "order": O.n,
        "zero": O.zero,
        "table": O.table.tolist(),
        "quasiorder": "derived" if O.order.derived else {"explicit": O.rel.tolist()},
    }
    if out["name"] is None:
        del out["name"]
    return out


def dump_monoid(O: OrderedMonoid | FiniteMonoid) -> str:
    return _dumps(monoid_json(O))


def monoid_from_json(data: dict) -> OrderedMonoid:
    if "monoid" in data and "table" not in data:
        data = data["monoid"]
    try:
        n, table = int(data["order"]), data["table"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"monoid file lacks a field: {e}") from e
    M = validate_monoid(n, table, int(data.get("zero", 0)), data.get("name"))
    q = data.get("quasiorder", "derived")
    if q == "derived":
        return ordered(M)
    if isinstance(q, dict) and "explicit" in q:
        return ordered(M, np.array(q["explicit"], dtype=bool))
    raise InputError(f"unknown quasiorder {q!r}")


def load_monoid(path) -> OrderedMonoid:
    return monoid_from_json(json.loads(Path(path).read_text()))


def resolve_input(source: str, stdin=None) -> OrderedMonoid:
    """A monoid file, a recipe string, or '-' for JSON or a recipe on stdin."""
    if source == "-":
        text = (stdin or sys.stdin).read().strip()
        return _from_text(text)
    p = Path(source)
    if p.is_file():
        return _from_text(p.read_text().strip())
    return _built(source)


def _built(text: str) -> OrderedMonoid:
    M = build(text)
    return M if isinstance(M, OrderedMonoid) else ordered(M)


def _from_text(text: str) -> OrderedMonoid:
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"bad JSON: {e}") from e
        return monoid_from_json(data)
    return _built(text)


# ---------------------------------------------------------------------------
# Gamma


def gamma_json(O: OrderedMonoid) -> dict:
    G = gamma(O)
    return {
        "classes": [{"id": c.class_id, "members": _sorted(c.elements)} for c in G.classes],
        "table": G.table.tolist(),
        "order_pairs": [list(p) for p in G.order_pairs()],
    }


def _label(members) -> str:
    return "{" + ",".join(str(x) for x in _sorted(members)) + "}"


def gamma_dot(O: OrderedMonoid) -> str:
    G = gamma(O)
    lines = ["digraph gamma {", "  rankdir=BT;"]
    for c in G.classes:
        lines.append(f'  c{c.class_id} [label="{c.class_id}: {_label(c.elements)}"];')
    for a, b in sorted(G.covers()):
        lines.append(f"  c{a} -> c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SA lattice


def _hasse(sets: list) -> list:
    edges = []
    for i, s in enumerate(sets):
        for j, t in enumerate(sets):
            if s < t and not any(s < u < t for u in sets):
                edges.append([i, j])
    return edges


def sa_json(O: OrderedMonoid) -> dict:
    try:
        sets = [s.elements for s in enumerate_sa(O.monoid)]
    except CarrierTooLarge as e:
        return {"nodes": None, "edges": None, "note": str(e)}
    return {"nodes": [_sorted(s) for s in sets], "edges": _hasse(sets)}


def sa_dot(O: OrderedMonoid, cls: int | None = None) -> str:
    """SA lattice; with ``cls`` given, the diagram around class A: 0-bar, A + 0-bar, C(A), W(A)."""
    lines = ["digraph sa {", "  rankdir=BT;"]
    if cls is None:
        data = sa_json(O)
        for i, s in enumerate(data["nodes"] or []):
            lines.append(f'  w{i} [label="{_label(s)}"];')
        for i, j in data["edges"] or []:
            lines.append(f"  w{i} -> w{j};")
    else:
        G = gamma(O)
        from .sa import w_of_class, zero_class

        z = zero_class(O)
        nodes = {
            "zero": z,
            "A_zero": G.members(cls) | z,
            "C": class_cbar(O, cls),
            "W": w_of_class(O, cls),
        }
        for k in sorted(nodes):
            lines.append(f'  {k} [label="{k}: {_label(nodes[k])}"];')
        for lo, hi in (("zero", "A_zero"), ("zero", "C"), ("A_zero", "W"), ("C", "W")):
            if nodes[lo] <= nodes[hi]:
                lines.append(f"  {lo} -> {hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# flocks


def _distinct_max_flocks(O: OrderedMonoid) -> list:
    seen, out = set(), []
    for a in gamma(O).ids:
        F = max_flock(O, a)
        if F.class_ids not in seen:
            seen.add(F.class_ids)
            out.append((a, F))
    return out


def flock_json(O: OrderedMonoid) -> dict:
    from .flock import s_f_of

    G = gamma(O)
    rows = []
    for a, F in _distinct_max_flocks(O):
        d: DichotomyResult = classify_dichotomy(O, a)
        S = s_f_of(O, a)
        labels = {}
        if principal_reason(O, S) is None:
            for b in sorted(G.classes_of(S)):
                try:
                    labels[str(b)] = classify_inessential(O, S, b)
                except (NotPrincipal, MonoidError) as e:
                    labels[str(b)] = f"error: {e}"
        rows.append({
            "members": _sorted(F.class_ids),
            "entourage": _sorted(F.entourage),
            "dichotomy": d.tag,
            "labels": labels,
        })
    return {"flocks": rows, "entourages": [_sorted(e.elements) for e in entourages(O)]}


def flock_dot(O: OrderedMonoid) -> str:
    G = gamma(O)
    lines = ["digraph flocks {", "  rankdir=BT;"]
    for c in G.classes:
        lines.append(f'  c{c.class_id} [label="{c.class_id}: {_label(c.elements)}"];')
    for i, (a, F) in enumerate(_distinct_max_flocks(O)):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="D={_label(F.entourage)}";')
        lines.append("    " + " ".join(f"c{b};" for b in sorted(F.class_ids)))
        lines.append("  }")
    for a in G.ids:
        for b in G.ids:
            if a <= b:
                s = G.add(a, b)
                if s not in (a, b):
                    lines.append(f'  c{a} -> c{s} [style=dashed, label="+{b}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# strata


def _height_json(h):
    return h.to_json() if hasattr(h, "to_json") else int(h)


def strata_json(O: OrderedMonoid) -> dict:
    G = gamma(O)
    rows = []
    for a, F in _distinct_max_flocks(O):
        S = stratify(F, G)
        rows.append({
            "members": _sorted(F.class_ids),
            "layers": [_sorted(l) for l in S.layers],
            "case": S.case_tag,
            "heights": {str(k): _height_json(v) for k, v in sorted(S.heights().items())},
        })
    return {"strata": rows}


def strata_dot(O: OrderedMonoid) -> str:
    G = gamma(O)
    lines = ["digraph strata {", "  rankdir=BT;"]
    for i, (a, F) in enumerate(_distinct_max_flocks(O)):
        S = stratify(F, G)
        for k, layer in enumerate(S.layers, start=1):
            ids = " ".join(f"c{b};" for b in sorted(layer))
            lines.append(f"  {{ rank=same; {ids} }}  // flock {i}, layer {k}")
        members = sorted(F.class_ids)
        for x, y in G.covers():
            if x in members and y in members:
                lines.append(f"  c{x} -> c{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# dispatch and the full report


def export(O: OrderedMonoid, view: str, fmt: str) -> str:
    if view not in VIEWS:
        raise ValueError(f"unknown view {view!r}")
    if fmt == "json":
        body = {"gamma": gamma_json, "sa": sa_json, "flock": flock_json, "strata": strata_json}[view](O)
        body = {"monoid": monoid_json(O), "view": view, view: body}
        return _dumps(body)
    if fmt == "dot":
        return {"gamma": gamma_dot, "sa": sa_dot, "flock": flock_dot, "strata": strata_dot}[view](O)
    raise ValueError(f"unknown format {fmt!r}")


def analysis(O: OrderedMonoid) -> dict:
    """Orders, equivalence blocks, Gamma, SA lattice, entourages, flocks, strata and heights."""
    C = eqv_classes(O.order, O.monoid)
    return {
        "monoid": monoid_json(O),
        "order_pairs": [[int(a), int(b)] for a, b in np.argwhere(O.rel)],
        "blocks": [_sorted(b) for b in sorted(C.blocks, key=min)],
        "gamma": gamma_json(O),
        "sa": sa_json(O),
        "flock": flock_json(O),
        "strata": strata_json(O),
    }


def analysis_text(O: OrderedMonoid) -> str:
    return _dumps(analysis(O))
