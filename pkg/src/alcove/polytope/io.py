"""lrs-style text and JSON serialization of polytopes and vertex lists."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .hrep import HPolytope, PolytopeError
from .vertices import VPolytope


def _fmt(v) -> str:
    return str(Fraction(v))


def to_lrs_h(p: HPolytope, name: str = "polytope") -> str:
    rows = list(p.equalities) + list(p.inequalities)
    lines = [name, "H-representation"]
    if p.equalities:
        idx = " ".join(str(i + 1) for i in range(len(p.equalities)))
        lines.append(f"linearity {len(p.equalities)} {idx}")
    lines += ["begin", f"{len(rows)} {p.dim + 1} rational"]
    lines += [" ".join(_fmt(v) for v in r) for r in rows]
    lines.append("end")
    return "\n".join(lines) + "\n"


def to_lrs_v(v: VPolytope | Sequence[Sequence], name: str = "polytope") -> str:
    verts = list(v.vertices if isinstance(v, VPolytope) else v)
    d = len(verts[0]) if verts else 0
    lines = [name, "V-representation", "begin", f"{len(verts)} {d + 1} rational"]
    lines += ["1 " + " ".join(_fmt(x) for x in pt) for pt in verts]
    lines.append("end")
    return "\n".join(lines) + "\n"


def _body(text: str):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("*")]
    try:
        b = lines.index("begin")
        e = lines.index("end")
    except ValueError:
        raise PolytopeError("missing begin/end block") from None
    header = lines[:b]
    m, n, _kind = lines[b + 1].split()
    rows = [[Fraction(tok) for tok in ln.split()] for ln in lines[b + 2:e]]
    if len(rows) != int(m) or any(len(r) != int(n) for r in rows):
        raise PolytopeError("row count or width does not match the header")
    return header, rows, int(n)


def from_lrs_h(text: str) -> HPolytope:
    header, rows, n = _body(text)
    lin = set()
    for ln in header:
        if ln.startswith("linearity"):
            toks = ln.split()[1:]
            lin = {int(t) - 1 for t in toks[1:1 + int(toks[0])]}
    eqs = [r for i, r in enumerate(rows) if i in lin]
    ineqs = [r for i, r in enumerate(rows) if i not in lin]
    return HPolytope.from_rows(n - 1, ineqs, eqs)


def from_lrs_v(text: str) -> VPolytope:
    _, rows, _ = _body(text)
    verts = []
    for r in rows:
        if r[0] != 1:
            raise PolytopeError("only vertices (leading 1) are supported")
        verts.append(tuple(r[1:]))
    return VPolytope(tuple(sorted(verts)))


def polytope_to_json(p: HPolytope) -> dict:
    return {
        "dim": p.dim,
        "names": list(p.names) if p.names else None,
        "inequalities": [[_fmt(v) for v in r] for r in p.inequalities],
        "equalities": [[_fmt(v) for v in r] for r in p.equalities],
    }


def polytope_from_json(data: dict) -> HPolytope:
    conv = lambda rows: [[Fraction(v) for v in r] for r in rows]
    return HPolytope.from_rows(int(data["dim"]), conv(data.get("inequalities", [])),
                               conv(data.get("equalities", [])), data.get("names"))


def vertices_to_json(v: VPolytope | Sequence[Sequence]) -> list[list[str]]:
    verts = v.vertices if isinstance(v, VPolytope) else v
    return [[_fmt(x) for x in pt] for pt in verts]


def vertices_from_json(data: list) -> VPolytope:
    return VPolytope(tuple(sorted(tuple(Fraction(x) for x in pt) for pt in data)))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
