"""Text and JSON formats for matrices, flags, flag maps and tensors.

Matrix text format: a header line ``rows cols p`` (``p = 0`` for the
rationals) followed by one line per row, entries separated by spaces,
rationals written ``num/den``.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .exactalg import QQ, GF, ExactMatrix, Field
from .projgeom import Flag, ProjLine, ProjPlane, ProjPoint, make_flag
from .transform import Collineation, Duality, FlagMap

__all__ = [
    "field_from_tag",
    "matrix_to_text",
    "matrix_from_text",
    "flag_to_dict",
    "flag_from_dict",
    "flagmap_to_json",
    "flagmap_from_json",
    "tensor_to_dict",
    "tensor_from_dict",
    "transformation_to_dict",
    "scalars",
]


def field_from_tag(p: int) -> Field:
    return QQ if int(p) == 0 else GF(int(p))


def scalars(values, field: Field) -> list:
    """JSON-friendly scalars: ints, or ``"num/den"`` strings for non-integral rationals."""
    out = []
    for v in np.asarray(values, dtype=object).reshape(-1).tolist():
        if field.is_finite:
            out.append(int(v))
        else:
            v = Fraction(v)
            out.append(v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}")
    return out


def matrix_to_text(m: ExactMatrix) -> str:
    lines = [f"{m.row_count} {m.col_count} {m.field.characteristic}"]
    lines += [" ".join(m.field.format(x) for x in row) for row in m.data]
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> ExactMatrix:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 3:
        raise ValueError("missing 'rows cols p' header")
    rows, cols, p = (int(x) for x in lines[0])
    body = lines[1:]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise ValueError(f"expected {rows} rows of {cols} entries")
    field = field_from_tag(p)
    if rows == 0:
        return ExactMatrix.zeros(0, cols, field)
    return ExactMatrix([[Fraction(x) for x in r] for r in body], field)


def flag_to_dict(f: Flag) -> dict:
    field = f.field
    return {
        "p": field.characteristic,
        "point": scalars(f.point.coords, field),
        "line": scalars(f.line.pluecker, field),
        "plane": scalars(f.plane.coords, field),
    }


def flag_from_dict(d: dict) -> Flag:
    field = field_from_tag(d["p"])
    conv = [Fraction(x) for x in d["point"]], [Fraction(x) for x in d["line"]], [Fraction(x) for x in d["plane"]]
    return make_flag(ProjPoint(tuple(conv[0]), field), ProjLine.from_pluecker(tuple(conv[1]), field), ProjPlane(tuple(conv[2]), field))


def flagmap_to_json(a: FlagMap) -> str:
    return json.dumps([[flag_to_dict(x), flag_to_dict(y)] for x, y in a.pairs()], sort_keys=True)


def flagmap_from_json(text: str) -> FlagMap:
    pairs = [(flag_from_dict(x), flag_from_dict(y)) for x, y in json.loads(text)]
    return FlagMap.from_pairs(pairs)


def tensor_to_dict(x, field: Field) -> dict:
    x = np.asarray(x, dtype=object).reshape(-1)
    if x.size != 96:
        raise ValueError("a tensor of V ⊗ Λ²V ⊗ V* has 96 coordinates")
    return {"p": field.characteristic, "coords": scalars(x, field)}


def tensor_from_dict(d: dict) -> np.ndarray:
    field = field_from_tag(d["p"])
    return field.array([Fraction(c) for c in d["coords"]])


def transformation_to_dict(x: Collineation | Duality) -> dict:
    m = x.matrix
    return {
        "kind": "collineation" if isinstance(x, Collineation) else "duality",
        "matrix": [scalars(row, m.field) for row in m.data],
        "field": m.field.characteristic,
    }
