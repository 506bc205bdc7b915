"""Collineations, dualities and Plücker transformations of the flag space.

A collineation is a 4x4 matrix ``M`` acting on points by ``p -> M p`` and
on plane functionals by ``e -> M^-T e``.  A duality is a 4x4 matrix ``F``
read as ``V -> V*``: the point ``p`` goes to the plane ``F p`` and the plane
``e`` to the point ``F^-T e``.  Both are stored normalised (first nonzero
entry 1), so equality is equality up to scalar.

:class:`FlagMap` tabulates a bijection of the flags of PG(3, q) on flag
indices, which is what the exhaustive checks and :func:`decompose` work on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactalg import ExactMatrix, Field, SingularMatrixError, _inverse_array, _matmul, canonical_rows, solve_right
from .flagspace import relatedness_graph
from .multilinear import exterior_square, inverse_transpose, klein_polarity
from .reports import Report
from .projgeom import Flag, FiniteGeometry, ProjLine, ProjPlane, ProjPoint, geometry, make_flag, meet_planes

__all__ = [
    "Collineation",
    "Duality",
    "FlagMap",
    "LineMap",
    "NotBijectiveError",
    "NotPluckerError",
    "InternalInconsistencyError",
    "apply_collineation",
    "apply_duality",
    "is_plucker_transformation",
    "induced_line_map",
    "decompose",
    "random_invertible",
    "line_image",
    "STANDARD_FRAME",
    "verify_round_trips",
    "verify_automorphism_count",
]


class NotBijectiveError(ValueError):
    """A flag table is not a bijection."""


class NotPluckerError(ValueError):
    """A flag map does not preserve relatedness."""


class InternalInconsistencyError(RuntimeError):
    """A recovered matrix fails to reproduce the map it was recovered from."""


def _normalized(m, field: Field) -> ExactMatrix:
    if not isinstance(m, ExactMatrix):
        m = ExactMatrix(m, field)
    if m.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    if m.det() == 0:
        raise SingularMatrixError("matrix is singular")
    return m.normalized()


@dataclass(frozen=True)
class Collineation:
    matrix: ExactMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _normalized(self.matrix, getattr(self.matrix, "field", None)))

    @property
    def field(self) -> Field:
        return self.matrix.field

    def then(self, other):
        """``self`` followed by ``other``."""
        if isinstance(other, Collineation):
            return Collineation(other.matrix @ self.matrix)
        return Duality(other.matrix @ self.matrix)


@dataclass(frozen=True)
class Duality:
    matrix: ExactMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _normalized(self.matrix, getattr(self.matrix, "field", None)))

    @property
    def field(self) -> Field:
        return self.matrix.field

    def then(self, other):
        """``self`` followed by ``other``."""
        if isinstance(other, Collineation):
            return Duality(inverse_transpose(other.matrix) @ self.matrix)
        return Collineation(inverse_transpose(other.matrix) @ self.matrix)


def apply_collineation(k: Collineation, f: Flag) -> Flag:
    m = k.matrix
    field = m.field
    point = ProjPoint(tuple((m @ list(f.point.coords)).tolist()), field)
    q, r = f.line.basis
    line = ProjLine((tuple((m @ list(q)).tolist()), tuple((m @ list(r)).tolist())), field)
    plane = ProjPlane(tuple((inverse_transpose(m) @ list(f.plane.coords)).tolist()), field)
    return make_flag(point, line, plane)


def apply_duality(d: Duality, f: Flag) -> Flag:
    m = d.matrix
    field = m.field
    point = ProjPoint(tuple((inverse_transpose(m) @ list(f.plane.coords)).tolist()), field)
    plane = ProjPlane(tuple((m @ list(f.point.coords)).tolist()), field)
    q, r = f.line.basis
    line = meet_planes(ProjPlane(tuple((m @ list(q)).tolist()), field), ProjPlane(tuple((m @ list(r)).tolist()), field))
    return make_flag(point, line, plane)


# ---------------------------------------------------------------------------
# tabulated maps


@dataclass(frozen=True, eq=False)
class FlagMap:
    """A map on the flags of PG(3, q) given by ``table[i] = index of the image of flag i``."""

    field: Field
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64).copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def geometry(self) -> FiniteGeometry:
        return geometry(self.field)

    def __eq__(self, other):
        return isinstance(other, FlagMap) and other.field == self.field and np.array_equal(other.table, self.table)

    def __call__(self, f: Flag) -> Flag:
        geo = self.geometry
        return geo.flags[int(self.table[geo.flag_index[f]])]

    def is_bijective(self) -> bool:
        n = len(self.geometry.flags)
        return self.table.shape == (n,) and bool(np.array_equal(np.sort(self.table), np.arange(n)))

    def then(self, other: "FlagMap") -> "FlagMap":
        """``self`` followed by ``other``."""
        return FlagMap(self.field, other.table[self.table])

    def inverse(self) -> "FlagMap":
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.table.size)
        return FlagMap(self.field, inv)

    @classmethod
    def identity(cls, field: Field) -> "FlagMap":
        return cls(field, np.arange(len(geometry(field).flags)))

    @classmethod
    def transposition(cls, field: Field, i: int, j: int) -> "FlagMap":
        t = np.arange(len(geometry(field).flags))
        t[i], t[j] = j, i
        return cls(field, t)

    @classmethod
    def from_pairs(cls, pairs) -> "FlagMap":
        pairs = list(pairs)
        field = pairs[0][0].field
        geo = geometry(field)
        table = np.full(len(geo.flags), -1, dtype=np.int64)
        for a, b in pairs:
            table[geo.flag_index[a]] = geo.flag_index[b]
        if np.any(table < 0):
            raise NotBijectiveError("flag map does not cover every flag")
        return cls(field, table)

    def pairs(self) -> list[tuple[Flag, Flag]]:
        flags = self.geometry.flags
        return [(flags[i], flags[j]) for i, j in enumerate(self.table.tolist())]

    @classmethod
    def from_collineation(cls, k: Collineation) -> "FlagMap":
        geo = geometry(k.field)
        m = k.matrix.data
        mt = _inverse_array(m.T.copy(), k.field)
        pts = geo.point_ids(_matmul(geo.point_vecs, m.T, k.field))
        pls = geo.plane_ids(_matmul(geo.plane_vecs, mt.T, k.field))
        q_img = _matmul(geo.line_bases[:, 0], m.T, k.field)
        r_img = _matmul(geo.line_bases[:, 1], m.T, k.field)
        lns = geo.line_ids_from_pluecker(geo.wedge_rows(q_img, r_img))
        ids = geo.flag_ids
        table = geo.flag_id(pts[ids[:, 0]], lns[ids[:, 1]], pls[ids[:, 2]])
        return cls(k.field, table)

    @classmethod
    def from_duality(cls, d: Duality) -> "FlagMap":
        geo = geometry(d.field)
        f = d.matrix.data
        ft = _inverse_array(f.T.copy(), d.field)
        plane_of_point = geo.plane_ids(_matmul(geo.point_vecs, f.T, d.field))
        point_of_plane = geo.point_ids(_matmul(geo.plane_vecs, ft.T, d.field))
        q_img = _matmul(geo.line_bases[:, 0], f.T, d.field)
        r_img = _matmul(geo.line_bases[:, 1], f.T, d.field)
        # the image line is cut out by the two image planes; d^-1 turns
        # their wedge (in V*∧V*) into the line's Plücker vector
        polar = klein_polarity(d.field).data
        pl = _matmul(geo.wedge_rows(q_img, r_img), polar.T, d.field)
        lns = geo.line_ids_from_pluecker(pl)
        ids = geo.flag_ids
        table = geo.flag_id(point_of_plane[ids[:, 2]], lns[ids[:, 1]], plane_of_point[ids[:, 0]])
        return cls(d.field, table)

    @classmethod
    def from_transformation(cls, x) -> "FlagMap":
        return cls.from_collineation(x) if isinstance(x, Collineation) else cls.from_duality(x)


@dataclass(frozen=True, eq=False)
class LineMap:
    field: Field
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64).copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def __eq__(self, other):
        return isinstance(other, LineMap) and other.field == self.field and np.array_equal(other.table, self.table)

    def __call__(self, g: ProjLine) -> ProjLine:
        geo = geometry(self.field)
        return geo.lines[int(self.table[geo.line_index[g]])]

    def is_bijective(self) -> bool:
        n = len(geometry(self.field).lines)
        return bool(np.array_equal(np.sort(self.table), np.arange(n)))

    @classmethod
    def identity(cls, field: Field) -> "LineMap":
        return cls(field, np.arange(len(geometry(field).lines)))


def is_plucker_transformation(a: FlagMap) -> bool:
    """Whether ``a`` preserves relatedness in both directions (checked on every flag pair).

    For a bijection this is equivalent to ``a(N(f)) == N(a(f))`` for every
    flag ``f``, where ``N`` is the set of adjacent flags.
    """
    if not a.is_bijective():
        raise NotBijectiveError("flag table is not a bijection")
    g = relatedness_graph(a.field)
    image_nbrs = np.sort(a.table[g.neighbors], axis=1)
    return bool(np.array_equal(image_nbrs, g.sorted_neighbors[a.table]))


def induced_line_map(a: FlagMap) -> LineMap:
    """The line bijection ``g -> g'`` with ``a(F[g]) = F[g']``."""
    geo = a.geometry
    k = geo.q + 1
    img_lines = geo.flag_ids[a.table, 1].reshape(len(geo.lines), k * k)
    if not np.all(img_lines == img_lines[:, :1]):
        bad = int(np.flatnonzero(~np.all(img_lines == img_lines[:, :1], axis=1))[0])
        raise NotPluckerError(f"flags on line {geo.lines[bad].pluecker} do not map onto a common line")
    lm = LineMap(a.field, img_lines[:, 0])
    if not lm.is_bijective():
        raise NotPluckerError("induced line map is not bijective")
    return lm


# ---------------------------------------------------------------------------
# decomposition


STANDARD_FRAME = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1))


def _frame_matrix(vecs: np.ndarray, field: Field) -> np.ndarray:
    """Columns ``λ_i v_i`` (i < 4) with ``v_4 = Σ λ_i v_i``."""
    base = ExactMatrix(vecs[:4].T.copy(), field)
    lam = solve_right(base, vecs[4])
    if lam is None or any(x == 0 for x in lam.tolist()):
        raise InternalInconsistencyError("frame images are not in general position")
    return field.reduce(vecs[:4].T * lam[None, :])


def _image_of_star(geo: FiniteGeometry, beta: np.ndarray, pi: int) -> tuple[str, int]:
    """Decide whether the lines through point ``pi`` map to a star or a ruled plane.

    Returns ``("collineation", image point)`` or ``("duality", image plane)``.
    """
    star = geo.point_lines[pi]
    l1, l2 = int(star[0]), int(star[1])
    e12 = geo.common_plane(l1, l2)
    l3 = next(int(l) for l in star if not geo.in_plane[l, e12])
    m1, m2, m3 = (int(beta[l]) for l in (l1, l2, l3))
    x = geo.common_point(m1, m2)
    y = geo.common_plane(m1, m2)
    if x is None or y is None:
        raise NotPluckerError("images of intersecting lines do not intersect")
    through = bool(geo.on_line[m3, x])
    inside = bool(geo.in_plane[m3, y])
    if through and not inside:
        images = [int(beta[l]) for l in star]
        if not all(geo.on_line[m, x] for m in images):
            raise InternalInconsistencyError("star of lines not mapped to a star")
        return "collineation", x
    if inside and not through:
        images = [int(beta[l]) for l in star]
        if not all(geo.in_plane[m, y] for m in images):
            raise InternalInconsistencyError("star of lines not mapped to a ruled plane")
        return "duality", y
    raise InternalInconsistencyError("star image is neither a star nor a ruled plane")


def decompose(a: FlagMap, frame=STANDARD_FRAME) -> Collineation | Duality:
    """Recover the collineation or duality inducing a Plücker transformation.

    The line map decides the kind: lines through a point go either to lines
    through a point (collineation) or to lines in a plane (duality).  The
    matrix is then fixed by the images of a projective frame and checked
    against every flag.
    """
    geo = a.geometry
    field = a.field
    beta = induced_line_map(a).table
    frame_vecs = field.array([list(v) for v in frame])
    frame_ids = geo.point_ids(frame_vecs)
    kinds, images = [], []
    for pi in frame_ids.tolist():
        kind, img = _image_of_star(geo, beta, pi)
        kinds.append(kind)
        images.append(img)
    if len(set(kinds)) != 1:
        raise InternalInconsistencyError("frame points disagree on collineation vs duality")
    kind = kinds[0]
    src = _frame_matrix(frame_vecs, field)
    targets = (geo.point_vecs if kind == "collineation" else geo.plane_vecs)[images]
    dst = _frame_matrix(targets, field)
    m = _matmul(dst, _inverse_array(src, field), field)
    result = Collineation(ExactMatrix(m, field)) if kind == "collineation" else Duality(ExactMatrix(m, field))
    if FlagMap.from_transformation(result) != a:
        raise InternalInconsistencyError(f"recovered {kind} does not reproduce the flag map")
    return result


def random_invertible(field: Field, rng: np.random.Generator) -> ExactMatrix:
    """Uniformly random element of GL(4, p)."""
    while True:
        m = ExactMatrix(rng.integers(0, field.order, size=(4, 4)), field)
        if m.det() != 0:
            return m


def line_image(x, g: ProjLine) -> ProjLine:
    """Image of a line under a collineation (via the exterior square) or duality."""
    field = g.field
    t = field.array(list(g.pluecker))
    if isinstance(x, Collineation):
        out = _matmul(exterior_square(x.matrix).data, t, field)
    else:
        out = _matmul(klein_polarity(field).data, _matmul(exterior_square(x.matrix).data, t, field), field)
    return ProjLine.from_pluecker(canonical_rows(out.reshape(1, 6), field)[0].tolist(), field)



def _gl4_order(p: int) -> int:
    out = 1
    for k in range(4):
        out *= p**4 - p**k
    return out


def verify_round_trips(field: Field, trials: int = 100, seed: int = 0) -> Report:
    """Random collineations and dualities: the induced flag maps are Plücker
    transformations and :func:`decompose` gives back the generator."""
    rng = np.random.default_rng(seed)
    rep = Report("collineations and dualities induce Plücker transformations and are recovered", field.characteristic)
    recovered = {"collineation": 0, "duality": 0}
    for kind, cls in (("collineation", Collineation), ("duality", Duality)):
        for _ in range(trials):
            x = cls(random_invertible(field, rng))
            a = FlagMap.from_transformation(x)
            if not is_plucker_transformation(a):
                rep.violation({"kind": kind, "matrix": x.matrix.tolist(), "error": "not Plücker"})
                continue
            y = decompose(a)
            if type(y) is cls and y == x:
                recovered[kind] += 1
            else:
                rep.violation({"kind": kind, "matrix": x.matrix.tolist(), "recovered": y.matrix.tolist()})
    rep.counts.update(trials=trials, **{f"recovered_{k}": v for k, v in recovered.items()})
    rep.check("collineations recovered", trials, recovered["collineation"])
    rep.check("dualities recovered", trials, recovered["duality"])
    return rep


def verify_automorphism_count(field: Field) -> Report:
    """Automorphisms of the flag space versus twice the order of PGL(4, p).

    Every generator found by the search is also checked to be a Plücker
    transformation and decomposed into a collineation or a duality.
    """
    from .flagspace import automorphism_group

    p = field.characteristic
    order, gens = automorphism_group(field)
    rep = Report("every Plücker transformation is a collineation or a duality", p)
    kinds = {"collineation": 0, "duality": 0}
    for g in gens:
        a = FlagMap(field, g)
        if not is_plucker_transformation(a):
            rep.violation({"generator_not_plucker": g.tolist()[:20]})
            continue
        kinds["collineation" if isinstance(decompose(a), Collineation) else "duality"] += 1
    expected = 2 * _gl4_order(p) // (p - 1)
    rep.counts.update(automorphisms=order, generators=len(gens), **{f"generators_{k}": v for k, v in kinds.items()})
    rep.check("automorphism count", expected, order)
    return rep
