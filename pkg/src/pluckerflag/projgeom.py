"""Points, lines and planes of PG(3, K) with exact coordinates.

Points are canonical vectors of ``K^4`` (first nonzero coordinate 1), planes
are canonical linear functionals, and lines carry a 2x4 basis in reduced
row echelon form.  Plücker coordinates use the lexicographic order
``p01, p02, p03, p12, p13, p23`` with ``p_jk = q_j r_k - q_k r_j``.

For finite fields :func:`geometry` builds (and caches) an index of every
object together with the incidence tables the exhaustive checks need.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Union

import numpy as np

from .exactalg import Field, _kernel_array, _rank_array, _rref_array, canonical_rows

__all__ = [
    "quadric_value",
    "PAIRS",
    "ProjPoint",
    "ProjLine",
    "ProjPlane",
    "Flag",
    "DegenerateJoinError",
    "IncidenceError",
    "UnsupportedEnumerationError",
    "join",
    "meet_planes",
    "incident",
    "enumerate_all",
    "make_flag",
    "geometry",
    "FiniteGeometry",
]

PAIRS: tuple[tuple[int, int], ...] = tuple(itertools.combinations(range(4), 2))
PAIR_INDEX = {jk: n for n, jk in enumerate(PAIRS)}


class DegenerateJoinError(ValueError):
    """Join of equal points or meet of equal planes."""


class IncidenceError(ValueError):
    """A triple that was supposed to be a flag is not incident."""


class UnsupportedEnumerationError(ValueError):
    """Exhaustive enumeration requested over an infinite field."""


def _canon(vec, field: Field) -> tuple:
    vec = [field.scalar(x) for x in vec]
    for x in vec:
        if x != 0:
            inv = field.inv(x)
            return tuple(field.scalar(y * inv) for y in vec)
    raise ValueError("the zero vector is not a projective point")


def _wedge2(q, r, field: Field) -> tuple:
    return tuple(field.scalar(q[j] * r[k] - q[k] * r[j]) for j, k in PAIRS)


def quadric_value(p, field: Field):
    """``p01*p23 - p02*p13 + p03*p12``; zero exactly on Plücker vectors of lines."""
    return field.scalar(p[0] * p[5] - p[1] * p[4] + p[2] * p[3])


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "coords", _canon(self.coords, self.field))

    def vector(self) -> np.ndarray:
        return self.field.array(list(self.coords))


@dataclass(frozen=True)
class ProjPlane:
    """A plane, stored as the functional whose kernel it is."""

    coords: tuple
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "coords", _canon(self.coords, self.field))

    def vector(self) -> np.ndarray:
        return self.field.array(list(self.coords))

    def evaluate(self, v) -> object:
        return self.field.scalar(sum(a * b for a, b in zip(self.coords, v)))


@dataclass(frozen=True)
class ProjLine:
    basis: tuple
    field: Field

    def __post_init__(self):
        arr = self.field.array([list(r) for r in self.basis])
        r, piv = _rref_array(arr, self.field)
        if len(piv) != 2:
            raise DegenerateJoinError("a line needs two independent spanning vectors")
        object.__setattr__(self, "basis", tuple(tuple(row) for row in r[:2].tolist()))

    @cached_property
    def pluecker(self) -> tuple:
        q, r = self.basis
        return _wedge2(q, r, self.field)

    @classmethod
    def from_pluecker(cls, coords, field: Field) -> "ProjLine":
        """The line whose Plücker vector is ``coords`` (must be decomposable)."""
        t = [field.scalar(x) for x in coords]
        if _rank_array(field.array([t]), field) == 0:
            raise ValueError("zero bivector")
        kernel = _kernel_array(_wedge_with_matrix(t, field), field)
        if kernel.shape[0] != 2:
            raise ValueError(f"{tuple(coords)} is not the Plücker vector of a line")
        return cls(tuple(tuple(r) for r in kernel.tolist()), field)

    def matrix(self) -> np.ndarray:
        return self.field.array([list(r) for r in self.basis])

    def points(self) -> Iterator[ProjPoint]:
        """All points on the line (finite fields only)."""
        if not self.field.is_finite:
            raise UnsupportedEnumerationError("a line over QQ has infinitely many points")
        q, r = self.basis
        yield ProjPoint(r, self.field)
        for lam in self.field.elements():
            yield ProjPoint(tuple(a + lam * b for a, b in zip(q, r)), self.field)

    def dual_basis(self) -> np.ndarray:
        """Two functionals whose common kernel is the line."""
        return _kernel_array(self.matrix(), self.field)

    def planes(self) -> Iterator[ProjPlane]:
        if not self.field.is_finite:
            raise UnsupportedEnumerationError("a line over QQ lies on infinitely many planes")
        a, b = self.dual_basis().tolist()
        yield ProjPlane(tuple(b), self.field)
        for lam in self.field.elements():
            yield ProjPlane(tuple(x + lam * y for x, y in zip(a, b)), self.field)


def _wedge_with_matrix(t, field: Field) -> np.ndarray:
    """4x4 matrix of ``x -> x ∧ t`` into Λ³V, rows indexed by the omitted basis vector."""
    out = field.zeros((4, 4))
    for m in range(4):
        a, b, c = [i for i in range(4) if i != m]
        # (x ∧ t)_{abc} = x_a t_bc - x_b t_ac + x_c t_ab
        out[m, a] = field.scalar(out[m, a] + t[PAIR_INDEX[(b, c)]])
        out[m, b] = field.scalar(out[m, b] - t[PAIR_INDEX[(a, c)]])
        out[m, c] = field.scalar(out[m, c] + t[PAIR_INDEX[(a, b)]])
    return out


@dataclass(frozen=True)
class Flag:
    """An incident triple (point, line, plane).  Build checked flags with :func:`make_flag`."""

    point: ProjPoint
    line: ProjLine
    plane: ProjPlane

    @property
    def field(self) -> Field:
        return self.point.field

    def components(self) -> tuple:
        return (self.point, self.line, self.plane)


Obj = Union[ProjPoint, ProjLine, ProjPlane]


def join(a: ProjPoint, b: ProjPoint) -> ProjLine:
    if a.field != b.field:
        raise ValueError("points over different fields")
    if a == b:
        raise DegenerateJoinError(f"cannot join {a.coords} with itself")
    return ProjLine((a.coords, b.coords), a.field)


def meet_planes(a: ProjPlane, b: ProjPlane) -> ProjLine:
    if a.field != b.field:
        raise ValueError("planes over different fields")
    if a == b:
        raise DegenerateJoinError(f"cannot meet {a.coords} with itself")
    kernel = _kernel_array(a.field.array([list(a.coords), list(b.coords)]), a.field)
    return ProjLine(tuple(tuple(r) for r in kernel.tolist()), a.field)


def meet_line_plane(g: ProjLine, e: ProjPlane) -> ProjPoint | None:
    """Intersection point, or ``None`` when the line lies in the plane."""
    q, r = g.basis
    a, b = e.evaluate(q), e.evaluate(r)
    if a == 0 and b == 0:
        return None
    f = g.field
    return ProjPoint(tuple(f.scalar(b * x - a * y) for x, y in zip(q, r)), f)


def join_point_line(p: ProjPoint, g: ProjLine) -> ProjPlane | None:
    """The plane spanned by ``p`` and ``g``, or ``None`` when ``p`` is on ``g``."""
    f = p.field
    arr = f.array([list(g.basis[0]), list(g.basis[1]), list(p.coords)])
    kernel = _kernel_array(arr, f)
    if kernel.shape[0] != 1:
        return None
    return ProjPlane(tuple(kernel[0].tolist()), f)


def intersect_lines(g: ProjLine, h: ProjLine) -> ProjPoint | None:
    """Common point of two distinct lines, or ``None`` when they are skew."""
    if g == h:
        raise ValueError("identical lines")
    f = g.field
    # Solve a q + b r = c s + d u.
    arr = f.array([list(g.basis[0]), list(g.basis[1]), list(h.basis[0]), list(h.basis[1])]).T.copy()
    kernel = _kernel_array(arr, f)
    if kernel.shape[0] == 0:
        return None
    a, b = kernel[0, 0], kernel[0, 1]
    q, r = g.basis
    return ProjPoint(tuple(f.scalar(a * x + b * y) for x, y in zip(q, r)), f)


def incident(a: Obj, b: Obj) -> bool:
    """Containment between any two of point / line / plane, in either order.

    Two objects of the same kind are incident exactly when equal.
    """
    if type(a) is type(b):
        return a == b
    order = {ProjPoint: 0, ProjLine: 1, ProjPlane: 2}
    if order[type(a)] > order[type(b)]:
        a, b = b, a
    f = a.field
    if isinstance(a, ProjPoint) and isinstance(b, ProjLine):
        arr = f.array([list(b.basis[0]), list(b.basis[1]), list(a.coords)])
        return _rank_array(arr, f) == 2
    if isinstance(a, ProjPoint):
        return b.evaluate(a.coords) == 0
    return all(b.evaluate(v) == 0 for v in a.basis)


def make_flag(p: ProjPoint, g: ProjLine, e: ProjPlane) -> Flag:
    if not incident(p, g):
        raise IncidenceError(f"point {p.coords} is not on line {g.pluecker}")
    if not incident(g, e):
        raise IncidenceError(f"line {g.pluecker} is not in plane {e.coords}")
    return Flag(p, g, e)


# ---------------------------------------------------------------------------
# enumeration


def _canonical_vectors(field: Field, n: int = 4) -> list[tuple]:
    q = field.order
    out = []
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


def _rref_line_bases(field: Field) -> list[tuple]:
    q = field.order
    out = []
    for i, j in PAIRS:
        free1 = [c for c in range(i + 1, 4) if c != j]
        free2 = list(range(j + 1, 4))
        for v1 in itertools.product(range(q), repeat=len(free1)):
            for v2 in itertools.product(range(q), repeat=len(free2)):
                r1 = [0] * 4
                r1[i] = 1
                for c, x in zip(free1, v1):
                    r1[c] = x
                r2 = [0] * 4
                r2[j] = 1
                for c, x in zip(free2, v2):
                    r2[c] = x
                out.append((tuple(r1), tuple(r2)))
    return out


def enumerate_all(kind: str, field: Field) -> list:
    """Every point / line / plane / flag of PG(3, q), each exactly once, in a fixed order.

    Flags come grouped by line, then by point on the line, then by plane
    through the line (the order used by :class:`FiniteGeometry`).
    """
    if not field.is_finite:
        raise UnsupportedEnumerationError(f"cannot enumerate {kind}s over {field!r}")
    geo = geometry(field)
    table = {"point": geo.points, "line": geo.lines, "plane": geo.planes, "flag": geo.flags}
    if kind not in table:
        raise ValueError(f"unknown kind {kind!r}")
    return list(table[kind])


class FiniteGeometry:
    """Index tables for PG(3, q).

    Attributes hold numpy arrays of indices into ``points`` / ``lines`` /
    ``planes`` / ``flags``.  ``flag_ids[f] = (point, line, plane)`` and
    flag ``f`` sits at ``line * (q+1)**2 + pos_on_line * (q+1) + pos_through_line``.
    """

    def __init__(self, field: Field):
        if not field.is_finite:
            raise UnsupportedEnumerationError("finite fields only")
        self.field = field
        q = self.q = field.order
        self.point_vecs = np.array(_canonical_vectors(field), dtype=np.int64)
        self.plane_vecs = self.point_vecs.copy()
        bases = _rref_line_bases(field)
        self.line_bases = np.array(bases, dtype=np.int64)
        self.line_pluecker = self.wedge_rows(self.line_bases[:, 0], self.line_bases[:, 1])

        self.points = [ProjPoint(tuple(v), field) for v in self.point_vecs.tolist()]
        self.planes = [ProjPlane(tuple(v), field) for v in self.plane_vecs.tolist()]
        self.lines = [ProjLine(b, field) for b in bases]
        self.point_index = {pt: n for n, pt in enumerate(self.points)}
        self.plane_index = {pl: n for n, pl in enumerate(self.planes)}
        self.line_index = {ln: n for n, ln in enumerate(self.lines)}

        self._vec_lookup = np.full(q**4, -1, dtype=np.int64)
        self._vec_lookup[self.codes(self.point_vecs)] = np.arange(len(self.points))
        self._line_lookup = np.full(q**6, -1, dtype=np.int64)
        self._line_lookup[self.codes(self.line_pluecker)] = np.arange(len(self.lines))

        n_pts, n_lines = len(self.points), len(self.lines)
        # point-on-line: point p is on line (q, r) iff p ∧ q ∧ r = 0
        on_line = np.ones((n_lines, n_pts), dtype=bool)
        for m in range(4):
            rows = [i for i in range(4) if i != m]
            # 3x3 minor of (p, q, r) on the coordinates 'rows'
            minor = _det3_rows(self.point_vecs[:, rows], self.line_bases[:, 0][:, rows], self.line_bases[:, 1][:, rows], q)
            on_line &= minor == 0
        self.line_points = np.array([np.flatnonzero(row) for row in on_line], dtype=np.int64)
        # line-in-plane: both basis vectors annihilated
        ev0 = self.line_bases[:, 0] @ self.plane_vecs.T % q
        ev1 = self.line_bases[:, 1] @ self.plane_vecs.T % q
        in_plane = (ev0 == 0) & (ev1 == 0)
        self.line_planes = np.array([np.flatnonzero(row) for row in in_plane], dtype=np.int64)
        self.point_in_plane = (self.point_vecs @ self.plane_vecs.T % q) == 0
        self.point_lines = np.array([np.flatnonzero(col) for col in on_line.T], dtype=np.int64)
        self.plane_lines = np.array([np.flatnonzero(col) for col in in_plane.T], dtype=np.int64)
        self.on_line = on_line
        self.in_plane = in_plane

        k = q + 1
        self.pos_on_line = np.full((n_lines, n_pts), -1, dtype=np.int64)
        self.pos_through_line = np.full((n_lines, len(self.planes)), -1, dtype=np.int64)
        rng = np.arange(k)
        for li in range(n_lines):
            self.pos_on_line[li, self.line_points[li]] = rng
            self.pos_through_line[li, self.line_planes[li]] = rng
        li_rep = np.repeat(np.arange(n_lines), k * k)
        pts = self.line_points[li_rep, np.tile(np.repeat(rng, k), n_lines)]
        pls = self.line_planes[li_rep, np.tile(rng, k * n_lines)]
        self.flag_ids = np.stack([pts, li_rep, pls], axis=1)
        self.flags = [Flag(self.points[a], self.lines[b], self.planes[c]) for a, b, c in self.flag_ids.tolist()]
        self.flag_index = {fl: n for n, fl in enumerate(self.flags)}

    # -- encoding --------------------------------------------------------

    def codes(self, rows: np.ndarray) -> np.ndarray:
        """Base-q integer code of each (canonical) row."""
        rows = np.asarray(rows, dtype=np.int64)
        weights = self.q ** np.arange(rows.shape[-1], dtype=np.int64)
        return rows @ weights

    def wedge_rows(self, q_rows: np.ndarray, r_rows: np.ndarray) -> np.ndarray:
        cols = [q_rows[:, j] * r_rows[:, k] - q_rows[:, k] * r_rows[:, j] for j, k in PAIRS]
        return np.mod(np.stack(cols, axis=1), self.q)

    def point_ids(self, vecs: np.ndarray) -> np.ndarray:
        """Index of the point spanned by each nonzero row."""
        idx = self._vec_lookup[self.codes(canonical_rows(np.mod(vecs, self.q), self.field))]
        assert np.all(idx >= 0)
        return idx

    plane_ids = point_ids

    def line_ids_from_pluecker(self, pl: np.ndarray) -> np.ndarray:
        idx = self._line_lookup[self.codes(canonical_rows(np.mod(pl, self.q), self.field))]
        assert np.all(idx >= 0)
        return idx

    def flag_id(self, pi, li, ei):
        """Vectorised (point, line, plane) -> flag index; -1 where not a flag."""
        pi, li, ei = (np.asarray(x, dtype=np.int64) for x in (pi, li, ei))
        k = self.q + 1
        a = self.pos_on_line[li, pi]
        b = self.pos_through_line[li, ei]
        out = li * k * k + a * k + b
        return np.where((a < 0) | (b < 0), -1, out)

    # -- small combinatorial helpers --------------------------------------

    def common_point(self, l1: int, l2: int) -> int | None:
        both = np.flatnonzero(self.on_line[l1] & self.on_line[l2])
        return int(both[0]) if both.size == 1 else None

    def common_plane(self, l1: int, l2: int) -> int | None:
        both = np.flatnonzero(self.in_plane[l1] & self.in_plane[l2])
        return int(both[0]) if both.size == 1 else None

    def line_through(self, p1: int, p2: int) -> int:
        both = np.flatnonzero(self.on_line[:, p1] & self.on_line[:, p2])
        return int(both[0])

    def line_in(self, e1: int, e2: int) -> int:
        both = np.flatnonzero(self.in_plane[:, e1] & self.in_plane[:, e2])
        return int(both[0])

    def meet_point(self, li: int, ei: int) -> int | None:
        """Point where line meets plane, ``None`` if the line lies in the plane."""
        if self.in_plane[li, ei]:
            return None
        pts = self.line_points[li]
        return int(pts[self.point_in_plane[pts, ei]][0])

    def plane_through(self, pi: int, li: int) -> int | None:
        if self.on_line[li, pi]:
            return None
        pls = self.line_planes[li]
        return int(pls[self.point_in_plane[pi, pls]][0])

    @cached_property
    def lines_meet(self) -> np.ndarray:
        """``lines_meet[g, h]``: lines g and h share a point (including g == h)."""
        return (self.on_line.astype(np.int64) @ self.on_line.T.astype(np.int64)) > 0

    @cached_property
    def pencil_lines(self) -> dict:
        """(point, plane) -> array of the q+1 lines through the point in the plane."""
        out = {}
        for pi, li, ei in self.flag_ids.tolist():
            out.setdefault((pi, ei), []).append(li)
        return {key: np.array(sorted(set(v)), dtype=np.int64) for key, v in out.items()}

    def __repr__(self):
        return f"FiniteGeometry(PG(3,{self.q}): {len(self.points)} points, {len(self.lines)} lines, {len(self.flags)} flags)"


def _det3_rows(a: np.ndarray, b: np.ndarray, c: np.ndarray, q: int) -> np.ndarray:
    """det[a_i; b_j; c_j] for every point i and line j, mod q: shape (lines, points)."""
    # cofactor expansion along a: a . (b x c)
    cross = np.stack(
        [
            b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1],
            b[:, 2] * c[:, 0] - b[:, 0] * c[:, 2],
            b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0],
        ],
        axis=1,
    )
    return (cross @ a.T) % q


@lru_cache(maxsize=None)
def geometry(field: Field) -> FiniteGeometry:
    """Cached :class:`FiniteGeometry` for a finite field."""
    return FiniteGeometry(field)
