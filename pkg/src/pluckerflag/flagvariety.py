"""The flag variety in ``V ⊗ Λ²V ⊗ V*`` and its incidence subspace.

``i01`` sends ``p ⊗ t ⊗ e*`` to ``(p ∧ t) ⊗ e*`` in ``Λ³V ⊗ V*`` (16
coordinates, ``4*m + l`` with ``m`` the omitted basis vector of the
3-vector); ``i12`` sends it to ``p ⊗ (t ⌟ e*)`` in ``V ⊗ V`` (coordinates
``4*i + k``).  Their kernels cut out point-on-line and line-in-plane
incidence for pure tensors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exactalg import (
    ExactMatrix,
    Field,
    _kernel_array,
    _matmul,
    _rank_array,
    _rref_array,
    canonical_rows,
    subspace_intersection,
)
from .flagspace import SizeLimitError, relatedness_graph
from .multilinear import (
    contract,
    embed_flag,
    exterior_square,
    inverse_transpose,
    is_decomposable,
    klein_polarity,
    segre_product,
    wedge3,
)
from .projgeom import PAIRS, Flag, ProjLine, ProjPlane, ProjPoint, geometry, incident, make_flag
from .reports import Report
from .transform import STANDARD_FRAME, Collineation, FlagMap, InternalInconsistencyError, decompose, random_invertible

__all__ = [
    "IncidenceMaps",
    "VarietyModel",
    "Char3Report",
    "build_incidence_maps",
    "build_variety_model",
    "membership_i01",
    "membership_i12",
    "verify_eq9_eq10",
    "verify_prop5",
    "verify_prop4",
    "span_report",
    "variety_related",
    "extend_to_collineation",
    "verify_uniqueness_on_span",
    "verify_extensions",
    "SPECIAL_CHAR3_FLAG",
]

# point, Plücker vector, plane of the flag that lies outside W_P + W_U in characteristic 3
SPECIAL_CHAR3_FLAG = ((1, 1, 1, -1), (1, 1, -1, 0, 0, 0), (0, 0, 1, 1))

ALT_FRAME = ((1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 0), (1, 1, 1, 1), (4, 3, 2, 1))


@dataclass(frozen=True)
class IncidenceMaps:
    field: Field
    i01: ExactMatrix
    i12: ExactMatrix
    kernel01: ExactMatrix
    kernel12: ExactMatrix
    intersection: ExactMatrix

    @property
    def dims(self) -> dict:
        return {
            "ker_i01": self.kernel01.row_count,
            "ker_i12": self.kernel12.row_count,
            "intersection": self.intersection.row_count,
            "rank_i01": self.i01.rank(),
            "rank_i12": self.i12.rank(),
        }


def _i01_array(field: Field) -> np.ndarray:
    out = field.zeros((16, 96))
    for i, (jk, (j, k)), l in itertools.product(range(4), enumerate(PAIRS), range(4)):
        if i in (j, k):
            continue
        triple = [i, j, k]
        # sign of the sorting permutation of (i, j, k) with j < k
        sign = -1 if sum(x > i for x in (j, k)) == 1 else 1
        m = ({0, 1, 2, 3} - set(triple)).pop()
        out[4 * m + l, 24 * i + 4 * jk + l] = field.scalar(sign)
    return out


def _i12_array(field: Field) -> np.ndarray:
    out = field.zeros((16, 96))
    for i, (jk, (j, k)), l in itertools.product(range(4), enumerate(PAIRS), range(4)):
        col = 24 * i + 4 * jk + l
        if j == l:
            out[4 * i + k, col] = field.scalar(out[4 * i + k, col] + 1)
        if k == l:
            out[4 * i + j, col] = field.scalar(out[4 * i + j, col] - 1)
    return out


@lru_cache(maxsize=None)
def build_incidence_maps(field: Field) -> IncidenceMaps:
    """The matrices of ``i01`` and ``i12`` on the product basis, their kernels and the kernels' meet."""
    i01 = ExactMatrix(_i01_array(field), field)
    i12 = ExactMatrix(_i12_array(field), field)
    k01 = ExactMatrix(_kernel_array(i01.data, field), field)
    k12 = ExactMatrix(_kernel_array(i12.data, field), field)
    return IncidenceMaps(field, i01, i12, k01, k12, subspace_intersection(k01, k12))


def _nonzero(x, what: str):
    if not np.any(np.asarray(x) != 0):
        raise ValueError(f"{what} must be nonzero")


def membership_i01(p, t, e, field: Field) -> bool:
    """``p ⊗ t ⊗ e*`` lies in ``ker i01`` exactly when ``p ∧ t = 0``."""
    for x, what in ((p, "point vector"), (t, "bivector"), (e, "covector")):
        _nonzero(field.array(list(x)), what)
    return not np.any(wedge3(p, t, field) != 0)


def membership_i12(p, t, e, field: Field) -> bool:
    """``p ⊗ t ⊗ e*`` lies in ``ker i12`` exactly when ``t ⌟ e* = 0``."""
    for x, what in ((p, "point vector"), (t, "bivector"), (e, "covector")):
        _nonzero(field.array(list(x)), what)
    return not np.any(contract(t, e, field) != 0)


# ---------------------------------------------------------------------------
# variety model


def span_basis(rows: np.ndarray, field: Field, chunk: int = 512, bound: int | None = None) -> np.ndarray:
    """RREF basis of the row space, processed in chunks (stops early at ``bound``)."""
    basis = field.zeros((0, rows.shape[1]))
    for s in range(0, rows.shape[0], chunk):
        stacked = np.concatenate([basis, rows[s:s + chunk]], axis=0)
        r, piv = _rref_array(stacked, field)
        basis = r[: len(piv)]
        if bound is not None and len(piv) >= bound:
            break
    return basis


def _row_keys(rows: np.ndarray) -> list[bytes]:
    return [r.tobytes() for r in np.ascontiguousarray(rows, dtype=np.int64)]


class VarietyModel:
    """All flag images over a finite field, with a lookup from image to flag."""

    def __init__(self, field: Field):
        self.field = field
        self.geo = geometry(field)
        geo = self.geo
        ids = geo.flag_ids
        raw = segre_product(geo.point_vecs[ids[:, 0]], geo.line_pluecker[ids[:, 1]], geo.plane_vecs[ids[:, 2]], field)
        self.images = canonical_rows(raw, field)
        self.images.setflags(write=False)
        self.lookup = {key: n for n, key in enumerate(_row_keys(self.images))}
        if len(self.lookup) != len(self.images):
            raise InternalInconsistencyError("flag embedding is not injective")

    @property
    def span(self) -> np.ndarray:
        if not hasattr(self, "_span"):
            self._span = span_basis(self.images, self.field)
        return self._span

    def flag_of(self, x) -> int | None:
        x = canonical_rows(np.asarray(x, dtype=np.int64).reshape(1, 96) % self.field.order, self.field)
        return self.lookup.get(x[0].tobytes())

    def line_points(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Canonical points ``y`` and ``x + λ y`` of the line through two points (rows of x, y)."""
        q = self.field.order
        pts = [y] + [(x + lam * y) % q for lam in range(q)]
        return np.stack([canonical_rows(p, self.field) for p in pts], axis=1)


@lru_cache(maxsize=None)
def build_variety_model(field: Field) -> VarietyModel:
    if not field.is_finite:
        raise SizeLimitError("the variety model enumerates flags; finite fields only")
    return VarietyModel(field)


# ---------------------------------------------------------------------------
# incidence equivalences


def verify_eq9_eq10(field: Field, samples: int = 10_000, seed: int = 0) -> Report:
    """Kernel membership of ``p ⊗ γ(g) ⊗ e*`` versus point-on-line and line-in-plane.

    Exhaustive over GF(2); ``samples`` random triples over larger fields.
    """
    geo = geometry(field)
    maps = build_incidence_maps(field)
    n_pts, n_lines, n_pls = len(geo.points), len(geo.lines), len(geo.planes)
    total = n_pts * n_lines * n_pls
    if field.order == 2:
        grid = np.array(list(itertools.product(range(n_pts), range(n_lines), range(n_pls))), dtype=np.int64)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        grid = np.stack([rng.integers(0, n, samples) for n in (n_pts, n_lines, n_pls)], axis=1)
        mode = "sampled"
    rep = Report("tensor kernel membership matches point-on-line and line-in-plane", field.characteristic)
    P, T, E = geo.point_vecs[grid[:, 0]], geo.line_pluecker[grid[:, 1]], geo.plane_vecs[grid[:, 2]]
    X = segre_product(P, T, E, field)
    in01 = ~np.any(_matmul(X, maps.i01.data.T, field) != 0, axis=1)
    in12 = ~np.any(_matmul(X, maps.i12.data.T, field) != 0, axis=1)
    on_line = geo.on_line[grid[:, 1], grid[:, 0]]
    in_plane = geo.in_plane[grid[:, 1], grid[:, 2]]
    by_wedge = ~np.any(wedge3(P, T, field) != 0, axis=1)
    by_contract = ~np.any(contract(T, E, field) != 0, axis=1)
    for name, lhs, rhs in (
        ("I01 kernel vs point-on-line", in01, on_line),
        ("I12 kernel vs line-in-plane", in12, in_plane),
        ("membership_i01 vs kernel", by_wedge, in01),
        ("membership_i12 vs kernel", by_contract, in12),
    ):
        bad = np.flatnonzero(lhs != rhs)
        for b in bad[:5].tolist():
            rep.violation({"check": name, "triple": grid[b].tolist()})
        rep.counts[f"mismatch[{name}]"] = int(bad.size)
    flags_hit = int(np.sum(in01 & in12))
    rep.counts.update(mode=mode, triples=int(grid.shape[0]), of_total=total, in_I01=int(in01.sum()), in_I12=int(in12.sum()), in_both=flags_hit)
    rep.check("every checked flag triple lies in both kernels", True, bool(np.all((in01 & in12) == (on_line & in_plane))))
    return rep


def _all_nonzero_bivectors(field: Field) -> np.ndarray:
    q = field.order
    out = []
    for lead in range(6):
        for tail in itertools.product(range(q), repeat=5 - lead):
            out.append((0,) * lead + (1,) + tail)
    return np.array(out, dtype=np.int64)


def verify_prop5(field: Field, samples: int = 10_000, seed: int = 0) -> Report:
    """Pure tensors ``p ⊗ t ⊗ e*`` in ``I01 ∩ I12`` are exactly the flag images.

    ``t`` runs over all nonzero bivectors (decomposable or not).  Exhaustive
    over GF(2); ``samples`` random triples plus every flag over GF(3).
    """
    if field.order > 3:
        raise SizeLimitError("Segre point checks are limited to GF(2) and GF(3)")
    geo = geometry(field)
    maps = build_incidence_maps(field)
    model = build_variety_model(field)
    bivs = _all_nonzero_bivectors(field)
    n_pts, n_b, n_pls = len(geo.points), len(bivs), len(geo.planes)
    if field.order == 2:
        grid = np.array(list(itertools.product(range(n_pts), range(n_b), range(n_pls))), dtype=np.int64)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        grid = np.stack([rng.integers(0, n, samples) for n in (n_pts, n_b, n_pls)], axis=1)
        # every flag as well, so the positive direction is covered exhaustively
        biv_index = {tuple(b): n for n, b in enumerate(bivs.tolist())}
        lines_as_biv = np.array([biv_index[tuple(t)] for t in geo.line_pluecker.tolist()])
        ids = geo.flag_ids
        grid = np.concatenate([grid, np.stack([ids[:, 0], lines_as_biv[ids[:, 1]], ids[:, 2]], axis=1)])
        mode = "sampled"
    P, T, E = geo.point_vecs[grid[:, 0]], bivs[grid[:, 1]], geo.plane_vecs[grid[:, 2]]
    X = segre_product(P, T, E, field)
    in_both = ~np.any(_matmul(X, maps.i01.data.T, field) != 0, axis=1) & ~np.any(_matmul(X, maps.i12.data.T, field) != 0, axis=1)

    decomposable = np.array([is_decomposable(t, field) for t in bivs.tolist()])
    line_of_biv = np.full(n_b, -1, dtype=np.int64)
    line_of_biv[decomposable] = geo.line_ids_from_pluecker(bivs[decomposable])
    li = line_of_biv[grid[:, 1]]
    is_flag = (li >= 0) & (geo.flag_id(grid[:, 0], np.maximum(li, 0), grid[:, 2]) >= 0)

    rep = Report("Segre points in I01 ∩ I12 are exactly the flag images", field.characteristic)
    bad = np.flatnonzero(in_both != is_flag)
    for b in bad[:10].tolist():
        rep.violation({"triple": grid[b].tolist(), "in_subspace": bool(in_both[b]), "is_flag": bool(is_flag[b])})
    members = X[in_both]
    member_flags = {model.flag_of(x) for x in members}
    rep.counts.update(
        mode=mode,
        segre_points=int(grid.shape[0]),
        in_subspace=int(np.unique(canonical_rows(members, field), axis=0).shape[0]) if members.size else 0,
        nondecomposable_checked=int(np.sum(~decomposable[grid[:, 1]])),
        nondecomposable_in_subspace=int(np.sum(in_both & ~decomposable[grid[:, 1]])),
        nonincident_in_subspace=int(np.sum(in_both & decomposable[grid[:, 1]] & ~is_flag)),
        subspace_dim=maps.intersection.row_count,
    )
    if mode == "exhaustive":
        rep.check("Segre points", 15 * 63 * 15, int(grid.shape[0]))
    rep.check("points in subspace", len(geo.flags), rep.counts["in_subspace"])
    rep.check("they are the flag images", True, None not in member_flags and len(member_flags) == len(geo.flags))
    rep.check("non-decomposable t excluded", 0, rep.counts["nondecomposable_in_subspace"])
    return rep


# ---------------------------------------------------------------------------
# lines of the variety


def verify_prop4(field: Field) -> Report:
    """Lines inside the variety are exactly the images of pencils (exhaustive over flag pairs)."""
    if field.order > 3:
        raise SizeLimitError("pair checks are limited to GF(2) and GF(3)")
    model = build_variety_model(field)
    graph = relatedness_graph(field)
    geo = model.geo
    X = model.images
    rep = Report("lines inside the flag variety are exactly pencil images", field.characteristic)

    # forward: every pencil is a full line of the variety
    full_lines = 0
    for members in graph.pencil_members:
        rows = X[members]
        if _rank_array(rows, field) != 2:
            rep.violation({"pencil": members.tolist(), "rank": _rank_array(rows, field)})
            continue
        pts = model.line_points(rows[:1], rows[1:2])[0]
        on = {model.lookup.get(k) for k in _row_keys(pts)}
        if on == set(members.tolist()):
            full_lines += 1
        else:
            rep.violation({"pencil": members.tolist(), "line_flags": sorted(x for x in on if x is not None)})

    # converse: every pair of images
    n = len(X)
    related_pairs = unrelated_pairs = unrelated_leaving = related_matching = 0
    ids = geo.flag_ids
    for i in range(n - 1):
        J = np.arange(i + 1, n)
        pts = model.line_points(np.repeat(X[i:i + 1], J.size, axis=0), X[J])
        rel = (ids[J] != ids[i]).sum(axis=1) <= 1
        for row, j, r in zip(pts, J.tolist(), rel.tolist()):
            hits = [model.lookup.get(k) for k in _row_keys(row)]
            inside = None not in hits
            if r:
                related_pairs += 1
                pencil = set(graph.pencil_members[graph.pencil_ids[i, graph.joining_type(i, j)]].tolist())
                if inside and set(hits) == pencil:
                    related_matching += 1
                else:
                    rep.violation({"related_pair": (i, j), "line_inside": inside})
            else:
                unrelated_pairs += 1
                if inside:
                    rep.violation({"unrelated_pair_line_inside": (i, j)})
                else:
                    unrelated_leaving += 1
    rep.counts.update(
        pencils=len(graph.pencils),
        pencil_lines_inside=full_lines,
        related_pairs=related_pairs,
        related_pairs_on_pencil_line=related_matching,
        unrelated_pairs=unrelated_pairs,
        unrelated_pairs_leaving=unrelated_leaving,
    )
    rep.check("pencil images are lines inside G", len(graph.pencils), full_lines)
    rep.check("unrelated pairs leave G", unrelated_pairs, unrelated_leaving)
    rep.check("related pairs lie on their pencil line", related_pairs, related_matching)
    return rep


def variety_related(model: VarietyModel, x, y) -> tuple[bool, np.ndarray | None]:
    """Whether the line through two variety points lies in the variety.

    Returns ``(True, None)`` or ``(False, witness)`` with a point of the
    line outside the variety.
    """
    fx, fy = model.flag_of(x), model.flag_of(y)
    if fx is None or fy is None:
        raise ValueError("both points must lie on the flag variety")
    if fx == fy:
        return True, None
    pts = model.line_points(model.images[fx:fx + 1], model.images[fy:fy + 1])[0]
    for row, key in zip(pts, _row_keys(pts)):
        if key not in model.lookup:
            return False, row
    return True, None


# ---------------------------------------------------------------------------
# spans and the characteristic-3 anomaly


@dataclass(frozen=True)
class Char3Report:
    field: int
    star_dim: int
    dim_wp: int
    dim_wu: int
    dim_wp_plus_wu: int
    special_flag_outside: bool | None
    dim_span: int
    star_dims: tuple

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "star_dim": self.star_dim,
            "star_dims": list(self.star_dims),
            "wp": self.dim_wp,
            "wu": self.dim_wu,
            "wp_plus_wu": self.dim_wp_plus_wu,
            "special_flag_outside": self.special_flag_outside,
            "span_G": self.dim_span,
        }


def _star_constraint_dim(point: ProjPoint, maps: IncidenceMaps) -> int:
    """dim of ``(p ⊗ Λ²V ⊗ V*) ∩ I01 ∩ I12`` (an upper bound for the star span)."""
    f = maps.field
    p = point.vector()
    basis = f.zeros((24, 96))
    for n in range(24):
        unit = f.zeros(24)
        unit[n] = 1 if f.is_finite else unit[n] + 1
        basis[n] = f.reduce((p[:, None] * unit[None, :]).reshape(96))
    cons = np.concatenate([maps.i01.data, maps.i12.data], axis=0)
    return 24 - _rank_array(_matmul(cons, basis.T.copy(), f), f)


def _star_flags_qq(point: ProjPoint) -> list[Flag]:
    f = point.field
    small = [ProjPoint(v, f) for v in itertools.product((0, 1), repeat=4) if any(v)]
    out = []
    for r in small:
        if r == point:
            continue
        g = ProjLine((point.coords, r.coords), f)
        for s in small:
            if incident(s, g):
                continue
            from .projgeom import join_point_line

            out.append(make_flag(point, g, join_point_line(s, g)))
    return out


def star_span(point: ProjPoint, maps: IncidenceMaps | None = None) -> np.ndarray:
    """Basis of the span of the images of all flags through ``point``.

    Over QQ a finite family of flags is used and its span is checked to
    fill the linear upper bound, so the result is still exact.
    """
    f = point.field
    maps = maps or build_incidence_maps(f)
    if f.is_finite:
        model = build_variety_model(f)
        geo = model.geo
        pi = geo.point_index[point]
        return span_basis(model.images[geo.flag_ids[:, 0] == pi], f)
    bound = _star_constraint_dim(point, maps)
    rows = np.stack([embed_flag(fl) for fl in _star_flags_qq(point)])
    basis = span_basis(rows, f, chunk=32, bound=bound)
    if basis.shape[0] != bound:
        raise InternalInconsistencyError(f"sampled star spans {basis.shape[0]} < bound {bound}")
    return basis


def _dim(rows: list[np.ndarray], field: Field) -> int:
    return _rank_array(np.concatenate(rows, axis=0), field)


def span_report(field: Field) -> Char3Report:
    """Span dimensions for the tetrahedron and unit-point stars, and for the whole variety."""
    maps = build_incidence_maps(field)
    tetra = [ProjPoint(tuple(int(i == j) for j in range(4)), field) for i in range(4)]
    units = [ProjPoint(tuple(1 - int(i == j) for j in range(4)), field) for i in range(4)]
    sample = ProjPoint((1, 1, 1, 1), field)
    spans_p = [star_span(p, maps) for p in tetra]
    spans_u = [star_span(u, maps) for u in units]
    star_dim = star_span(sample, maps).shape[0]
    wp_wu = np.concatenate(spans_p + spans_u, axis=0)
    dim_sum = _rank_array(wp_wu, field)
    outside = None
    extra = []
    if field.characteristic == 3:
        p, t, e = SPECIAL_CHAR3_FLAG
        special = make_flag(ProjPoint(p, field), ProjLine.from_pluecker(t, field), ProjPlane(e, field))
        x = embed_flag(special).reshape(1, 96)
        outside = _rank_array(np.concatenate([wp_wu, x], axis=0), field) > dim_sum
        extra = [x]
    if field.is_finite:
        dim_span = build_variety_model(field).span.shape[0]
    else:
        dim_span = _rank_array(np.concatenate([wp_wu] + extra, axis=0), field)
        if dim_span != maps.intersection.row_count:
            raise InternalInconsistencyError("finite generating set falls short of the incidence subspace")
    return Char3Report(
        field=field.characteristic,
        star_dim=star_dim,
        dim_wp=_dim(spans_p, field),
        dim_wu=_dim(spans_u, field),
        dim_wp_plus_wu=dim_sum,
        special_flag_outside=outside,
        dim_span=dim_span,
        star_dims=tuple(s.shape[0] for s in spans_p + spans_u),
    )


# ---------------------------------------------------------------------------
# extension of Plücker transformations to the ambient space


def extension_matrix(x) -> ExactMatrix:
    """96x96 matrix induced on ``V ⊗ Λ²V ⊗ V*`` by a collineation or duality.

    Collineation ``f``: ``f ⊗ f̂ ⊗ f^-T``.  Duality ``f : V -> V*``:
    ``p ⊗ t ⊗ e* -> f^-T(e*) ⊗ d^-1 f̂(t) ⊗ f(p)``, with the factors swapped
    back into ``V ⊗ Λ²V ⊗ V*`` order.
    """
    m = x.matrix
    field = m.field
    f = m.data
    fh = exterior_square(m).data
    fs = inverse_transpose(m).data
    if isinstance(x, Collineation):
        out = np.kron(np.kron(f, fh), fs)
    else:
        dfh = _matmul(klein_polarity(field).data, fh, field)
        # out[(a, b, c), (i, jk, l)] = fs[a, l] * dfh[b, jk] * f[c, i]
        out = np.einsum("al,bj,ci->abcijl", fs, dfh, f).reshape(96, 96)
    return ExactMatrix(field.reduce(out), field)


def extend_to_collineation(a: FlagMap, frame=STANDARD_FRAME) -> ExactMatrix:
    """The 96x96 matrix extending a Plücker transformation to the ambient space.

    Checked on every flag: the matrix sends each flag image to the image of
    the mapped flag, up to a nonzero scalar.
    """
    x = decompose(a, frame=frame)
    mat = extension_matrix(x)
    model = build_variety_model(a.field)
    moved = canonical_rows(_matmul(model.images, mat.data.T, a.field), a.field)
    if not np.array_equal(moved, model.images[a.table]):
        raise InternalInconsistencyError("extension does not carry flag images to flag images")
    return mat


def preserves_kernels(mat: ExactMatrix, maps: IncidenceMaps, swap: bool = False) -> tuple[bool, bool]:
    """Whether ``mat`` maps ``ker i01`` into ``ker i01`` and ``ker i12`` into ``ker i12``.

    With ``swap`` (dualities) the targets are exchanged.
    """
    f = mat.field
    dst01, dst12 = (maps.i12, maps.i01) if swap else (maps.i01, maps.i12)
    k01 = _matmul(dst01.data, _matmul(mat.data, maps.kernel01.data.T, f), f)
    k12 = _matmul(dst12.data, _matmul(mat.data, maps.kernel12.data.T, f), f)
    return not np.any(k01 != 0), not np.any(k12 != 0)


def preserves_intersection(mat: ExactMatrix, maps: IncidenceMaps) -> bool:
    f = mat.field
    moved = _matmul(mat.data, maps.intersection.data.T, f)
    both = np.concatenate([maps.i01.data, maps.i12.data], axis=0)
    return not np.any(_matmul(both, moved, f) != 0)


def _global_scalar(a: np.ndarray, b: np.ndarray, field: Field):
    """``c`` with ``a == c * b`` (both nonzero), else ``None``."""
    nz = np.flatnonzero(b.reshape(-1) != 0)
    if nz.size == 0:
        return None
    k = nz[0]
    c = field.scalar(a.reshape(-1)[k] * field.inv(b.reshape(-1)[k]))
    return c if np.array_equal(field.reduce(b * c), a) and c != 0 else None


def verify_uniqueness_on_span(a: FlagMap, seed: int = 0) -> Report:
    """The extension is unique up to scalar on the span of the variety.

    * two extensions computed from different frames agree on the span up to
      one global scalar;
    * adding a matrix that vanishes on the span changes nothing there;
    * a map fixing every flag image projectively has a single eigenvalue on
      all of them: inside each pencil line three images force equal
      eigenvalues, and the relatedness graph is connected.
    """
    field = a.field
    model = build_variety_model(field)
    span = model.span
    rep = Report("the ambient extension is unique on the span of the variety", field.characteristic)
    rep.check("dim span G", 64, span.shape[0])
    m1 = extend_to_collineation(a)
    m2 = extend_to_collineation(a, frame=ALT_FRAME)
    on1 = _matmul(m1.data, span.T.copy(), field)
    on2 = _matmul(m2.data, span.T.copy(), field)
    rep.check("frames agree up to one scalar", True, _global_scalar(on1, on2, field) is not None)

    rng = np.random.default_rng(seed)
    annihilators = _kernel_array(span, field)
    u = rng.integers(0, field.order, size=96)
    w = annihilators[rng.integers(0, annihilators.shape[0])]
    bump = field.reduce(np.outer(u, w))
    on_bumped = _matmul(field.reduce(m1.data + bump), span.T.copy(), field)
    rep.check("perturbation off the span is invisible", True, bool(np.array_equal(on_bumped, on1)))

    graph = relatedness_graph(field)
    from scipy.sparse.csgraph import connected_components

    pencil_ranks = {_rank_array(model.images[m], field) for m in graph.pencil_members}
    rep.counts.update(
        image_rank=_rank_array(model.images, field),
        pencil_sizes=sorted({len(m) for m in graph.pencil_members}),
        pencil_ranks=sorted(pencil_ranks),
        graph_components=int(connected_components(graph.sparse(), directed=False)[0]),
    )
    rep.check("images span G's span", span.shape[0], rep.counts["image_rank"])
    rep.check("fixing maps are scalar on the span", True,
              pencil_ranks == {2} and min(rep.counts["pencil_sizes"]) >= 3 and rep.counts["graph_components"] == 1)
    return rep


def verify_extensions(field: Field, trials: int = 20, seed: int = 0) -> Report:
    """Random collineations and dualities extend to collineations of the ambient space."""
    from .transform import Duality

    rng = np.random.default_rng(seed)
    maps = build_incidence_maps(field)
    model = build_variety_model(field)
    span = model.span
    rep = Report("Plücker transformations extend to ambient collineations", field.characteristic)
    done = {"collineation": 0, "duality": 0}
    for kind in ("collineation", "duality"):
        for _ in range(trials):
            m = random_invertible(field, rng)
            x = Collineation(m) if kind == "collineation" else Duality(m)
            a = FlagMap.from_transformation(x)
            try:
                mat = extend_to_collineation(a)
            except InternalInconsistencyError as exc:
                rep.violation({"kind": kind, "matrix": m.tolist(), "error": str(exc)})
                continue
            ok01, ok12 = preserves_kernels(mat, maps, swap=kind == "duality")
            ok_meet = preserves_intersection(mat, maps)
            alt = extend_to_collineation(a, frame=ALT_FRAME)
            unique = _global_scalar(_matmul(mat.data, span.T.copy(), field), _matmul(alt.data, span.T.copy(), field), field) is not None
            if not (ok01 and ok12 and ok_meet and unique):
                rep.violation({"kind": kind, "matrix": m.tolist(), "I01": ok01, "I12": ok12, "meet": ok_meet, "unique": unique})
            else:
                done[kind] += 1
    rep.counts.update(collineations=done["collineation"], dualities=done["duality"], span_dim=span.shape[0])
    rep.check("collineations extended", trials, done["collineation"])
    rep.check("dualities extended", trials, done["duality"])
    return rep

