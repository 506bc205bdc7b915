import itertools

import numpy as np
import pytest

from pluckerflag.exactalg import GF, QQ
from pluckerflag.projgeom import (
    DegenerateJoinError,
    IncidenceError,
    ProjLine,
    ProjPlane,
    ProjPoint,
    UnsupportedEnumerationError,
    enumerate_all,
    geometry,
    incident,
    join,
    make_flag,
    meet_planes,
    quadric_value,
)

GF2, GF3 = GF(2), GF(3)


def pt(v, f=GF2):
    return ProjPoint(tuple(v), f)


def pl(v, f=GF2):
    return ProjPlane(tuple(v), f)


E = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]


def test_join_examples():
    g = join(pt(E[0]), pt(E[1]))
    assert g.pluecker == (1, 0, 0, 0, 0, 0)
    assert g.basis == (E[0], E[1])
    h = join(pt((1, 1, 1, -1), GF3), pt((0, 1, 1, -1), GF3))
    assert h == ProjLine.from_pluecker((1, 1, -1, 0, 0, 0), GF3)
    with pytest.raises(DegenerateJoinError):
        join(pt(E[0]), pt(E[0]))


def test_meet_planes_examples():
    assert meet_planes(pl((0, 0, 0, 1), QQ), pl((0, 0, 1, 0), QQ)) == join(pt(E[0], QQ), pt(E[1], QQ))
    assert meet_planes(pl((1, 0, 0, 0), QQ), pl((1, 1, 0, 0), QQ)) == join(pt(E[2], QQ), pt(E[3], QQ))
    with pytest.raises(DegenerateJoinError):
        meet_planes(pl((1, 2, 0, 0), QQ), pl((2, 4, 0, 0), QQ))


def test_incident_examples():
    g = join(pt(E[0]), pt(E[1]))
    assert incident(pt(E[0]), g)
    assert not incident(pt(E[2]), g)
    h = ProjLine(((1, 0, 0, 0), (0, 1, 1, -1)), GF3)
    assert incident(h, pl((0, 0, 1, 1), GF3))
    assert incident(pl((0, 0, 1, 1), GF3), h)


def test_make_flag_examples():
    f = make_flag(pt(E[0]), join(pt(E[0]), pt(E[1])), pl((0, 0, 0, 1)))
    assert f.point == pt(E[0])
    with pytest.raises(IncidenceError, match="point"):
        make_flag(pt(E[2]), join(pt(E[0]), pt(E[1])), pl((0, 0, 0, 1)))
    special = make_flag(pt((1, 1, 1, -1), GF3), ProjLine.from_pluecker((1, 1, -1, 0, 0, 0), GF3), pl((0, 0, 1, 1), GF3))
    assert special.line == ProjLine(((1, 0, 0, 0), (0, 1, 1, -1)), GF3)


@pytest.mark.parametrize("q, counts", [(2, (15, 35, 15, 315)), (3, (40, 130, 40, 2080)), (5, (156, 806, 156, 29016))])
def test_enumeration_counts(q, counts):
    f = GF(q)
    pts = (q**4 - 1) // (q - 1)
    lines = (q**2 + 1) * (q**2 + q + 1)
    assert counts == (pts, lines, pts, pts * (q**2 + q + 1) * (q + 1))
    geo = geometry(f)
    assert (len(geo.points), len(geo.lines), len(geo.planes), len(geo.flags)) == counts
    for kind in ("point", "line", "plane"):
        items = enumerate_all(kind, f)
        assert len(set(items)) == len(items)


def test_flags_match_brute_force_filter():
    f = GF2
    pts, lines, planes = (enumerate_all(k, f) for k in ("point", "line", "plane"))
    brute = {
        (p, g, e)
        for p, g, e in itertools.product(pts, lines, planes)
        if all(e.evaluate(b) == 0 for b in g.basis) and any(p == x for x in g.points())
    }
    assert brute == {f.components() for f in enumerate_all("flag", f)}


def test_enumeration_needs_finite_field():
    with pytest.raises(UnsupportedEnumerationError):
        enumerate_all("point", QQ)


@pytest.mark.parametrize("q", [2, 3])
def test_duality_counts_and_quadric(q):
    f = GF(q)
    geo = geometry(f)
    assert len(geo.points) == len(geo.planes)
    assert all(len(list(g.points())) == q + 1 for g in geo.lines)
    assert all(len(list(g.planes())) == q + 1 for g in geo.lines)
    assert all(quadric_value(g.pluecker, f) == 0 for g in geo.lines)


def test_join_round_trip():
    geo = geometry(GF3)
    for g in geo.lines[:40]:
        for a, b in itertools.combinations(list(g.points()), 2):
            assert join(a, b) == g


def test_canonical_forms():
    assert pt((0, 2, 4, 1), GF(5)).coords == (0, 1, 2, 3)
    assert ProjLine(((0, 1, 0, 0), (1, 1, 0, 0)), GF2).basis == (E[0], E[1])
    assert ProjLine.from_pluecker((2, 0, 0, 0, 0, 0), QQ).pluecker == (1, 0, 0, 0, 0, 0)


def test_non_quadric_vector_is_not_a_line():
    with pytest.raises(ValueError):
        ProjLine.from_pluecker((1, 0, 0, 0, 0, 1), GF(5))


def test_geometry_lookup_tables_consistent():
    geo = geometry(GF3)
    ids = geo.flag_ids
    assert np.all(geo.on_line[ids[:, 1], ids[:, 0]])
    assert np.all(geo.in_plane[ids[:, 1], ids[:, 2]])
    assert np.array_equal(geo.flag_id(ids[:, 0], ids[:, 1], ids[:, 2]), np.arange(len(ids)))
