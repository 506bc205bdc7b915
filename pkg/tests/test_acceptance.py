"""The twelve acceptance criteria, one test each, all at exact equality.

Each test prints a ``criterion N: PASS|FAIL`` line; the full list is
repeated in the pytest terminal summary.
"""

import numpy as np
import pytest

from pluckerflag.exactalg import GF, QQ, _matmul
from pluckerflag.flagspace import related, verify_connectivity, verify_closed_4path, verify_prop1, verify_two_nets
from pluckerflag.flagvariety import (
    build_incidence_maps,
    span_report,
    verify_eq9_eq10,
    verify_extensions,
    verify_prop4,
    verify_prop5,
)
from pluckerflag.multilinear import is_decomposable, segre_product
from pluckerflag.projgeom import IncidenceError, ProjPlane, ProjPoint, geometry, join, make_flag
from pluckerflag.transform import FlagMap, is_plucker_transformation, verify_automorphism_count, verify_round_trips

GF2, GF3, GF5 = GF(2), GF(3), GF(5)


def assert_report(rep):
    assert rep.passed, {"checks": [c for c in rep.checks if not c["pass"]], "violations": rep.violations[:5]}


def test_c01_kernel_dimensions(criterion):
    criterion(1, "dim ker i01 = dim ker i12 = 80, intersection 64 over GF(2), GF(3), GF(5), Q", 1 * 4)
    for field in (GF2, GF3, GF5, QQ):
        dims = build_incidence_maps(field).dims
        assert (dims["ker_i01"], dims["ker_i12"], dims["intersection"]) == (80, 80, 64), field


def test_c02_span_dimensions(criterion):
    criterion(2, "span dims 8 / 32 / 32 / 64 (63 in char 3, special flag outside) / span 64", 5)
    for field in (QQ, GF2, GF3, GF5):
        r = span_report(field)
        assert r.star_dim == 8 and r.dim_wp == 32 and r.dim_wu == 32
        assert r.dim_wp_plus_wu == (63 if field.characteristic == 3 else 64)
        assert r.dim_span == 64
        if field.characteristic == 3:
            assert r.special_flag_outside is True


def test_c03_incidence_kernels(criterion):
    criterion(3, "kernel membership <=> incidence: exhaustive 15x35x15 over GF(2), 10^4 samples over GF(3)", 10)
    rep2 = verify_eq9_eq10(GF2)
    assert_report(rep2)
    assert rep2.counts["mode"] == "exhaustive" and rep2.counts["triples"] == 15 * 35 * 15
    rep3 = verify_eq9_eq10(GF3, samples=10_000)
    assert_report(rep3)
    assert rep3.counts["triples"] == 10_000


def test_c04_segre_points(criterion):
    criterion(4, "exactly the 315 flag images among 14175 Segre points lie in I01 ∩ I12 (GF(2))", 30)
    rep = verify_prop5(GF2)
    assert_report(rep)
    assert rep.counts["segre_points"] == 14175 and rep.counts["in_subspace"] == 315


def test_c05_variety_lines(criterion):
    criterion(5, "pencil images are lines in G; unrelated pairs leave G; related pairs give pencil lines (GF(2))", 60)
    rep = verify_prop4(GF2)
    assert_report(rep)
    assert rep.counts["pencil_lines_inside"] == 315
    assert rep.counts["related_pairs"] == rep.counts["related_pairs_on_pencil_line"] > 0
    assert rep.counts["unrelated_pairs"] == rep.counts["unrelated_pairs_leaving"] > 0


def test_c06_maximal_cliques(criterion):
    criterion(6, "maximal cliques are the pencils: 315 over GF(2), 1560 over GF(3), size q+1", 60)
    for field, count in ((GF2, 315), (GF3, 1560)):
        rep = verify_prop1(field)
        assert_report(rep)
        assert rep.counts["maximal_cliques"] == count
        assert rep.counts["clique_sizes"] == [field.order + 1]


def test_c07_two_nets_and_closed_paths(criterion):
    criterion(7, "2-net on every line over GF(2), GF(3); no type-1 pencil in closed 4-paths over GF(2)", 60)
    for field in (GF2, GF3):
        rep = verify_two_nets(field)
        assert_report(rep)
        assert rep.counts["lines"] == len(geometry(field).lines)
    rep = verify_closed_4path(GF2)
    assert_report(rep)
    assert rep.counts["cycles"] > 0


def test_c08_round_trips(criterion):
    criterion(8, "100 collineations + 100 dualities per GF(2), GF(3), GF(5): Plücker and recovered", 120)
    for field in (GF2, GF3, GF5):
        rep = verify_round_trips(field, trials=100, seed=0)
        assert_report(rep)
        assert rep.counts["recovered_collineation"] == rep.counts["recovered_duality"] == 100


def test_c09_automorphism_count(criterion):
    criterion(9, "automorphisms of the flag space over GF(2) = 40320", 300)
    rep = verify_automorphism_count(GF2)
    assert_report(rep)
    assert rep.counts["automorphisms"] == 40320 == 2 * 15 * 14 * 12 * 8


def test_c10_extensions(criterion):
    criterion(10, "20 collineations + 20 dualities over GF(2), GF(3) extend to the 96-dim space, unique on span 64", 120)
    for field in (GF2, GF3):
        rep = verify_extensions(field, trials=20, seed=0)
        assert_report(rep)
        assert rep.counts["collineations"] == rep.counts["dualities"] == 20
        assert rep.counts["span_dim"] == 64


def test_c11_connectivity(criterion):
    criterion(11, "connecting paths for all flag pairs over GF(2) with <= 12 steps; graph connected", 60)
    rep = verify_connectivity(GF2)
    assert_report(rep)
    assert rep.counts["pairs"] == 315 * 315
    assert rep.counts["longest_path"] <= 12 and rep.counts["components"] == 1


def test_c12_negative_controls(criterion):
    criterion(12, "negative controls: unrelated transposition, non-decomposable bivector, non-incident triple", 1)
    geo = geometry(GF2)
    b = next(j for j in range(1, 315) if not related(geo.flags[0], geo.flags[j]))
    assert not is_plucker_transformation(FlagMap.transposition(GF2, 0, b))

    split = (1, 0, 0, 0, 0, 1)
    assert not is_decomposable(split, GF2)
    maps = build_incidence_maps(GF2)
    both = np.concatenate([maps.i01.data, maps.i12.data])
    for p in geo.point_vecs:
        for e in geo.plane_vecs:
            assert np.any(_matmul(both, segre_product(p, split, e, GF2), GF2) != 0)

    e0, e1, e2 = (ProjPoint(v, GF2) for v in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
    with pytest.raises(IncidenceError):
        make_flag(e2, join(e0, e1), ProjPlane((0, 0, 0, 1), GF2))
