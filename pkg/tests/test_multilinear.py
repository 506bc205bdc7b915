import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pluckerflag.exactalg import GF, QQ, ExactMatrix, SingularMatrixError
from pluckerflag.multilinear import (
    contract,
    embed_flag,
    exterior_square,
    inverse_transpose,
    is_decomposable,
    klein,
    klein_polarity,
    pairing,
    pairing_det,
    segre_membership,
    segre_product,
    tensor_index,
    wedge,
    wedge_bivectors,
)
from pluckerflag.projgeom import PAIRS, ProjLine, ProjPlane, ProjPoint, geometry, intersect_lines, join, make_flag, quadric_value
from pluckerflag.transform import Collineation, line_image, random_invertible

GF2, GF3, GF5 = GF(2), GF(3), GF(5)
BASIS = np.eye(4, dtype=np.int64)


def unit6(n):
    v = [0] * 6
    v[n] = 1
    return v


def test_klein_examples():
    assert klein(ProjLine(((1, 0, 0, 0), (0, 1, 0, 0)), GF2)).tolist() == [1, 0, 0, 0, 0, 0]
    g = ProjLine(((1, 0, 0, 0), (0, 1, 1, -1)), GF3)
    assert klein(g).tolist() == [1, 1, 2, 0, 0, 0]


def test_is_decomposable_examples():
    assert is_decomposable(unit6(0), GF2)
    split = [1, 0, 0, 0, 0, 1]  # e0∧e1 + e2∧e3
    assert not is_decomposable(split, GF5)
    assert not is_decomposable(split, GF2)
    # the naive quadratic test t∧t vanishes in characteristic 2
    assert wedge_bivectors(split, split, GF2) == 0
    with pytest.raises(ValueError):
        is_decomposable([0] * 6, GF3)


@pytest.mark.parametrize("field", [GF3, GF5])
def test_decomposable_iff_quadric(field):
    q = field.order
    for t in itertools.product(range(q), repeat=6):
        if any(t):
            assert is_decomposable(t, field) == (quadric_value(t, field) == 0)


def test_contract_examples():
    assert contract(unit6(0), [1, 0, 0, 0], QQ).tolist() == [0, 1, 0, 0]
    assert contract(unit6(0), [0, 0, 0, 1], QQ).tolist() == [0, 0, 0, 0]
    g = ProjLine(((1, 0, 0, 0), (0, 1, 1, -1)), GF3)
    assert not np.any(contract(klein(g), [0, 0, 1, 1], GF3))


@pytest.mark.parametrize("field", [GF2, GF3, GF5, QQ])
def test_contraction_matches_pairing_on_basis(field):
    for n, (j, k) in enumerate(PAIRS):
        for l, w in itertools.product(range(4), repeat=2):
            lhs = field.scalar(contract(unit6(n), BASIS[l], field)[w])
            rhs = pairing_det(BASIS[j], BASIS[k], BASIS[l], BASIS[w], field)
            assert lhs == rhs


@given(st.sampled_from([2, 3, 5, 0]), st.lists(st.integers(-5, 5), min_size=16, max_size=16))
def test_pairing_is_determinant(p, xs):
    field = GF(p) if p else QQ
    q, r, e, w = (xs[4 * i:4 * i + 4] for i in range(4))
    t = wedge(q, r, field)
    u = wedge(e, w, field)
    assert pairing(t, u, field) == pairing_det(q, r, e, w, field)


def test_exterior_square_examples():
    assert exterior_square(ExactMatrix.identity(4, GF3)) == ExactMatrix.identity(6, GF3)
    d = ExactMatrix(np.diag([1, 2, 3, 4]), QQ)
    assert exterior_square(d) == ExactMatrix(np.diag([2, 3, 4, 6, 8, 12]), QQ)
    with pytest.raises(SingularMatrixError):
        exterior_square(ExactMatrix.zeros(4, 4, GF3))


@pytest.mark.parametrize("field", [GF2, GF3, GF5])
def test_exterior_square_properties(field):
    rng = np.random.default_rng(7)
    for _ in range(20):
        m, n = random_invertible(field, rng), random_invertible(field, rng)
        hat = exterior_square(m)
        assert exterior_square(m @ n) == hat @ exterior_square(n)
        assert hat.det() == field.scalar(m.det() ** 3)
        q, r = rng.integers(0, field.order, (2, 4))
        lhs = (hat @ ExactMatrix([wedge(q, r, field)], field).T).data[:, 0]
        rhs = wedge((m @ ExactMatrix([q], field).T).data[:, 0], (m @ ExactMatrix([r], field).T).data[:, 0], field)
        assert np.array_equal(lhs, rhs)


def test_inverse_transpose_examples():
    assert inverse_transpose(ExactMatrix.identity(4, GF5)) == ExactMatrix.identity(4, GF5)
    assert inverse_transpose(ExactMatrix(np.diag([1, 2, 1, 1]), GF5)) == ExactMatrix(np.diag([1, 3, 1, 1]), GF5)
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = random_invertible(GF3, rng)
        mit = inverse_transpose(m)
        assert (m.T @ mit) == ExactMatrix.identity(4, GF3)


def test_klein_polarity():
    d = klein_polarity(QQ)
    e01, e02, e23 = (ExactMatrix([unit6(n)], QQ) for n in (0, 1, 5))
    assert (e01 @ d @ e23.T).data[0, 0] == 1
    assert (e01 @ d @ e02.T).data[0, 0] == 0
    assert d @ d == ExactMatrix.identity(6, QQ)
    for s, t in itertools.product(range(6), repeat=2):
        assert d.data[s, t] == wedge_bivectors(unit6(s), unit6(t), QQ)


def test_polarity_detects_meeting_lines():
    geo = geometry(GF2)
    d = klein_polarity(GF2).data
    gram = (geo.line_pluecker @ d @ geo.line_pluecker.T) % 2
    for a, b in itertools.product(range(len(geo.lines)), repeat=2):
        meets = a == b or intersect_lines(geo.lines[a], geo.lines[b]) is not None
        assert (gram[a, b] == 0) == meets


def test_embed_flag_basis_case():
    f = make_flag(ProjPoint((1, 0, 0, 0), GF2), join(ProjPoint((1, 0, 0, 0), GF2), ProjPoint((0, 1, 0, 0), GF2)), ProjPlane((0, 0, 0, 1), GF2))
    x = embed_flag(f)
    assert np.flatnonzero(x).tolist() == [tensor_index(0, 0, 3)] == [3]


def test_embedding_injective_and_segre():
    geo = geometry(GF2)
    images = {tuple(embed_flag(f)) for f in geo.flags}
    assert len(images) == 315
    for f in geo.flags[:60]:
        ok, (p, m, e) = segre_membership(embed_flag(f), GF2)
        assert ok
        assert np.array_equal(p, f.point.vector())
        assert m.tolist() == list(f.line.pluecker)
        assert np.array_equal(e, f.plane.vector())


def test_special_flag_support():
    f = make_flag(ProjPoint((1, 1, 1, -1), GF3), ProjLine.from_pluecker((1, 1, -1, 0, 0, 0), GF3), ProjPlane((0, 0, 1, 1), GF3))
    cube = embed_flag(f).reshape(4, 6, 4)
    support = {(i, jk, l) for i, jk, l in zip(*np.nonzero(cube))}
    assert support == {(i, jk, l) for i in range(4) for jk in range(3) for l in (2, 3)}


def test_segre_membership_negative_and_zero():
    x = np.zeros(96, dtype=np.int64)
    x[tensor_index(0, 0, 0)] = 1
    x[tensor_index(1, 0, 1)] = 1
    assert segre_membership(x, GF3) == (False, None)
    with pytest.raises(ValueError):
        segre_membership(np.zeros(96, dtype=np.int64), GF3)


@given(st.lists(st.integers(-3, 3), min_size=14, max_size=14))
def test_segre_factor_round_trip(xs):
    p, m, e = xs[:4], xs[4:10], xs[10:]
    if not (any(p) and any(m) and any(e)):
        return
    t = segre_product(p, m, e, QQ)
    ok, (p2, m2, e2) = segre_membership(t, QQ)
    assert ok
    t2 = segre_product(p2, m2, e2, QQ)
    k = np.flatnonzero(t2)[0]
    scale = Fraction(t[k]) / Fraction(t2[k])
    assert all(Fraction(a) == scale * Fraction(b) for a, b in zip(t, t2))


@pytest.mark.parametrize("field", [GF2, GF3, GF5])
def test_klein_functorial(field):
    rng = np.random.default_rng(11)
    geo = geometry(field)
    for _ in range(10):
        k = Collineation(random_invertible(field, rng))
        g = geo.lines[rng.integers(len(geo.lines))]
        moved = ProjLine(tuple(tuple(int(x) for x in (k.matrix @ ExactMatrix([b], field).T).data[:, 0]) for b in g.basis), field)
        assert line_image(k, g) == moved
