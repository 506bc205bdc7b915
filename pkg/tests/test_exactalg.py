import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from pluckerflag.exactalg import (
    GF,
    QQ,
    ExactMatrix,
    Field,
    FieldMismatchError,
    SingularMatrixError,
    kernel_basis,
    rank,
    rref,
    solve_right,
    subspace_intersection,
)

PRIMES = [2, 3, 5, 7]


def matrices(max_rows=5, max_cols=6):
    """(field, nested rows) with small entries; rationals get small fractions."""

    @st.composite
    def build(draw):
        p = draw(st.sampled_from(PRIMES + [0]))
        rows = draw(st.integers(1, max_rows))
        cols = draw(st.integers(1, max_cols))
        if p:
            entry = st.integers(0, p - 1)
        else:
            entry = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
        data = draw(st.lists(st.lists(entry, min_size=cols, max_size=cols), min_size=rows, max_size=rows))
        return (GF(p) if p else QQ), data

    return build()


def brute_rank(data, p):
    """Rank over GF(p) from the size of the row space (p**rank vectors)."""
    rows = [np.array(r, dtype=np.int64) for r in data]
    space = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = sum((c * r for c, r in zip(coeffs, rows)), np.zeros(len(data[0]), dtype=np.int64)) % p
        space.add(tuple(v))
    return round(np.log(len(space)) / np.log(p))


# -- fields and scalars ------------------------------------------------------


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(4)


def test_scalar_canonical_forms():
    assert GF(5)(7).value == 2
    assert GF(5)(-1).value == 4
    assert QQ(Fraction(2, -4)).value == Fraction(-1, 2)
    assert GF(5)(Fraction(1, 2)).value == 3


def test_scalar_arithmetic_and_mismatch():
    a, b = GF(7)(3), GF(7)(5)
    assert (a + b).value == 1 and (a * b).value == 1 and (a / b * b) == a
    with pytest.raises(FieldMismatchError):
        _ = GF(7)(1) + GF(5)(1)


def test_from_rows_rejects_mixed_fields():
    with pytest.raises(FieldMismatchError):
        ExactMatrix.from_rows([[GF(2)(1), GF(3)(1)]])
    m = ExactMatrix.from_rows([[GF(3)(1), GF(3)(2)]])
    assert m.field == GF(3)


# -- worked examples -------------------------------------------------------------


def test_rref_examples():
    r, k = rref(ExactMatrix.identity(2, GF(5)))
    assert k == 2 and r == ExactMatrix.identity(2, GF(5))
    r, k = rref(ExactMatrix.zeros(3, 4, GF(5)))
    assert k == 0 and r == ExactMatrix.zeros(3, 4, GF(5))
    _, k = rref(ExactMatrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]], GF(2)))
    assert k == 2


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(4, GF(3))).row_count == 0
    assert kernel_basis(ExactMatrix.zeros(1, 3, QQ)).row_count == 3


def test_intersection_examples():
    e0 = ExactMatrix([[1, 0, 0]], QQ)
    e1 = ExactMatrix([[0, 1, 0]], QQ)
    assert subspace_intersection(e0, e0) == e0
    assert subspace_intersection(e0, e1).row_count == 0
    with pytest.raises(ValueError):
        subspace_intersection(e0, ExactMatrix([[1, 0]], QQ))


def test_solve_right_examples():
    x = solve_right(ExactMatrix.identity(3, GF(5)), [0, 0, 1])
    assert x.tolist() == [0, 0, 1]
    assert solve_right(ExactMatrix.zeros(2, 2, GF(5)), [1, 0]) is None
    x = solve_right(ExactMatrix([[1, 1], [0, 1]], GF(3)), [0, 1])
    assert x.tolist() == [2, 1]


def test_inverse_and_det():
    m = ExactMatrix([[2, 1], [1, 1]], QQ)
    assert m @ m.inverse() == ExactMatrix.identity(2, QQ)
    assert m.det() == 1
    with pytest.raises(SingularMatrixError):
        ExactMatrix([[1, 1], [1, 1]], GF(3)).inverse()


# -- properties ------------------------------------------------------------------


@given(matrices())
def test_rref_idempotent_and_rank_nullity(case):
    field, data = case
    m = ExactMatrix(data, field)
    r, k = rref(m)
    r2, k2 = rref(r)
    assert r2 == r and k2 == k
    ker = kernel_basis(m)
    assert ker.row_count + k == m.col_count
    if ker.row_count:
        assert not np.any((m @ ker.T).data != 0)
        assert rank(ker) == ker.row_count


@given(matrices())
def test_rank_matches_independent_oracle(case):
    field, data = case
    m = ExactMatrix(data, field)
    if field.is_finite:
        if field.characteristic ** len(data) <= 3000:
            assert rank(m) == brute_rank(data, field.characteristic)
    else:
        assert rank(m) == sympy.Matrix(data).rank()


@given(matrices(max_rows=4, max_cols=5), st.data())
def test_intersection_dimension_formula(case, data):
    field, rows_a = case
    a = rref(ExactMatrix(rows_a, field))[0]
    a = ExactMatrix(a.data[: rank(a)], field)
    other = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=a.col_count, max_size=a.col_count), min_size=1, max_size=4))
    b = rref(ExactMatrix(other, field))[0]
    b = ExactMatrix(b.data[: rank(b)], field)
    if a.row_count == 0 or b.row_count == 0:
        return
    meet = subspace_intersection(a, b)
    assert meet.row_count == a.row_count + b.row_count - rank(a.vstack(b))
    for v in meet.data:
        assert rank(a.vstack(ExactMatrix(v, field))) == a.row_count
        assert rank(b.vstack(ExactMatrix(v, field))) == b.row_count


@given(matrices(), st.data())
def test_solve_right_consistent(case, data):
    field, rows = case
    m = ExactMatrix(rows, field)
    x = data.draw(st.lists(st.integers(-3, 3), min_size=m.col_count, max_size=m.col_count))
    rhs = (m @ ExactMatrix([x], field).T).data[:, 0]
    sol = solve_right(m, rhs)
    assert sol is not None
    assert np.array_equal((m @ ExactMatrix([sol], field).T).data[:, 0], rhs)


def test_deterministic_output():
    m = ExactMatrix([[3, 1, 4], [1, 5, 9], [2, 6, 5]], GF(7))
    assert kernel_basis(m) == kernel_basis(ExactMatrix(m.tolist(), GF(7)))
    assert rref(m)[0] == rref(m)[0]
