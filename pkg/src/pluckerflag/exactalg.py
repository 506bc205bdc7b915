"""Exact scalars and dense linear algebra over GF(p) and the rationals.

Matrices are stored as numpy arrays: ``int64`` residues for GF(p) and
``object`` arrays of :class:`fractions.Fraction` for the rationals.  Row
operations are vectorised, so the same elimination code serves both cases.
Nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Field",
    "GF",
    "QQ",
    "Scalar",
    "ExactMatrix",
    "FieldMismatchError",
    "SingularMatrixError",
    "rref",
    "rank",
    "kernel_basis",
    "subspace_intersection",
    "solve_right",
]


class FieldMismatchError(ValueError):
    """Operands live over different fields."""


class SingularMatrixError(ValueError):
    """A matrix that must be invertible is not."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    """GF(p) for a prime ``p``, or the rationals when ``characteristic == 0``."""

    __slots__ = ("characteristic", "_inv_table")

    def __init__(self, characteristic: int):
        characteristic = int(characteristic)
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or a prime, got {characteristic}")
        if characteristic >= 2**31:
            raise ValueError("prime too large for int64 elimination")
        self.characteristic = characteristic
        self._inv_table = None
        if characteristic:
            table = np.zeros(characteristic, dtype=np.int64)
            for a in range(1, characteristic):
                table[a] = pow(a, -1, characteristic)
            table.setflags(write=False)
            self._inv_table = table

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("the rationals have no finite order")
        return self.characteristic

    @property
    def dtype(self):
        return np.int64 if self.is_finite else object

    @property
    def inverse_table(self) -> np.ndarray:
        """Lookup table ``t[a] = a^-1`` (with ``t[0] = 0``); finite fields only."""
        if self._inv_table is None:
            raise ValueError("no inverse table over the rationals")
        return self._inv_table

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})" if self.is_finite else "QQ"

    def __call__(self, value) -> "Scalar":
        return Scalar(self.scalar(value), self)

    # raw scalar helpers -------------------------------------------------

    def scalar(self, value):
        """Canonical raw value: an int in ``[0, p)`` or a reduced Fraction."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} scalar used over {self}")
            return value.value
        if self.is_finite:
            if isinstance(value, Fraction):
                if value.denominator % self.characteristic == 0:
                    raise ZeroDivisionError(f"{value} has no image in {self}")
                return value.numerator * pow(value.denominator, -1, self.characteristic) % self.characteristic
            return int(value) % self.characteristic
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)

    def inv(self, value):
        if value == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.is_finite:
            return int(self._inv_table[int(value) % self.characteristic])
        return 1 / Fraction(value)

    def neg(self, value):
        return (-value) % self.characteristic if self.is_finite else -value

    def elements(self) -> list[int]:
        return list(range(self.order))

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Bring an array produced by ring operations back to canonical form."""
        if self.is_finite:
            return np.mod(arr, self.characteristic)
        return arr

    def array(self, data) -> np.ndarray:
        """Build a canonical array over this field from nested numbers."""
        if isinstance(data, np.ndarray) and data.dtype != object:
            if self.is_finite:
                return np.mod(data.astype(np.int64), self.characteristic)
            out = np.empty(data.shape, dtype=object)
            flat = out.reshape(-1)
            for k, x in enumerate(data.reshape(-1).tolist()):
                flat[k] = Fraction(x)
            return out
        raw = np.array(data, dtype=object)
        out = np.empty(raw.shape, dtype=self.dtype)
        flat_out = out.reshape(-1)
        for k, x in enumerate(raw.reshape(-1).tolist()):
            flat_out[k] = self.scalar(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.is_finite:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1 if self.is_finite else Fraction(1)
        return out

    def format(self, value) -> str:
        if self.is_finite:
            return str(int(value))
        value = Fraction(value)
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    """The prime field with ``p`` elements (cached, so fields compare by identity too)."""
    if p == 0:
        raise ValueError("GF(0) is not a field; use QQ")
    return Field(p)


QQ = Field(0)


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field.

    Arithmetic between scalars of different fields raises
    :class:`FieldMismatchError`.
    """

    value: object
    field: Field

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        return self.field.scalar(other)

    def __add__(self, other):
        return Scalar(self.field.scalar(self.value + self._coerce(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field.scalar(self.value - self._coerce(other)), self.field)

    def __rsub__(self, other):
        return Scalar(self.field.scalar(self._coerce(other) - self.value), self.field)

    def __mul__(self, other):
        return Scalar(self.field.scalar(self.value * self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field.neg(self.value), self.field)

    def __truediv__(self, other):
        return self * Scalar(self.field.inv(self._coerce(other)), self.field)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.scalar(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field.format(self.value)} in {self.field!r}"


# ---------------------------------------------------------------------------
# array-level kernels


def _rref_array(a: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.  Pivot = first nonzero row in the leftmost usable column."""
    a = a.copy()
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = field.reduce(a[r] * field.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col != 0)
        if rows.size:
            a[rows] = field.reduce(a[rows] - np.outer(col[rows], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def _rank_array(a: np.ndarray, field: Field) -> int:
    if a.size == 0:
        return 0
    return len(_rref_array(a, field)[1])


def _kernel_array(a: np.ndarray, field: Field) -> np.ndarray:
    """Rows form a basis of ``{x : a @ x = 0}``; one basis vector per free column."""
    n = a.shape[1]
    if a.shape[0] == 0:
        return field.identity(n)
    r, pivots = _rref_array(a, field)
    free = [c for c in range(n) if c not in set(pivots)]
    out = field.zeros((len(free), n))
    for k, f in enumerate(free):
        out[k, f] = 1 if field.is_finite else Fraction(1)
        for i, pc in enumerate(pivots):
            out[k, pc] = field.neg(r[i, f])
    return out


def _matmul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    if field.is_finite:
        p = field.characteristic
        # Residues are < 2**31, so chunk the inner dimension to stay in int64.
        limit = max(1, (2**62) // ((p - 1) ** 2 or 1))
        if a.shape[-1] <= limit:
            return np.mod(a @ b, p)
        acc = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for s in range(0, a.shape[-1], limit):
            acc = np.mod(acc + a[..., s:s + limit] @ b[s:s + limit], p)
        return acc
    if a.ndim == 2 and b.ndim in (1, 2):
        # rational matrices here are mostly zeros; only multiply the nonzero terms
        out = np.empty((a.shape[0],) + b.shape[1:], dtype=object)
        zero = np.zeros(b.shape[1:], dtype=np.int64).astype(object) + Fraction(0)
        for i in range(a.shape[0]):
            acc = zero.copy() if b.ndim == 2 else Fraction(0)
            for k in np.flatnonzero(a[i] != 0).tolist():
                acc = acc + a[i, k] * b[k]
            out[i] = acc
        return out
    return a.dot(b)


def _inverse_array(a: np.ndarray, field: Field) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("only square matrices have inverses")
    aug = np.concatenate([a, field.identity(n)], axis=1)
    r, pivots = _rref_array(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return r[:, n:]


def _det_array(a: np.ndarray, field: Field):
    """Determinant by Gaussian elimination."""
    a = a.copy()
    n = a.shape[0]
    det = 1 if field.is_finite else Fraction(1)
    for c in range(n):
        nz = np.flatnonzero(a[c:, c] != 0)
        if nz.size == 0:
            return 0 if field.is_finite else Fraction(0)
        k = c + int(nz[0])
        if k != c:
            a[[c, k]] = a[[k, c]]
            det = field.neg(det)
        piv = a[c, c]
        det = field.scalar(det * piv)
        inv = field.inv(piv)
        below = a[c + 1:, c]
        rows = np.flatnonzero(below != 0) + c + 1
        if rows.size:
            a[rows] = field.reduce(a[rows] - np.outer(field.reduce(a[rows, c] * inv), a[c]))
    return det


def canonical_rows(arr: np.ndarray, field: Field) -> np.ndarray:
    """Scale each row so its first nonzero entry is 1 (zero rows stay zero)."""
    arr = np.atleast_2d(arr)
    nonzero = arr != 0
    lead_idx = np.argmax(nonzero, axis=1)
    lead = arr[np.arange(arr.shape[0]), lead_idx]
    if field.is_finite:
        scale = field.inverse_table[lead.astype(np.int64)]
        return np.mod(arr * scale[:, None], field.characteristic)
    out = arr.copy()
    for i in range(arr.shape[0]):
        if lead[i] != 0:
            out[i] = arr[i] / lead[i]
    return out


# ---------------------------------------------------------------------------
# matrix type


class ExactMatrix:
    """Immutable dense matrix over a :class:`Field`.

    Zero-row matrices are allowed; they stand for the empty basis.
    """

    __slots__ = ("field", "data")

    def __init__(self, data, field: Field):
        if field.is_finite and isinstance(data, np.ndarray) and data.dtype.kind in "iu":
            arr = np.mod(data.astype(np.int64), field.characteristic)
        else:
            arr = field.array(data)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None) -> "ExactMatrix":
        """Build from nested rows; entries may be :class:`Scalar` objects.

        With Scalar entries the field is inferred, and entries from
        different fields raise :class:`FieldMismatchError`.
        """
        rows = [list(r) for r in rows]
        tagged = {x.field for r in rows for x in r if isinstance(x, Scalar)}
        if len(tagged) > 1:
            raise FieldMismatchError(f"entries from several fields: {sorted(map(repr, tagged))}")
        if tagged:
            inferred = tagged.pop()
            if field is not None and field != inferred:
                raise FieldMismatchError(f"entries over {inferred}, matrix over {field}")
            field = inferred
        if field is None:
            raise ValueError("field required when no entry carries one")
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged rows")
        return cls(rows, field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "ExactMatrix":
        return cls(field.identity(n), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "ExactMatrix":
        return cls(field.zeros((rows, cols)), field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def row_count(self) -> int:
        return self.data.shape[0]

    @property
    def col_count(self) -> int:
        return self.data.shape[1]

    def _check(self, other: "ExactMatrix"):
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            self._check(other)
            return ExactMatrix(_matmul(self.data, other.data, self.field), self.field)
        vec = self.field.array(other)
        return _matmul(self.data, vec, self.field)

    def __add__(self, other):
        self._check(other)
        return ExactMatrix(self.field.reduce(self.data + other.data), self.field)

    def __sub__(self, other):
        self._check(other)
        return ExactMatrix(self.field.reduce(self.data - other.data), self.field)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(self.field.reduce(self.data * self.field.scalar(c)), self.field)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and other.field == self.field
            and other.shape == self.shape
            and bool(np.all(other.data == self.data))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.data.reshape(-1).tolist())))

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.data.T.copy(), self.field)

    def __getitem__(self, idx):
        return self.data[idx]

    def tolist(self) -> list[list]:
        return self.data.tolist()

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(np.concatenate([self.data, other.data], axis=0), self.field)

    def rank(self) -> int:
        return _rank_array(self.data, self.field)

    def det(self):
        if self.row_count != self.col_count:
            raise ValueError("determinant of a non-square matrix")
        return _det_array(self.data, self.field)

    def inverse(self) -> "ExactMatrix":
        return ExactMatrix(_inverse_array(self.data, self.field), self.field)

    def normalized(self) -> "ExactMatrix":
        """Scale so that the first nonzero entry (row-major) is 1."""
        return ExactMatrix(canonical_rows(self.data.reshape(1, -1), self.field).reshape(self.shape), self.field)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self.data)
        return f"ExactMatrix({self.row_count}x{self.col_count} over {self.field!r}: [{body}])"


# ---------------------------------------------------------------------------
# public operations


def rref(m: ExactMatrix) -> tuple[ExactMatrix, int]:
    """Reduced row echelon form and rank of ``m``."""
    r, pivots = _rref_array(m.data, m.field)
    return ExactMatrix(r, m.field), len(pivots)


def rank(m: ExactMatrix) -> int:
    return m.rank()


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """A basis of the right kernel, one row per basis vector.

    The row count is ``m.col_count - rank(m)``.
    """
    return ExactMatrix(_kernel_array(m.data, m.field), m.field)


def subspace_intersection(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Basis (rows, in RREF) of ``rowspace(a) ∩ rowspace(b)``.

    ``a`` and ``b`` must have independent rows in a common ambient space.
    """
    a._check(b)
    if a.col_count != b.col_count:
        raise ValueError(f"ambient dimensions differ: {a.col_count} vs {b.col_count}")
    field = a.field
    if a.row_count == 0 or b.row_count == 0:
        return ExactMatrix(field.zeros((0, a.col_count)), field)
    stacked = np.concatenate([a.data, b.data], axis=0)
    # x @ a == y @ b  <=>  (x, -y) lies in the left kernel of the stack.
    left = _kernel_array(stacked.T.copy(), field)
    if left.shape[0] == 0:
        return ExactMatrix(field.zeros((0, a.col_count)), field)
    vecs = _matmul(left[:, : a.row_count], a.data, field)
    r, pivots = _rref_array(vecs, field)
    return ExactMatrix(r[: len(pivots)], field)


def solve_right(m: ExactMatrix, rhs: Iterable) -> np.ndarray | None:
    """Some ``x`` with ``m @ x == rhs``, or ``None`` when the system is inconsistent."""
    field = m.field
    b = field.array(list(rhs)).reshape(-1)
    if b.shape[0] != m.row_count:
        raise ValueError(f"rhs has length {b.shape[0]}, expected {m.row_count}")
    aug = np.concatenate([m.data, b.reshape(-1, 1)], axis=1)
    r, pivots = _rref_array(aug, field)
    n = m.col_count
    if pivots and pivots[-1] == n:
        return None
    x = field.zeros(n)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n]
    assert np.all(_matmul(m.data, x, field) == b)
    return x
