"""Exterior and tensor algebra on V = K^4.

Conventions (fixed once, used everywhere):

* ``Λ²V`` has basis ``b_j ∧ b_k`` (j < k) in the order of :data:`PAIRS`;
  ``V* ∧ V*`` likewise, and the two are dual via
  ``<q∧r, e*∧w*> = <q,e*><r,w*> - <r,e*><q,w*>``, so ``b_j∧b_k`` pairs to 1
  with ``b_j*∧b_k*``.
* ``Λ³V`` coordinates are indexed by the omitted basis vector ``m``: entry
  ``m`` is the coefficient of ``b_a∧b_b∧b_c`` with ``{a<b<c} = {0..3} - {m}``.
* ``Λ⁴V`` is identified with K by ``b0∧b1∧b2∧b3 -> 1``.
* The 96 coordinates of ``V ⊗ Λ²V ⊗ V*`` sit at ``24*i + 4*jk + l``.

Vectors, bivectors, covectors and tensors are numpy arrays over the
field's dtype; most functions broadcast over leading axes.
"""

from __future__ import annotations


import numpy as np

from .exactalg import ExactMatrix, Field, SingularMatrixError, _inverse_array, _rank_array, canonical_rows
from .projgeom import PAIR_INDEX, PAIRS, Flag, ProjLine, _wedge_with_matrix

__all__ = [
    "tensor_index",
    "wedge",
    "wedge3",
    "wedge_bivectors",
    "pairing",
    "pairing_det",
    "klein",
    "is_decomposable",
    "contract",
    "exterior_square",
    "inverse_transpose",
    "klein_polarity",
    "segre_product",
    "embed_flag",
    "segre_membership",
]

# (sign, pair) so that b_j∧b_k∧b_l∧b_m reads off the 4-form coefficient
_COMPLEMENT = {(0, 1): (1, (2, 3)), (0, 2): (-1, (1, 3)), (0, 3): (1, (1, 2)),
               (1, 2): (1, (0, 3)), (1, 3): (-1, (0, 2)), (2, 3): (1, (0, 1))}


def tensor_index(i: int, jk: int, l: int) -> int:
    """Position of ``b_i ⊗ (b_j∧b_k) ⊗ b_l*``; ``jk`` indexes :data:`PAIRS`."""
    return 24 * i + 4 * jk + l


def _arr(x, field: Field) -> np.ndarray:
    if isinstance(x, np.ndarray) and (x.dtype == field.dtype or (field.is_finite and x.dtype.kind in "iu")):
        return field.reduce(x.astype(field.dtype)) if field.is_finite else x
    return field.array(x)


def wedge(q, r, field: Field) -> np.ndarray:
    """``q ∧ r`` for vectors (broadcast over leading axes)."""
    q, r = _arr(q, field), _arr(r, field)
    cols = [q[..., j] * r[..., k] - q[..., k] * r[..., j] for j, k in PAIRS]
    return field.reduce(np.stack(cols, axis=-1))


def wedge3(p, t, field: Field) -> np.ndarray:
    """``p ∧ t`` in Λ³V (4 coordinates indexed by the omitted basis vector)."""
    p, t = _arr(p, field), _arr(t, field)
    cols = []
    for m in range(4):
        a, b, c = [i for i in range(4) if i != m]
        cols.append(p[..., a] * t[..., PAIR_INDEX[(b, c)]]
                    - p[..., b] * t[..., PAIR_INDEX[(a, c)]]
                    + p[..., c] * t[..., PAIR_INDEX[(a, b)]])
    return field.reduce(np.stack(cols, axis=-1))


def wedge_bivectors(s, t, field: Field):
    """Coefficient of ``s ∧ t`` on ``b0∧b1∧b2∧b3``."""
    s, t = _arr(s, field), _arr(t, field)
    total = 0
    for jk, (sign, comp) in _COMPLEMENT.items():
        total = total + sign * s[..., PAIR_INDEX[jk]] * t[..., PAIR_INDEX[comp]]
    return field.reduce(total) if isinstance(total, np.ndarray) else field.scalar(total)


def pairing(t, u, field: Field):
    """Canonical pairing of Λ²V with V*∧V* in coordinates."""
    t, u = _arr(t, field), _arr(u, field)
    return field.reduce((t * u).sum(axis=-1)) if t.ndim > 1 else field.scalar((t * u).sum())


def pairing_det(q, r, e, w, field: Field):
    """``<q∧r, e*∧w*>`` as the 2x2 determinant of scalar pairings."""
    q, r, e, w = (_arr(x, field) for x in (q, r, e, w))
    qe, re_, qw, rw = (field.scalar((a * b).sum()) for a, b in ((q, e), (r, e), (q, w), (r, w)))
    return field.scalar(qe * rw - re_ * qw)


def klein(g: ProjLine) -> np.ndarray:
    """Image of the line under the Klein mapping (its Plücker vector)."""
    return g.field.array(list(g.pluecker))


def is_decomposable(t, field: Field) -> bool:
    """Whether ``t`` is a pure wedge ``q ∧ r``.

    Decided by the dimension of ``{x : x ∧ t = 0}``, which is 2 for pure
    wedges and 0 otherwise.  The quadratic test ``t ∧ t = 0`` is useless in
    characteristic 2, so it is not used.
    """
    t = [field.scalar(x) for x in list(t)]
    if all(x == 0 for x in t):
        raise ValueError("the zero bivector has no decomposability type")
    dim_t = 4 - _rank_array(_wedge_with_matrix(t, field), field)
    return dim_t == 2


def contract(t, e, field: Field) -> np.ndarray:
    """Inner product ``t ⌟ e*``; on the basis ``(b_j∧b_k) ⌟ b_l* = δ_jl b_k - δ_kl b_j``."""
    t, e = _arr(t, field), _arr(e, field)
    out = [0, 0, 0, 0]
    for n, (j, k) in enumerate(PAIRS):
        out[k] = out[k] + t[..., n] * e[..., j]
        out[j] = out[j] - t[..., n] * e[..., k]
    zero = field.zeros(np.broadcast_shapes(t.shape[:-1], e.shape[:-1]))
    return field.reduce(np.stack([o + zero for o in out], axis=-1))


def exterior_square(m: ExactMatrix) -> ExactMatrix:
    """6x6 matrix of ``q∧r -> (mq)∧(mr)`` on the basis of :data:`PAIRS`."""
    if m.shape != (4, 4):
        raise ValueError("exterior_square expects a 4x4 matrix")
    if m.det() == 0:
        raise SingularMatrixError("exterior square of a singular matrix")
    f = m.field
    cols = m.data.T
    out = np.stack([wedge(cols[j], cols[k], f) for j, k in PAIRS], axis=1)
    return ExactMatrix(out, f)


def inverse_transpose(m: ExactMatrix) -> ExactMatrix:
    """``(m^T)^-1``, the action on V* that preserves the pairing with V."""
    return ExactMatrix(_inverse_array(m.data.T.copy(), m.field), m.field)


def klein_polarity(field: Field) -> ExactMatrix:
    """Gram matrix of ``(s, t) -> coefficient of s∧t``; read as ``d : Λ²V -> V*∧V*``."""
    d = field.zeros((6, 6))
    for jk, (sign, comp) in _COMPLEMENT.items():
        d[PAIR_INDEX[jk], PAIR_INDEX[comp]] = field.scalar(sign)
    return ExactMatrix(d, field)


def segre_product(p, t, e, field: Field) -> np.ndarray:
    """``p ⊗ t ⊗ e*`` flattened to 96 coordinates (broadcast over leading axes)."""
    p, t, e = _arr(p, field), _arr(t, field), _arr(e, field)
    out = p[..., :, None, None] * t[..., None, :, None] * e[..., None, None, :]
    return field.reduce(out.reshape(out.shape[:-3] + (96,)))


def embed_flag(f: Flag) -> np.ndarray:
    """The flag's point ``p ⊗ γ(g) ⊗ e*`` in canonical form (first nonzero entry 1)."""
    field = f.field
    x = segre_product(f.point.vector(), klein(f.line), f.plane.vector(), field)
    return canonical_rows(x.reshape(1, 96), field)[0]


def segre_membership(t, field: Field) -> tuple[bool, tuple | None]:
    """Whether a nonzero tensor is a pure product ``p ⊗ m ⊗ e*``.

    Both the 4x24 and the 24x4 flattenings must have rank 1.  On success the
    canonical factors ``(p, m, e*)`` are returned; the original tensor is
    their product up to a nonzero scalar.
    """
    x = _arr(t, field).reshape(96)
    if not np.any(x != 0):
        raise ValueError("the zero tensor is not a projective point")
    cube = x.reshape(4, 6, 4)
    left = cube.reshape(4, 24)
    right = cube.reshape(24, 4)
    if _rank_array(left, field) != 1 or _rank_array(right, field) != 1:
        return False, None
    i, jk, l = (int(a[0]) for a in np.nonzero(cube))
    p = canonical_rows(cube[:, jk, l].reshape(1, 4), field)[0]
    m = canonical_rows(cube[i, :, l].reshape(1, 6), field)[0]
    e = canonical_rows(cube[i, jk, :].reshape(1, 4), field)[0]
    return True, (p, m, e)
