"""Exact computations on the flags of PG(3, K) and their embedding in V ⊗ Λ²V ⊗ V*.

Supported fields are the prime fields ``GF(p)`` and the rationals ``QQ``.
"""

from .exactalg import GF, QQ, ExactMatrix, Field, FieldMismatchError, Scalar, kernel_basis, rank, rref, solve_right, subspace_intersection
from .flagspace import (
    Pencil,
    RelatednessGraph,
    automorphism_count,
    connecting_path,
    pencil_through,
    pencils_of,
    related,
    relatedness_graph,
    verify_closed_4path,
    verify_prop1,
    verify_two_net,
)
from .flagvariety import (
    build_incidence_maps,
    build_variety_model,
    extend_to_collineation,
    membership_i01,
    membership_i12,
    span_report,
    variety_related,
    verify_eq9_eq10,
    verify_prop4,
    verify_prop5,
    verify_uniqueness_on_span,
)
from .multilinear import contract, embed_flag, exterior_square, inverse_transpose, is_decomposable, klein, klein_polarity, segre_membership
from .projgeom import Flag, ProjLine, ProjPlane, ProjPoint, enumerate_all, geometry, incident, join, make_flag, meet_planes
from .reports import Report
from .transform import Collineation, Duality, FlagMap, LineMap, apply_collineation, apply_duality, decompose, induced_line_map, is_plucker_transformation

__all__ = [name for name in dir() if not name.startswith("_")]
