"""
The flag variety inside a 96-dimensional space
==============================================

A flag (P, g, e) becomes the tensor p ⊗ (q∧r) ⊗ e* in V ⊗ Λ²V ⊗ V*.
Two linear maps cut out the incidences, and the images span a 64-dim
subspace.  In characteristic 3 the obvious generating flags fall one short.
"""

from pluckerflag import GF, QQ, build_incidence_maps, span_report
from pluckerflag.flagvariety import verify_prop4, verify_prop5

for field in (GF(2), GF(3), GF(5), QQ):
    print(field, build_incidence_maps(field).dims)

# Segre points p⊗t⊗e* in both kernels: exactly the flags (t runs over all bivectors)
rep = verify_prop5(GF(2))
print(rep.counts["segre_points"], "Segre points,", rep.counts["in_subspace"], "in the subspace")

# Lines inside the variety are exactly the pencils
rep = verify_prop4(GF(2))
print("pencil lines inside:", rep.counts["pencil_lines_inside"], "unrelated pairs leaving:", rep.counts["unrelated_pairs_leaving"])

# Flags through the tetrahedron vertices (W_P) and through the unit points (W_U)
for field in (GF(2), GF(3), GF(5), QQ):
    r = span_report(field)
    print(field, "W_P", r.dim_wp, "W_U", r.dim_wu, "W_P+W_U", r.dim_wp_plus_wu, "span", r.dim_span,
          "special flag outside" if r.special_flag_outside else "")
