"""
Extending flag maps to the ambient space
========================================

A collineation f acts on V ⊗ Λ²V ⊗ V* as the Kronecker product of f, its
exterior square and its inverse transpose.  A duality needs the Klein
polarity and a swap of the outer factors.  Either way the 96x96 matrix
carries flag images to flag images.
"""

import numpy as np

from pluckerflag import GF, Collineation, Duality, FlagMap, extend_to_collineation, build_variety_model
from pluckerflag.exactalg import _matmul, canonical_rows
from pluckerflag.flagvariety import verify_uniqueness_on_span
from pluckerflag.transform import random_invertible

field = GF(3)
rng = np.random.default_rng(1)
model = build_variety_model(field)

for x in (Collineation(random_invertible(field, rng)), Duality(random_invertible(field, rng))):
    a = FlagMap.from_transformation(x)
    big = extend_to_collineation(a)
    moved = canonical_rows(_matmul(model.images, big.data.T.copy(), field), field)
    print(type(x).__name__, big.shape, "flag images land on flag images:", bool(np.array_equal(moved, model.images[a.table])))

# On the 64-dim span the extension is unique up to a scalar
a = FlagMap.from_transformation(Duality(random_invertible(GF(2), rng)))
rep = verify_uniqueness_on_span(a)
for c in rep.checks:
    print(f"{c['name']}: {c['computed']}")
