"""
Collineations, dualities and nothing else
=========================================

Every bijection of flags that preserves relatedness comes from a
collineation or a duality.  Here we build such maps, recover their
matrices, and count all of them over GF(2).
"""

import numpy as np

from pluckerflag import GF, Collineation, Duality, FlagMap, decompose, is_plucker_transformation
from pluckerflag.transform import random_invertible, verify_automorphism_count

field = GF(3)
rng = np.random.default_rng(0)

k = Collineation(random_invertible(field, rng))
d = Duality(random_invertible(field, rng))

for x in (k, d):
    a = FlagMap.from_transformation(x)
    print(type(x).__name__, "preserves relatedness:", is_plucker_transformation(a))
    y = decompose(a)
    print("  recovered", type(y).__name__, "same matrix:", y == x)

# composing two dualities gives a collineation
both = FlagMap.from_duality(d).then(FlagMap.from_duality(d))
print("duality twice ->", type(decompose(both)).__name__)

# swapping two unrelated flags breaks relatedness somewhere
print("transposition is Plücker:", is_plucker_transformation(FlagMap.transposition(GF(2), 0, 314)))

# Over GF(2) the automorphism group of the flag space has 2 * |PGL(4,2)| elements
rep = verify_automorphism_count(GF(2))
print("automorphisms:", rep.counts["automorphisms"])
print("generators that are dualities:", rep.counts["generators_duality"])
