"""
The flag space of PG(3, 2)
==========================

Flags, the relatedness relation, pencils, and paths between flags.
"""

from pluckerflag import GF, geometry, related, relatedness_graph, connecting_path
from pluckerflag.flagspace import verify_prop1, verify_connectivity, pencils_of

field = GF(2)
geo = geometry(field)
print(len(geo.points), "points,", len(geo.lines), "lines,", len(geo.planes), "planes,", len(geo.flags), "flags")

# Two flags are related when they differ in at most one component.
a, b = geo.flags[0], geo.flags[1]
print("first two flags related:", related(a, b))

# Every flag sits on exactly one pencil of each type
for pencil in pencils_of(a):
    print("type", pencil.pencil_type, "pencil with", len(pencil.members()), "flags")

graph = relatedness_graph(field)
print("each flag has", graph.neighbors.shape[1], "neighbours")

# The maximal cliques of the relatedness graph are exactly the pencils.
rep = verify_prop1(field)
print(rep.counts["maximal_cliques"], "maximal cliques, all pencils:", rep.passed)

# A path through two tetrahedra joins any two flags in at most 12 steps.
far = next(f for f in geo.flags if not related(a, f))
path = connecting_path(a, far)
print("path of", len(path) - 1, "steps")
for f in path:
    print("  ", f.point.coords, f.line.pluecker, f.plane.coords)

rep = verify_connectivity(field)
print("all", rep.counts["pairs"], "pairs joined; longest path", rep.counts["longest_path"], "; diameter", rep.counts["diameter"])
