"""The flag space of PG(3, K): relatedness, pencils, cliques, paths, automorphisms."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exactalg import Field
from .projgeom import Flag, FiniteGeometry, ProjLine, UnsupportedEnumerationError, geometry, incident
from .reports import Report

__all__ = [
    "Pencil",
    "RelatednessGraph",
    "NotAdjacentError",
    "SizeLimitError",
    "related",
    "pencils_of",
    "pencil_through",
    "relatedness_graph",
    "verify_prop1",
    "verify_two_net",
    "verify_two_nets",
    "connecting_path",
    "verify_connectivity",
    "is_closed_4path",
    "closed_4path_types",
    "verify_closed_4path",
    "automorphism_count",
    "automorphism_group",
]


class NotAdjacentError(ValueError):
    """Two flags that should be adjacent (related and distinct) are not."""


class SizeLimitError(ValueError):
    """An exhaustive computation was requested over a field that is too large."""


def related(a: Flag, b: Flag) -> bool:
    """At most one of the three components differs."""
    return sum(x != y for x, y in zip(a.components(), b.components())) <= 1


# fixed components for each pencil type: type i varies the i-dimensional one
_FIXED = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


@dataclass(frozen=True)
class Pencil:
    """All flags sharing the two components other than the ``pencil_type``-dimensional one.

    ``fixed`` holds those two components in (point, line, plane) order.
    """

    pencil_type: int
    fixed: tuple

    def __post_init__(self):
        if self.pencil_type not in (0, 1, 2):
            raise ValueError(f"pencil type must be 0, 1 or 2, not {self.pencil_type}")
        if not incident(*self.fixed):
            raise ValueError("the fixed components of a pencil must be incident")

    @property
    def field(self) -> Field:
        return self.fixed[0].field

    def __contains__(self, flag: Flag) -> bool:
        comps = flag.components()
        return all(comps[i] == c for i, c in zip(_FIXED[self.pencil_type], self.fixed))

    def members(self) -> list[Flag]:
        """Member flags (finite fields only), in enumeration order."""
        if not self.field.is_finite:
            raise UnsupportedEnumerationError("pencils over QQ are infinite")
        geo = geometry(self.field)
        return [geo.flags[i] for i in self.member_ids(geo)]

    def member_ids(self, geo: FiniteGeometry) -> np.ndarray:
        t = self.pencil_type
        if t == 0:
            li, ei = geo.line_index[self.fixed[0]], geo.plane_index[self.fixed[1]]
            return geo.flag_id(geo.line_points[li], li, ei)
        if t == 2:
            pi, li = geo.point_index[self.fixed[0]], geo.line_index[self.fixed[1]]
            return geo.flag_id(pi, li, geo.line_planes[li])
        pi, ei = geo.point_index[self.fixed[0]], geo.plane_index[self.fixed[1]]
        return geo.flag_id(pi, geo.pencil_lines[(pi, ei)], ei)


def pencils_of(f: Flag) -> tuple[Pencil, Pencil, Pencil]:
    """The unique pencils of type 0, 1 and 2 through ``f``."""
    comps = f.components()
    return tuple(Pencil(t, tuple(comps[i] for i in _FIXED[t])) for t in (0, 1, 2))


def pencil_through(a: Flag, b: Flag) -> Pencil:
    """The pencil joining two adjacent flags."""
    diff = [i for i, (x, y) in enumerate(zip(a.components(), b.components())) if x != y]
    if len(diff) != 1:
        raise NotAdjacentError(f"flags differ in {len(diff)} components; adjacency needs exactly 1")
    return pencils_of(a)[diff[0]]


# ---------------------------------------------------------------------------
# index-level structure for finite fields


class RelatednessGraph:
    """The graph of adjacent flags of PG(3, q), on flag indices.

    ``neighbors[f]`` lists the 3q flags adjacent to ``f``, grouped by the
    type of the joining pencil (q of each, types 0, 1, 2 in that order).
    ``pencil_ids[f, t]`` is the index of the type-t pencil through ``f``
    in ``pencils``; pencils are numbered type 0 first, then 1, then 2.
    """

    def __init__(self, geo: FiniteGeometry):
        self.geo = geo
        q = geo.q
        k = q + 1
        n = len(geo.flags)
        ids = geo.flag_ids
        flag_range = np.arange(n)
        line = flag_range // (k * k)
        a = (flag_range // k) % k  # position of the point on the line
        b = flag_range % k  # position of the plane through the line
        nb = np.empty((n, 3 * q), dtype=np.int64)
        for s in range(1, k):
            nb[:, s - 1] = line * k * k + ((a + s) % k) * k + b  # vary point
            nb[:, 2 * q + s - 1] = line * k * k + a * k + (b + s) % k  # vary plane
        for f, (pi, li, ei) in enumerate(ids.tolist()):
            others = [l for l in geo.pencil_lines[(pi, ei)].tolist() if l != li]
            nb[f, q:2 * q] = geo.flag_id(pi, np.array(others), ei)
        self.neighbors = nb
        self.sorted_neighbors = np.sort(nb, axis=1)

        # pencil numbering
        keys0 = ids[:, 1] * len(geo.planes) + ids[:, 2]
        keys1 = ids[:, 0] * len(geo.planes) + ids[:, 2]
        keys2 = ids[:, 0] * len(geo.lines) + ids[:, 1]
        pencil_ids = np.empty((n, 3), dtype=np.int64)
        self.pencils: list[tuple[int, int, int]] = []
        offset = 0
        for t, keys, cols in ((0, keys0, (1, 2)), (1, keys1, (0, 2)), (2, keys2, (0, 1))):
            uniq, inv = np.unique(keys, return_inverse=True)
            pencil_ids[:, t] = inv + offset
            first = np.zeros(len(uniq), dtype=np.int64)
            first[inv[::-1]] = flag_range[::-1]
            self.pencils.extend((t, int(ids[f, cols[0]]), int(ids[f, cols[1]])) for f in first)
            offset += len(uniq)
        self.pencil_ids = pencil_ids
        members = [[] for _ in self.pencils]
        for f in range(n):
            for t in range(3):
                members[pencil_ids[f, t]].append(f)
        self.pencil_members = np.array(members, dtype=np.int64)

    @property
    def field(self) -> Field:
        return self.geo.field

    @property
    def vertex_count(self) -> int:
        return len(self.geo.flags)

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and bool(np.sum(self.geo.flag_ids[i] != self.geo.flag_ids[j]) == 1)

    def related_ids(self, i: int, j: int) -> bool:
        return bool(np.sum(self.geo.flag_ids[i] != self.geo.flag_ids[j]) <= 1)

    def joining_type(self, i: int, j: int) -> int:
        diff = np.flatnonzero(self.geo.flag_ids[i] != self.geo.flag_ids[j])
        if diff.size != 1:
            raise NotAdjacentError(f"flags {i} and {j} are not adjacent")
        return int(diff[0])

    def neighbor_sets(self) -> list[frozenset]:
        return [frozenset(row) for row in self.neighbors.tolist()]

    def sparse(self):
        from scipy.sparse import csr_matrix

        n = self.vertex_count
        rows = np.repeat(np.arange(n), self.neighbors.shape[1])
        return csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, self.neighbors.reshape(-1))), shape=(n, n))


@lru_cache(maxsize=None)
def relatedness_graph(field: Field) -> RelatednessGraph:
    return RelatednessGraph(geometry(field))


# ---------------------------------------------------------------------------
# maximal cliques


def _bron_kerbosch(candidates: set, adj: list[frozenset]) -> list[frozenset]:
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in list(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(candidates), set())
    return out


def maximal_cliques(graph: RelatednessGraph) -> set[frozenset]:
    """All maximal sets of mutually related flags.

    Any maximal clique with two members contains an edge ``(a, b)`` and so
    lies inside ``{a, b} ∪ (N(a) ∩ N(b))``.  When that set is itself a
    clique it is the only maximal clique through the edge; otherwise the
    candidates are searched exhaustively.
    """
    adj = graph.neighbor_sets()
    cliques: set[frozenset] = set()
    for a, nbrs in enumerate(adj):
        if not nbrs:
            cliques.add(frozenset([a]))
        for b in nbrs:
            if b < a:
                continue
            closure = (nbrs & adj[b]) | {a, b}
            if all(v in adj[u] for u, v in combinations(closure, 2)):
                cliques.add(frozenset(closure))
            else:
                # every vertex extending a clique through a, b lies in the closure
                for c in _bron_kerbosch(closure - {a, b}, adj):
                    cliques.add(c | {a, b})
    return cliques


def verify_prop1(field: Field) -> Report:
    """Maximal cliques of the relatedness graph coincide with the pencils."""
    g = relatedness_graph(field)
    rep = Report("maximal cliques of ~ are exactly the pencils", field.characteristic)
    cliques = maximal_cliques(g)
    pencils = {frozenset(m.tolist()) for m in g.pencil_members}
    types = Counter(t for t, _, _ in g.pencils)
    rep.counts.update(
        flags=g.vertex_count,
        maximal_cliques=len(cliques),
        pencils=len(pencils),
        pencils_type0=types[0],
        pencils_type1=types[1],
        pencils_type2=types[2],
    )
    sizes = sorted({len(c) for c in cliques})
    rep.counts["clique_sizes"] = sizes
    for c in sorted(cliques - pencils, key=sorted)[:10]:
        rep.violation({"clique_not_pencil": sorted(c)})
    for c in sorted(pencils - cliques, key=sorted)[:10]:
        rep.violation({"pencil_not_maximal_clique": sorted(c)})
    q = field.order
    rep.check("clique sizes", [q + 1], sizes)
    rep.check("cliques == pencils", True, cliques == pencils)
    return rep


# ---------------------------------------------------------------------------
# 2-nets


def verify_two_net(g: ProjLine) -> Report:
    """Check that the flags on ``g`` with their type-0 and type-2 pencils form a 2-net."""
    field = g.field
    if not field.is_finite:
        raise UnsupportedEnumerationError("2-net check needs a finite field")
    graph = relatedness_graph(field)
    geo = graph.geo
    li = geo.line_index[g]
    k = geo.q + 1
    on_g = set(range(li * k * k, (li + 1) * k * k))
    rep = Report("flags on a line with their point and plane pencils form a 2-net", field.characteristic)
    families = {0: set(), 1: set(), 2: set()}
    for f in on_g:
        for t in range(3):
            pid = int(graph.pencil_ids[f, t])
            if set(graph.pencil_members[pid].tolist()) <= on_g:
                families[t].add(pid)
    rep.counts.update(flags=len(on_g), b0=len(families[0]), b1=len(families[1]), b2=len(families[2]))
    rep.check("B1[g] empty", 0, len(families[1]))
    for f in on_g:
        for t in (0, 2):
            hits = sum(f in set(graph.pencil_members[p].tolist()) for p in families[t])
            if hits != 1:
                rep.violation({"flag": f, "family": t, "pencils_through": hits})
    meet_sizes = set()
    for p0 in families[0]:
        for p2 in families[2]:
            common = set(graph.pencil_members[p0].tolist()) & set(graph.pencil_members[p2].tolist())
            meet_sizes.add(len(common))
            if len(common) != 1:
                rep.violation({"pencils": (p0, p2), "meet": len(common)})
    rep.counts["meet_sizes"] = sorted(meet_sizes)
    smallest = min(len(graph.pencil_members[p]) for t in (0, 2) for p in families[t])
    rep.counts["smallest_pencil"] = smallest
    rep.check("pencils have >= 3 flags", True, smallest >= 3)
    return rep


def verify_two_nets(field: Field) -> Report:
    """:func:`verify_two_net` for every line."""
    geo = geometry(field)
    rep = Report("2-net on every line", field.characteristic)
    sizes = set()
    for g in geo.lines:
        sub = verify_two_net(g)
        sizes.add((sub.counts["flags"], sub.counts["b0"], sub.counts["b1"], sub.counts["b2"]))
        for c in sub.checks:
            if not c["pass"]:
                rep.violation({"line": list(g.pluecker), "check": c["name"]})
        for w in sub.violations:
            rep.violation({"line": list(g.pluecker), **w})
    rep.counts.update(lines=len(geo.lines), net_shapes=sorted(sizes))
    q = field.order
    rep.check("(|F[g]|, |B0|, |B1|, |B2|)", [(k := q + 1) * k, k, 0, k], list(sizes.pop()) if len(sizes) == 1 else sorted(sizes))
    return rep


# ---------------------------------------------------------------------------
# connectivity


def _tetra_side(geo: FiniteGeometry, start: tuple, mid: tuple) -> list[tuple] | None:
    """Six related steps from ``start`` to ``mid`` through a tetrahedron.

    Needs the lines skew, the mid point off the start plane and the start
    point off the mid plane.  Returns ``None`` otherwise.
    """
    p, g, e = start
    qq, h, phi = mid
    if geo.lines_meet[g, h] or geo.point_in_plane[qq, e] or geo.point_in_plane[p, phi]:
        return None
    p1 = geo.meet_point(g, phi)
    p2 = geo.meet_point(h, e)
    g12 = geo.line_through(p1, p2)
    return [(p, g, e), (p1, g, e), (p1, g12, e), (p1, g12, phi), (p2, g12, phi), (p2, h, phi), (qq, h, phi)]


def _dedupe(seq):
    out = [seq[0]]
    for x in seq[1:]:
        if x != out[-1]:
            out.append(x)
    return out


def _bfs_path(graph: RelatednessGraph, a: int, b: int) -> list[int]:
    prev = {a: a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in graph.neighbors[x].tolist():
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def connecting_path_ids(geo: FiniteGeometry, a: int, b: int) -> tuple[list[int], str]:
    """Flag indices of a path from ``a`` to ``b`` and the method that produced it.

    Methods, tried in order: ``"trivial"`` (related endpoints), ``"two-tetrahedra"``
    (intermediate flag with a line skew to both lines, chosen first in
    enumeration order), ``"one-tetrahedron"`` (the end flags themselves span
    a tetrahedron) and ``"bfs"`` (shortest path).  The last two only occur
    when no common skew line exists, which happens over GF(2).
    """
    ta, tb = tuple(geo.flag_ids[a].tolist()), tuple(geo.flag_ids[b].tolist())
    if sum(x != y for x, y in zip(ta, tb)) <= 1:
        return ([a] if a == b else [a, b]), "trivial"
    (p, g, e), (p2, g2, e2) = ta, tb
    meet = geo.lines_meet
    for h in np.flatnonzero(~meet[g] & ~meet[g2]).tolist():
        pts = [x for x in geo.line_points[h].tolist() if not geo.point_in_plane[x, e] and not geo.point_in_plane[x, e2]]
        pls = [y for y in geo.line_planes[h].tolist() if not geo.point_in_plane[p, y] and not geo.point_in_plane[p2, y]]
        if pts and pls:
            mid = (pts[0], h, pls[0])
            first = _tetra_side(geo, ta, mid)
            second = _tetra_side(geo, tb, mid)
            seq = _dedupe(first + second[::-1][1:])
            return [int(x) for x in geo.flag_id(*np.array(seq).T)], "two-tetrahedra"
    direct = _tetra_side(geo, ta, tb)
    if direct is not None:
        return [int(x) for x in geo.flag_id(*np.array(_dedupe(direct)).T)], "one-tetrahedron"
    return _bfs_path(relatedness_graph(geo.field), a, b), "bfs"


def connecting_path(a: Flag, b: Flag) -> list[Flag]:
    """A chain of pairwise related flags from ``a`` to ``b`` of at most 12 steps."""
    if a.field != b.field:
        raise ValueError("flags over different fields")
    if not a.field.is_finite:
        raise UnsupportedEnumerationError("path search needs a finite field")
    geo = geometry(a.field)
    ids, _ = connecting_path_ids(geo, geo.flag_index[a], geo.flag_index[b])
    return [geo.flags[i] for i in ids]


def verify_connectivity(field: Field, sample: int | None = None, seed: int = 0) -> Report:
    """Build a path for every ordered pair of flags (or ``sample`` random pairs) and validate each step.

    Also reports connectivity and the exact diameter of the relatedness graph.
    """
    from scipy.sparse.csgraph import connected_components, shortest_path

    graph = relatedness_graph(field)
    geo = graph.geo
    n = graph.vertex_count
    rep = Report("(F, ~) is connected; constructed paths have <= 12 steps", field.characteristic)
    methods = {"trivial": 0, "two-tetrahedra": 0, "one-tetrahedron": 0, "bfs": 0}
    longest = 0
    pairs = 0
    ids = geo.flag_ids
    if sample is None:
        todo = ((a, b) for a in range(n) for b in range(n))
    else:
        rng = np.random.default_rng(seed)
        todo = map(tuple, rng.integers(0, n, size=(sample, 2)).tolist())
    for a, b in todo:
        pairs += 1
        path, method = connecting_path_ids(geo, a, b)
        methods[method] += 1
        steps = len(path) - 1
        longest = max(longest, steps)
        if path[0] != a or path[-1] != b or steps > 12:
            rep.violation({"pair": (a, b), "steps": steps})
            continue
        arr = ids[path]
        diffs = (arr[1:] != arr[:-1]).sum(axis=1)
        if np.any(diffs > 1):
            rep.violation({"pair": (a, b), "unrelated_step": int(np.argmax(diffs > 1))})
    n_comp, _ = connected_components(graph.sparse(), directed=False)
    dist = shortest_path(graph.sparse(), unweighted=True, directed=False)
    rep.counts.update(
        flags=n,
        mode="exhaustive" if sample is None else "sampled",
        pairs=pairs,
        longest_path=longest,
        components=int(n_comp),
        diameter=int(dist.max()),
        **{f"method_{k}": v for k, v in methods.items()},
    )
    rep.check("components", 1, int(n_comp))
    rep.check("longest constructed path <= 12", True, longest <= 12)
    return rep


# ---------------------------------------------------------------------------
# closed 4-paths


def is_closed_4path(flags: list[Flag]) -> bool:
    """Consecutive flags adjacent (cyclically), both diagonals unrelated."""
    if len(flags) != 4:
        return False
    for i in range(4):
        x, y = flags[i], flags[(i + 1) % 4]
        if x == y or not related(x, y):
            return False
    return not related(flags[0], flags[2]) and not related(flags[1], flags[3])


def closed_4path_types(flags: list[Flag]) -> tuple[int, int, int, int]:
    if not is_closed_4path(flags):
        raise NotAdjacentError("not a closed 4-path")
    return tuple(pencil_through(flags[i], flags[(i + 1) % 4]).pencil_type for i in range(4))


def verify_closed_4path(field: Field) -> Report:
    """No closed 4-path of flags uses a pencil of type 1 (exhaustive)."""
    graph = relatedness_graph(field)
    adj = graph.neighbor_sets()
    rep = Report("closed 4-paths contain no pencil of type 1", field.characteristic)
    cycles = 0
    type_patterns = set()
    for f1 in range(graph.vertex_count):
        for f2, f4 in combinations(sorted(adj[f1]), 2):
            if f4 in adj[f2]:
                continue
            for f3 in adj[f2] & adj[f4]:
                if f3 == f1 or f3 in adj[f1]:
                    continue
                cycles += 1
                types = tuple(graph.joining_type(x, y) for x, y in ((f1, f2), (f2, f3), (f3, f4), (f4, f1)))
                type_patterns.add(types)
                if 1 in types:
                    rep.violation({"cycle": (f1, f2, f3, f4), "types": types})
    rep.counts.update(cycles=cycles, type_patterns=sorted(type_patterns))
    rep.check("type-1 pencils in closed 4-paths", 0, rep.counts.get("violation_count", 0))
    return rep


# ---------------------------------------------------------------------------
# automorphisms


def flag_pencil_incidence(field: Field) -> tuple[list[list[int]], list[int]]:
    """Bipartite flag/pencil incidence graph: flags are ``0..n-1``, pencils follow."""
    graph = relatedness_graph(field)
    n = graph.vertex_count
    adj: list[list[int]] = [[] for _ in range(n + len(graph.pencils))]
    for f in range(n):
        for t in range(3):
            p = n + int(graph.pencil_ids[f, t])
            adj[f].append(p)
            adj[p].append(f)
    colors = [0] * n + [1] * len(graph.pencils)
    return adj, colors


def automorphism_group(field: Field):
    """Order and generators of the automorphism group of the flag/pencil incidence graph.

    Flags and pencils are coloured apart, so automorphisms map flags to
    flags.  Generators are returned as permutations of the flag indices.
    """
    from .autgroup import automorphism_group as _aut

    if field.characteristic != 2:
        raise SizeLimitError("automorphism counting is limited to GF(2)")
    adj, colors = flag_pencil_incidence(field)
    order, gens, _ = _aut(adj, colors)
    n = relatedness_graph(field).vertex_count
    return order, [np.asarray(g[:n], dtype=np.int64) for g in gens]


def automorphism_count(field: Field) -> int:
    return automorphism_group(field)[0]
