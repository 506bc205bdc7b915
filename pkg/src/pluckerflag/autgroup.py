"""Automorphism group order of a vertex-coloured graph.

Individualisation / refinement search: colour refinement to an equitable
partition, then a stabiliser chain.  The group order is the product of the
orbit lengths of the chosen base vertices, each orbit found by explicit
automorphisms (so every counted orbit element has a verified witness).
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np


def refine(adj: Sequence[Sequence[int]], colors: Sequence[int]) -> list[int]:
    """Coarsest equitable refinement; labels depend only on the coloured graph's iso type."""
    colors = list(colors)
    n_cls = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted(colors[u] for u in nbrs))) for v, nbrs in enumerate(adj)]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[s] for s in sig]
        if len(rank) == n_cls:
            return new
        colors, n_cls = new, len(rank)


def individualize(colors: Sequence[int], v: int) -> list[int]:
    out = [2 * c for c in colors]
    out[v] += 1
    return out


def _target_cell(colors: Sequence[int]) -> list[int] | None:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    big = [(len(vs), c) for c, vs in cells.items() if len(vs) > 1]
    if not big:
        return None
    return cells[min(big)[1]]


class _Search:
    def __init__(self, adj):
        self.adj = [list(a) for a in adj]
        self.adj_sets = [frozenset(a) for a in adj]
        self.leaves = 0

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        for v, nbrs in enumerate(self.adj):
            image = self.adj_sets[perm[v]]
            if len(image) != len(nbrs) or any(perm[u] not in image for u in nbrs):
                return False
        return True

    def find(self, c1: list[int], c2: list[int]) -> list[int] | None:
        """An automorphism carrying colouring ``c1`` to ``c2``, if any."""
        if Counter(c1) != Counter(c2):
            return None
        cell = _target_cell(c1)
        if cell is None:
            self.leaves += 1
            where = {c: w for w, c in enumerate(c2)}
            perm = [where[c] for c in c1]
            return perm if self.is_automorphism(perm) else None
        v = cell[0]
        colour = c1[v]
        r1 = refine(self.adj, individualize(c1, v))
        for w in (u for u, c in enumerate(c2) if c == colour):
            perm = self.find(r1, refine(self.adj, individualize(c2, w)))
            if perm is not None:
                return perm
        return None


def _orbit(start: int, gens: list[list[int]]) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def automorphism_group(adj: Sequence[Sequence[int]], colors: Sequence[int] | None = None):
    """Order of the colour-preserving automorphism group and a generating set.

    Returns ``(order, generators, base)`` where generators are permutations
    (lists) found along the stabiliser chain.
    """
    n = len(adj)
    search = _Search(adj)
    current = refine(search.adj, colors if colors is not None else [0] * n)
    order = 1
    gens: list[list[int]] = []
    base: list[int] = []
    while True:
        cell = _target_cell(current)
        if cell is None:
            break
        v = cell[0]
        level_gens: list[list[int]] = []
        orbit = {v}
        fixed_v = refine(search.adj, individualize(current, v))
        for w in cell[1:]:
            if w in orbit:
                continue
            perm = search.find(fixed_v, refine(search.adj, individualize(current, w)))
            if perm is not None:
                level_gens.append(perm)
                orbit = _orbit(v, level_gens)
        order *= len(orbit)
        gens.extend(level_gens)
        base.append(v)
        current = fixed_v
    return order, gens, base


def count_automorphisms(adj: Sequence[Sequence[int]], colors: Sequence[int] | None = None) -> int:
    return automorphism_group(adj, colors)[0]


def as_arrays(gens: list[list[int]]) -> list[np.ndarray]:
    return [np.asarray(g, dtype=np.int64) for g in gens]
