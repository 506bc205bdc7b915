import itertools

import networkx as nx
import pytest

from pluckerflag.autgroup import count_automorphisms
from pluckerflag.exactalg import GF
from pluckerflag.flagspace import (
    NotAdjacentError,
    SizeLimitError,
    automorphism_count,
    closed_4path_types,
    connecting_path,
    is_closed_4path,
    maximal_cliques,
    pencil_through,
    pencils_of,
    related,
    relatedness_graph,
    verify_closed_4path,
    verify_connectivity,
    verify_prop1,
    verify_two_net,
    verify_two_nets,
)
from pluckerflag.projgeom import ProjPlane, ProjPoint, geometry, join, make_flag

GF2, GF3 = GF(2), GF(3)


def flag(p, a, b, e, f=GF2):
    return make_flag(ProjPoint(p, f), join(ProjPoint(a, f), ProjPoint(b, f)), ProjPlane(e, f))


F0 = flag((1, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
F2 = flag((0, 0, 1, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0))


def as_nx(graph):
    g = nx.Graph()
    g.add_nodes_from(range(graph.vertex_count))
    for a, row in enumerate(graph.neighbors.tolist()):
        g.add_edges_from((a, b) for b in row)
    return g


def test_related_examples():
    assert related(F0, F0)
    other = flag((0, 1, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
    assert related(F0, other)
    assert not related(F0, F2)


def test_pencils_of_flag():
    pens = pencils_of(F0)
    assert sorted(p.pencil_type for p in pens) == [0, 1, 2]
    members = [set(p.members()) for p in pens]
    assert all(len(m) == 3 for m in members)
    for a, b in itertools.combinations(members, 2):
        assert a & b == {F0}


def test_pencils_pairwise_meet_only_in_flag_exhaustive():
    geo = geometry(GF2)
    for f in geo.flags:
        ms = [set(p.members()) for p in pencils_of(f)]
        assert all(a & b == {f} for a, b in itertools.combinations(ms, 2))


def test_pencil_through():
    other = flag((0, 1, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
    p = pencil_through(F0, other)
    assert p.pencil_type == 0 and F0 in p and other in p
    with pytest.raises(NotAdjacentError):
        pencil_through(F0, F0)
    with pytest.raises(NotAdjacentError):
        pencil_through(F0, F2)


@pytest.mark.parametrize("q", [2, 3])
def test_graph_basic_invariants(q):
    g = relatedness_graph(GF(q))
    n = g.vertex_count
    assert g.neighbors.shape == (n, 3 * q)
    nbrs = g.neighbor_sets()
    assert all(a not in nbrs[a] for a in range(n))
    assert all(a in nbrs[b] for a in range(n) for b in nbrs[a])
    by_type = {}
    for t, members in zip((t for t, _, _ in g.pencils), g.pencil_members):
        by_type.setdefault(t, []).append(set(members.tolist()))
    for group in by_type.values():
        seen = set()
        for m in group:
            assert not (seen & m)
            seen |= m


@pytest.mark.parametrize("q, cliques", [(2, 315), (3, 1560)])
def test_prop1_against_networkx(q, cliques):
    rep = verify_prop1(GF(q))
    assert rep.passed
    assert rep.counts["maximal_cliques"] == cliques
    assert rep.counts["clique_sizes"] == [q + 1]
    g = relatedness_graph(GF(q))
    oracle = {frozenset(c) for c in nx.find_cliques(as_nx(g))}
    assert oracle == maximal_cliques(g)


def test_prop1_pencil_counts_gf2():
    rep = verify_prop1(GF2)
    assert (rep.counts["pencils_type0"], rep.counts["pencils_type1"], rep.counts["pencils_type2"]) == (105, 105, 105)


def test_two_net_examples():
    rep = verify_two_net(join(ProjPoint((1, 0, 0, 0), GF2), ProjPoint((0, 1, 0, 0), GF2)))
    assert rep.passed
    assert (rep.counts["flags"], rep.counts["b0"], rep.counts["b1"], rep.counts["b2"]) == (9, 3, 0, 3)
    assert rep.counts["meet_sizes"] == [1]


@pytest.mark.parametrize("q", [2, 3])
def test_two_nets_every_line(q):
    assert verify_two_nets(GF(q)).passed


def test_connecting_path_examples():
    assert connecting_path(F0, F0) == [F0]
    other = flag((0, 1, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
    assert connecting_path(F0, other) == [F0, other]
    path = connecting_path(F0, F2)
    assert path[0] == F0 and path[-1] == F2 and len(path) - 1 <= 12
    assert all(related(a, b) for a, b in zip(path, path[1:]))


def test_connectivity_gf3_sampled_and_networkx():
    rep = verify_connectivity(GF3, sample=2000, seed=1)
    assert rep.passed and rep.counts["components"] == 1
    assert nx.is_connected(as_nx(relatedness_graph(GF3)))
    assert rep.counts["diameter"] == nx.diameter(as_nx(relatedness_graph(GF2))) == 6


def test_closed_4path_examples():
    geo = geometry(GF2)
    g = join(ProjPoint((1, 0, 0, 0), GF2), ProjPoint((0, 1, 0, 0), GF2))
    p, qq = list(g.points())[:2]
    e, phi = list(g.planes())[:2]
    cyc = [make_flag(p, g, e), make_flag(qq, g, e), make_flag(qq, g, phi), make_flag(p, g, phi)]
    assert is_closed_4path(cyc)
    assert closed_4path_types(cyc) == (0, 2, 0, 2)
    # a related diagonal disqualifies the cycle
    r = list(g.points())[2]
    bad = [make_flag(p, g, e), make_flag(qq, g, e), make_flag(r, g, e), make_flag(p, g, phi)]
    assert not is_closed_4path(bad)
    assert len(geo.flags) == 315


@pytest.mark.parametrize("q", [2, 3])
def test_closed_4path_exhaustive(q):
    rep = verify_closed_4path(GF(q))
    assert rep.passed
    assert rep.counts["type_patterns"] == [(0, 2, 0, 2), (2, 0, 2, 0)]


def test_autgroup_small_graphs():
    cycle = [[(i - 1) % 6, (i + 1) % 6] for i in range(6)]
    assert count_automorphisms(cycle) == 12
    petersen = nx.petersen_graph()
    adj = [list(petersen[v]) for v in range(10)]
    assert count_automorphisms(adj) == 120
    cube = nx.hypercube_graph(3)
    nodes = list(cube)
    adj = [[nodes.index(u) for u in cube[v]] for v in nodes]
    assert count_automorphisms(adj) == 48
    # colours restrict the group: fixing one vertex of the 6-cycle leaves a reflection
    assert count_automorphisms(cycle, [1, 0, 0, 0, 0, 0]) == 2


def test_automorphism_count_gf2_and_guard():
    assert automorphism_count(GF2) == 40320 == 2 * (15 * 14 * 12 * 8)
    with pytest.raises(SizeLimitError):
        automorphism_count(GF3)

