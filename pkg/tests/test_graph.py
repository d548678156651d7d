import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qedpoly.errors import Disconnected
from qedpoly.generate import random_connected_multigraph
from qedpoly.graph import (Graph, bonds, check_bond, check_cycle, contract, delete,
                           matrix_tree_count, simple_cycles, spanning_trees, validate_qed)

graphs = st.integers(0, 10**6).map(lambda s: random_connected_multigraph(random.Random(s), 7))


def _connected(vertices, edges) -> bool:
    vertices = list(vertices)
    seen, todo = {vertices[0]}, [vertices[0]]
    while todo:
        v = todo.pop()
        for e in edges:
            for x, y in ((e.source, e.target), (e.target, e.source)):
                if x == v and y not in seen:
                    seen.add(y)
                    todo.append(y)
    return len(seen) == len(vertices)


def brute_trees(G):
    n = len(G.vertices)
    return {frozenset(e.id for e in sub) for sub in combinations(G.edges, n - 1)
            if _connected(G.vertices, sub)}


def brute_bonds(G):
    out = set()
    for k in range(1, len(G.edges) + 1):
        for cut in combinations(G.edge_ids, k):
            rest = [e for e in G.edges if e.id not in cut]
            if _connected(G.vertices, rest):
                continue
            if any(c < set(cut) for c in out):
                continue
            if all(_connected(G.vertices, rest + [G.edge(x)]) for x in cut):
                out.add(frozenset(cut))
    return out


def brute_cycles(G):
    out = set()
    for k in range(1, len(G.edges) + 1):
        for sub in combinations(G.edges, k):
            deg: dict = {}
            for e in sub:
                deg[e.source] = deg.get(e.source, 0) + 1
                deg[e.target] = deg.get(e.target, 0) + 1
            if all(d == 2 for d in deg.values()) and _connected(deg, sub):
                out.add(frozenset(e.id for e in sub))
    return out


@given(graphs)
@settings(max_examples=60, deadline=None)
def test_enumerations_match_brute_force(G):
    assert set(spanning_trees(G)) == brute_trees(G)
    assert {b.edges for b in bonds(G)} == brute_bonds(G)
    assert {c.edges for c in simple_cycles(G)} == brute_cycles(G)
    assert matrix_tree_count(G) == len(spanning_trees(G))


@given(graphs)
@settings(max_examples=60, deadline=None)
def test_orientations_are_consistent(G):
    assert all(check_cycle(G, c) for c in simple_cycles(G))
    assert all(check_bond(G, b) for b in bonds(G))
    for c in simple_cycles(G):
        for b in bonds(G):
            assert len(c.edges & b.edges) % 2 == 0


@given(graphs, st.data())
@settings(max_examples=40, deadline=None)
def test_contract_and_delete_commute(G, data):
    if len(G.edges) < 2:
        return
    e, f = data.draw(st.lists(st.sampled_from(G.edge_ids), min_size=2, max_size=2, unique=True))
    if G.edge(e).is_self_loop:
        return
    assert contract(delete(G, [f]), [e]).shape == delete(contract(G, [e]), [f]).shape


def test_banana_bond_signs(banana3):
    (b,) = bonds(banana3)
    assert b.orientation == ((1, 1), (2, -1), (3, 1))
    assert len(spanning_trees(banana3)) == 3
    assert len(simple_cycles(banana3)) == 3
    assert banana3.h1 == 2


def test_self_loop_is_a_cycle_and_never_in_a_tree():
    G = Graph.from_edges([(1, 1, 1), (2, 1, 2)])
    assert [c.edges for c in simple_cycles(G)] == [frozenset({1})]
    assert spanning_trees(G) == [frozenset({2})]
    assert G.is_bridge(2) and not G.is_bridge(1)


def test_contraction_identifies_endpoints(banana3):
    H = contract(banana3, [1])
    assert len(H.vertices) == 1
    assert all(e.is_self_loop for e in H.edges)
    assert [e.id for e in H.edges] == [2, 3]


def test_disconnected_enumeration_raises():
    G = Graph.from_edges([(1, 1, 2), (2, 3, 4)])
    assert G.h0 == 2 and G.h1 == 0
    with pytest.raises(Disconnected):
        spanning_trees(G)
    assert matrix_tree_count(G) == 0


def test_qed_validation(gamma1, gamma2):
    assert validate_qed(gamma1) == []
    assert validate_qed(gamma2) == []
    scalar = Graph.from_edges([(1, 1, 2), (2, 2, 1)])
    assert any("scalar" in p for p in validate_qed(scalar))
    two_photons = Graph.from_edges([(1, 1, 2, "photon"), (2, 1, 2, "photon")],
                                   externals=[(1, "q1"), (1, "q2"), (2, "q3"), (2, "q4")])
    assert any("photon incidences" in p for p in validate_qed(two_photons))
    missing = Graph(gamma2.vertices, gamma2.edges, gamma2.externals[:2])
    assert validate_qed(missing) == ["vertex 3: 0 external half-edges for 1 open slots"]


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph.from_edges([(1, 1, 2), (1, 2, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges([(1, 1, 2, "gluon")])
