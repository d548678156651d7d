import random
from fractions import Fraction

import pytest
from conftest import a
from hypothesis import given, settings
from hypothesis import strategies as st

from qedpoly.errors import Disconnected, SameEdge, TadpoleContraction
from qedpoly.generate import random_connected_multigraph
from qedpoly.grapoly import (alpha_chi_sum, beta_edge, beta_pair, chi_edge, chi_pair, cycle_poly,
                             cycle_sum_psi, kirchhoff, psi_cycle_identity_check, symanzik2, x_poly)
from qedpoly.graph import Graph, contract, contract_cycle, simple_cycles
from qedpoly.polyring import ONE, Poly

graphs = st.integers(0, 10**6).map(lambda s: random_connected_multigraph(random.Random(s), 7))


def test_banana_polynomials(banana3):
    assert kirchhoff(banana3) == a(1, 2) + a(1, 3) + a(2, 3)
    phi = symanzik2(banana3)
    abc = a(1, 2, 3)
    # (xi1 - xi2 + xi3)^2 a1 a2 a3
    assert phi.evaluate({1: 1, 2: 1, 3: 1}) == abc
    assert phi.evaluate({1: 1, 2: 0, 3: 0}) == abc
    assert phi.entry(1, 2) == -abc and phi.entry(1, 3) == abc and phi.entry(2, 3) == -abc


def test_gamma1_cycles(gamma1):
    cycles = {C.edges: kirchhoff(contract_cycle(gamma1, C.edges)) for C in simple_cycles(gamma1)}
    assert cycles == {
        frozenset({1, 2, 5}): a(3) + a(4),
        frozenset({1, 3, 4}): a(2) + a(5),
        frozenset({2, 3, 4, 5}): a(1),
    }
    for e, f in ((2, 3), (2, 4), (3, 5), (4, 5)):
        assert abs_poly(chi_pair(gamma1, e, f)) == a(1)
    assert abs_poly(chi_pair(gamma1, 2, 5)) == a(1) + a(3) + a(4)
    assert abs_poly(chi_pair(gamma1, 3, 4)) == a(1) + a(2) + a(5)


def abs_poly(p: Poly) -> Poly:
    """p up to an overall sign, normalised to a positive leading coefficient."""
    return -p if p.items()[0][1] < 0 else p


def test_gamma1_x_of_last_fermion(gamma1):
    X = x_poly(gamma1, 5, "mu5")
    assert X.coeff(5) == (a(1) + a(2)) * (a(3) + a(4)) + a(1, 2)
    assert X.coeff(2) == -a(2) * (a(1) + a(3) + a(4))
    assert X.coeff(3) == -a(1, 3)
    assert X.coeff(4) == -a(1, 4)
    # the photon line also shares cycles with e5
    assert X.coeff(1) == -a(1) * (a(3) + a(4))


def test_gamma2_cycle_entries_are_units(gamma2):
    for e, f in ((1, 2), (1, 3), (2, 3)):
        assert chi_pair(gamma2, e, f) in (ONE, -ONE)
    assert chi_edge(gamma2, 1) == ONE


@given(graphs)
@settings(max_examples=50, deadline=None)
def test_x_is_half_derivative_of_phi(G):
    phi = symanzik2(G)
    for E in G.edges:
        if E.is_self_loop:
            continue
        X = x_poly(G, E.id)
        for f in G.edge_ids:
            # d/dxi_e of sum_{g,h} M[g,h] xi_g xi_h is 2 sum_f M[e,f] xi_f
            assert phi.entry(E.id, f) == X.coeff(f).mul_monomial((E.id,))


@given(graphs)
@settings(max_examples=50, deadline=None)
def test_bond_and_cycle_entries_agree(G):
    psi, phi = kirchhoff(G), symanzik2(G)
    for E in G.edges:
        e = E.id
        assert beta_edge(G, e) + chi_edge(G, e).mul_monomial((e, e)) == psi * Poly.var(e)
        if not E.is_self_loop:
            assert beta_edge(G, e) == kirchhoff(contract(G, [e])) * Poly.var(e)
    for e in G.edge_ids:
        for f in G.edge_ids:
            if e < f:
                assert beta_pair(G, e, f) == -chi_pair(G, e, f).mul_monomial((e, f))
    if G.h1:
        assert psi_cycle_identity_check(G)
        assert cycle_sum_psi(G) == alpha_chi_sum(G) == psi * G.h1
    assert phi == symanzik2(G)


@given(graphs, st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=30, deadline=None)
def test_phi_is_nonnegative_on_positive_parameters(G, x, y):
    xi = {e: (x if e % 2 else y) for e in G.edge_ids}
    value = symanzik2(G).evaluate(xi).evaluate({e: Fraction(1, e) for e in G.edge_ids})
    assert value >= 0


def test_disconnected_graphs_multiply():
    G = Graph.from_edges([(1, 1, 2), (2, 2, 1), (3, 3, 4), (4, 4, 3)])
    assert kirchhoff(G) == (a(1) + a(2)) * (a(3) + a(4))
    # each component's form is scaled by the other's Kirchhoff polynomial
    assert symanzik2(G).entry(1, 1) == a(1, 2) * (a(3) + a(4))
    with pytest.raises(Disconnected):
        beta_edge(G, 1)
    with pytest.raises(Disconnected):
        x_poly(G, 1)


def test_error_cases(gamma1):
    with pytest.raises(SameEdge):
        chi_pair(gamma1, 2, 2)
    with pytest.raises(SameEdge):
        beta_pair(gamma1, 3, 3)
    with pytest.raises(KeyError):
        chi_edge(gamma1, 9)
    loop = Graph.from_edges([(1, 1, 1), (2, 1, 2)])
    with pytest.raises(TadpoleContraction):
        x_poly(loop, 1)
    with pytest.raises(TadpoleContraction):
        contract(loop, [1])
    tree = Graph.from_edges([(1, 1, 2)])
    with pytest.raises(ValueError):
        psi_cycle_identity_check(tree)


def test_quadform_json_roundtrip(ws3):
    from qedpoly.grapoly import QuadForm

    Q = cycle_poly(ws3)
    assert QuadForm.from_json(ws3, Q.to_json()) == Q
    assert str(Q).splitlines()[0].startswith("[1,1] ")
