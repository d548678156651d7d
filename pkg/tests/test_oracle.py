from dataclasses import replace
from fractions import Fraction

import pytest
from conftest import a

from qedpoly.errors import InvalidQed
from qedpoly.generate import qed_corpus
from qedpoly.graph import Graph
from qedpoly.integrand import FEYNMAN, GENERAL, mu, nu, numerator
from qedpoly.oracle import (SymExpr, apply_D, expressions_equal, lift_numerator,
                            phi_xi_derivative, verify_theorem)
from qedpoly.polyring import EpsLaurent


@pytest.mark.parametrize("name", ["gamma2", "gamma2_photon_reversed"])
@pytest.mark.parametrize("gauge", [GENERAL, FEYNMAN])
def test_theorem_one_loop(name, gauge, request):
    G = request.getfixturevalue(name.replace("_photon", ""))
    result = verify_theorem(G, gauge)
    assert result and result.report is None


def test_theorem_two_loop_feynman(gamma1):
    assert verify_theorem(gamma1, FEYNMAN)


def test_theorem_on_small_corpus():
    for G in qed_corpus(4):
        assert verify_theorem(G, GENERAL), G.edges
    for G in qed_corpus(5):
        assert verify_theorem(G, FEYNMAN), G.edges


def test_theorem_with_fermion_tadpole():
    G = Graph.from_edges([(1, 1, 1, "fermion"), (2, 1, 2, "photon"), (3, 2, 3, "fermion")],
                         externals=[(2, "q1"), (3, "q2"), (3, "q3")])
    for gauge in (GENERAL, FEYNMAN):
        assert verify_theorem(G, gauge)


def test_perturbed_numerator_is_detected(gamma2):
    D = apply_D(gamma2, GENERAL)
    lifted = lift_numerator(numerator(gamma2, GENERAL))
    assert expressions_equal(D, lifted)
    bumped = SymExpr(gamma2, dict(lifted.data), lifted.denom)
    bumped.add(((mu(2), mu(3)), (nu(2), nu(3))), (), 2, EpsLaurent({1: a(2)}))
    result = expressions_equal(D, bumped)
    assert not result
    assert result.report["metrics"] == [["mu_e2", "mu_e3"], ["nu_v2", "nu_v3"]]
    assert result.report["eps_power"] == 1 and result.report["psi_power"] == 2
    assert result.report["difference"] == str(-a(2) * Fraction(1, lifted.denom))


def test_dropping_a_term_is_detected(gamma1):
    N = numerator(gamma1, FEYNMAN)
    broken = replace(N, terms=N.terms[1:])
    assert not expressions_equal(apply_D(gamma1, FEYNMAN), lift_numerator(broken))


def test_factor_order_does_not_matter(gamma2):
    default = apply_D(gamma2, GENERAL)
    for order in ([1, 2, 3], [3, 1, 2]):
        assert expressions_equal(default, apply_D(gamma2, GENERAL, order))
    with pytest.raises(ValueError):
        apply_D(gamma2, GENERAL, [1, 2])


def test_feynman_is_eps_zero_slice(gamma2):
    assert expressions_equal(apply_D(gamma2, GENERAL).eps_slice(0), apply_D(gamma2, FEYNMAN))


def test_reversing_the_photon_flips_its_xi(gamma2, gamma2_reversed):
    D = apply_D(gamma2, GENERAL)
    assert not expressions_equal(D, apply_D(gamma2_reversed, GENERAL))
    assert expressions_equal(D.flip_xi(1), apply_D(gamma2_reversed, GENERAL))


def test_first_derivative_matches_x(gamma1):
    for e in (2, 3, 4, 5):
        d = phi_xi_derivative(gamma1, e, mu(e))
        assert len(d) == len(d.terms) > 0


def test_sum_uses_common_denominator(gamma2):
    x = SymExpr(gamma2, {((), (), 0, ()): EpsLaurent({0: a()})}, 2)
    y = SymExpr(gamma2, {((), (), 0, ()): EpsLaurent({0: a()})}, 3)
    s = x + y
    assert s.denom == 6 and s.terms[0].coeff == EpsLaurent({0: a() * Fraction(5, 6)})
    assert expressions_equal(s.scale(0), SymExpr(gamma2))


def test_invalid_graph_is_rejected():
    with pytest.raises(InvalidQed):
        apply_D(Graph.from_edges([(1, 1, 2), (2, 2, 1)]))
