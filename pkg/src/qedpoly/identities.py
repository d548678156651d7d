"""Identity and property checks.  Every function returns a list of failure
messages; an empty list means the graph passed.
"""

from __future__ import annotations

from itertools import combinations

from .grapoly import (alpha_chi_sum, cycle_poly, cycle_sum_psi, kirchhoff, symanzik2)
from .graph import (Graph, bonds, contract, delete, matrix_tree_count, simple_cycles,
                    spanning_trees)
from .integrand import (FEYNMAN, GENERAL, enumerate_pairings, ebar_map, numerator)
from .polyring import Poly


def _edge_kinds(G: Graph):
    """(edge, is_bridge, is_tadpole) for each edge."""
    return [(e.id, G.is_bridge(e.id), e.is_self_loop) for e in G.edges]


def check_identities(G: Graph) -> list[str]:
    fails = []
    psi = kirchhoff(G)
    phi = symanzik2(G)
    chi = cycle_poly(G)
    for e, bridge, tadpole in _edge_kinds(G):
        a = Poly.var(e)
        chi_e, beta_e = chi.entry(e, e), phi.entry(e, e)
        psi_del = kirchhoff(delete(G, [e]))
        # contraction-deletion
        if tadpole:
            ok = psi == a * psi_del
        elif bridge:
            ok = psi == kirchhoff(contract(G, [e]))
        else:
            ok = psi == kirchhoff(contract(G, [e])) + a * psi_del
        if not ok:
            fails.append(f"contraction-deletion fails at e{e}")
        # the same split written with cycle and bond polynomials
        if a * psi != beta_e + a * a * chi_e:
            fails.append(f"bond/cycle split of a_e*Psi fails at e{e}")
        if not bridge:
            if chi_e != psi_del:
                fails.append(f"chi^(e{e}) != Psi(G\\e)")
            if chi_e != psi.partial(e):
                fails.append(f"chi^(e{e}) != dPsi/da_e")
            fails += _chi_deletion(G, chi, e)
        if not tadpole:
            if beta_e != a * kirchhoff(contract(G, [e])):
                fails.append(f"beta^(e{e}) != a_e Psi(G//e)")
            fails += _chi_contraction(G, chi, e)
    for e, f in combinations(G.edge_ids, 2):
        if phi.entry(e, f) != -(chi.entry(e, f).mul_monomial((e, f))):
            fails.append(f"beta^(e{e},e{f}) != -a_e a_f chi^(e{e},e{f})")
    lhs = psi * G.h1
    if lhs != cycle_sum_psi(G):
        fails.append("h1*Psi != sum_C Psi_C Psi(G//C)")
    if lhs != alpha_chi_sum(G):
        fails.append("h1*Psi != sum_e a_e chi^(e)")
    return fails


def _chi_deletion(G: Graph, chi, e: int) -> list[str]:
    small = cycle_poly(delete(G, [e]))
    rest = [f for f in G.edge_ids if f != e]
    for f in rest:
        for g in rest:
            if f <= g and small.entry(f, g) != chi.entry(f, g).partial(e):
                return [f"chi(G\\e{e}) != d/da_e chi(G) at [{f},{g}]"]
    return []


def _chi_contraction(G: Graph, chi, e: int) -> list[str]:
    small = cycle_poly(contract(G, [e]))
    rest = [f for f in G.edge_ids if f != e]
    for f in rest:
        for g in rest:
            if f <= g and small.entry(f, g) != chi.entry(f, g).substitute(e, 0):
                return [f"chi(G//e{e}) != chi(G)|a_e=0 at [{f},{g}]"]
    return []


def check_properties(G: Graph) -> list[str]:
    fails = []
    h1 = G.h1
    psi = kirchhoff(G)
    if not (psi.is_multilinear() and psi.is_homogeneous() and psi.degree() == h1):
        fails.append("Psi is not multilinear of degree h1")
    if any(c != 1 for _, c in psi.items()):
        fails.append("Psi has a coefficient other than 1")
    for name, form, deg in (("Phi", symanzik2(G), h1 + 1), ("chi", cycle_poly(G), h1 - 1)):
        for (e, f), p in form.entries():
            if not (p.is_multilinear() and p.is_homogeneous() and p.degree() == deg):
                fails.append(f"{name}[{e},{f}] is not multilinear of degree {deg}")
    if matrix_tree_count(G) != len(spanning_trees(G)):
        fails.append("matrix-tree count differs from the enumeration")
    cycles, bs = simple_cycles(G), bonds(G)
    for C in cycles:
        for B in bs:
            common = set(C.edges) & set(B.edges)
            if len(common) % 2:
                fails.append(f"cycle {sorted(C.edges)} meets bond {sorted(B.edges)} oddly")
            elif sum(C.sign(x) * B.sign(x) for x in common):
                fails.append(f"cycle {sorted(C.edges)} is not orthogonal to bond {sorted(B.edges)}")
    return fails


def term_weight(term, h1: int) -> int | None:
    """Twice the scaling weight of a numerator term, with xi counted as -1/2.

    None when the eps coefficients have different degrees.
    """
    degs = {p.degree() for p in term.coeff.coeffs.values()}
    if len(degs) != 1 or any(not p.is_homogeneous() for p in term.coeff.coeffs.values()):
        return None
    (d,) = degs
    nx = len(term.x_factors)
    return 2 * d + 2 * len(term.prefactor) + nx * (2 * h1 - 1) - 2 * term.psi_power * h1


def check_numerator(G: Graph) -> list[str]:
    """Structural checks of N for a connected QED graph."""
    fails = []
    gen, fey = numerator(G, GENERAL), numerator(G, FEYNMAN)
    labels = sorted(ebar_map(G))
    fermion_labels = [x for x in labels if x.kind == "mu"]
    if len(gen.terms) != len(enumerate_pairings(labels)):
        fails.append("general-gauge term count differs from the pairing count")
    if len(fey.terms) != len(enumerate_pairings(fermion_labels)):
        fails.append("Feynman-gauge term count differs from the pairing count")
    for expr in (gen, fey):
        # Feynman gauge carries the vertex labels in its fixed photon metrics
        want = labels
        for t in expr.terms:
            if sorted(t.labels()) != want:
                fails.append(f"{expr.gauge}: index labels not used exactly once in a term")
                break
        weights = {term_weight(t, G.h1) for t in expr.terms if not t.coeff.is_zero()}
        if None in weights or len(weights) > 1:
            fails.append(f"{expr.gauge}: terms are not of one homogeneous weight")
    canon = gen.canonical()
    if canon and min(num.min_power() for num, _, _ in canon.values()) != 0:
        fails.append("lowest eps power of the general-gauge numerator is not 0")
    if gen.eps_slice(0) != fey.canonical():
        fails.append("eps^0 slice of the general gauge differs from the Feynman gauge")
    for e in G.edges:
        if e.kind != "photon":
            continue
        for gauge, ref in ((GENERAL, canon), (FEYNMAN, fey.canonical())):
            flipped = numerator(G.reverse(e.id), gauge).canonical()
            signed = {}
            for key, (num, P, den) in flipped.items():
                n = sum(1 for f, _ in key[1] if f == e.id)
                signed[key] = (num * (-1) ** n, P, den)
            if signed != ref:
                fails.append(f"{gauge}: reversing photon e{e.id} changes the numerator")
    return fails


__all__ = ["check_identities", "check_properties", "check_numerator", "term_weight"]
