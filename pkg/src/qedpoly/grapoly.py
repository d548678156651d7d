"""Kirchhoff, second Symanzik, cycle and bond polynomials of a graph.

Quadratic forms in the auxiliary edge momenta are stored as symmetric
matrices of Poly entries.  Off-diagonal entries hold the restricted
polynomial itself, so the scalar they represent is

    sum_e M[e,e] xi_e^2 + 2 sum_{e<f} M[e,f] xi_e xi_f.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .errors import Disconnected, SameEdge, TadpoleContraction
from .graph import (Graph, bonds, contract, contract_cycle, delete, simple_cycles,
                    spanning_tree_masks)
from .polyring import ONE, ZERO, Poly, poly_product, poly_sum


@dataclass(frozen=True, eq=False)
class QuadForm:
    graph: Graph
    matrix: dict = field(default_factory=dict)  # (e, f) with e <= f -> non-zero Poly

    def entry(self, e: int, f: int) -> Poly:
        return self.matrix.get((e, f) if e <= f else (f, e), ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadForm):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(frozenset(self.matrix.items()))

    def entries(self) -> list:
        """Non-zero upper-triangle entries in (e, f) order."""
        return sorted(self.matrix.items())

    def map(self, fn: Callable[[Poly], Poly], graph: Graph | None = None) -> "QuadForm":
        out = {}
        for k, p in self.matrix.items():
            q = fn(p)
            if not q.is_zero():
                out[k] = q
        return QuadForm(graph or self.graph, out)

    def without_edge(self, e: int, graph: Graph | None = None) -> "QuadForm":
        """Drop row and column e."""
        out = {k: p for k, p in self.matrix.items() if e not in k}
        return QuadForm(graph or self.graph, out)

    def scalar_coefficients(self) -> dict:
        """Coefficient of xi_e*xi_f (e <= f) in the expanded scalar."""
        return {k: (p if k[0] == k[1] else p * 2) for k, p in self.matrix.items()}

    def evaluate(self, xi: dict) -> Poly:
        """Scalar value for integer (or Poly) values of the auxiliary momenta."""
        total = ZERO
        for (e, f), p in self.scalar_coefficients().items():
            total = total + p * (xi.get(e, 0) * xi.get(f, 0))
        return total

    def to_json(self) -> list:
        return [{"e": e, "f": f, "poly": str(p)} for (e, f), p in self.entries()]

    @classmethod
    def from_json(cls, graph: Graph, data: list) -> "QuadForm":
        from .polyring import parse_poly

        out = {}
        for item in data:
            e, f = sorted((int(item["e"]), int(item["f"])))
            out[(e, f)] = parse_poly(item["poly"])
        return cls(graph, out)

    def __str__(self) -> str:
        return "\n".join(f"[{e},{f}] {p}" for (e, f), p in self.entries())


@dataclass(frozen=True, eq=False)
class VecPoly:
    """Linear form sum_e coeffs[e] * xi_e^index."""

    free_index: object
    coeffs: dict = field(default_factory=dict)  # edge-id -> non-zero Poly

    def coeff(self, e: int) -> Poly:
        return self.coeffs.get(e, ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VecPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def to_json(self) -> dict:
        return {"index": str(self.free_index),
                "coeffs": [{"edge": e, "poly": str(p)} for e, p in sorted(self.coeffs.items())]}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"xi{e}^{self.free_index}*({p})" for e, p in sorted(self.coeffs.items()))


def _add_entry(M: dict, e: int, f: int, p: Poly):
    k = (e, f) if e <= f else (f, e)
    M[k] = M[k] + p if k in M else p


def _prune(M: dict) -> dict:
    return {k: p for k, p in M.items() if not p.is_zero()}


# -- Kirchhoff ---------------------------------------------------------------


@lru_cache(maxsize=65536)
def _psi_connected(shape: tuple) -> Poly:
    vertices, triples = shape
    G = Graph.from_edges(triples, vertices)
    ids = G.edge_ids
    full = (1 << len(ids)) - 1
    terms = {}
    for t in spanning_tree_masks(G):
        comp = full & ~t
        terms[tuple(ids[i] for i in range(len(ids)) if comp >> i & 1)] = 1
    return Poly._wrap(terms)


def kirchhoff(G: Graph) -> Poly:
    """Sum over spanning trees of the product of the parameters not in the tree.

    Disconnected graphs get the product over their components.
    """
    if G.is_connected():
        return _psi_connected(G.shape)
    return poly_product(_psi_connected(c.shape) for c in G.component_graphs())


# -- second Symanzik / bond polynomials ----------------------------------------


@lru_cache(maxsize=4096)
def _phi_connected(G: Graph) -> QuadForm:
    M: dict = {}
    for B in bonds(G):
        weight = kirchhoff(delete(G, B.edges)).mul_monomial(tuple(sorted(B.edges)))
        o = B.orientation
        for i, (e, se) in enumerate(o):
            for f, sf in o[i:]:
                _add_entry(M, e, f, weight if se * sf == 1 else -weight)
    return QuadForm(G, _prune(M))


def symanzik2(G: Graph) -> QuadForm:
    """Second Symanzik polynomial as a quadratic form in the edge momenta."""
    if G.is_connected():
        return _phi_connected(G)
    comps = G.component_graphs()
    psis = [kirchhoff(c) for c in comps]
    M: dict = {}
    for i, c in enumerate(comps):
        others = poly_product(p for j, p in enumerate(psis) if j != i)
        for k, p in _phi_connected(c).matrix.items():
            _add_entry(M, k[0], k[1], p * others)
    return QuadForm(G, _prune(M))


def beta_edge(G: Graph, e: int) -> Poly:
    if not G.is_connected():
        raise Disconnected("bond polynomials need a connected graph")
    G.edge(e)
    return symanzik2(G).entry(e, e)


def beta_pair(G: Graph, e: int, f: int) -> Poly:
    if e == f:
        raise SameEdge(f"beta_pair needs distinct edges, got {e} twice")
    if not G.is_connected():
        raise Disconnected("bond polynomials need a connected graph")
    G.edge(e), G.edge(f)
    return symanzik2(G).entry(e, f)


# -- cycle polynomials --------------------------------------------------------


def cycle_poly_from(G: Graph, cycles: Iterable) -> QuadForm:
    M: dict = {}
    for C in cycles:
        psi = kirchhoff(contract_cycle(G, C.edges))
        o = C.orientation
        for i, (e, se) in enumerate(o):
            for f, sf in o[i:]:
                _add_entry(M, e, f, psi if se * sf == 1 else -psi)
    return QuadForm(G, _prune(M))


@lru_cache(maxsize=4096)
def cycle_poly(G: Graph) -> QuadForm:
    """Cycle polynomial: sum over simple cycles of (signed xi sum)^2 * Psi(G//C)."""
    return cycle_poly_from(G, simple_cycles(G))


def chi_edge(G: Graph, e: int) -> Poly:
    G.edge(e)
    return cycle_poly(G).entry(e, e)


def chi_pair(G: Graph, e: int, f: int) -> Poly:
    if e == f:
        raise SameEdge(f"chi_pair needs distinct edges, got {e} twice; use chi_same_edge")
    G.edge(e), G.edge(f)
    return cycle_poly(G).entry(e, f)


# -- X polynomial ---------------------------------------------------------------


def x_poly(G: Graph, e: int, index: object = None) -> VecPoly:
    """Coefficients of xi_{e'} in X^{e,index} = (1/2 a_e) dPhi/dxi_e."""
    if not G.is_connected():
        raise Disconnected("X needs a connected graph")
    if G.edge(e).is_self_loop:
        raise TadpoleContraction(f"edge {e} is a self-loop; Psi of its contraction is undefined")
    coeffs = {e: kirchhoff(contract(G, [e]))}
    chi = cycle_poly(G)
    for f in G.edge_ids:
        if f == e:
            continue
        c = chi.entry(e, f)
        if not c.is_zero():
            coeffs[f] = -c.mul_monomial((f,))
    return VecPoly(index if index is not None else f"mu_e{e}", coeffs)


# -- identities -----------------------------------------------------------------


def cycle_sum_psi(G: Graph) -> Poly:
    """sum over simple cycles C of Psi_C * Psi_{G//C}, with Psi_C = sum_{e in C} a_e."""
    return poly_sum(
        Poly({(e,): 1 for e in C.edges}) * kirchhoff(contract_cycle(G, C.edges))
        for C in simple_cycles(G)
    )


def alpha_chi_sum(G: Graph) -> Poly:
    chi = cycle_poly(G)
    return poly_sum(chi.entry(e, e).mul_monomial((e,)) for e in G.edge_ids)


def psi_cycle_identity_check(G: Graph) -> bool:
    """h1 * Psi == sum_C Psi_C Psi_{G//C} == sum_e a_e chi^(e)."""
    if not G.is_connected():
        raise Disconnected("identity stated for connected graphs")
    if G.h1 < 1:
        raise ValueError("identity needs at least one loop")
    lhs = kirchhoff(G) * G.h1
    return lhs == cycle_sum_psi(G) and lhs == alpha_chi_sum(G)


__all__ = [
    "QuadForm", "VecPoly", "kirchhoff", "symanzik2", "cycle_poly", "cycle_poly_from",
    "chi_edge", "chi_pair", "beta_edge", "beta_pair", "x_poly", "psi_cycle_identity_check",
    "cycle_sum_psi", "alpha_chi_sum", "ONE",
]
