"""Graph polynomials and parametric QED integrand numerators."""

from .errors import (Disconnected, InvalidQed, NoExternals, ParseError, QedPolyError,
                     SameEdge, SchemaError, TadpoleContraction)
from .grapoly import (QuadForm, VecPoly, beta_edge, beta_pair, chi_edge, chi_pair, cycle_poly,
                      kirchhoff, psi_cycle_identity_check, symanzik2, x_poly)
from .graph import Edge, Graph, bonds, contract, delete, simple_cycles, spanning_trees, validate_qed
from .integrand import (IndexLabel, NumeratorExpr, chi_same_edge, enumerate_pairings,
                        evaluate_momenta, momentum_paths, numerator)
from .polyring import EpsLaurent, Poly, parse_poly

__all__ = [
    "Disconnected", "InvalidQed", "NoExternals", "ParseError", "QedPolyError", "SameEdge",
    "SchemaError", "TadpoleContraction", "QuadForm", "VecPoly", "beta_edge", "beta_pair",
    "chi_edge", "chi_pair", "cycle_poly", "kirchhoff", "psi_cycle_identity_check", "symanzik2",
    "x_poly", "Edge", "Graph", "bonds", "contract", "delete", "simple_cycles", "spanning_trees",
    "validate_qed", "IndexLabel", "NumeratorExpr", "chi_same_edge", "enumerate_pairings",
    "evaluate_momenta", "momentum_paths", "numerator", "EpsLaurent", "Poly", "parse_poly",
]
