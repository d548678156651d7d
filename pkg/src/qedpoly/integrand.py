"""The QED numerator N_Γ as a structured tensor expression.

Index labels are owned by fermion edges (mu) and by vertices at an internal
photon end (nu).  A term of N_Γ is

    prefactor_monomial * coeff(eps) / Psi^psi_power
        * prod g^{ij} * prod X^{edge, index}

with X factors kept unexpanded.  Vertices left unpaired contribute
X^{photon(v), nu_v}, the same way unpaired fermion edges do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple

from .errors import Disconnected, InvalidQed, NoExternals
from .grapoly import QuadForm, VecPoly, chi_edge, cycle_poly, kirchhoff, x_poly
from .graph import FERMION, PHOTON, Graph, spanning_tree_masks, validate_qed
from .polyring import ONE, EpsLaurent, Monomial, Poly, monomial_str
from .rational import combine, format_fraction

GENERAL = "general"
FEYNMAN = "feynman"


class IndexLabel(NamedTuple):
    kind: str  # "mu" for edges, "nu" for vertices
    owner: int

    def __str__(self) -> str:
        return f"{self.kind}_{'e' if self.kind == 'mu' else 'v'}{self.owner}"

    @classmethod
    def parse(cls, text: str) -> "IndexLabel":
        kind, rest = text.split("_", 1)
        if kind not in ("mu", "nu") or rest[:1] != ("e" if kind == "mu" else "v"):
            raise ValueError(f"bad index label {text!r}")
        return cls(kind, int(rest[1:]))


def mu(e: int) -> IndexLabel:
    return IndexLabel("mu", e)


def nu(v: int) -> IndexLabel:
    return IndexLabel("nu", v)


@dataclass(frozen=True)
class Pairing:
    pairs: tuple
    singles: tuple

    @property
    def items(self) -> tuple:
        return tuple(sorted([x for p in self.pairs for x in p] + list(self.singles)))


def _matchings(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            yield ((first, other),) + m


def enumerate_pairings(items: Iterable) -> list[Pairing]:
    """All pairings of all even-size subsets, the empty pairing first.

    Ordered by number of pairs, then by subset in combination order.
    """
    items = tuple(items)
    out = []
    for k in range(0, len(items) + 1, 2):
        for subset in combinations(items, k):
            singles = tuple(x for x in items if x not in subset)
            for m in _matchings(subset):
                out.append(Pairing(m, singles))
    return out


def photon_vertices(G: Graph) -> dict[int, int]:
    """Vertices at an end of an internal photon, mapped to that photon."""
    out = {}
    for e in G.edges:
        if e.kind == PHOTON:
            out[e.source] = e.id
            out[e.target] = e.id
    return dict(sorted(out.items()))


def ebar_map(G: Graph) -> dict[IndexLabel, int]:
    m = {mu(e.id): e.id for e in G.edges if e.kind == FERMION}
    m.update({nu(v): p for v, p in photon_vertices(G).items()})
    return m


def chi_same_edge(G: Graph, e: int) -> EpsLaurent:
    """chi^(e,e) = chi^(e) + 2 Psi / (eps a_e), over the denominator a_e."""
    if G.edge(e).kind != PHOTON:
        raise ValueError(f"edge {e} is not a photon")
    return EpsLaurent({0: chi_edge(G, e).mul_monomial((e,)), -1: kirchhoff(G) * 2}, den=(e,))


# -- numerator ----------------------------------------------------------------


def _pair_key(a: IndexLabel, b: IndexLabel) -> tuple:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class NumeratorTerm:
    metric_pairs: tuple  # sorted (IndexLabel, IndexLabel)
    x_factors: tuple  # sorted (edge-id, IndexLabel), ordered by index
    coeff: EpsLaurent
    psi_power: int
    prefactor: Monomial = ()

    def to_json(self) -> dict:
        return {
            "metric_pairs": [[str(a), str(b)] for a, b in self.metric_pairs],
            "x_factors": [{"edge": e, "index": str(i)} for e, i in self.x_factors],
            "eps_coeff": self.coeff.to_json(),
            "psi_power": self.psi_power,
            "prefactor": monomial_str(self.prefactor),
        }

    def labels(self) -> list:
        return [x for p in self.metric_pairs for x in p] + [i for _, i in self.x_factors]

    def __str__(self) -> str:
        parts = [monomial_str(self.prefactor)] if self.prefactor else []
        parts.append(f"[{self.coeff}]")
        parts += [f"g^{{{a},{b}}}" for a, b in self.metric_pairs]
        parts += [f"X^{{e{e},{i}}}" for e, i in self.x_factors]
        s = " * ".join(parts)
        return s + (f" / Psi^{self.psi_power}" if self.psi_power else "")


@dataclass(frozen=True)
class NumeratorExpr:
    graph: Graph
    gauge: str
    terms: tuple

    def to_json(self) -> dict:
        return {"gauge": self.gauge, "terms": [t.to_json() for t in self.terms]}

    def __str__(self) -> str:
        return "\n".join(str(t) for t in self.terms)

    def canonical(self) -> dict:
        """Tensor structure -> reduced (numerator, psi power, alpha den)."""
        return canonicalize(self.terms, kirchhoff(self.graph))

    def eps_slice(self, k: int) -> dict:
        """Coefficient of eps^k in the canonical form, reduced again."""
        psi = kirchhoff(self.graph)
        out = {}
        for key, (num, P, den) in self.canonical().items():
            part = num.coeff(k)
            if part.is_zero():
                continue
            red = combine([(EpsLaurent({0: part}), P, den)], psi)
            out[key] = red
        return out


def canonicalize(terms: Iterable[NumeratorTerm], psi: Poly) -> dict:
    groups: dict = {}
    for t in terms:
        key = (t.metric_pairs, t.x_factors)
        groups.setdefault(key, []).append((t.coeff * Poly.monomial(t.prefactor), t.psi_power, ()))
    out = {}
    for key in sorted(groups):
        num, P, den = combine(groups[key], psi)
        if not num.is_zero():
            out[key] = (num, P, den)
    return out


def format_canonical(canon: dict) -> str:
    lines = []
    for (metrics, xs), value in canon.items():
        tensor = [f"g^{{{a},{b}}}" for a, b in metrics] + [f"X^{{e{e},{i}}}" for e, i in xs]
        lines.append(f"{' '.join(tensor) or '1'} : {format_fraction(*value)}")
    return "\n".join(lines)


def _check_numerator_input(G: Graph):
    problems = validate_qed(G)
    if problems:
        raise InvalidQed(problems)
    if not G.is_connected():
        raise Disconnected("numerator needs a connected graph")


def numerator(G: Graph, gauge: str = GENERAL) -> NumeratorExpr:
    """N_Γ with D_Γ exp(-Phi/Psi) = N_Γ exp(-Phi/Psi); one term per pairing."""
    if gauge not in (GENERAL, FEYNMAN):
        raise ValueError(f"unknown gauge {gauge!r}")
    _check_numerator_input(G)
    chi = cycle_poly(G)
    photons = [e.id for e in G.edges if e.kind == PHOTON]
    fermions = [e.id for e in G.edges if e.kind == FERMION]
    ebar = ebar_map(G)
    if gauge == GENERAL:
        items = [mu(e) for e in fermions] + [nu(v) for v in photon_vertices(G)]
        fixed: tuple = ()
        base = EpsLaurent({len(photons): ONE})
        prefactor: Monomial = tuple(photons)
    else:
        items = [mu(e) for e in fermions]
        ends = []
        for p in photons:
            e = G.edge(p)
            ends.append(_pair_key(nu(e.source), nu(e.target)))
        fixed = tuple(sorted(ends))
        base = EpsLaurent({0: ONE})
        prefactor = ()
    same_edge = {p: chi_same_edge(G, p) for p in photons} if gauge == GENERAL else {}
    terms = []
    for P in enumerate_pairings(items):
        coeff = base
        for a, b in P.pairs:
            ea, eb = ebar[a], ebar[b]
            if ea == eb:
                coeff = coeff * same_edge[ea]
            else:
                coeff = coeff * chi.entry(ea, eb)
        if P.pairs:
            coeff = coeff * Fraction(1, 2 ** len(P.pairs))
        coeff, pref = coeff.cancel_den(prefactor)
        if any(G.edge(ebar[k]).is_self_loop for k in P.singles):
            # X of a self-loop is (1/2a_e) dPhi/dxi_e = 0: no bond contains it
            coeff = EpsLaurent()
        metrics = tuple(sorted(fixed + tuple(_pair_key(a, b) for a, b in P.pairs)))
        xs = tuple(sorted(((ebar[k], k) for k in P.singles), key=lambda t: t[1]))
        terms.append(NumeratorTerm(metrics, xs, coeff, len(P.pairs) + len(P.singles), pref))
    return NumeratorExpr(G, gauge, tuple(terms))


# -- physical momenta -----------------------------------------------------------


@dataclass(frozen=True)
class MomentumAssignment:
    base: int  # vertex where the dependent momentum enters
    dependent: str | None
    paths: dict = field(default_factory=dict)  # label -> ((edge, sign), ...)
    substitution: dict = field(default_factory=dict)  # edge -> {label: int}

    def xi(self, e: int) -> dict:
        return self.substitution.get(e, {})


def _tree_path(G: Graph, tree_edges: list, start: int, goal: int) -> list:
    adj: dict = {}
    for eid in tree_edges:
        e = G.edge(eid)
        adj.setdefault(e.source, []).append((eid, e.target))
        adj.setdefault(e.target, []).append((eid, e.source))
    prev = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        for eid, w in adj.get(v, []):
            if w not in prev:
                prev[w] = (eid, v)
                stack.append(w)
    if goal not in prev:
        raise Disconnected(f"no tree path from {start} to {goal}")
    path = []
    v = goal
    while prev[v] is not None:
        eid, u = prev[v]
        path.append(eid)
        v = u
    return path[::-1]


def _orient(G: Graph, start: int, goal: int, edges: list) -> tuple:
    """Signs for walking ``edges`` from ``start``; +1 when along the edge direction."""
    out = []
    v = start
    for eid in edges:
        e = G.edge(eid)
        if e.source == v:
            out.append((eid, 1))
            v = e.target
        elif e.target == v:
            out.append((eid, -1))
            v = e.source
        else:
            raise ValueError(f"edge {eid} does not continue the path at vertex {v}")
    if v != goal:
        raise ValueError(f"path ends at {v}, not at {goal}")
    return tuple(out)


def momentum_paths(G: Graph, paths: dict | None = None) -> MomentumAssignment:
    """Route each independent external momentum to the base vertex.

    The base is the vertex of the last external; its momentum is the dependent
    one.  Default routes run inside the first spanning tree; ``paths`` may give
    explicit edge lists (from the external vertex toward the base) per label.
    """
    ext_vertices = {v for v, _ in G.externals}
    if len(ext_vertices) < 2:
        raise NoExternals("momentum routing needs at least two external vertices")
    if not G.is_connected():
        raise Disconnected("momentum routing needs a connected graph")
    base, dependent = G.externals[-1]
    tree = None
    routes = {}
    for v, q in G.externals[:-1]:
        if paths is not None and q in paths:
            edges = list(paths[q])
        else:
            if tree is None:
                mask = spanning_tree_masks(G)[0]
                tree = sorted(G.ids_of(mask))
            edges = _tree_path(G, tree, v, base)
        routes[q] = _orient(G, v, base, edges)
    subst: dict = {}
    for q, route in routes.items():
        for eid, s in route:
            slot = subst.setdefault(eid, {})
            slot[q] = slot.get(q, 0) + s
    subst = {e: {q: c for q, c in d.items() if c} for e, d in subst.items()}
    subst = {e: d for e, d in sorted(subst.items()) if d}
    return MomentumAssignment(base, dependent, routes, subst)


@dataclass(frozen=True)
class MomentumQuadratic:
    """sum over label pairs (a <= b) of coeffs[(a, b)] * (q_a . q_b)."""

    coeffs: dict

    def __str__(self) -> str:
        parts = []
        for (a, b), p in sorted(self.coeffs.items()):
            sym = f"{a}^2" if a == b else f"{a}.{b}"
            parts.append(f"{sym}*({p})")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> list:
        return [{"q": [a, b], "poly": str(p)} for (a, b), p in sorted(self.coeffs.items())]


@dataclass(frozen=True)
class MomentumVector:
    """sum over labels of coeffs[label] * q_label^index."""

    index: object
    coeffs: dict

    def __str__(self) -> str:
        parts = [f"{q}^{self.index}*({p})" for q, p in sorted(self.coeffs.items())]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"index": str(self.index), "coeffs": {q: str(p) for q, p in sorted(self.coeffs.items())}}


def _eval_quadform(Q: QuadForm, assign: MomentumAssignment) -> MomentumQuadratic:
    out: dict = {}
    for (e, f), p in Q.scalar_coefficients().items():
        for qa, ca in assign.xi(e).items():
            for qb, cb in assign.xi(f).items():
                key = (qa, qb) if qa <= qb else (qb, qa)
                t = p * (ca * cb)
                out[key] = out[key] + t if key in out else t
    return MomentumQuadratic({k: p for k, p in sorted(out.items()) if not p.is_zero()})


def _eval_vec(V: VecPoly, assign: MomentumAssignment) -> MomentumVector:
    out: dict = {}
    for e, p in V.coeffs.items():
        for q, c in assign.xi(e).items():
            t = p * c
            out[q] = out[q] + t if q in out else t
    return MomentumVector(V.free_index, {k: p for k, p in sorted(out.items()) if not p.is_zero()})


@dataclass(frozen=True)
class EvaluatedNumerator:
    """Numerator with X factors expanded over external momenta.

    ``terms`` maps (metric pairs, ((label, index), ...)) to the reduced
    (numerator, psi power, alpha den) coefficient.
    """

    terms: dict

    def __str__(self) -> str:
        lines = []
        for (metrics, qs), value in self.terms.items():
            tensor = [f"g^{{{a},{b}}}" for a, b in metrics] + [f"{q}^{{{i}}}" for q, i in qs]
            lines.append(f"{' '.join(tensor) or '1'} : {format_fraction(*value)}")
        return "\n".join(lines)

    def to_json(self) -> list:
        out = []
        for (metrics, qs), (num, P, den) in self.terms.items():
            out.append({
                "metric_pairs": [[str(a), str(b)] for a, b in metrics],
                "momenta": [{"label": q, "index": str(i)} for q, i in qs],
                "eps_coeff": num.to_json(),
                "psi_power": P,
                "alpha_den": monomial_str(den),
            })
        return out


def _eval_numerator(N: NumeratorExpr, assign: MomentumAssignment) -> EvaluatedNumerator:
    G = N.graph
    psi = kirchhoff(G)
    vec_cache: dict = {}
    groups: dict = {}
    for t in N.terms:
        if t.coeff.is_zero():
            continue
        partial = {(): t.coeff * Poly.monomial(t.prefactor)}
        for e, idx in t.x_factors:
            if (e, idx) not in vec_cache:
                vec_cache[(e, idx)] = _eval_vec(x_poly(G, e, idx), assign)
            vec = vec_cache[(e, idx)]
            nxt = {}
            for key, c in partial.items():
                for q, p in vec.coeffs.items():
                    nxt[key + ((q, idx),)] = c * p
            partial = nxt
        for qs, c in partial.items():
            key = (t.metric_pairs, tuple(sorted(qs, key=lambda x: x[1])))
            groups.setdefault(key, []).append((c, t.psi_power, ()))
    out = {}
    for key in sorted(groups):
        num, P, den = combine(groups[key], psi)
        if not num.is_zero():
            out[key] = (num, P, den)
    return EvaluatedNumerator(out)


def evaluate_momenta(obj, assign: MomentumAssignment):
    """Replace every xi_e by its signed combination of external momenta."""
    if isinstance(obj, QuadForm):
        return _eval_quadform(obj, assign)
    if isinstance(obj, VecPoly):
        return _eval_vec(obj, assign)
    if isinstance(obj, NumeratorExpr):
        return _eval_numerator(obj, assign)
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


__all__ = [
    "IndexLabel", "Pairing", "NumeratorTerm", "NumeratorExpr", "MomentumAssignment",
    "MomentumQuadratic", "MomentumVector", "EvaluatedNumerator", "enumerate_pairings",
    "ebar_map", "photon_vertices", "chi_same_edge", "numerator", "momentum_paths",
    "evaluate_momenta", "canonicalize", "format_canonical", "mu", "nu", "GENERAL", "FEYNMAN",
]
