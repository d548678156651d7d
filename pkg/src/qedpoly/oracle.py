"""Brute-force check of the numerator by direct differentiation.

The operator D_Γ is applied to exp(-Phi/Psi) with the product rule only,
starting from the quadratic form of Phi.  An expression is a sum of

    (prod g) (prod xi^index) * coeff(eps) / (Psi^p * alpha^den) * exp(-Phi/Psi)

Internally coefficients are nested dicts ``eps -> monomial -> int``.  The
operator constants carry factors 1/2 and 1/4; each fermion factor is scaled
by 2 and each photon factor by 4 so the hot loop stays in integers, and the
total scale is divided out once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import Disconnected, InvalidQed, QedPolyError
from .grapoly import kirchhoff, symanzik2, x_poly
from .graph import FERMION, PHOTON, Graph, validate_qed
from .integrand import (FEYNMAN, GENERAL, IndexLabel, NumeratorExpr, mu, nu)
from .polyring import EpsLaurent, Monomial, Poly, monomial_lcm, monomial_div, monomial_str
from .rational import combine, format_fraction, vanishes


class OracleMismatch(QedPolyError):
    """An identity the oracle relies on failed; indicates a bug, not bad input."""


def _pair(a, b) -> tuple:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class TensorTerm:
    metric_factors: tuple
    xi_factors: tuple
    coeff: EpsLaurent
    psi_power: int
    alpha_denominator: Monomial = ()


@dataclass
class SymExpr:
    """Canonical sum of tensor terms; keys are (metrics, xis, psi power, alpha den).

    The value of a term is ``data[key] / denom``; a shared integer
    denominator keeps the bulk arithmetic free of fractions.
    """

    graph: Graph
    data: dict = field(default_factory=dict)  # key -> EpsLaurent
    denom: int = 1

    @property
    def terms(self) -> list[TensorTerm]:
        f = Fraction(1, self.denom)
        return [TensorTerm(m, x, c * f if self.denom != 1 else c, p, d)
                for (m, x, p, d), c in sorted(self.data.items())]

    def __len__(self) -> int:
        return len(self.data)

    def add(self, metrics, xis, psi_power: int, coeff: EpsLaurent, den: Monomial = ()):
        key = (tuple(sorted(metrics)), tuple(sorted(xis)), psi_power, tuple(sorted(den)))
        if key in self.data:
            coeff = self.data[key] + coeff
        if coeff.is_zero():
            self.data.pop(key, None)
        else:
            self.data[key] = coeff

    def __add__(self, other: "SymExpr") -> "SymExpr":
        d = math.lcm(self.denom, other.denom)
        out = SymExpr(self.graph, {k: v * (d // self.denom) for k, v in self.data.items()}, d)
        for (m, x, p, den), c in other.data.items():
            out.add(m, x, p, c * (d // other.denom), den)
        return out

    def scale(self, c) -> "SymExpr":
        return SymExpr(self.graph, {k: v * c for k, v in self.data.items() if c != 0}, self.denom)

    def flip_xi(self, e: int) -> "SymExpr":
        """Substitute xi_e -> -xi_e."""
        out = {}
        for key, c in self.data.items():
            n = sum(1 for f, _ in key[1] if f == e)
            out[key] = -c if n % 2 else c
        return SymExpr(self.graph, out, self.denom)

    def eps_slice(self, k: int) -> "SymExpr":
        out = {}
        for key, c in self.data.items():
            p = c.coeff(k)
            if not p.is_zero():
                out[key] = EpsLaurent({0: p})
        return SymExpr(self.graph, out, self.denom)

    def __str__(self) -> str:
        lines = []
        for t in self.terms:
            tensor = [f"g^{{{a},{b}}}" for a, b in t.metric_factors]
            tensor += [f"xi{e}^{{{i}}}" for e, i in t.xi_factors]
            lines.append(f"{' '.join(tensor) or '1'} : {format_fraction(t.coeff, t.psi_power, t.alpha_denominator)}")
        return "\n".join(lines)


# -- raw coefficient helpers -------------------------------------------------------


_MONO_MUL: dict = {}


def _addmul(target: dict, coeff: dict, poly: dict, factor: int, shift: int = 0):
    """target[eps + shift] += factor * coeff[eps] * poly."""
    cache = _MONO_MUL
    for k, terms in coeff.items():
        slot = target.setdefault(k + shift, {})
        for m1, c1 in terms.items():
            c1 *= factor
            for m2, c2 in poly.items():
                m = cache.get((m1, m2))
                if m is None:
                    if len(cache) > 1_000_000:
                        cache.clear()
                    m = cache[(m1, m2)] = tuple(sorted(m1 + m2))
                v = slot.get(m, 0) + c1 * c2
                if v:
                    slot[m] = v
                else:
                    del slot[m]


def _addscaled(target: dict, coeff: dict, factor: int, shift: int = 0):
    for k, terms in coeff.items():
        slot = target.setdefault(k + shift, {})
        for m, c in terms.items():
            v = slot.get(m, 0) + c * factor
            if v:
                slot[m] = v
            else:
                del slot[m]


def _drop_one(m: tuple, e: int) -> tuple:
    i = m.index(e)
    return m[:i] + m[i + 1:]


def _tidy(expr: dict, e: int | None = None) -> dict:
    """Remove zero coefficients; cancel alpha_e from the denominator when possible."""
    out = {}
    for key, coeff in expr.items():
        coeff = {k: t for k, t in coeff.items() if t}
        if not coeff:
            continue
        metrics, xis, p, den = key
        if e is not None and e in den and all(e in m for t in coeff.values() for m in t):
            coeff = {k: {_drop_one(m, e): c for m, c in t.items()} for k, t in coeff.items()}
            key = (metrics, xis, p, _drop_one(den, e))
        if key in out:
            _addscaled(out[key], coeff, 1)
        else:
            out[key] = coeff
    for key in [k for k, c in out.items() if not any(c.values())]:
        del out[key]
    return out


# -- the operator -------------------------------------------------------------------


def phi_xi_derivative(G: Graph, e: int, index: IndexLabel, check: bool = True) -> SymExpr:
    """(1/2) dPhi/dxi_{e,index} as a sum of xi_f^index terms.

    With ``check`` the quotient by a_e is compared with X^{e,index}.
    """
    if not G.is_connected():
        raise Disconnected("phi_xi_derivative needs a connected graph")
    Q = symanzik2(G)
    out = SymExpr(G)
    row = {}
    for f in G.edge_ids:
        p = Q.entry(e, f)
        if not p.is_zero():
            row[f] = p
            out.add((), ((f, index),), 0, EpsLaurent({0: p}))
    if check and not G.edge(e).is_self_loop:
        X = x_poly(G, e, index)
        for f in sorted(set(row) | set(X.coeffs)):
            p = row.get(f, Poly())
            if not p.divisible_by_monomial((e,)) or p.div_monomial((e,)) != X.coeff(f):
                raise OracleMismatch(f"(1/2a_{e}) dPhi/dxi_{e} differs from X at xi_{f}")
    return out


def _row(G: Graph, e: int) -> dict:
    frag = phi_xi_derivative(G, e, mu(e))
    return {key[1][0][0]: dict(c.coeff(0).terms) for key, c in frag.data.items()}


def _derivative(expr: dict, rows: dict, e: int, idx: IndexLabel) -> dict:
    out: dict = {}
    row = rows[e]
    for key, coeff in expr.items():
        metrics, xis, p, den = key
        for i, (f, j) in enumerate(xis):
            if f == e:
                k2 = (tuple(sorted(metrics + (_pair(idx, j),))), xis[:i] + xis[i + 1:], p, den)
                _addscaled(out.setdefault(k2, {}), coeff, 1)
        for f, poly in row.items():
            k2 = (metrics, tuple(sorted(xis + ((f, idx),))), p + 1, den)
            _addmul(out.setdefault(k2, {}), coeff, poly, -2)
    return out


def _with_den(expr: dict, e: int) -> dict:
    return {(m, x, p, tuple(sorted(d + (e,)))): c for (m, x, p, d), c in expr.items()}


def _fermion(expr: dict, rows: dict, e: int) -> dict:
    # 2 * (-1/(2 a_e)) d/dxi_{e,mu_e}
    d = _derivative(expr, rows, e, mu(e))
    for c in d.values():
        for t in c.values():
            for m in t:
                t[m] = -t[m]
    return _tidy(_with_den(d, e), e)


def _photon(expr: dict, rows: dict, G: Graph, e: int, gauge: str) -> dict:
    # 4 * [((2 + eps)/2) g^{nu_u nu_v} + (eps/(4 a_e)) d^2/dxi_{e,nu_u} dxi_{e,nu_v}]
    edge = G.edge(e)
    iu, iv = nu(edge.source), nu(edge.target)
    g = _pair(iu, iv)
    out: dict = {}
    for (m, x, p, d), coeff in expr.items():
        key = (tuple(sorted(m + (g,))), x, p, d)
        slot = out.setdefault(key, {})
        _addscaled(slot, coeff, 4)
        if gauge == GENERAL:
            _addscaled(slot, coeff, 2, shift=1)
    if gauge == GENERAL:
        dd = _derivative(_derivative(expr, rows, e, iu), rows, e, iv)
        for key, coeff in _with_den(dd, e).items():
            _addscaled(out.setdefault(key, {}), coeff, 1, shift=1)
    return _tidy(out, e)


def _check_input(G: Graph):
    problems = validate_qed(G)
    if problems:
        raise InvalidQed(problems)
    if not G.is_connected():
        raise Disconnected("apply_D needs a connected graph")


def apply_D(G: Graph, gauge: str = GENERAL, order: Iterable[int] | None = None) -> SymExpr:
    """D_Γ exp(-Phi/Psi), divided by exp(-Phi/Psi).

    ``order`` lists the edge ids in the order their factors are applied;
    the default is fermions then photons, each by id.
    """
    _check_input(G)
    fermions = [e.id for e in G.edges if e.kind == FERMION]
    photons = [e.id for e in G.edges if e.kind == PHOTON]
    seq = list(order) if order is not None else fermions + photons
    if sorted(seq) != sorted(fermions + photons):
        raise ValueError("order must list every fermion and photon edge once")
    rows = {e: _row(G, e) for e in G.edge_ids}
    expr: dict = {((), (), 0, ()): {0: {(): 1}}}
    for e in seq:
        if G.edge(e).kind == FERMION:
            expr = _fermion(expr, rows, e)
        else:
            expr = _photon(expr, rows, G, e, gauge)
    out = SymExpr(G, denom=2 ** len(fermions) * 4 ** len(photons))
    for key, coeff in sorted(expr.items()):
        lau = EpsLaurent({k: Poly._wrap(t) for k, t in coeff.items() if t})
        if not lau.is_zero():
            out.data[key] = lau
    return out


# -- numerator side ----------------------------------------------------------------


def lift_numerator(N: NumeratorExpr) -> SymExpr:
    """Expand every X factor of N into xi monomials."""
    G = N.graph
    terms = [t for t in N.terms if not t.coeff.is_zero()]
    denom = 1
    for t in terms:
        for p in t.coeff.coeffs.values():
            for _, c in p.items():
                if type(c) is Fraction:
                    denom = math.lcm(denom, c.denominator)
    cache: dict = {}
    acc: dict = {}
    for t in terms:
        start = {k: dict(p.mul_monomial(t.prefactor, denom).terms) for k, p in t.coeff.coeffs.items()}
        partial = {(): start}
        for e, idx in t.x_factors:
            if e not in cache:
                cache[e] = {f: dict(p.terms) for f, p in x_poly(G, e, None).coeffs.items()}
            nxt = {}
            for xis, c in partial.items():
                for f, p in cache[e].items():
                    slot: dict = {}
                    _addmul(slot, c, p, 1)
                    nxt[xis + ((f, idx),)] = slot
            partial = nxt
        for xis, c in partial.items():
            key = (t.metric_pairs, tuple(sorted(xis)), t.psi_power, ())
            if key in acc:
                _addscaled(acc[key], c, 1)
            else:
                acc[key] = c
    out = SymExpr(G, denom=denom)
    for key, coeff in sorted(acc.items()):
        lau = EpsLaurent({k: Poly._wrap(t) for k, t in coeff.items() if t})
        if not lau.is_zero():
            out.data[key] = lau
    return out


# -- comparison --------------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    equal: bool
    report: dict | None = None

    def __bool__(self) -> bool:
        return self.equal


def _grouped(expr: SymExpr) -> dict:
    g: dict = {}
    for (m, x, p, d), c in expr.data.items():
        g.setdefault((m, x), []).append((c, p, d))
    return g


def expressions_equal(a: SymExpr, b: SymExpr) -> Comparison:
    """Exact comparison; reports the first tensor structure that differs."""
    psi = kirchhoff(a.graph)
    ga, gb = _grouped(a), _grouped(b)
    for key in sorted(set(ga) | set(gb)):
        pa, pb = ga.get(key, []), gb.get(key, [])
        den: Monomial = ()
        for _, _, d in pa + pb:
            den = monomial_lcm(den, d)
        diff: dict = {}  # eps -> psi power -> Poly, scaled by a.denom * b.denom
        for parts, sign in ((pa, b.denom), (pb, -a.denom)):
            for c, p, d in parts:
                lift = monomial_div(den, d)
                for k, q in c.coeffs.items():
                    q = q.mul_monomial(lift, sign)
                    slot = diff.setdefault(k, {})
                    slot[p] = slot[p] + q if p in slot else q
        for k in sorted(diff):
            if not vanishes(diff[k], psi):
                num, P, dd = combine(
                    [(EpsLaurent({0: q}), p, den) for p, q in diff[k].items()], psi)
                metrics, xis = key
                return Comparison(False, {
                    "metrics": [[str(i), str(j)] for i, j in metrics],
                    "xi": [{"edge": e, "index": str(i)} for e, i in xis],
                    "eps_power": k,
                    "difference": str(num.coeff(0).scale(Fraction(1, a.denom * b.denom))),
                    "psi_power": P,
                    "alpha_den": monomial_str(dd),
                })
    return Comparison(True)


def verify_theorem(G: Graph, gauge: str = GENERAL) -> Comparison:
    from .integrand import numerator

    return expressions_equal(apply_D(G, gauge), lift_numerator(numerator(G, gauge)))


__all__ = [
    "TensorTerm", "SymExpr", "Comparison", "OracleMismatch", "phi_xi_derivative", "apply_D",
    "lift_numerator", "expressions_equal", "verify_theorem", "FEYNMAN", "GENERAL",
]
