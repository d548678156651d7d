"""Rational functions of the form  sum_k eps^k num_k / (Psi^P * alpha^den).

Used to bring tensor coefficients with different Psi powers and alpha
denominators to one reduced representative.  Since Psi^P never divides a
reduced numerator, the reduced triple is unique for a given value.
"""

from __future__ import annotations

from typing import Iterable

from .polyring import (EpsLaurent, Poly, monomial_div, monomial_lcm, monomial_str)


def _divisible_all(coeffs: dict, psi: Poly) -> dict | None:
    out = {}
    for k, p in coeffs.items():
        try:
            out[k] = p.divexact(psi)
        except ArithmeticError:
            return None
    return out


def combine(parts: Iterable[tuple[EpsLaurent, int, tuple]], psi: Poly) -> tuple[EpsLaurent, int, tuple]:
    """Sum ``coeff / (Psi^p alpha^den)`` parts and reduce.

    Returns ``(numerator, psi_power, alpha_den)`` with no common factor of Psi
    or of any alpha_e left between numerator and denominator.
    """
    parts = [(c, p, tuple(sorted(d))) for c, p, d in parts if not c.is_zero()]
    if not parts:
        return EpsLaurent(), 0, ()
    P = max(p for _, p, _ in parts)
    den: tuple = ()
    for _, _, d in parts:
        den = monomial_lcm(den, d)
    # Horner in Psi over the parts sorted by power
    by_power: dict[int, dict[int, Poly]] = {}
    for c, p, d in parts:
        lift = monomial_div(den, d)
        slot = by_power.setdefault(p, {})
        for k, q in c.coeffs.items():
            q = q.mul_monomial(lift)
            slot[k] = slot[k] + q if k in slot else q
    acc: dict[int, Poly] = {}
    for p in range(0, P + 1):
        if acc:
            acc = {k: q * psi for k, q in acc.items()}
        for k, q in by_power.get(p, {}).items():
            acc[k] = acc[k] + q if k in acc else q
        acc = {k: q for k, q in acc.items() if not q.is_zero()}
    num = acc
    # cancel alpha factors
    den_l = list(den)
    for v in sorted(set(den)):
        while v in den_l and num and all(q.divisible_by_monomial((v,)) for q in num.values()):
            num = {k: q.div_monomial((v,)) for k, q in num.items()}
            den_l.remove(v)
    # cancel Psi factors
    while P > 0 and num:
        red = _divisible_all(num, psi)
        if red is None:
            break
        num, P = red, P - 1
    if not num:
        return EpsLaurent(), 0, ()
    return EpsLaurent(num), P, tuple(den_l)


def vanishes(diff_by_power: dict[int, Poly], psi: Poly) -> bool:
    """True iff sum_p D_p / Psi^p == 0, checked by successive exact division."""
    diff_by_power = {p: q for p, q in diff_by_power.items() if not q.is_zero()}
    if not diff_by_power:
        return True
    P = max(diff_by_power)
    acc = diff_by_power.get(P)
    for p in range(P, 0, -1):
        if acc is None or acc.is_zero():
            acc = diff_by_power.get(p - 1)
            continue
        try:
            acc = acc.divexact(psi)
        except ArithmeticError:
            return False
        low = diff_by_power.get(p - 1)
        if low is not None:
            acc = acc + low
    return acc is None or acc.is_zero()


def format_fraction(num: EpsLaurent, P: int, den: tuple) -> str:
    d = []
    if P:
        d.append("Psi" if P == 1 else f"Psi^{P}")
    if den:
        d.append(monomial_str(den))
    return f"{num}" + (f" / ({'*'.join(d)})" if d else "")
