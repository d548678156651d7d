"""Exact sparse polynomials in the Schwinger parameters ``a<edge-id>``.

A monomial is stored as a sorted tuple of edge ids with repetition, so
``a1^2*a3`` is ``(1, 1, 3)``.  Products of monomials are then a sorted
concatenation and the canonical graded-lexicographic order coincides with
``(-len(m), m)``.

Coefficients are Python ints (arbitrary precision).  Rational coefficients
(``fractions.Fraction``) are accepted as well; they only show up as the powers
of two carried by integrand coefficients.  Graph polynomials are integral.
"""

from __future__ import annotations

import heapq
import re
from collections import Counter
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Monomial = tuple  # tuple[int, ...], sorted edge ids with multiplicity
Coeff = Union[int, Fraction]

ONE_MONOMIAL: Monomial = ()


def monomial_key(m: Monomial) -> tuple:
    """Sort key realising graded-lex order (higher degree first, then a1 > a2 > ...)."""
    return (-len(m), m)


def monomial_from_exponents(exponents: Mapping[int, int]) -> Monomial:
    out: list[int] = []
    for e, k in exponents.items():
        if k < 0:
            raise ValueError(f"negative exponent for a{e}")
        out.extend([e] * k)
    return tuple(sorted(out))


def monomial_exponents(m: Monomial) -> dict[int, int]:
    return dict(Counter(m))


def monomial_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return tuple(sorted(m1 + m2))


def monomial_divides(d: Monomial, m: Monomial) -> bool:
    need = Counter(d)
    have = Counter(m)
    return all(have[v] >= k for v, k in need.items())


def monomial_div(m: Monomial, d: Monomial) -> Monomial | None:
    """Return m/d, or None when d does not divide m."""
    if not d:
        return m
    rest = list(m)
    for v in d:
        try:
            rest.remove(v)
        except ValueError:
            return None
    return tuple(rest)


def monomial_lcm(m1: Monomial, m2: Monomial) -> Monomial:
    c1, c2 = Counter(m1), Counter(m2)
    return monomial_from_exponents({v: max(c1[v], c2[v]) for v in set(c1) | set(c2)})


def monomial_str(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for e, k in sorted(Counter(m).items()):
        parts.append(f"a{e}" if k == 1 else f"a{e}^{k}")
    return "*".join(parts)


def _clean(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


_SCALARS = (int, Fraction)


def _is_scalar(x) -> bool:
    # type() first: isinstance against Fraction goes through the ABC machinery
    t = type(x)
    return t is int or t is Fraction or isinstance(x, _SCALARS)


class Poly:
    """Immutable sparse polynomial with exact coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] | Iterable[tuple[Monomial, Coeff]] | None = None):
        acc: dict[Monomial, Coeff] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for m, c in items:
                m = tuple(sorted(m))
                acc[m] = acc.get(m, 0) + c
        self._terms = {m: _clean(c) for m, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict[Monomial, Coeff]) -> "Poly":
        # trusted path: keys sorted, no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Coeff) -> "Poly":
        return cls._wrap({(): _clean(c)} if c != 0 else {})

    @classmethod
    def var(cls, e: int) -> "Poly":
        return cls._wrap({(e,): 1})

    @classmethod
    def monomial(cls, m: Monomial, c: Coeff = 1) -> "Poly":
        return cls._wrap({tuple(sorted(m)): _clean(c)} if c != 0 else {})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Coeff]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, Coeff]]:
        """Terms in canonical graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]))

    def __iter__(self) -> Iterator[tuple[Monomial, Coeff]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, m: Monomial) -> Coeff:
        return self._terms.get(tuple(sorted(m)), 0)

    def variables(self) -> set[int]:
        return {v for m in self._terms for v in m}

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self._terms}) <= 1

    def is_multilinear(self) -> bool:
        return all(len(set(m)) == len(m) for m in self._terms)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {()}

    def constant_value(self) -> Coeff:
        return self._terms.get((), 0)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if _is_scalar(other):
                other = Poly.constant(other)
            else:
                return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m, 0) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = _clean(v)
        return Poly._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        if _is_scalar(other):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Coeff) -> "Poly":
        if c == 0:
            return ZERO
        if c == 1:
            return self
        return Poly._wrap({m: _clean(v * c) for m, v in self._terms.items()})

    def mul_monomial(self, mono: Monomial, c: Coeff = 1) -> "Poly":
        if c == 0:
            return ZERO
        if not mono:
            return self.scale(c)
        return Poly._wrap({tuple(sorted(m + mono)): _clean(v * c) for m, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(b) == 1:
            ((m, c),) = b.items()
            return self.mul_monomial(m, c)
        if len(a) == 1:
            ((m, c),) = a.items()
            return other.mul_monomial(m, c)
        out: dict[Monomial, Coeff] = {}
        get = out.get
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                out[m] = get(m, 0) + c1 * c2
        return Poly._wrap({m: _clean(c) for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if _is_scalar(other):
            return self._terms == ({(): other} if other != 0 else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus and evaluation -------------------------------------------

    def partial(self, e: int) -> "Poly":
        out: dict[Monomial, Coeff] = {}
        for m, c in self._terms.items():
            k = m.count(e)
            if k:
                i = m.index(e)
                r = m[:i] + m[i + 1:]
                out[r] = out.get(r, 0) + c * k
        return Poly._wrap({m: c for m, c in out.items() if c != 0})

    def substitute(self, e: int, value: Coeff) -> "Poly":
        out: dict[Monomial, Coeff] = {}
        for m, c in self._terms.items():
            k = m.count(e)
            if k:
                if value == 0:
                    continue
                r = tuple(v for v in m if v != e)
                c = c * value**k
            else:
                r = m
            out[r] = out.get(r, 0) + c
        return Poly._wrap({m: _clean(c) for m, c in out.items() if c != 0})

    def evaluate(self, values: Mapping[int, Coeff]) -> Coeff:
        total: Coeff = 0
        for m, c in self._terms.items():
            t = c
            for v in m:
                t = t * values[v]
            total += t
        return _clean(total) if isinstance(total, Fraction) else total

    def divisible_by_monomial(self, d: Monomial) -> bool:
        return all(monomial_divides(d, m) for m in self._terms)

    def div_monomial(self, d: Monomial) -> "Poly":
        out = {}
        for m, c in self._terms.items():
            q = monomial_div(m, d)
            if q is None:
                raise ArithmeticError(f"{monomial_str(d)} does not divide {self}")
            out[q] = c
        return Poly._wrap(out)

    def divexact(self, divisor: "Poly") -> "Poly":
        """Exact division; raises ArithmeticError when a remainder is left."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if len(divisor._terms) == 1:
            ((dm, dc),) = divisor._terms.items()
            return self.div_monomial(dm).scale(Fraction(1) / dc)
        dterms = divisor.items()
        lead_m, lead_c = dterms[0]
        rest = dterms[1:]
        rem = dict(self._terms)
        heap = [monomial_key(m) for m in rem]
        heapq.heapify(heap)
        quot: dict[Monomial, Coeff] = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = rem.pop(m, 0)
            if c == 0:
                continue
            q = monomial_div(m, lead_m)
            if q is None:
                raise ArithmeticError(f"{divisor} does not divide {self}")
            qc = _clean(Fraction(c) / lead_c) if c % lead_c else c // lead_c
            quot[q] = qc
            for dm, dc in rest:
                t = tuple(sorted(q + dm)) if q and dm else (q or dm)
                old = rem.get(t)
                if old is None:
                    rem[t] = -qc * dc
                    heapq.heappush(heap, monomial_key(t))
                else:
                    rem[t] = old - qc * dc
        return Poly._wrap({m: _clean(c) for m, c in quot.items() if c != 0})

    # -- text form ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.items()):
            neg = c < 0
            a = -c if neg else c
            body = monomial_str(m) if m else ""
            if not m:
                s = str(a)
            elif a == 1:
                s = body
            else:
                s = f"{a}*{body}"
            if i == 0:
                out.append(("-" if neg else "") + s)
            else:
                out.append((" - " if neg else " + ") + s)
        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return parse_poly(text)


ZERO = Poly._wrap({})
ONE = Poly._wrap({(): 1})

_TERM_SPLIT = re.compile(r"([+-])")
_FACTOR = re.compile(r"^a(\d+)(?:\^(\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def parse_poly(text: str) -> Poly:
    """Parse polynomial text such as ``"a1*a2 - 2*a3 + 1/2"`` (whitespace optional)."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial text")
    pieces = _TERM_SPLIT.split(s)
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    terms: list[tuple[Monomial, Coeff]] = []
    for op, body in zip(pieces[0::2], pieces[1::2]):
        if not body:
            raise ValueError(f"dangling sign in {text!r}")
        coeff: Coeff = 1 if op == "+" else -1
        mono: list[int] = []
        for factor in body.split("*"):
            if _NUMBER.match(factor):
                coeff = coeff * Fraction(factor)
                continue
            fm = _FACTOR.match(factor)
            if not fm:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            mono.extend([int(fm.group(1))] * int(fm.group(2) or 1))
        terms.append((tuple(mono), coeff))
    return Poly(terms)


def poly_normalize(terms: Iterable[tuple[Monomial | Mapping[int, int], Coeff]]) -> Poly:
    """Merge duplicate monomials and drop zeros.

    Monomials may be given as sorted-id tuples or as exponent maps.
    """
    norm = []
    for m, c in terms:
        if isinstance(m, Mapping):
            m = monomial_from_exponents(m)
        norm.append((tuple(sorted(m)), c))
    return Poly(norm)


def poly_partial(p: Poly, e: int) -> Poly:
    return p.partial(e)


def poly_substitute(p: Poly, e: int, value: Coeff) -> Poly:
    return p.substitute(e, value)


def poly_product(polys: Iterable[Poly]) -> Poly:
    out = ONE
    for p in polys:
        out = out * p
    return out


def poly_sum(polys: Iterable[Poly]) -> Poly:
    acc: dict[Monomial, Coeff] = {}
    for p in polys:
        for m, c in p._terms.items():
            acc[m] = acc.get(m, 0) + c
    return Poly._wrap({m: _clean(c) for m, c in acc.items() if c != 0})


class EpsLaurent:
    """Laurent polynomial in the gauge parameter with Poly coefficients.

    Represents ``sum_k eps^k * coeffs[k] / alpha^den``; ``den`` is empty except
    for the same-edge cycle term before it is merged into a prefactor.
    """

    __slots__ = ("coeffs", "den")

    def __init__(self, coeffs: Mapping[int, Poly] | None = None, den: Monomial = ()):
        self.coeffs = {k: p for k, p in sorted((coeffs or {}).items()) if not p.is_zero()}
        self.den = tuple(sorted(den))

    @classmethod
    def from_poly(cls, p: Poly, power: int = 0) -> "EpsLaurent":
        return cls({power: p})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Poly:
        return self.coeffs.get(k, ZERO)

    def min_power(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def max_power(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def _aligned(self, other: "EpsLaurent") -> tuple[dict[int, Poly], dict[int, Poly], Monomial]:
        if self.den == other.den:
            return self.coeffs, other.coeffs, self.den
        den = monomial_lcm(self.den, other.den)
        ma = monomial_div(den, self.den)
        mb = monomial_div(den, other.den)
        a = {k: p.mul_monomial(ma) for k, p in self.coeffs.items()}
        b = {k: p.mul_monomial(mb) for k, p in other.coeffs.items()}
        return a, b, den

    def __add__(self, other: "EpsLaurent") -> "EpsLaurent":
        a, b, den = self._aligned(other)
        out = dict(a)
        for k, p in b.items():
            out[k] = out[k] + p if k in out else p
        return EpsLaurent(out, den)

    def __neg__(self) -> "EpsLaurent":
        return EpsLaurent({k: -p for k, p in self.coeffs.items()}, self.den)

    def __sub__(self, other: "EpsLaurent") -> "EpsLaurent":
        return self + (-other)

    def __mul__(self, other) -> "EpsLaurent":
        if isinstance(other, Poly) or _is_scalar(other):
            return EpsLaurent({k: p * other for k, p in self.coeffs.items()}, self.den)
        out: dict[int, Poly] = {}
        for i, p in self.coeffs.items():
            for j, q in other.coeffs.items():
                t = p * q
                out[i + j] = out[i + j] + t if i + j in out else t
        return EpsLaurent(out, monomial_mul(self.den, other.den))

    __rmul__ = __mul__

    def shift(self, k: int) -> "EpsLaurent":
        """Multiply by eps^k."""
        return EpsLaurent({i + k: p for i, p in self.coeffs.items()}, self.den)

    def cancel_den(self, mono: Monomial) -> tuple["EpsLaurent", Monomial]:
        """Merge the denominator into a numerator monomial prefactor.

        Returns ``(coeff_without_den, prefactor / den)``; raises if ``den`` does
        not divide ``mono``.
        """
        rest = monomial_div(tuple(sorted(mono)), self.den)
        if rest is None:
            raise ArithmeticError(f"prefactor {monomial_str(mono)} does not absorb 1/{monomial_str(self.den)}")
        return EpsLaurent(self.coeffs), rest

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpsLaurent):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self) -> int:
        return hash((tuple(self.coeffs.items()), self.den))

    def to_json(self) -> dict[str, str]:
        return {str(k): str(p) for k, p in self.coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "EpsLaurent":
        return cls({int(k): parse_poly(v) for k, v in data.items()})

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, p in self.coeffs.items():
            parts.append(f"({p})" if k == 0 else f"eps^{k}*({p})")
        s = " + ".join(parts)
        if self.den:
            s = f"[{s}]/{monomial_str(self.den)}"
        return s

    def __repr__(self) -> str:
        return f"EpsLaurent({str(self)!r})"
