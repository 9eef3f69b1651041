"""Exact coefficient rings: Laurent polynomials in q^(1/2) and truncated series in u.

Rationals are :class:`fractions.Fraction` throughout.  Half-integer powers of q
are keyed by their doubled exponent, so ``{1: 1, -1: -1}`` is q^(1/2) - q^(-1/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DivisionByZeroSeries, MixedSymmetry, NonIntegralExponent

Rational = Fraction

DEFAULT_ORDER = 21


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class HalfLaurent:
    """Finite sum of c_k q^(k/2) with rational c_k; zero coefficients are never stored."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __init__(self, coeffs: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for k, c in items:
            acc[int(k)] = acc.get(int(k), Fraction(0)) + Fraction(c)
        object.__setattr__(
            self, "terms", tuple(sorted((k, c) for k, c in acc.items() if c != 0))
        )

    @classmethod
    def constant(cls, c) -> HalfLaurent:
        return cls({0: c})

    @classmethod
    def monomial(cls, doubled_exponent: int, c=1) -> HalfLaurent:
        return cls({doubled_exponent: c})

    @classmethod
    def q_integer(cls, m: int) -> HalfLaurent:
        """[m]_q = q^(-(m-1)/2) + ... + q^((m-1)/2)."""
        if m < 1:
            raise ValueError("q-integer needs m >= 1")
        return cls({-(m - 1) + 2 * j: 1 for j in range(m)})

    @classmethod
    def sine_numerator(cls, m: int) -> HalfLaurent:
        """q^(m/2) - q^(-m/2)."""
        return cls({m: 1, -m: -1})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def symmetric(self) -> bool:
        c = self.coeffs
        return all(c.get(-k, 0) == v for k, v in c.items())

    @property
    def antisymmetric(self) -> bool:
        c = self.coeffs
        return all(c.get(-k, 0) == -v for k, v in c.items())

    def __add__(self, other) -> HalfLaurent:
        other = _as_laurent(other)
        return HalfLaurent(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self) -> HalfLaurent:
        return HalfLaurent((k, -c) for k, c in self.terms)

    def __sub__(self, other) -> HalfLaurent:
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> HalfLaurent:
        return _as_laurent(other) - self

    def __mul__(self, other) -> HalfLaurent:
        if not isinstance(other, HalfLaurent):
            if isinstance(other, (int, Fraction)):
                return HalfLaurent((k, c * other) for k, c in self.terms)
            return NotImplemented
        return half_laurent_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> HalfLaurent:
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = HalfLaurent.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms, reverse=True):
            if k == 0:
                mono = ""
            elif k == 2:
                mono = "q"
            elif k % 2 == 0:
                mono = f"q^{{{k // 2}}}"
            else:
                mono = f"q^{{{k}/2}}"
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return {"halfpowers": [[k, format_rational(c)] for k, c in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> HalfLaurent:
        return cls((int(k), parse_rational(c)) for k, c in data["halfpowers"])


def _as_laurent(x) -> HalfLaurent:
    if isinstance(x, HalfLaurent):
        return x
    if isinstance(x, (int, Fraction)):
        return HalfLaurent.constant(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a Laurent polynomial")


def half_laurent_mul(a: HalfLaurent, b: HalfLaurent) -> HalfLaurent:
    acc: dict[int, Fraction] = {}
    for ka, ca in a.terms:
        for kb, cb in b.terms:
            acc[ka + kb] = acc.get(ka + kb, Fraction(0)) + ca * cb
    return HalfLaurent(acc)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def laurent_eval(p: HalfLaurent, at) -> Fraction:
    """Exact value of p at q = ``at``."""
    at = Fraction(at)
    if all(k % 2 == 0 for k, _ in p.terms):
        base, step = at, 2
    else:
        root = _rational_sqrt(at)
        if root is None:
            raise NonIntegralExponent(f"q^(1/2) is not rational at q = {at}")
        base, step = root, 1
    total = Fraction(0)
    for k, c in p.terms:
        e = k // step
        if e < 0 and base == 0:
            raise ZeroDivisionError("negative power evaluated at q = 0")
        total += c * base**e
    return total


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in u known through u^order."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __init__(self, order: int, coeffs: Iterable = ()):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [Fraction(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls(order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls(order, [1])

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise IndexError(f"u^{k} is outside the stored order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return TruncatedSeries(order, self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def __add__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries(self.order, [other])
        n = min(self.order, other.order)
        return TruncatedSeries(n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.order, [-c for c in self.coeffs])

    def __sub__(self, other) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.order, [c * other for c in self.coeffs])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if a[i]:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += a[i] * b[j]
        return TruncatedSeries(n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> TruncatedSeries:
        out = TruncatedSeries.one(self.order)
        for _ in range(e):
            out = out * self
        return out

    def __truediv__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.order, [c / other for c in self.coeffs])
        return series_divide(self, other)

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            mag = abs(c)
            body = mono if (mono and mag == 1) else (f"({mag}){mono}" if mono and mag.denominator != 1 else f"{mag}{mono}")
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return f"O(u^{self.order + 1})"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text + f" + O(u^{self.order + 1})"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> TruncatedSeries:
        return cls(int(data["order"]), [parse_rational(c) for c in data["coeffs"]])


def series_divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """a / b when b has valuation v and a is divisible by u^v.

    The quotient is only known through u^(min(a.order, b.order) - v).
    """
    v = b.valuation()
    if v is None:
        raise DivisionByZeroSeries("division by a series that vanishes to its stored order")
    n = min(a.order, b.order)
    if any(a.coeffs[k] for k in range(min(v, n + 1))):
        raise DivisionByZeroSeries(f"numerator is not divisible by u^{v}")
    num = a.coeffs[v : n + 1]
    den = b.coeffs[v : n + 1]
    out_order = n - v
    if out_order < 0:
        raise DivisionByZeroSeries("no coefficients survive the division")
    q: list[Fraction] = []
    lead = den[0]
    for k in range(out_order + 1):
        s = num[k] - sum(q[j] * den[k - j] for j in range(max(0, k - len(den) + 1), k))
        q.append(s / lead)
    return TruncatedSeries(out_order, q)


def _trig_series(freq: Fraction, order: int, odd: bool) -> list[Fraction]:
    """Taylor coefficients of 2 sin(freq u) (odd) or 2 cos(freq u) (even)."""
    out = [Fraction(0)] * (order + 1)
    start = 1 if odd else 0
    for k in range(start, order + 1, 2):
        sign = -1 if (k // 2) % 2 else 1
        out[k] = 2 * sign * freq**k / math.factorial(k)
    return out


def laurent_to_series(p: HalfLaurent, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Substitute q = e^{iu}.

    A symmetric p gives its (real, even) series directly.  An antisymmetric p
    gives the series of (-i)·p, which is real and odd.
    """
    if p.symmetric:
        odd = False
    elif p.antisymmetric:
        odd = True
    else:
        raise MixedSymmetry("p is neither symmetric nor antisymmetric under q -> 1/q")
    coeffs = [Fraction(0)] * (order + 1)
    for k, c in p.terms:
        if k < 0:
            continue
        if k == 0:
            coeffs[0] += c
            continue
        # c (q^{k/2} ± q^{-k/2}) -> 2c cos(ku/2) or, after the (-i), 2c sin(ku/2)
        for j, t in enumerate(_trig_series(Fraction(k, 2), order, odd)):
            coeffs[j] += c * t
    return TruncatedSeries(order, coeffs)


def sine_numerator_series(m: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """2 sin(m u / 2), the image of (-i)(q^{m/2} - q^{-m/2})."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    return TruncatedSeries(order, _trig_series(Fraction(m, 2), order, odd=True))
