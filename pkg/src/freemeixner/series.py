"""Exact rational polynomials and truncated formal power series.

Everything here works over :class:`fractions.Fraction`; no coefficient is
ever rounded.  A :class:`FormalPowerSeries` of order ``N`` stores the
coefficients of ``z**0 .. z**(N-1)``; binary operations truncate to the
smaller of the two orders.
"""
from __future__ import annotations

import os
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import NonzeroInnerConstant, NotInvertible, ZeroConstantTerm

DEFAULT_ORDER = 16

Rational = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def default_order() -> int:
    """Truncation order, overridable through ``FREEMEIXNER_ORDER``."""
    raw = os.environ.get("FREEMEIXNER_ORDER")
    if raw is None or raw.strip() == "":
        return DEFAULT_ORDER
    value = int(raw)
    if value < 2:
        raise ValueError(f"FREEMEIXNER_ORDER must be at least 2, got {value}")
    return value


def to_fraction(value: Rational) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Accepts Fractions, integers and strings ``"p"`` or ``"p/q"``.  Floats and
    decimal strings are rejected so that no precision is silently lost.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(value.replace(" ", ""))
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class Polynomial:
    """Univariate polynomial with rational coefficients, ascending by degree."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def monomial(cls, n: int, coeff: Rational = 1) -> Polynomial:
        return cls([0] * n + [coeff])

    @classmethod
    def x(cls) -> Polynomial:
        return cls([0, 1])

    @classmethod
    def constant(cls, value: Rational) -> Polynomial:
        return cls([value])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self._coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_monic(self) -> bool:
        return bool(self._coeffs) and self._coeffs[-1] == 1

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return Fraction(0)

    def __call__(self, x):
        result = Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        for c in reversed(self._coeffs):
            result = result * x + c
        return result

    def __add__(self, other) -> Polynomial:
        other = _as_poly(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self._coeffs)

    def __sub__(self, other) -> Polynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> Polynomial:
        return _as_poly(other) - self

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return Polynomial(c * other for c in self._coeffs)
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rational) -> Polynomial:
        s = to_fraction(scalar)
        return Polynomial(c / s for c in self._coeffs)

    def __pow__(self, n: int) -> Polynomial:
        result = Polynomial([1])
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> Polynomial:
        return Polynomial(k * c for k, c in enumerate(self._coeffs) if k > 0)

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        quot = [Fraction(0)] * max(len(rem) - other.degree, 0)
        lead = other.leading
        for k in range(len(rem) - 1, other.degree - 1, -1):
            factor = rem[k] / lead
            quot[k - other.degree] = factor
            for j, c in enumerate(other.coeffs):
                rem[k - other.degree + j] -= factor * c
        return Polynomial(quot), Polynomial(rem)

    def monic(self) -> Polynomial:
        return self / self.leading if self._coeffs else self

    def compose(self, other: Polynomial) -> Polynomial:
        result = Polynomial()
        for c in reversed(self._coeffs):
            result = result * other + c
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(("Polynomial", self._coeffs))

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self._coeffs)}])"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for k in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self._coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> Polynomial:
        return cls(data["coeffs"])


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic greatest common divisor (Euclid over the rationals)."""
    while not g.is_zero():
        f, g = g, divmod(f, g)[1]
    return f.monic()


def _as_poly(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction, str)):
        return Polynomial([value])
    raise TypeError(f"cannot treat {type(value).__name__} as a polynomial")


class FormalPowerSeries:
    """Truncated power series ``sum coeffs[k] z**k`` with exact coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Rational], order: int | None = None):
        cs = [to_fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            cs = (cs + [Fraction(0)] * order)[:order]
        self._coeffs = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> FormalPowerSeries:
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> FormalPowerSeries:
        return cls([1], order)

    @classmethod
    def identity(cls, order: int) -> FormalPowerSeries:
        """The series ``z``."""
        return cls([0, 1], order)

    @classmethod
    def geometric(cls, ratio: Rational, order: int) -> FormalPowerSeries:
        """``1 / (1 - ratio z)``."""
        r = to_fraction(ratio)
        return cls([r**k for k in range(order)])

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> FormalPowerSeries:
        return cls(p.coeffs, order)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, k):
        return self._coeffs[k]

    def __iter__(self):
        return iter(self._coeffs)

    def truncate(self, order: int) -> FormalPowerSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return FormalPowerSeries(self._coeffs[:order])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all vanish."""
        for k, c in enumerate(self._coeffs):
            if c != 0:
                return k
        return None

    def _align(self, other) -> tuple[FormalPowerSeries, FormalPowerSeries]:
        if isinstance(other, (int, Fraction)):
            other = FormalPowerSeries([other], self.order)
        if not isinstance(other, FormalPowerSeries):
            raise TypeError(f"cannot combine series with {type(other).__name__}")
        n = min(self.order, other.order)
        return FormalPowerSeries(self._coeffs[:n]), FormalPowerSeries(other._coeffs[:n])

    def __add__(self, other) -> FormalPowerSeries:
        a, b = self._align(other)
        return FormalPowerSeries(x + y for x, y in zip(a._coeffs, b._coeffs))

    __radd__ = __add__

    def __neg__(self) -> FormalPowerSeries:
        return FormalPowerSeries(-c for c in self._coeffs)

    def __sub__(self, other) -> FormalPowerSeries:
        a, b = self._align(other)
        return FormalPowerSeries(x - y for x, y in zip(a._coeffs, b._coeffs))

    def __rsub__(self, other) -> FormalPowerSeries:
        return (-self) + other

    def __mul__(self, other) -> FormalPowerSeries:
        if isinstance(other, (int, Fraction)):
            return FormalPowerSeries(c * other for c in self._coeffs)
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rational) -> FormalPowerSeries:
        s = to_fraction(scalar)
        return FormalPowerSeries(c / s for c in self._coeffs)

    def __pow__(self, n: int) -> FormalPowerSeries:
        result = FormalPowerSeries.one(self.order)
        for _ in range(n):
            result = multiply(result, self)
        return result

    def shift(self, k: int) -> FormalPowerSeries:
        """Multiply by ``z**k``; the order grows by ``k``."""
        return FormalPowerSeries([0] * k + list(self._coeffs))

    def lower(self, k: int) -> FormalPowerSeries:
        """Divide by ``z**k``; the first ``k`` coefficients must vanish."""
        if any(c != 0 for c in self._coeffs[:k]):
            raise ValueError(f"series is not divisible by z^{k}")
        return FormalPowerSeries(self._coeffs[k:])

    def derivative(self) -> FormalPowerSeries:
        return FormalPowerSeries(k * c for k, c in enumerate(self._coeffs) if k > 0)

    def reciprocal(self) -> FormalPowerSeries:
        return reciprocal(self)

    def compose(self, inner: FormalPowerSeries) -> FormalPowerSeries:
        return compose(self, inner)

    def revert(self) -> FormalPowerSeries:
        return revert(self)

    def to_polynomial(self) -> Polynomial:
        return Polynomial(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalPowerSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(("FormalPowerSeries", self._coeffs))

    def __repr__(self) -> str:
        return f"FormalPowerSeries([{', '.join(str(c) for c in self._coeffs)}])"

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._coeffs]


def multiply(f: FormalPowerSeries, g: FormalPowerSeries) -> FormalPowerSeries:
    """Cauchy product truncated to the smaller order."""
    n = min(f.order, g.order)
    a, b = f.coeffs, g.coeffs
    out = [Fraction(0)] * n
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n - i):
            out[i + j] += ai * b[j]
    return FormalPowerSeries(out)


def reciprocal(f: FormalPowerSeries) -> FormalPowerSeries:
    """Multiplicative inverse by forward substitution."""
    if f.order == 0:
        return f
    if f[0] == 0:
        raise ZeroConstantTerm("reciprocal needs a nonzero constant term")
    a = f.coeffs
    inv0 = 1 / a[0]
    out = [inv0]
    for k in range(1, f.order):
        s = sum((a[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
        out.append(-s * inv0)
    return FormalPowerSeries(out)


def compose(f: FormalPowerSeries, g: FormalPowerSeries) -> FormalPowerSeries:
    """``f(g(z))`` by Horner's scheme; ``g`` must have zero constant term."""
    if g.order and g[0] != 0:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    n = min(f.order, g.order)
    g = g.truncate(n)
    result = FormalPowerSeries.zero(n)
    for c in reversed(f.coeffs[:n]):
        result = multiply(result, g) + FormalPowerSeries([c], n)
    return result


def revert(f: FormalPowerSeries) -> FormalPowerSeries:
    """Compositional inverse by Newton iteration with precision doubling."""
    n = f.order
    if n < 2 or f[0] != 0 or f[1] == 0:
        raise NotInvertible("reversion needs f(0) = 0 and f'(0) != 0")
    g = FormalPowerSeries([0, 1 / f[1]])
    prec = 2
    while prec < n:
        old, prec = prec, min(2 * prec, n)
        fp = f.truncate(prec)
        gp = FormalPowerSeries(g.coeffs, prec)
        err = compose(fp, gp) - FormalPowerSeries.identity(prec)
        width = prec - old
        slope = compose(fp.derivative().truncate(width), gp.truncate(width))
        g = gp - multiply(err.lower(old), reciprocal(slope)).shift(old)
    return g


def revert_lagrange(f: FormalPowerSeries) -> FormalPowerSeries:
    """Compositional inverse from the Lagrange inversion formula.

    ``[z^n] g = (1/n) [w^(n-1)] (w / f(w))^n``.  Quadratic in cost per
    coefficient; kept as an independent check on :func:`revert`.
    """
    n = f.order
    if n < 2 or f[0] != 0 or f[1] == 0:
        raise NotInvertible("reversion needs f(0) = 0 and f'(0) != 0")
    h = reciprocal(f.lower(1))
    out = [Fraction(0)]
    power = FormalPowerSeries.one(h.order)
    for k in range(1, n):
        power = multiply(power, h)
        out.append(power[k - 1] / k)
    return FormalPowerSeries(out)
