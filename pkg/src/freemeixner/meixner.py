"""The free Meixner family.

A free Meixner law with mean ``m``, variance ``t`` and shape parameters
``b``, ``c`` has Jacobi parameters ``{(m, m+b, m+b, ...), (t, t+c, t+c, ...)}``;
``c >= -t`` is required for positivity.  With ``m = 0`` and ``t = 1`` this is
the normalised law ``mu_{b,c}``.

The Cauchy transform is ``G = (-q - sqrt(q^2 + 4 lam p)) / (2 p)`` with
``p = t + b(x-m) + (c/t)(x-m)^2``, ``q = -(b + (1 + 2c/t)(x-m))`` and
``lam = c/t + q'``; it gives the density
``sqrt(4(t+c) - (x-m-b)^2)_+ / (2 pi p(x))`` and at most two atoms, sitting
at real roots of ``p``.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidC, NoOperator
from .measures import JacobiParameters, MomentSequence, jacobi_to_moments, r_transform
from .operators import BochnerOperator
from .series import FormalPowerSeries, Polynomial, Rational, format_rational, poly_gcd, to_fraction


class MeixnerCase(str, enum.Enum):
    SEMICIRCULAR = "semicircular"
    MARCHENKO_PASTUR = "marchenko_pastur"
    FREE_BINOMIAL = "free_binomial"
    GAMMA_TYPE = "gamma_type"
    SECANT_TYPE = "secant_type"
    NEGATIVE_TYPE = "negative_type"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@functools.total_ordering
class QuadraticSurd:
    """The real number ``r + s sqrt(D)`` with rational ``r, s`` and ``D >= 0``.

    Comparisons and signs are decided exactly; ``float()`` is the only lossy
    operation.  A perfect-square radicand is folded into ``r``.
    """

    __slots__ = ("r", "s", "D")

    def __init__(self, r: Rational = 0, s: Rational = 0, D: Rational = 0):
        r, s, D = to_fraction(r), to_fraction(s), to_fraction(D)
        if D < 0:
            raise ValueError("negative radicand")
        root = _rational_sqrt(D)
        if root is not None:
            r, s, D = r + s * root, Fraction(0), Fraction(0)
        if s == 0:
            D = Fraction(0)
        self.r, self.s, self.D = r, s, D

    def _coerce(self, other) -> QuadraticSurd:
        if isinstance(other, QuadraticSurd):
            if other.s != 0 and self.s != 0 and other.D != self.D:
                raise ValueError("surds with different radicands")
            return other
        return QuadraticSurd(to_fraction(other))

    def _radicand(self, other: QuadraticSurd) -> Fraction:
        return self.D if self.s != 0 else other.D

    def __add__(self, other) -> QuadraticSurd:
        o = self._coerce(other)
        return QuadraticSurd(self.r + o.r, self.s + o.s, self._radicand(o))

    __radd__ = __add__

    def __neg__(self) -> QuadraticSurd:
        return QuadraticSurd(-self.r, -self.s, self.D)

    def __sub__(self, other) -> QuadraticSurd:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> QuadraticSurd:
        return self._coerce(other) - self

    def __mul__(self, other) -> QuadraticSurd:
        o = self._coerce(other)
        D = self._radicand(o)
        return QuadraticSurd(self.r * o.r + self.s * o.s * D, self.r * o.s + self.s * o.r, D)

    __rmul__ = __mul__

    def __truediv__(self, other) -> QuadraticSurd:
        o = self._coerce(other)
        norm = o.r * o.r - o.s * o.s * o.D
        if norm == 0:
            raise ZeroDivisionError("division by a zero surd")
        conj = QuadraticSurd(o.r / norm, -o.s / norm, o.D)
        return self * conj

    def sign(self) -> int:
        def sgn(v):
            return (v > 0) - (v < 0)

        if self.s == 0:
            return sgn(self.r)
        if sgn(self.r) == sgn(self.s) or self.r == 0:
            return sgn(self.s)
        # opposite signs: compare r^2 with s^2 D
        return sgn(self.r) * sgn(self.r * self.r - self.s * self.s * self.D)

    def is_rational(self) -> bool:
        return self.s == 0

    def __eq__(self, other) -> bool:
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.r, self.s, self.D))

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __float__(self) -> float:
        return float(self.r) + float(self.s) * math.sqrt(self.D)

    def __repr__(self) -> str:
        return f"QuadraticSurd({self.r}, {self.s}, {self.D})"

    def __str__(self) -> str:
        if self.s == 0:
            return str(self.r)
        return f"{self.r} + {self.s}*sqrt({self.D})"

    def to_json(self) -> dict:
        return {
            "rational": format_rational(self.r),
            "sqrt_coeff": format_rational(self.s),
            "radicand": format_rational(self.D),
            "approx": float(self),
        }


@dataclass(frozen=True)
class FreeMeixnerSpec:
    """Free Meixner law with mean ``mean``, variance ``variance`` and shape ``(b, c)``."""

    b: Fraction
    c: Fraction
    mean: Fraction = Fraction(0)
    variance: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("b", "c", "mean", "variance"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.variance <= 0:
            raise ValueError(f"variance must be positive, got {self.variance}")
        if self.c < -self.variance:
            raise InvalidC(f"c = {self.c} is below -variance = {-self.variance}")

    @property
    def case(self) -> MeixnerCase:
        if self.c == 0:
            return MeixnerCase.SEMICIRCULAR if self.b == 0 else MeixnerCase.MARCHENKO_PASTUR
        if self.c < 0:
            return MeixnerCase.FREE_BINOMIAL
        disc = self.b * self.b - 4 * self.c
        if disc == 0:
            return MeixnerCase.GAMMA_TYPE
        return MeixnerCase.SECANT_TYPE if disc < 0 else MeixnerCase.NEGATIVE_TYPE

    @property
    def center(self) -> Fraction:
        return self.mean + self.b

    @property
    def edge_variance(self) -> Fraction:
        """``t + c``: a quarter of the squared support half-width."""
        return self.variance + self.c

    # -- named families -------------------------------------------------

    @classmethod
    def semicircle(cls, mean: Rational = 0, variance: Rational = 1) -> FreeMeixnerSpec:
        return cls(0, 0, mean, variance)

    @classmethod
    def marchenko_pastur(cls, alpha: Rational) -> FreeMeixnerSpec:
        """Free Poisson law with rate ``alpha``: atom ``max(1-alpha, 0)`` at 0."""
        a = to_fraction(alpha)
        if a <= 0:
            raise ValueError("alpha must be positive")
        return cls(1, 0, a, a)

    @classmethod
    def free_binomial(cls, alpha: Rational, beta: Rational) -> FreeMeixnerSpec:
        """Law on ``[0, 1]`` with atoms ``max(1-alpha,0)`` at 0 and ``max(1-beta,0)`` at 1.

        Requires ``alpha + beta > 0`` and ``alpha beta > 0`` (both positive)
        or, for the negative-parameter branch, ``alpha + beta < 0``,
        ``alpha beta < 0``.
        """
        a, b = to_fraction(alpha), to_fraction(beta)
        s = a + b
        if s == 0 or a * b == 0:
            raise ValueError("free binomial parameters must have a*b != 0 and a+b != 0")
        if (a > 0) != (b > 0) and s > 0:
            raise ValueError("free binomial parameters of mixed sign need alpha + beta < 0")
        if a < 0 and b < 0:
            raise ValueError("free binomial parameters cannot both be negative")
        return cls((b - a) / s**2, -a * b / s**4, a / s, a * b / s**3)

    @classmethod
    def gamma_type(cls, alpha: Rational) -> FreeMeixnerSpec:
        """Law on ``x > 0`` with conjugate variable ``(2+alpha)/x - 1/x^2``."""
        a = to_fraction(alpha)
        if a <= 0:
            raise ValueError("alpha must be positive")
        return cls(2 / a**2, 1 / a**4, 1 / a, 1 / a**3)

    @classmethod
    def secant_type(cls, alpha: Rational, beta: Rational) -> FreeMeixnerSpec:
        """Law with conjugate variable ``((2+alpha) x - beta) / (1 + x^2)``."""
        a, b = to_fraction(alpha), to_fraction(beta)
        if a <= 0:
            raise ValueError("alpha must be positive")
        r = a * a + b * b
        return cls(2 * b / a**2, r / a**4, b / a, r / a**3)

    @classmethod
    def negative_type(cls, alpha: Rational, beta: Rational) -> FreeMeixnerSpec:
        """Law supported off ``[0, 1]``: the free binomial formula with ``alpha beta < 0``."""
        a, b = to_fraction(alpha), to_fraction(beta)
        if not (a + b < 0 and a * b < 0):
            raise ValueError("negative type needs alpha + beta < 0 and alpha * beta < 0")
        return cls.free_binomial(a, b)

    def to_json(self) -> dict:
        return {
            "b": format_rational(self.b),
            "c": format_rational(self.c),
            "mean": format_rational(self.mean),
            "variance": format_rational(self.variance),
            "case": self.case.value,
        }


def meixner_jacobi(spec: FreeMeixnerSpec, depth: int) -> JacobiParameters:
    """``depth`` Jacobi pairs of the law (fewer if it is two-atomic)."""
    return JacobiParameters.constant(
        spec.mean, spec.variance, spec.mean + spec.b, spec.variance + spec.c, depth
    )


def meixner_moments(spec: FreeMeixnerSpec, depth: int) -> MomentSequence:
    return jacobi_to_moments(meixner_jacobi(spec, depth // 2 + 1), depth)


def _p_q(spec: FreeMeixnerSpec) -> tuple[Polynomial, Polynomial]:
    t, b, c = spec.variance, spec.b, spec.c
    y = Polynomial([-spec.mean, 1])
    p = t + b * y + (c / t) * y * y
    q = -(b + (1 + 2 * c / t) * y)
    return p, q


def canonical_operator(spec: FreeMeixnerSpec, depth: int = 16) -> BochnerOperator:
    """``p L^2 + q L`` having the orthogonal polynomials of ``spec`` as eigenfunctions.

    ``p, q`` are fixed up to a common scale; in normalised coordinates they
    are ``1 + bx + cx^2`` and ``-(b + (1+2c)x)``.  The stripe ``c = -t/2``,
    ``b != 0`` has no such operator.
    """
    if spec.c * 2 == -spec.variance and spec.b != 0:
        raise NoOperator(f"no Bochner operator for c = -variance/2 with b = {spec.b} != 0")
    p, q = _p_q(spec)
    return BochnerOperator(p[0], p[1], p[2], q[0], q[1], meixner_moments(spec, depth))


def characteristic_residual(spec: FreeMeixnerSpec, order: int) -> FormalPowerSeries:
    """``S - u (t + b S + (c/t) S^2)`` with ``S = R(u) - m``; identically zero."""
    R = r_transform(meixner_moments(spec, order))
    S = R - spec.mean
    t = spec.variance
    rhs = (S * spec.b + S * S * (spec.c / t) + t).shift(1).truncate(S.order)
    return S - rhs


@dataclass(frozen=True)
class Atom:
    location: QuadraticSurd
    weight: QuadraticSurd

    def to_json(self) -> dict:
        return {"location": self.location.to_json(), "weight": self.weight.to_json()}


@dataclass(frozen=True)
class DensitySpec:
    """Absolutely continuous part ``sqrt(4 edge - (x - center)^2)_+ / (2 pi p(x))`` plus atoms."""

    center: Fraction
    edge: Fraction
    denominator: Polynomial
    atoms: tuple[Atom, ...]

    @property
    def radius(self) -> QuadraticSurd:
        return QuadraticSurd(0, 2, self.edge)

    @property
    def support(self) -> tuple[QuadraticSurd, QuadraticSurd]:
        return (self.center - self.radius, self.center + self.radius)

    @property
    def edge_singular(self) -> bool:
        """True when ``p`` vanishes at a support edge, so the density is not bounded."""
        if not self.has_density:
            return False
        for x0 in _real_roots(self.denominator, simple_only=False):
            offset = x0 - self.center
            if offset * offset == 4 * self.edge:
                return True
        return False

    @property
    def has_density(self) -> bool:
        return self.edge > 0

    @property
    def atom_free(self) -> bool:
        return not self.atoms

    def density(self, x: float) -> float:
        rad = 4 * float(self.edge) - (x - float(self.center)) ** 2
        if rad <= 0:
            return 0.0
        return math.sqrt(rad) / (2 * math.pi * _float_poly(self.denominator, x))

    def to_json(self) -> dict:
        lo, hi = self.support
        return {
            "center": format_rational(self.center),
            "edge_variance": format_rational(self.edge),
            "support": [lo.to_json(), hi.to_json()],
            "denominator": self.denominator.to_json(),
            "atoms": [a.to_json() for a in self.atoms],
            "edge_singular": self.edge_singular,
        }


def _float_poly(p: Polynomial, x: float) -> float:
    result = 0.0
    for c in reversed(p.coeffs):
        result = result * x + float(c)
    return result


def _eval_surd(p: Polynomial, x: QuadraticSurd) -> QuadraticSurd:
    result = QuadraticSurd(0)
    for c in reversed(p.coeffs):
        result = result * x + c
    return result


def _real_roots(p: Polynomial, simple_only: bool = True) -> list[QuadraticSurd]:
    """Real roots of a polynomial of degree at most two.

    A double root carries no atom (the numerator of ``G`` vanishes to second
    order there), so by default only simple roots are reported.
    """
    if p.degree == 1:
        return [QuadraticSurd(-p[0] / p[1])]
    if p.degree != 2:
        return []
    a, b, c = p[2], p[1], p[0]
    disc = b * b - 4 * a * c
    if disc < 0 or (disc == 0 and simple_only):
        return []
    if disc == 0:
        return [QuadraticSurd(-b / (2 * a))]
    return [QuadraticSurd(-b / (2 * a), s / (2 * a), disc) for s in (-1, 1)]


def _two_point_atoms(spec: FreeMeixnerSpec) -> tuple[Atom, ...]:
    """Nodes and weights of the two-point law ``{(m, m+b), (t, 0)}``."""
    m, b, t = spec.mean, spec.b, spec.variance
    disc = b * b + 4 * t
    x1 = QuadraticSurd(m + b / 2, Fraction(-1, 2), disc)
    x2 = QuadraticSurd(m + b / 2, Fraction(1, 2), disc)
    w1 = (x2 - m) / (x2 - x1)
    w2 = 1 - w1
    return (Atom(x1, w1), Atom(x2, w2))


def residue_atoms(spec: FreeMeixnerSpec) -> tuple[Atom, ...]:
    """Atoms read off as residues of the closed-form Cauchy transform.

    At a root ``x0`` of ``p`` the discriminant equals ``q(x0)^2``, so ``G``
    has a pole exactly when the branch of the square root does not cancel
    ``-q(x0)``, i.e. when ``q(x0)`` has the sign of ``x0 - center``; the
    residue is then ``-q(x0) / p'(x0)``.
    """
    p, q = _p_q(spec)
    dp = p.derivative()
    atoms = []
    for x0 in _real_roots(p):
        qx = _eval_surd(q, x0)
        side = (x0 - spec.center).sign()
        if qx.sign() == 0 or qx.sign() != side:
            continue
        atoms.append(Atom(x0, -qx / _eval_surd(dp, x0)))
    return tuple(sorted(atoms, key=lambda a: float(a.location)))


def density_and_atoms(spec: FreeMeixnerSpec) -> DensitySpec:
    p, _ = _p_q(spec)
    if spec.edge_variance == 0:
        atoms = _two_point_atoms(spec)
    else:
        atoms = residue_atoms(spec)
    return DensitySpec(spec.center, spec.edge_variance, p, atoms)


@dataclass(frozen=True)
class RationalFunction:
    numerator: Polynomial
    denominator: Polynomial

    def __call__(self, x: float) -> float:
        return _float_poly(self.numerator, x) / _float_poly(self.denominator, x)

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}


def conjugate_variable(spec: FreeMeixnerSpec) -> RationalFunction:
    """``H = -q/p`` in lowest terms with a monic denominator."""
    p, q = _p_q(spec)
    num = -q
    g = poly_gcd(p, num) if not num.is_zero() else p.monic()
    num, den = divmod(num, g)[0], divmod(p, g)[0]
    lead = den.leading
    return RationalFunction(num / lead, den / lead)
