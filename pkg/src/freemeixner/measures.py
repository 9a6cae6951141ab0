"""Moment sequences, Jacobi parameters and the transforms between them.

A compactly supported probability measure is represented in the exact layer
by its truncated moment sequence ``m_0 = 1, m_1, ..., m_N``.  The Jacobi
parameters ``(beta_0, beta_1, ...)``, ``(gamma_1, gamma_2, ...)`` are the
coefficients of the three-term recurrence of its monic orthogonal
polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import (
    FinitelySupported,
    InsufficientParameters,
    NotPositiveDefinite,
    ReversionFailure,
)
from .linalg import determinant
from .series import FormalPowerSeries, Rational, format_rational, multiply, revert, to_fraction


class MomentSequence:
    """Moments ``m_0 .. m_N`` of a probability measure, ``m_0 = 1``.

    Also acts as the moment functional on polynomials (see
    :func:`freemeixner.polysys.functional`).
    """

    __slots__ = ("_m",)

    def __init__(self, moments: Iterable[Rational]):
        m = tuple(to_fraction(x) for x in moments)
        if not m:
            raise ValueError("a moment sequence needs at least m_0")
        if m[0] != 1:
            raise ValueError(f"m_0 must be 1 for a probability measure, got {m[0]}")
        self._m = m

    @property
    def m(self) -> tuple[Fraction, ...]:
        return self._m

    @property
    def depth(self) -> int:
        """Index of the highest known moment."""
        return len(self._m) - 1

    def __len__(self) -> int:
        return len(self._m)

    def __getitem__(self, k):
        return self._m[k]

    def __iter__(self):
        return iter(self._m)

    def truncate(self, depth: int) -> MomentSequence:
        if depth > self.depth:
            raise ValueError(f"only {self.depth} moments available, asked for {depth}")
        return MomentSequence(self._m[: depth + 1])

    @property
    def mean(self) -> Fraction:
        return self._m[1]

    @property
    def variance(self) -> Fraction:
        return self._m[2] - self._m[1] ** 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, MomentSequence):
            return NotImplemented
        return self._m == other._m

    def __hash__(self) -> int:
        return hash(("MomentSequence", self._m))

    def __repr__(self) -> str:
        return f"MomentSequence([{', '.join(str(x) for x in self._m)}])"

    def to_json(self) -> dict:
        return {"moments": [format_rational(x) for x in self._m]}

    @classmethod
    def from_json(cls, data: dict) -> MomentSequence:
        return cls(data["moments"])


@dataclass(frozen=True)
class JacobiParameters:
    """Recurrence coefficients ``P_{n+1} = (x - beta_n) P_n - gamma_n P_{n-1}``.

    ``gamma[k-1]`` holds ``gamma_k``.  A zero ``gamma_k`` marks a measure with
    ``k`` atoms; it is kept as the last entry and everything after it dropped.
    """

    beta: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]

    def __post_init__(self):
        beta = tuple(to_fraction(b) for b in self.beta)
        gamma = tuple(to_fraction(g) for g in self.gamma)
        for k, g in enumerate(gamma):
            if g < 0:
                raise ValueError(f"gamma_{k + 1} = {g} is negative")
            if g == 0:
                gamma = gamma[: k + 1]
                beta = beta[: k + 1]
                break
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    @property
    def atoms(self) -> int | None:
        """Number of support points if the sequence terminates, else None."""
        if self.gamma and self.gamma[-1] == 0:
            return len(self.gamma)
        return None

    def prepend(self, beta: Rational, gamma: Rational) -> JacobiParameters:
        return JacobiParameters((to_fraction(beta),) + self.beta, (to_fraction(gamma),) + self.gamma)

    def stripped(self) -> JacobiParameters:
        if not self.gamma or self.gamma[0] == 0:
            raise FinitelySupported("cannot strip a point mass")
        return JacobiParameters(self.beta[1:], self.gamma[1:])

    def to_json(self) -> dict:
        return {
            "beta": [format_rational(b) for b in self.beta],
            "gamma": [format_rational(g) for g in self.gamma],
        }

    @classmethod
    def from_json(cls, data: dict) -> JacobiParameters:
        return cls(tuple(data["beta"]), tuple(data["gamma"]))

    @classmethod
    def constant(cls, beta0: Rational, gamma1: Rational, beta: Rational, gamma: Rational, depth: int) -> JacobiParameters:
        """``{(beta0, beta, beta, ...), (gamma1, gamma, gamma, ...)}`` with ``depth`` entries each."""
        b0, g1, b, g = (to_fraction(v) for v in (beta0, gamma1, beta, gamma))
        return cls((b0,) + (b,) * (depth - 1), (g1,) + (g,) * (depth - 1))


@dataclass(frozen=True)
class MeasurePair:
    """Two measures sharing a truncation depth."""

    mu: MomentSequence
    nu: MomentSequence

    def __post_init__(self):
        depth = min(self.mu.depth, self.nu.depth)
        object.__setattr__(self, "mu", self.mu.truncate(depth))
        object.__setattr__(self, "nu", self.nu.truncate(depth))

    @property
    def depth(self) -> int:
        return self.mu.depth


# -- transforms -------------------------------------------------------------


def mgf(m: MomentSequence) -> FormalPowerSeries:
    """Moment generating function ``M(z) = sum m_n z^n``."""
    return FormalPowerSeries(m.m)


def cauchy_series(m: MomentSequence) -> FormalPowerSeries:
    """Cauchy transform as a series in ``w = 1/z``: ``sum m_n w^(n+1)``."""
    return FormalPowerSeries((0,) + m.m)


def r_transform(m: MomentSequence) -> FormalPowerSeries:
    """R-transform ``R(z) = m_1 + var z + ...`` with ``G(R(z) + 1/z) = z``.

    With ``g(w) = G(1/w)`` and ``h`` its compositional inverse,
    ``R(z) = 1/h(z) - 1/z``.  Moments up to ``m_N`` give ``N`` coefficients.
    """
    if m.depth < 1:
        raise ValueError("the R-transform needs at least m_1")
    g = cauchy_series(m)
    try:
        h = revert(g)
    except ValueError as exc:
        raise ReversionFailure(str(exc)) from exc
    u = h.lower(1)
    return (u.reciprocal() - 1).lower(1)


def r_transform_residual(m: MomentSequence, r: FormalPowerSeries) -> FormalPowerSeries:
    """``G(R(z) + 1/z) - z`` as a series; zero iff ``r`` is the R-transform.

    Uses ``G(R + 1/z) = g(z / (1 + z R))`` with ``g(w) = G(1/w)``.
    """
    n = min(r.order + 2, m.depth + 2)
    zr = r.shift(1).truncate(n - 1)
    inner = (zr + 1).reciprocal().shift(1)
    g = cauchy_series(m).truncate(n)
    return g.compose(inner.truncate(n)) - FormalPowerSeries.identity(n)


def free_cumulants(m: MomentSequence) -> tuple[Fraction, ...]:
    """``kappa_1 .. kappa_N``: the coefficients of the R-transform, shifted."""
    return tuple(r_transform(m).coeffs)


# -- Jacobi parameters ----------------------------------------------------


def moments_to_jacobi(m: MomentSequence) -> JacobiParameters:
    """Chebyshev algorithm in exact arithmetic.

    ``sigma[k][l] = mu[P_k x^l]``; the recurrence on ``k`` only needs the
    previous two rows.  Stops at the first vanishing norm (finite support) or
    when the moments run out.
    """
    n = m.depth
    beta: list[Fraction] = []
    gamma: list[Fraction] = []
    if n < 1:
        return JacobiParameters((), ())
    prev = [Fraction(0)] * (n + 1)
    cur = list(m.m)
    beta.append(cur[1] / cur[0])
    k = 1
    while 2 * k <= n:
        nxt = [Fraction(0)] * (n + 1)
        for l in range(k, n - k + 1):
            nxt[l] = cur[l + 1] - beta[k - 1] * cur[l] - (gamma[k - 2] if k >= 2 else 0) * prev[l]
        norm = nxt[k]
        if norm < 0:
            raise NotPositiveDefinite(k + 1)
        g = norm / cur[k - 1]
        gamma.append(g)
        if norm == 0:
            break
        if 2 * k + 1 <= n:
            beta.append(nxt[k + 1] / nxt[k] - cur[k] / cur[k - 1])
        prev, cur = cur, nxt
        k += 1
    return JacobiParameters(tuple(beta), tuple(gamma))


def jacobi_to_moments(j: JacobiParameters, depth: int) -> MomentSequence:
    """``m_n = <e_0, J^n e_0>`` for ``n = 0 .. depth`` without square roots.

    Propagates the weighted count of lattice paths by height: up steps weigh
    1, level steps at height ``h`` weigh ``beta_h`` and down steps from ``h``
    weigh ``gamma_h``.
    """
    terminal = j.atoms is not None
    if not terminal:
        if len(j.beta) <= (depth - 1) // 2 or len(j.gamma) < depth // 2:
            raise InsufficientParameters(
                f"depth {depth} needs {(depth + 1) // 2} betas and {depth // 2} gammas"
            )
    top = depth // 2 + 1
    if terminal:
        top = min(top, len(j.gamma))

    def b(h):
        return j.beta[h] if h < len(j.beta) else Fraction(0)

    def g(h):
        return j.gamma[h - 1] if 1 <= h <= len(j.gamma) else Fraction(0)

    v = [Fraction(0)] * (top + 1)
    v[0] = Fraction(1)
    out = [Fraction(1)]
    for _ in range(depth):
        w = [Fraction(0)] * (top + 1)
        for h in range(top + 1):
            s = b(h) * v[h]
            if h > 0:
                s += v[h - 1]
            if h < top:
                s += g(h + 1) * v[h + 1]
            w[h] = s
        v = w
        out.append(v[0])
    return MomentSequence(out)


# -- shifts and pushforwards ------------------------------------------------


def phi_shift(nu: MomentSequence, beta: Rational, gamma: Rational) -> MomentSequence:
    """The measure ``mu`` with ``1/M_mu(z) = 1 - beta z - gamma z^2 M_nu(z)``.

    Equivalently ``(beta, gamma)`` is prepended to the Jacobi parameters of
    ``nu``.  Two moments are gained.
    """
    b, g = to_fraction(beta), to_fraction(gamma)
    if g <= 0:
        raise ValueError(f"gamma must be positive, got {g}")
    denom = FormalPowerSeries([1, -b] + [-g * x for x in nu.m])
    return MomentSequence(denom.reciprocal().coeffs)


def strip(m: MomentSequence) -> MomentSequence:
    """Coefficient stripping: the left inverse of :func:`phi_shift`.

    Two moments are lost.
    """
    if m.depth < 2:
        raise ValueError("stripping needs at least m_2")
    beta = m[1]
    gamma = m[2] - m[1] ** 2
    if gamma == 0:
        raise FinitelySupported("gamma_1 = 0: the measure is a point mass")
    if gamma < 0:
        raise NotPositiveDefinite(2)
    inv = mgf(m).reciprocal()
    return MomentSequence(-inv[k] / gamma for k in range(2, m.depth + 1))


def affine(m: MomentSequence, s: Rational, t: Rational) -> MomentSequence:
    """Pushforward under ``x -> s x + t``."""
    s, t = to_fraction(s), to_fraction(t)
    if s == 0:
        raise ValueError("scale must be nonzero")
    out = []
    for n in range(m.depth + 1):
        out.append(sum((comb(n, k) * s**k * t ** (n - k) * m[k] for k in range(n + 1)), Fraction(0)))
    return MomentSequence(out)


@dataclass(frozen=True)
class HankelReport:
    determinants: tuple[Fraction, ...]
    first_negative: int | None
    first_zero: int | None

    @property
    def positive_definite(self) -> bool:
        return all(d > 0 for d in self.determinants)

    @property
    def positive_semidefinite(self) -> bool:
        return self.first_negative is None

    def to_json(self) -> dict:
        return {
            "determinants": [format_rational(d) for d in self.determinants],
            "first_negative": self.first_negative,
            "first_zero": self.first_zero,
        }


def hankel_check(m: MomentSequence, depth: int) -> HankelReport:
    """Leading Hankel determinants ``det (m_{i+j})`` of sizes ``1 .. depth``."""
    if 2 * depth - 2 > m.depth:
        raise ValueError(f"size-{depth} Hankel matrix needs moments up to m_{2 * depth - 2}")
    dets = []
    for k in range(1, depth + 1):
        dets.append(determinant([[m[i + j] for j in range(k)] for i in range(k)]))
    first_negative = next((k + 1 for k, d in enumerate(dets) if d < 0), None)
    first_zero = next((k + 1 for k, d in enumerate(dets) if d == 0), None)
    return HankelReport(tuple(dets), first_negative, first_zero)


# -- common measures ------------------------------------------------------


def point_mass(xi: Rational, depth: int) -> MomentSequence:
    x = to_fraction(xi)
    return MomentSequence(x**n for n in range(depth + 1))


def semicircle(mean: Rational = 0, variance: Rational = 1, depth: int = 16) -> MomentSequence:
    """Semicircular law; Jacobi parameters constant ``(mean, variance)``."""
    j = JacobiParameters.constant(mean, variance, mean, variance, depth // 2 + 1)
    return jacobi_to_moments(j, depth)


def bernoulli(weights: Sequence[Rational], points: Sequence[Rational], depth: int) -> MomentSequence:
    """Finite atomic measure ``sum weights[i] delta_{points[i]}``."""
    ws = [to_fraction(w) for w in weights]
    xs = [to_fraction(x) for x in points]
    if sum(ws) != 1:
        raise ValueError("weights must sum to 1")
    return MomentSequence(sum((w * x**n for w, x in zip(ws, xs)), Fraction(0)) for n in range(depth + 1))


def mgf_product(mu: MomentSequence, nu: MomentSequence | None = None) -> FormalPowerSeries:
    """``M_mu(z) M_nu(z)`` (``nu`` defaults to ``mu``)."""
    return multiply(mgf(mu), mgf(nu if nu is not None else mu))
