"""Monic polynomial systems: orthogonal polynomials and c-free Appell polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientMoments, InsufficientParameters
from .measures import JacobiParameters, MeasurePair, MomentSequence, moments_to_jacobi, strip
from .series import Polynomial


@dataclass(frozen=True)
class PolynomialSystem:
    """``P_0, P_1, ...`` with ``deg P_n = n``, all monic."""

    polys: tuple[Polynomial, ...]
    source: str = ""

    def __post_init__(self):
        for n, p in enumerate(self.polys):
            if p.degree != n or not p.is_monic():
                raise ValueError(f"P_{n} = {p} is not monic of degree {n}")

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, n: int) -> Polynomial:
        return self.polys[n]

    def __iter__(self):
        return iter(self.polys)

    def to_json(self) -> dict:
        return {"source": self.source, "polys": [p.to_json() for p in self.polys]}


def orthogonal_polys(j: JacobiParameters, up_to: int) -> PolynomialSystem:
    """Monic orthogonal polynomials ``P_0 .. P_up_to`` from the recurrence."""
    if up_to > len(j.beta):
        raise InsufficientParameters(f"P_{up_to} needs beta_0 .. beta_{up_to - 1}")
    x = Polynomial.x()
    polys = [Polynomial([1])]
    prev = Polynomial()
    for n in range(up_to):
        nxt = (x - j.beta[n]) * polys[-1]
        if n >= 1:
            nxt = nxt - prev * j.gamma[n - 1]
        prev = polys[-1]
        polys.append(nxt)
    return PolynomialSystem(tuple(polys), "orthogonal")


def second_kind(m: MomentSequence, up_to: int) -> PolynomialSystem:
    """Orthogonal polynomials of the once-stripped measure."""
    return orthogonal_polys(moments_to_jacobi(strip(m)), up_to)


def functional(m: MomentSequence, f: Polynomial) -> Fraction:
    """``mu[f] = sum_k f_k m_k``."""
    if f.degree > m.depth:
        raise InsufficientMoments(f"degree {f.degree} needs m_{f.degree}, have m_{m.depth}")
    return sum((c * m[k] for k, c in enumerate(f.coeffs)), Fraction(0))


def inner_product(m: MomentSequence, f: Polynomial, g: Polynomial) -> Fraction:
    return functional(m, f * g)


def gram_matrix(m: MomentSequence, system: PolynomialSystem) -> list[list[Fraction]]:
    return [[inner_product(m, p, q) for q in system] for p in system]


def _invert_L(nu: MomentSequence, target: Polynomial) -> Polynomial:
    """A polynomial ``A`` with ``L_nu[A] = target`` and zero constant term.

    ``L_nu[x^k]`` has leading term ``x^(k-1)``, so the coefficients of ``A``
    are fixed from the top down.
    """
    n = target.degree + 1
    if n - 1 > nu.depth:
        raise InsufficientMoments(f"inverting L on degree {n - 1} needs m_{n - 1}")
    a = [Fraction(0)] * (n + 1)
    for j in range(n - 1, -1, -1):
        s = sum((a[k] * nu[k - 1 - j] for k in range(j + 2, n + 1)), Fraction(0))
        a[j + 1] = target[j] - s
    return Polynomial(a)


def cfree_appell(pair: MeasurePair, up_to: int) -> PolynomialSystem:
    """Monic ``A_n`` with ``L_nu[A_n] = A_{n-1}`` and ``mu[A_n] = 0`` for ``n >= 1``."""
    mu, nu = pair.mu, pair.nu
    if up_to > mu.depth:
        raise InsufficientMoments(f"A_{up_to} needs m_{up_to} of mu")
    polys = [Polynomial([1])]
    for _ in range(up_to):
        a = _invert_L(nu, polys[-1])
        a = a - functional(mu, a)
        polys.append(a)
    return PolynomialSystem(tuple(polys), "c-free Appell")
