"""Floating-point checks: Gauss rules, density integrals and analytic identities.

Densities of the free Meixner family have square-root edges, so integrals
over the support ``[center - r, center + r]`` are taken in the variable
``theta`` with ``x = center + r sin(theta)``; the integrand
``f(x) r^2 cos^2(theta) / (2 pi p(x))`` is then smooth.  Atoms are never
integrated -- their exact weights are added.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal

from .errors import AtomPresent, DegenerateJacobi, EdgeSingularity, IntegrationFailure
from .measures import JacobiParameters
from .meixner import DensitySpec, FreeMeixnerSpec, conjugate_variable, density_and_atoms, meixner_moments
from .operators import apply_L
from .series import Polynomial

INTEGRATION_TOL = 1e-8
DEFECT_TOL = 1e-6


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    depth: int

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def moment(self, k: int) -> float:
        return float(np.dot(self.weights, self.nodes**k))


def gauss_rule(j: JacobiParameters, n: int) -> QuadratureRule:
    """``n``-point Gauss rule from the symmetric tridiagonal Jacobi matrix."""
    if n < 1:
        raise ValueError("a Gauss rule needs at least one node")
    if len(j.beta) < n or len(j.gamma) < n - 1:
        raise DegenerateJacobi(f"{n} nodes need beta_0..beta_{n - 1} and gamma_1..gamma_{n - 1}")
    gammas = [float(g) for g in j.gamma[: n - 1]]
    if any(g <= 0 for g in gammas):
        raise DegenerateJacobi("gamma_1..gamma_{n-1} must be positive")
    diag = np.array([float(b) for b in j.beta[:n]])
    off = np.sqrt(np.array(gammas))
    if n == 1:
        return QuadratureRule(diag.copy(), np.ones(1), n)
    nodes, vecs = eigh_tridiagonal(diag, off)
    return QuadratureRule(nodes, vecs[0, :] ** 2, n)


def _as_float_poly(p: Polynomial) -> np.ndarray:
    return np.array([float(c) for c in p.coeffs] or [0.0])


def _polyval(coeffs: np.ndarray, x):
    return np.polynomial.polynomial.polyval(x, coeffs)


def _ac_integrand(spec: DensitySpec, f: Callable) -> Callable[[float], float]:
    center = float(spec.center)
    r = float(spec.radius)
    p = _as_float_poly(spec.denominator)

    def integrand(theta: float) -> float:
        x = center + r * math.sin(theta)
        return f(x) * (r * math.cos(theta)) ** 2 / (2 * math.pi * _polyval(p, x))

    return integrand


def integrate_ac(spec: DensitySpec, f: Callable[[float], float], tol: float = INTEGRATION_TOL) -> float:
    """``integral f(x) w(x) dx`` over the absolutely continuous part."""
    if not spec.has_density:
        return 0.0
    value, err = integrate.quad(_ac_integrand(spec, f), -math.pi / 2, math.pi / 2, epsabs=1e-13, epsrel=1e-12, limit=200)
    if not err <= tol * max(1.0, abs(value)):
        raise IntegrationFailure(err)
    return value


def integrate_measure(spec: DensitySpec, f: Callable[[float], float], tol: float = INTEGRATION_TOL) -> float:
    atoms = sum(float(a.weight) * f(float(a.location)) for a in spec.atoms)
    return integrate_ac(spec, f, tol) + atoms


def total_mass(spec: DensitySpec) -> float:
    return integrate_measure(spec, lambda x: 1.0)


def quadrature_moments(spec: DensitySpec, up_to: int) -> list[float]:
    return [integrate_measure(spec, lambda x, k=k: x**k) for k in range(up_to + 1)]


class LimitCDF:
    """Distribution function of a :class:`DensitySpec`, tabulated once.

    The absolutely continuous part is integrated on a uniform ``theta`` grid
    (the integrand is smooth there) and interpolated; atoms contribute jumps.
    """

    def __init__(self, spec: DensitySpec, grid: int = 20001):
        self.spec = spec
        self.atoms = [(float(a.location), float(a.weight)) for a in spec.atoms]
        if spec.has_density:
            theta = np.linspace(-math.pi / 2, math.pi / 2, grid)
            center, r = float(spec.center), float(spec.radius)
            x = center + r * np.sin(theta)
            with np.errstate(divide="ignore", invalid="ignore"):
                w = (r * np.cos(theta)) ** 2 / (2 * math.pi * _polyval(_as_float_poly(spec.denominator), x))
            # a root of p on an edge makes the end value 0/0; its limit is finite
            if not np.isfinite(w[0]):
                w[0] = 2 * w[1] - w[2]
            if not np.isfinite(w[-1]):
                w[-1] = 2 * w[-2] - w[-3]
            self._x = x
            self._F = integrate.cumulative_simpson(w, x=theta, initial=0.0)
        else:
            self._x = self._F = None

    def __call__(self, x, left: bool = False) -> np.ndarray:
        """``F(x)``, or ``F(x-)`` when ``left`` is set."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if self._x is not None:
            out += np.interp(x, self._x, self._F, left=0.0, right=self._F[-1])
        for loc, weight in self.atoms:
            out += weight * ((x > loc) if left else (x >= loc))
        return out

    def quantile(self, u: np.ndarray) -> np.ndarray:
        """Generalised inverse ``inf {x : F(x) >= u}`` on a fine grid."""
        lo, hi = self.spec.support
        points = [float(lo), float(hi)] + [loc for loc, _ in self.atoms]
        grid = np.linspace(min(points), max(points), 200001)
        grid = np.union1d(grid, [loc for loc, _ in self.atoms])
        F = self(grid)
        idx = np.searchsorted(F, np.asarray(u) - 1e-12, side="left")
        return grid[np.clip(idx, 0, len(grid) - 1)]


def _require_regular(spec: FreeMeixnerSpec) -> DensitySpec:
    """Density of an atom-free law that stays bounded at the support edges."""
    d = density_and_atoms(spec)
    if d.atoms or not d.has_density:
        raise AtomPresent(f"{spec.case.value} law with b={spec.b}, c={spec.c} has atoms")
    if d.edge_singular:
        raise EdgeSingularity(f"{spec.case.value} law with b={spec.b}, c={spec.c} is unbounded at an edge")
    return d


def check_conjugate(spec: FreeMeixnerSpec, k: int) -> float:
    """``|(mu x mu)[d x^k] - mu[H x^k]|``; the left side is exact."""
    d = _require_regular(spec)
    m = meixner_moments(spec, max(k, 1))
    left = float(sum(m[i] * m[k - 1 - i] for i in range(k)))
    H = conjugate_variable(spec)
    right = integrate_ac(d, lambda x: H(x) * x**k)
    return abs(left - right)


def check_A_symmetry(spec: FreeMeixnerSpec, f: Polynomial, g: Polynomial) -> float:
    """Defect of ``mu[L[f] g] = mu[H g f] - mu[f L[g]]`` by quadrature."""
    d = _require_regular(spec)
    m = meixner_moments(spec, max(f.degree, g.degree, 1))
    H = conjugate_variable(spec)
    Lf, Lg = apply_L(m, f), apply_L(m, g)

    def ev(p: Polynomial) -> Callable[[float], float]:
        coeffs = _as_float_poly(p)
        return lambda x: float(_polyval(coeffs, x))

    lhs = integrate_ac(d, lambda x: ev(Lf)(x) * ev(g)(x))
    rhs = integrate_ac(d, lambda x: H(x) * ev(f * g)(x)) - integrate_ac(d, lambda x: ev(f)(x) * ev(Lg)(x))
    return abs(lhs - rhs)


def density_grid(spec: DensitySpec, points: int) -> tuple[np.ndarray, np.ndarray]:
    """``points`` evenly spaced support points with their density values."""
    if not spec.has_density:
        return np.zeros(0), np.zeros(0)
    lo, hi = (float(v) for v in spec.support)
    x = np.linspace(lo, hi, points)
    return x, np.array([spec.density(v) for v in x])
