"""The operator ``L_mu`` on polynomials and second-order operators built from it.

``L_mu[f](x) = integral (f(x) - f(y)) / (x - y) dmu(y)``, which on monomials is
``L_mu[x^n] = sum_{k<n} m_{n-k-1} x^k``.  A :class:`BochnerOperator` is
``p(x) L_nu L_mu + q(x) L_mu`` with ``p = a + b x + c x^2`` and ``q = d + e x``
(``nu = mu`` in the one-measure case).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .errors import DegreeViolation, InsufficientMoments, NoEigenfunction
from .measures import MeasurePair, MomentSequence, mgf, r_transform
from .polysys import PolynomialSystem, functional, inner_product
from .series import FormalPowerSeries, Polynomial, Rational, format_rational, multiply, to_fraction


def apply_L(m: MomentSequence, f: Polynomial) -> Polynomial:
    if f.degree - 1 > m.depth:
        raise InsufficientMoments(f"L on degree {f.degree} needs m_{f.degree - 1}, have m_{m.depth}")
    out = [Fraction(0)] * max(f.degree, 0)
    for n, c in enumerate(f.coeffs):
        if c == 0:
            continue
        for k in range(n):
            out[k] += c * m[n - k - 1]
    return Polynomial(out)


@dataclass(frozen=True)
class BochnerOperator:
    """``p L_nu L_mu + q L_mu`` with ``p = a + bx + cx^2``, ``q = d + ex``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    mu: MomentSequence
    nu: MomentSequence | None = None

    def __post_init__(self):
        for name in "abcde":
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Rational], mu: MomentSequence, nu: MomentSequence | None = None) -> BochnerOperator:
        a, b, c, d, e = coeffs
        return cls(a, b, c, d, e, mu, nu)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return (self.a, self.b, self.c, self.d, self.e)

    @property
    def inner(self) -> MomentSequence:
        """The measure of the outer ``L`` in ``p L_nu L_mu``."""
        return self.nu if self.nu is not None else self.mu

    @property
    def p(self) -> Polynomial:
        return Polynomial([self.a, self.b, self.c])

    @property
    def q(self) -> Polynomial:
        return Polynomial([self.d, self.e])

    def eigenvalue(self, n: int) -> Fraction:
        """Coefficient of ``x^n`` in ``Q[x^n]``: 0, e, then c + e."""
        if n == 0:
            return Fraction(0)
        if n == 1:
            return self.e
        return self.c + self.e

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_Q(self, f)

    def with_measures(self, mu: MomentSequence, nu: MomentSequence | None = None) -> BochnerOperator:
        return BochnerOperator(self.a, self.b, self.c, self.d, self.e, mu, nu)

    def to_json(self) -> dict:
        return {k: format_rational(v) for k, v in zip("abcde", self.coeffs)}


def apply_Q(Q: BochnerOperator, f: Polynomial) -> Polynomial:
    lf = apply_L(Q.mu, f)
    return Q.p * apply_L(Q.inner, lf) + Q.q * lf


def apply_Q_higher(p_list: Sequence[Polynomial], m: MomentSequence, f: Polynomial) -> Polynomial:
    """``sum_k p_k L_mu^k [f]`` with ``deg p_k <= k``."""
    for k, p in enumerate(p_list):
        if p.degree > k:
            raise DegreeViolation(f"p_{k} has degree {p.degree} > {k}")
    out = Polynomial()
    power = f
    for k, p in enumerate(p_list):
        if k:
            power = apply_L(m, power)
        out = out + p * power
    return out


def higher_order_residual(p_list: Sequence[Polynomial], m: MomentSequence) -> FormalPowerSeries:
    """``sum_k p_k(z) G(z)^k - sum_k a_k`` as a series in ``w = 1/z``.

    ``a_k`` is the ``x^k`` coefficient of ``p_k``.  With ``G = w M(w)`` each
    term is ``sum_j p_{k,j} w^(k-j) M(w)^k``; the operator has a polynomial
    eigensystem iff this vanishes (given no eigenvalue collisions).
    """
    M = mgf(m)
    n = M.order
    total = FormalPowerSeries.zero(n)
    power = FormalPowerSeries.one(n)
    for k, p in enumerate(p_list):
        if p.degree > k:
            raise DegreeViolation(f"p_{k} has degree {p.degree} > {k}")
        if k:
            power = multiply(power, M)
        for j, coeff in enumerate(p.coeffs):
            if coeff:
                total = total + (power * coeff).shift(k - j).truncate(n)
    lead = sum((p[k] for k, p in enumerate(p_list)), Fraction(0))
    return total - FormalPowerSeries([lead], n)


# -- eigensystems -----------------------------------------------------------


@dataclass(frozen=True)
class EigenReport:
    """Monic eigenfunctions of a degree-non-increasing operator.

    ``alpha`` is the constant of the degree-1 eigenfunction ``x + alpha``;
    ``betas[n]`` and ``gammas[n]`` are the ``x`` and constant coefficients of
    the degree-``n`` eigenfunction (``n >= 2``).  ``degenerate`` lists
    ``(n, j)`` where the ``x^j`` coefficient of eigenfunction ``n`` was free
    and set to zero.
    """

    eigenfunctions: PolynomialSystem
    eigenvalues: tuple[Fraction, ...]
    alpha: Fraction | None
    betas: dict[int, Fraction]
    gammas: dict[int, Fraction]
    residuals: tuple[Polynomial, ...]
    degenerate: tuple[tuple[int, int], ...] = ()
    closed_form: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    def to_json(self) -> dict:
        return {
            "eigenvalues": [format_rational(v) for v in self.eigenvalues],
            "eigenfunctions": [p.to_json() for p in self.eigenfunctions],
            "alpha": None if self.alpha is None else format_rational(self.alpha),
            "beta": {str(n): format_rational(v) for n, v in self.betas.items()},
            "gamma": {str(n): format_rational(v) for n, v in self.gammas.items()},
            "residuals": [r.to_json() for r in self.residuals],
            "exact": self.exact,
            "degenerate": [list(d) for d in self.degenerate],
            "closed_form": self.closed_form,
        }


def operator_matrix(op: Callable[[Polynomial], Polynomial], size: int) -> list[list[Fraction]]:
    """Columns ``op(x^k)`` in the monomial basis, ``k < size``."""
    cols = [op(Polynomial.monomial(k)) for k in range(size)]
    for k, col in enumerate(cols):
        if col.degree > k:
            raise DegreeViolation(f"operator raises the degree of x^{k}")
    return [[cols[k][j] for k in range(size)] for j in range(size)]


def triangular_eigenvectors(matrix: list[list[Fraction]], up_to: int) -> tuple[list[Polynomial], list[tuple[int, int]]]:
    """Monic eigenvectors of an upper-triangular matrix by back-substitution.

    Where the diagonal entries of rows ``j`` and ``n`` agree, coefficient ``j``
    is free: it is set to zero if the row is consistent, otherwise
    :class:`NoEigenfunction` is raised.
    """
    vectors = []
    degenerate = []
    for n in range(up_to + 1):
        lam = matrix[n][n]
        v = [Fraction(0)] * (n + 1)
        v[n] = Fraction(1)
        for j in range(n - 1, -1, -1):
            coupling = sum((matrix[j][k] * v[k] for k in range(j + 1, n + 1)), Fraction(0))
            gap = matrix[j][j] - lam
            if gap == 0:
                if coupling != 0:
                    raise NoEigenfunction(n, f"degree {n}: eigenvalue {lam} collides with row {j} and the coupling {coupling} is nonzero")
                degenerate.append((n, j))
                v[j] = Fraction(0)
            else:
                v[j] = -coupling / gap
        vectors.append(Polynomial(v))
    return vectors, degenerate


def eigensystem(Q: BochnerOperator, up_to: int, check_closed_form: bool = True) -> EigenReport:
    """Exact polynomial eigenfunctions of ``Q`` up to degree ``up_to``."""
    matrix = operator_matrix(Q, up_to + 1)
    for n in range(up_to + 1):
        assert matrix[n][n] == Q.eigenvalue(n)
    vectors, degenerate = triangular_eigenvectors(matrix, up_to)
    eigenvalues = tuple(Q.eigenvalue(n) for n in range(up_to + 1))
    residuals = tuple(Q(v) - v * lam for v, lam in zip(vectors, eigenvalues))
    alpha = vectors[1][0] if up_to >= 1 else None
    betas = {n: vectors[n][1] for n in range(2, up_to + 1)}
    gammas = {n: vectors[n][0] for n in range(2, up_to + 1)}
    closed = {}
    if check_closed_form and Q.c != 0 and up_to >= 2:
        closed = compare_closed_forms(Q, betas, gammas)
    return EigenReport(
        PolynomialSystem(tuple(vectors), "eigenfunctions"),
        eigenvalues,
        alpha,
        betas,
        gammas,
        residuals,
        tuple(degenerate),
        closed,
    )


def eigensystem_higher(p_list: Sequence[Polynomial], m: MomentSequence, up_to: int) -> tuple[list[Polynomial], list[Fraction]]:
    """Eigenfunctions of ``sum_k p_k L^k``; eigenvalues are the matrix diagonal."""
    matrix = operator_matrix(lambda f: apply_Q_higher(p_list, m, f), up_to + 1)
    vectors, _ = triangular_eigenvectors(matrix, up_to)
    return vectors, [matrix[n][n] for n in range(up_to + 1)]


def closed_form_corrections(Q: BochnerOperator, order: int | None = None) -> tuple[FormalPowerSeries, FormalPowerSeries | None]:
    """Generating functions of the eigenfunction corrections when ``c != 0``.

    ``B(z) = z (1 - M_mu M_nu)`` and ``(c + e) C(z) = z M_mu (a z M_nu + d (1 - M_nu))``.
    ``C`` is None when ``c + e = 0``.
    """
    if Q.c == 0:
        raise ValueError("closed forms need c != 0")
    mu = mgf(Q.mu)
    nu = mgf(Q.inner)
    B = (1 - multiply(mu, nu)).shift(1)
    lam = Q.c + Q.e
    C = None
    if lam != 0:
        inner = nu.shift(1) * Q.a + (1 - nu) * Q.d
        C = multiply(mu, inner).shift(1) / lam
    if order is not None:
        B = B.truncate(min(order, B.order))
        C = None if C is None else C.truncate(min(order, C.order))
    return B, C


def compare_closed_forms(Q: BochnerOperator, betas: dict[int, Fraction], gammas: dict[int, Fraction]) -> dict:
    B, C = closed_form_corrections(Q)
    ns = sorted(n for n in betas if n < B.order and (C is None or n < C.order))
    beta_ok = all(B[n] == betas[n] for n in ns)
    gamma_ok = None if C is None else all(C[n] == gammas[n] for n in ns)
    return {"checked_up_to": ns[-1] if ns else None, "beta_matches": beta_ok, "gamma_matches": gamma_ok}


# -- characterization -------------------------------------------------------


@dataclass(frozen=True)
class NullspaceVector:
    """A candidate ``(a, b, c, d, e)``; ``linear_ok`` records whether ``e alpha = d`` is solvable."""

    coeffs: tuple[Fraction, ...]

    @property
    def linear_ok(self) -> bool:
        d, e = self.coeffs[3], self.coeffs[4]
        return e != 0 or d == 0

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self.coeffs], "linear_coefficient_ok": self.linear_ok}


def _normalise(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    lead = next(x for x in v if x != 0)
    return tuple(x / lead for x in v)


def moment_recursion_rows(mu: MomentSequence, nu: MomentSequence | None, depth: int) -> list[list[Fraction]]:
    """Coefficient rows of ``(a z^2 + b z + c) M_mu M_nu + (d z + e) M_mu = c + e``.

    Row ``n`` is the ``z^n`` coefficient.  The ``n = 0`` row reads
    ``c + e = c + e`` and is identically zero; it is kept for the record.
    """
    if nu is None:
        nu = mu
    if depth > min(mu.depth, nu.depth):
        raise InsufficientMoments(f"depth {depth} exceeds the available moments")
    prod = multiply(mgf(mu).truncate(depth + 1), mgf(nu).truncate(depth + 1))

    def t(k):
        return prod[k] if k >= 0 else Fraction(0)

    rows = [[Fraction(0), Fraction(0), t(0) - 1, Fraction(0), mu[0] - 1]]
    for n in range(1, depth + 1):
        rows.append([t(n - 2), t(n - 1), t(n), mu[n - 1], mu[n]])
    return rows


def bochner_nullspace(m: MomentSequence, depth: int) -> list[NullspaceVector]:
    """Basis of all ``(a, b, c, d, e)`` satisfying the moment recursion to ``depth``."""
    basis = linalg.nullspace(moment_recursion_rows(m, None, depth), 5)
    return [NullspaceVector(_normalise(v)) for v in basis]


def bochner_nullspace_pair(pair: MeasurePair, depth: int) -> list[NullspaceVector]:
    basis = linalg.nullspace(moment_recursion_rows(pair.mu, pair.nu, depth), 5)
    return [NullspaceVector(_normalise(v)) for v in basis]


def check_cauchy_identity(Q: BochnerOperator, order: int) -> FormalPowerSeries:
    """``(a + bz + cz^2) G^2 + (d + ez) G - (c + e)`` as a series in ``w = 1/z``.

    Multiplying through, it equals ``(a w^2 + b w + c) M_mu M_nu + (d w + e) M_mu - (c + e)``.
    """
    mu = mgf(Q.mu).truncate(order)
    nu = mgf(Q.inner).truncate(order)
    prod = multiply(mu, nu)
    lhs = prod.shift(2).truncate(order) * Q.a + prod.shift(1).truncate(order) * Q.b + prod * Q.c
    lhs = lhs + mu.shift(1).truncate(order) * Q.d + mu * Q.e
    return lhs - FormalPowerSeries([Q.c + Q.e], order)


def riccati_residual(Q: BochnerOperator, order: int) -> FormalPowerSeries:
    """``c u R^2 + (b u + 2c + e) R + a u + b + d`` for the R-transform of ``mu``.

    Vanishes iff ``-(2c + e) R/u - (b + d)/u = a + b R + c R^2``.
    """
    R = r_transform(Q.mu).truncate(order)
    u = FormalPowerSeries.identity(order)
    out = multiply(u, multiply(R, R)) * Q.c + multiply(u * Q.b + (2 * Q.c + Q.e), R)
    return out + u * Q.a + (Q.b + Q.d)


def check_symmetry(pair: MeasurePair, H: Polynomial, f: Polynomial, g: Polynomial) -> Fraction:
    """``mu[(Q f) g] - mu[f (Q g)]`` for ``Q = L_nu L_mu - H L_mu``."""
    mu, nu = pair.mu, pair.nu

    def Q(h):
        lh = apply_L(mu, h)
        return apply_L(nu, lh) - H * lh

    return inner_product(mu, Q(f), g) - inner_product(mu, f, Q(g))


def check_H_identity(pair: MeasurePair, up_to: int, beta: Rational = 0, gamma: Rational = 1) -> list[Fraction]:
    """Residuals ``(nu x mu)[d x^n] - mu[((x - beta)/gamma) x^n]`` for ``n = 0 .. up_to``.

    ``(nu x mu)[d x^n] = sum_{i+j=n-1} nu_i mu_j``.  All vanish iff
    ``mu = Phi_{beta,gamma}[nu]`` (to the available depth).
    """
    mu, nu = pair.mu, pair.nu
    b, g = to_fraction(beta), to_fraction(gamma)
    if up_to + 1 > mu.depth:
        raise InsufficientMoments(f"n = {up_to} needs mu moments to m_{up_to + 1}")
    out = []
    for n in range(up_to + 1):
        left = sum((nu[i] * mu[n - 1 - i] for i in range(n)), Fraction(0))
        right = (mu[n + 1] - b * mu[n]) / g
        out.append(left - right)
    return out


def phi_operator(beta: Rational, gamma: Rational, mu: MomentSequence, nu: MomentSequence) -> BochnerOperator:
    """``L_nu L_mu - gamma^{-1} (x - beta) L_mu``."""
    b, g = to_fraction(beta), to_fraction(gamma)
    return BochnerOperator(1, 0, 0, b / g, -1 / g, mu, nu)


def recover_mu(nu: MomentSequence, coeffs: Sequence[Rational], depth: int) -> MomentSequence:
    """Solve the two-measure identity for ``M_mu`` given ``nu`` and ``(a, b, c, d, e)``.

    ``M_mu = (c + e) / ((a z^2 + b z + c) M_nu + d z + e)``.
    """
    a, b, c, d, e = (to_fraction(x) for x in coeffs)
    order = depth + 1
    M = mgf(nu).truncate(min(order, nu.depth + 1))
    order = M.order
    denom = (M.shift(2).truncate(order) * a + M.shift(1).truncate(order) * b + M * c
             + FormalPowerSeries([e, d], order))
    return MomentSequence((denom.reciprocal() * (c + e)).coeffs)


def orthogonality_defects(m: MomentSequence, system: PolynomialSystem, up_to: int) -> list[tuple[int, int, Fraction]]:
    """Nonzero ``<P_i, P_j>_mu`` for ``i < j <= up_to``."""
    out = []
    for j in range(up_to + 1):
        for i in range(j):
            v = inner_product(m, system[i], system[j])
            if v != 0:
                out.append((i, j, v))
    return out


def centered(m: MomentSequence, f: Polynomial) -> Polynomial:
    return f - functional(m, f)
