"""The acceptance suite: one named check per property the library guarantees.

Each ``check_*`` function returns a :class:`CheckResult`.  ``run_all`` is what
``freemeixner verify-all`` and ``tests/test_acceptance.py`` both execute.
Random inputs come from :class:`random.Random` / numpy generators with fixed
seeds, so every run sees the same cases.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from .errors import FreeMeixnerError, NoEigenfunction
from .measures import (
    JacobiParameters,
    MeasurePair,
    MomentSequence,
    bernoulli,
    jacobi_to_moments,
    mgf,
    moments_to_jacobi,
    phi_shift,
    point_mass,
    semicircle,
    strip,
)
from .meixner import (
    FreeMeixnerSpec,
    canonical_operator,
    characteristic_residual,
    density_and_atoms,
    meixner_jacobi,
    meixner_moments,
)
from .numerics import DEFECT_TOL, check_A_symmetry, check_conjugate, quadrature_moments, total_mass
from .operators import (
    apply_L,
    bochner_nullspace,
    bochner_nullspace_pair,
    check_cauchy_identity,
    check_H_identity,
    closed_form_corrections,
    eigensystem,
    operator_matrix,
    orthogonality_defects,
    phi_operator,
    recover_mu,
    riccati_residual,
    triangular_eigenvectors,
)
from .polysys import PolynomialSystem, cfree_appell, functional, orthogonal_polys
from .rmt import run_trials
from .series import FormalPowerSeries, Polynomial, revert, revert_lagrange

GRID_B = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(2))
GRID_C = (Fraction(-1), Fraction(-3, 4), Fraction(0), Fraction(1), Fraction(3))
SEED = 20240611


def grid() -> list[tuple[Fraction, Fraction]]:
    """The test grid of normalised ``(b, c)``, minus the stripe without an operator."""
    return [(b, c) for c in GRID_C for b in GRID_B if not (c == Fraction(-1, 2) and b != 0)]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    summary: str
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number:2d} {self.name}: {self.summary}"
        if self.failures:
            shown = "; ".join(self.failures[:6])
            more = f" (+{len(self.failures) - 6} more)" if len(self.failures) > 6 else ""
            text += f" -- failing: {shown}{more}"
        return text + f" [{self.seconds:.2f}s]"

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "summary": self.summary,
            "failures": self.failures,
        }


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs) -> CheckResult:
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _pt(b, c) -> str:
    return f"(b={b}, c={c})"


# -- random exact inputs ----------------------------------------------------


def random_rational(rng: random.Random, lo: Fraction, hi: Fraction, max_den: int = 4, open_lo: bool = False) -> Fraction:
    """A rational in ``[lo, hi]`` (``(lo, hi]`` if ``open_lo``) with denominator ``<= max_den``."""
    while True:
        den = rng.randint(1, max_den)
        num = rng.randint(math.ceil(lo * den), math.floor(hi * den))
        value = Fraction(num, den)
        if not (open_lo and value == lo):
            return value


def random_jacobi(rng: random.Random, length: int) -> JacobiParameters:
    """``beta in [-2, 2]``, ``gamma in (0, 3]``."""
    beta = [random_rational(rng, Fraction(-2), Fraction(2)) for _ in range(length)]
    gamma = [random_rational(rng, Fraction(0), Fraction(3), open_lo=True) for _ in range(length)]
    return JacobiParameters(tuple(beta), tuple(gamma))


def random_measure(rng: random.Random, depth: int) -> MomentSequence:
    return jacobi_to_moments(random_jacobi(rng, depth // 2 + 1), depth)


def random_polynomial(rng: random.Random, degree: int) -> Polynomial:
    return Polynomial(random_rational(rng, Fraction(-3), Fraction(3)) for _ in range(degree + 1))


def motzkin_moments(j: JacobiParameters, depth: int) -> MomentSequence:
    """Moments by brute-force enumeration of weighted Motzkin paths.

    An up step weighs 1, a level step at height ``h`` weighs ``beta_h`` and a
    down step from height ``h`` weighs ``gamma_h``; ``m_n`` sums the weights
    of all length-``n`` paths from 0 back to 0 staying nonnegative.
    """
    moments = []
    for n in range(depth + 1):
        total = Fraction(0)
        for steps in itertools.product((1, 0, -1), repeat=n):
            height, weight = 0, Fraction(1)
            for i, s in enumerate(steps):
                if s == 0:
                    weight *= j.beta[height]
                elif s == -1:
                    weight *= j.gamma[height - 1]
                height += s
                if height < 0 or height > n - i - 1:
                    weight = None
                    break
            if weight is not None:
                total += weight
        moments.append(total)
    return MomentSequence(moments)


# -- the checks -------------------------------------------------------------


@_timed
def check_canonical_eigensystems(up_to: int = 12, budget: float = 10.0) -> CheckResult:
    """Canonical operators on the grid have exact eigenfunctions up to degree 12."""
    failures = []
    start = time.perf_counter()
    for b, c in grid():
        spec = FreeMeixnerSpec(b, c)
        Q = canonical_operator(spec, up_to + 2)
        try:
            report = eigensystem(Q, up_to, check_closed_form=False)
        except NoEigenfunction as exc:
            failures.append(f"{_pt(b, c)} no eigenfunction of degree {exc.degree}")
            continue
        ladder = tuple(Q.eigenvalue(n) for n in range(up_to + 1))
        expected = (0, Q.e) + (Q.c + Q.e,) * (up_to - 1)
        if not report.exact or ladder != expected or report.eigenvalues != expected:
            failures.append(f"{_pt(b, c)} nonzero residual")
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        failures.append(f"runtime {elapsed:.1f}s >= {budget}s")
    n = len(grid())
    return CheckResult(1, "canonical-operator eigensystems", not failures,
                       f"{n - len([f for f in failures if f.startswith('(')])}/{n} grid points exact to degree {up_to} within {budget:.0f}s",
                       failures)


@_timed
def check_characterization(depth: int = 8, perturbations: int = 50, seed: int = SEED) -> CheckResult:
    """Nullspace is one-dimensional on the grid and trivial after perturbing ``m_4``."""
    failures = []
    for b, c in grid():
        dim = len(bochner_nullspace(meixner_moments(FreeMeixnerSpec(b, c), depth), depth))
        if dim != 1:
            failures.append(f"{_pt(b, c)} nullspace dimension {dim}")
    rng = random.Random(seed)
    points = grid()
    for _ in range(perturbations):
        b, c = rng.choice(points)
        den = rng.randint(2, 12)
        r = Fraction(rng.randint(1, den - 1), den)
        m = list(meixner_moments(FreeMeixnerSpec(b, c), depth).m)
        m[4] += r
        dim = len(bochner_nullspace(MomentSequence(m), depth))
        if dim != 0:
            failures.append(f"{_pt(b, c)} + {r} at m_4: nullspace dimension {dim}")
    return CheckResult(2, "characterization forward/converse", not failures,
                       f"{len(points)} grid measures, {perturbations} perturbations, depth {depth}", failures)


@_timed
def check_transform_identities(order: int = 14, char_order: int = 12) -> CheckResult:
    """Cauchy and Riccati residuals vanish to order 14; characteristic equation to 12."""
    failures = []
    for b, c in grid():
        spec = FreeMeixnerSpec(b, c)
        Q = canonical_operator(spec, order + 2)
        if not check_cauchy_identity(Q, order).is_zero():
            failures.append(f"{_pt(b, c)} Cauchy")
        if not riccati_residual(Q, order).is_zero():
            failures.append(f"{_pt(b, c)} Riccati")
        if not characteristic_residual(spec, char_order).is_zero():
            failures.append(f"{_pt(b, c)} characteristic equation")
    return CheckResult(3, "transform identities", not failures,
                       f"Cauchy/Riccati to order {order}, characteristic equation to order {char_order}", failures)


@_timed
def check_closed_forms(up_to: int = 10) -> CheckResult:
    """Eigenfunction coefficients match ``B(z)`` and ``C(z)`` for ``c != 0``."""
    failures = []
    points = [(b, c) for b, c in grid() if c != 0]
    for b, c in points:
        Q = canonical_operator(FreeMeixnerSpec(b, c), up_to + 4)
        try:
            report = eigensystem(Q, up_to, check_closed_form=False)
        except NoEigenfunction as exc:
            failures.append(f"{_pt(b, c)} no eigenfunction of degree {exc.degree}")
            continue
        B, C = closed_form_corrections(Q)
        if C is None:
            failures.append(f"{_pt(b, c)} C(z) undefined (c + e = 0)")
            continue
        for n in range(2, up_to + 1):
            if B[n] != report.betas[n] or C[n] != report.gammas[n]:
                failures.append(f"{_pt(b, c)} mismatch at n={n}")
                break
    return CheckResult(4, "eigenfunction closed forms", not failures,
                       f"{len(points) - len(failures)}/{len(points)} grid points with c != 0 match for n <= {up_to}", failures)


def partial_eigenfunctions(Q, up_to: int) -> PolynomialSystem:
    """Eigenfunctions of ``Q`` from degree 0 up to the first degree that has none."""
    matrix = operator_matrix(Q, up_to + 1)
    polys = []
    for n in range(up_to + 1):
        try:
            vectors, _ = triangular_eigenvectors(matrix, n)
        except NoEigenfunction:
            break
        polys = vectors
    return PolynomialSystem(tuple(polys), "eigenfunctions")


def orthogonal_eigensystem(Q, j: JacobiParameters, up_to: int) -> bool:
    """Whether some monic eigenfunction system of ``Q`` to degree ``up_to`` is orthogonal.

    A monic orthogonal system is unique, so this holds exactly when the
    orthogonal polynomials of the measure are eigenfunctions with the ladder
    eigenvalues.  (When ``c = 0`` every degree ``>= 1`` shares the
    eigenvalue ``e``, so the solver's own basis need not be the orthogonal one.)
    """
    if len(j.beta) < up_to or (j.atoms is not None and j.atoms <= up_to):
        return False
    polys = orthogonal_polys(j, up_to)
    return all(Q(polys[n]) == polys[n] * Q.eigenvalue(n) for n in range(up_to + 1))


@_timed
def check_orthogonality_rigidity(orth_degree: int = 6, witness_degree: int = 4) -> CheckResult:
    """Only the semicircular point has mutually orthogonal eigenfunctions."""
    failures = []
    for b, c in grid():
        spec = FreeMeixnerSpec(b, c)
        Q = canonical_operator(spec, 2 * orth_degree + 2)
        j = meixner_jacobi(spec, orth_degree + 1)
        orthogonal = orthogonal_eigensystem(Q, j, orth_degree)
        if b == 0 and c == 0:
            if not orthogonal:
                failures.append(f"{_pt(b, c)} orthogonal polynomials are not eigenfunctions")
            continue
        if orthogonal:
            failures.append(f"{_pt(b, c)} has an orthogonal eigensystem")
        system = partial_eigenfunctions(Q, witness_degree)
        top = len(system) - 1
        if not orthogonality_defects(Q.mu, system, top):
            missing = "" if top == witness_degree else f" (eigenfunctions stop at degree {top})"
            failures.append(f"{_pt(b, c)} no nonzero inner product{missing}")
    return CheckResult(5, "orthogonality rigidity", not failures,
                       f"semicircular orthogonal to degree {orth_degree}; other points need a witness at degree <= {witness_degree}",
                       failures)


@_timed
def check_two_measure_suite(pairs: int = 20, seed: int = SEED) -> CheckResult:
    """Phi-shift eigen-relations, stripped-measure recursion, H = x, Bernoulli nu, point-mass nu."""
    rng = random.Random(seed + 6)
    failures = []
    x = Polynomial.x()
    for trial in range(pairs):
        nu_j = random_jacobi(rng, 12)
        nu = jacobi_to_moments(nu_j, 22)
        beta = random_rational(rng, Fraction(-2), Fraction(2))
        gamma = random_rational(rng, Fraction(0), Fraction(3), open_lo=True)
        mu = phi_shift(nu, beta, gamma)
        Q = phi_operator(beta, gamma, mu, nu)
        mu_polys = orthogonal_polys(moments_to_jacobi(mu), 11)
        # (a) eigen-relation and the closed form of Q on arbitrary f
        for n in range(1, 11):
            if Q(mu_polys[n]) != mu_polys[n] * (-1 / gamma):
                failures.append(f"(a) pair {trial}: Q[P_{n}] != -P_{n}/gamma")
                break
        for _ in range(3):
            f = random_polynomial(rng, rng.randint(0, 8))
            if Q(f) != (functional(mu, f) - f) / gamma:
                failures.append(f"(a) pair {trial}: Q[f] != (mu[f] - f)/gamma")
        # (b) x P^nu_n = P^mu_{n+1} + beta P^nu_n + gamma P^tau_{n-1}, tau = strip(nu)
        nu_polys = orthogonal_polys(nu_j, 10)
        tau_polys = orthogonal_polys(moments_to_jacobi(strip(nu)), 9)
        for n in range(11):
            rhs = mu_polys[n + 1] + nu_polys[n] * beta
            if n >= 1:
                rhs = rhs + tau_polys[n - 1] * gamma
            if x * nu_polys[n] != rhs:
                failures.append(f"(b) pair {trial}: recursion fails at n={n}")
                break
        # (c) H = x residuals vanish iff mu = Phi[nu]
        pair = MeasurePair(mu, nu)
        if any(check_H_identity(pair, 12, beta, gamma)):
            failures.append(f"(c) pair {trial}: residual for mu = Phi[nu]")
        bumped = list(mu.m)
        k = rng.randint(2, 13)
        bumped[k] += random_rational(rng, Fraction(0), Fraction(1), open_lo=True)
        if not any(check_H_identity(MeasurePair(MomentSequence(bumped), nu), 12, beta, gamma)):
            failures.append(f"(c) pair {trial}: no residual after perturbing m_{k}")
        if not any(check_H_identity(MeasurePair(nu, nu), 12, beta, gamma)):
            failures.append(f"(c) pair {trial}: no residual for mu = nu")
    # (d) Bernoulli nu: its coefficient vector annihilates every mu
    for trial in range(5):
        a1 = Fraction(rng.randint(1, 4), 5)
        b1, b2 = random_rational(rng, Fraction(-2), Fraction(0)), random_rational(rng, Fraction(1, 4), Fraction(2))
        nu = bernoulli([a1, 1 - a1], [b1, b2], 12)
        mu = random_measure(rng, 12)
        coeffs = [b1 * b2, -(b1 + b2), Fraction(1), a1 * b2 + (1 - a1) * b1, Fraction(-1)]
        basis = [list(v.coeffs) for v in bochner_nullspace_pair(MeasurePair(mu, nu), 10)]
        if not linalg.in_span(coeffs, basis):
            failures.append(f"(d) Bernoulli nu {trial}: coefficients outside the nullspace")
    # (e) nu = delta_xi recovers the Bernoulli free Meixner law
    for xi in (Fraction(0), Fraction(1), Fraction(-1, 2)):
        got = recover_mu(point_mass(xi, 12), [1, 0, 0, 0, -1], 12)
        num = FormalPowerSeries([1, -xi], 13)
        den = FormalPowerSeries([1, -xi, -1], 13)
        want = num * den.reciprocal()
        if mgf(got) != want or got != phi_shift(point_mass(xi, 12), 0, 1).truncate(got.depth):
            failures.append(f"(e) xi={xi}: recovered M_mu differs")
    return CheckResult(6, "two-measure suite", not failures,
                       f"{pairs} Phi-shift pairs, 5 Bernoulli nu, 3 point masses", failures)


@_timed
def check_cfree_appell(pairs: int = 20, up_to: int = 8, seed: int = SEED) -> CheckResult:
    """Appell relations hold; orthogonality only for semicircular nu."""
    rng = random.Random(seed + 7)
    failures = []
    for trial in range(pairs):
        pair = MeasurePair(random_measure(rng, up_to + 2), random_measure(rng, up_to + 2))
        A = cfree_appell(pair, up_to)
        for n in range(1, up_to + 1):
            if apply_L(pair.nu, A[n]) != A[n - 1] or functional(pair.mu, A[n]) != 0:
                failures.append(f"pair {trial}: relation fails at n={n}")
                break
    sc = semicircle(0, 1, 2 * up_to + 2)
    mu = phi_shift(sc, 0, 1)
    A = cfree_appell(MeasurePair(mu, sc), up_to)
    if orthogonality_defects(mu, A, up_to):
        failures.append("semicircular nu: Appell polynomials not orthogonal")
    mp = meixner_moments(FreeMeixnerSpec.marchenko_pastur(1), 2 * up_to + 2)
    mu = phi_shift(mp, 0, 1)
    A = cfree_appell(MeasurePair(mu, mp), 4)
    if not orthogonality_defects(mu, A, 4):
        failures.append("Marchenko-Pastur(1) nu: no nonzero inner product at degree <= 4")
    return CheckResult(7, "c-free Appell", not failures,
                       f"relations on {pairs} pairs to n={up_to}; orthogonality dichotomy", failures)


def representative_specs() -> dict[str, FreeMeixnerSpec]:
    """One law per case of the classification."""
    return {
        "semicircular": FreeMeixnerSpec.semicircle(),
        "marchenko_pastur(1/2)": FreeMeixnerSpec.marchenko_pastur(Fraction(1, 2)),
        "free_binomial(3/2,3/2)": FreeMeixnerSpec.free_binomial(Fraction(3, 2), Fraction(3, 2)),
        "gamma_type(2)": FreeMeixnerSpec.gamma_type(2),
        "secant_type(1,1)": FreeMeixnerSpec.secant_type(1, 1),
        "negative_type(-5,2)": FreeMeixnerSpec.negative_type(-5, 2),
    }


@_timed
def check_numeric_layer(tol: float = DEFECT_TOL) -> CheckResult:
    """Masses, quadrature moments, conjugate-variable and symmetry identities."""
    failures = []
    worst = 0.0
    for name, spec in representative_specs().items():
        d = density_and_atoms(spec)
        mass = total_mass(d)
        worst = max(worst, abs(mass - 1))
        if abs(mass - 1) > tol:
            failures.append(f"{name}: mass {mass}")
        exact = meixner_moments(spec, 4)
        for k, v in enumerate(quadrature_moments(d, 4)):
            worst = max(worst, abs(v - float(exact[k])))
            if abs(v - float(exact[k])) > tol:
                failures.append(f"{name}: moment {k} off by {abs(v - float(exact[k])):.2e}")
        if d.atoms:
            continue
        for k in range(7):
            defect = check_conjugate(spec, k)
            worst = max(worst, defect)
            if defect >= tol:
                failures.append(f"{name}: conjugate defect {defect:.2e} at k={k}")
        for i in range(4):
            for j in range(4):
                defect = check_A_symmetry(spec, Polynomial.monomial(i), Polynomial.monomial(j))
                worst = max(worst, defect)
                if defect >= tol:
                    failures.append(f"{name}: symmetry defect {defect:.2e} at (x^{i}, x^{j})")
    mp = density_and_atoms(FreeMeixnerSpec.marchenko_pastur(Fraction(1, 2)))
    at_zero = [a for a in mp.atoms if a.location == 0]
    if len(at_zero) != 1 or abs(float(at_zero[0].weight) - 0.5) > tol:
        failures.append("marchenko_pastur(1/2): atom at 0 is not of weight 1/2")
    return CheckResult(8, "numeric layer", not failures,
                       f"six cases, worst deviation {worst:.1e} (tolerance {tol:.0e})", failures)


@_timed
def check_random_matrices(trials: int = 20, seed: int = SEED) -> CheckResult:
    """Mean KS distances to the limit laws and their decrease with n."""
    failures = []
    runs = {
        "gue": ((512, 0, 0), (64, 0, 0), 0.06),
        "wishart": ((512, 256, 0), (64, 32, 0), 0.08),
        "jacobi": ((256, 192, 192), (64, 48, 48), 0.1),
    }
    parts = []
    for model, (big, small, threshold) in runs.items():
        main = run_trials(model, *big, trials=trials, seed=seed)
        low = run_trials(model, *small, trials=trials, seed=seed)
        n512 = main if big[0] == 512 else run_trials(model, 512, 3 * 512 // 4, 3 * 512 // 4, trials=trials, seed=seed)
        parts.append(f"{model} {main.mean_ks:.4f}<{threshold}")
        if not main.mean_ks < threshold:
            failures.append(f"{model}: mean KS {main.mean_ks:.4f} >= {threshold}")
        if not n512.mean_ks < low.mean_ks:
            failures.append(f"{model}: KS at n=512 ({n512.mean_ks:.4f}) not below n=64 ({low.mean_ks:.4f})")
    return CheckResult(9, "random-matrix limits", not failures, ", ".join(parts) + f" over {trials} trials", failures)


@_timed
def check_oracles(depth: int = 8, sets: int = 20, revert_order: int = 10, seed: int = SEED) -> CheckResult:
    """Path propagation vs Motzkin enumeration; Newton reversion vs Lagrange inversion."""
    rng = random.Random(seed + 10)
    failures = []
    for trial in range(sets):
        j = random_jacobi(rng, depth // 2 + 1)
        if jacobi_to_moments(j, depth) != motzkin_moments(j, depth):
            failures.append(f"Jacobi set {trial}: moments differ from Motzkin paths")
    for trial in range(sets):
        coeffs = [0, random_rational(rng, Fraction(1, 4), Fraction(3))] + [
            random_rational(rng, Fraction(-3), Fraction(3)) for _ in range(revert_order - 1)
        ]
        f = FormalPowerSeries(coeffs)
        if revert(f) != revert_lagrange(f):
            failures.append(f"series {trial}: Newton and Lagrange reversions differ")
    return CheckResult(10, "oracle equivalence", not failures,
                       f"{sets} Jacobi sets to depth {depth}, {sets} reversions to order {revert_order}", failures)


CHECKS: dict[int, Callable[..., CheckResult]] = {
    1: check_canonical_eigensystems,
    2: check_characterization,
    3: check_transform_identities,
    4: check_closed_forms,
    5: check_orthogonality_rigidity,
    6: check_two_measure_suite,
    7: check_cfree_appell,
    8: check_numeric_layer,
    9: check_random_matrices,
    10: check_oracles,
}


def run_check(number: int, depth: int | None = None) -> CheckResult:
    fn = CHECKS[number]
    try:
        if depth is not None and number in (2, 10):
            return fn(depth=max(depth, 8))
        return fn()
    except FreeMeixnerError as exc:
        return CheckResult(number, fn.__name__.removeprefix("check_").replace("_", " "), False,
                           f"raised {type(exc).__name__}: {exc}")


def run_all(depth: int | None = None, only: list[int] | None = None) -> list[CheckResult]:
    return [run_check(n, depth) for n in (only or sorted(CHECKS))]
