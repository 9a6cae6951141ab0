from fractions import Fraction

import pytest
from hypothesis import given

from conftest import normalised_specs, positive_rationals, rationals
from test_measures import jacobi_params
from freemeixner import linalg
from freemeixner.errors import DegreeViolation, InsufficientMoments
from freemeixner.measures import MeasurePair, bernoulli, jacobi_to_moments, moments_to_jacobi, phi_shift, semicircle
from freemeixner.meixner import FreeMeixnerSpec, canonical_operator, meixner_moments
from freemeixner.operators import (
    BochnerOperator,
    apply_L,
    apply_Q_higher,
    bochner_nullspace,
    bochner_nullspace_pair,
    check_cauchy_identity,
    check_H_identity,
    check_symmetry,
    eigensystem,
    eigensystem_higher,
    higher_order_residual,
    moment_recursion_rows,
    operator_matrix,
    phi_operator,
    recover_mu,
    riccati_residual,
)
from freemeixner.polysys import orthogonal_polys
from freemeixner.series import Polynomial

X = Polynomial.x()


def test_L_on_monomials_uses_shifted_moments():
    m = semicircle(depth=6)
    assert apply_L(m, Polynomial([5])) == Polynomial()
    assert apply_L(m, X) == Polynomial([1])
    assert apply_L(m, X**2) == X
    assert apply_L(m, X**3) == Polynomial([1, 0, 1])
    assert apply_L(m, X**4) == Polynomial([0, 1, 0, 1])


def test_L_needs_enough_moments():
    with pytest.raises(InsufficientMoments):
        apply_L(semicircle(depth=2), X**5)


@given(jacobi_params(4), rationals(), rationals())
def test_L_is_a_difference_quotient(j, u, v):
    # L[f](v) = mu[(f(v) - f(y)) / (v - y)], the integrand being a polynomial in y
    m = jacobi_to_moments(j, 6)
    f = Polynomial([u, v, 1, -u, 2])
    quotient, remainder = divmod(Polynomial([f(v)]) - f, Polynomial([v, -1]))
    assert remainder.is_zero()
    assert apply_L(m, f)(v) == sum(c * m[k] for k, c in enumerate(quotient.coeffs))


def test_semicircle_operator_has_chebyshev_eigenfunctions():
    Q = BochnerOperator(1, 0, 0, 0, -1, semicircle(depth=12))
    assert Q(X**2 - 1) == -(X**2 - 1)
    for P in list(orthogonal_polys(moments_to_jacobi(semicircle(depth=12)), 5))[1:]:
        assert Q(P) == -P
    report = eigensystem(Q, 5)
    assert report.exact
    assert report.eigenvalues == (0, -1, -1, -1, -1, -1)
    # every degree >= 1 shares the eigenvalue -1, so lower coefficients are free
    assert (2, 1) in report.degenerate


def test_arcsine_operator_is_a_pure_second_order_term():
    Q = canonical_operator(FreeMeixnerSpec(0, Fraction(-1, 2)))
    assert Q.q.is_zero()
    assert Q.p == Polynomial([1, 0, Fraction(-1, 2)])
    assert [Q.eigenvalue(n) for n in range(4)] == [0, 0, Fraction(-1, 2), Fraction(-1, 2)]
    assert eigensystem(Q, 6).exact


@given(normalised_specs(lo_c=Fraction(-3, 4)))
def test_operator_matrix_is_upper_triangular_with_the_ladder_on_the_diagonal(spec):
    Q = canonical_operator(spec, 10)
    M = operator_matrix(Q, 6)
    for j in range(6):
        assert M[j][j] == Q.eigenvalue(j)
        assert all(M[i][j] == 0 for i in range(j + 1, 6))


def test_operator_matrix_rejects_degree_raising_maps():
    with pytest.raises(DegreeViolation):
        operator_matrix(lambda f: f * X, 3)


@given(normalised_specs(lo_c=Fraction(-3, 4)))
def test_canonical_eigenfunctions_exist_and_match_the_closed_forms(spec):
    report = eigensystem(canonical_operator(spec, 14), 6)
    assert report.exact
    if spec.c != 0:
        assert report.closed_form["beta_matches"]
        assert report.closed_form["gamma_matches"] in (True, None)


def test_canonical_eigenfunctions_are_not_orthogonal_off_the_semicircle():
    spec = FreeMeixnerSpec(0, Fraction(1, 4))
    report = eigensystem(canonical_operator(spec, 10), 2)
    # Q[x^2] = 1 - (1 + c) x^2, while the orthogonal polynomial is x^2 - 1
    assert report.eigenfunctions[2] == Polynomial([Fraction(-4, 5), 0, 1])


@given(normalised_specs())
def test_cauchy_and_riccati_identities_hold_for_canonical_operators(spec):
    Q = canonical_operator(spec, 14)
    assert check_cauchy_identity(Q, 12).is_zero()
    assert riccati_residual(Q, 10).is_zero()


def test_cauchy_identity_detects_a_wrong_operator():
    Q = BochnerOperator(1, 0, 0, 0, -2, semicircle(depth=12))
    assert not check_cauchy_identity(Q, 10).is_zero()


@given(normalised_specs())
def test_higher_order_form_agrees_with_second_order_form(spec):
    Q = canonical_operator(spec, 14)
    p_list = [Polynomial(), Q.q, Q.p]
    f = Polynomial([1, -2, 3, 0, 1])
    assert apply_Q_higher(p_list, Q.mu, f) == Q(f)
    assert higher_order_residual(p_list, Q.mu).is_zero()


def test_higher_order_eigensystem_of_a_third_order_operator():
    m = semicircle(depth=12)
    p_list = [Polynomial(), -X, Polynomial([1]), Polynomial()]
    vectors, eigenvalues = eigensystem_higher(p_list, m, 4)
    assert eigenvalues == [0, -1, -1, -1, -1]
    for v, lam in zip(vectors, eigenvalues):
        assert apply_Q_higher(p_list, m, v) == v * lam


def test_higher_order_rejects_degree_violations():
    with pytest.raises(DegreeViolation):
        apply_Q_higher([Polynomial(), X**2], semicircle(depth=6), X)


def test_semicircle_nullspace_contains_its_operator():
    basis = bochner_nullspace(semicircle(depth=16), 12)
    assert linalg.in_span([1, 0, 0, 0, -1], [v.coeffs for v in basis])
    rows = moment_recursion_rows(semicircle(depth=16), None, 12)
    for v in basis:
        assert all(sum(r * x for r, x in zip(row, v.coeffs)) == 0 for row in rows)


def test_first_recursion_row_is_identically_zero_for_probability_measures():
    assert moment_recursion_rows(semicircle(depth=4), None, 3)[0] == [0] * 5


@given(jacobi_params(6), rationals(-2, 2, 4), positive_rationals(3, 4))
def test_phi_pair_nullspace_contains_its_operator(j, beta, gamma):
    nu = jacobi_to_moments(j, 10)
    pair = MeasurePair(phi_shift(nu, beta, gamma), nu)
    basis = [v.coeffs for v in bochner_nullspace_pair(pair, 10)]
    assert linalg.in_span([gamma, 0, 0, beta, -1], basis)
    assert recover_mu(nu, [gamma, 0, 0, beta, -1], 10) == pair.mu.truncate(10)


@given(jacobi_params(6), rationals(-2, 2, 4), positive_rationals(3, 4))
def test_phi_pair_conjugate_variable_is_affine(j, beta, gamma):
    nu = jacobi_to_moments(j, 10)
    pair = MeasurePair(phi_shift(nu, beta, gamma), nu)
    assert all(r == 0 for r in check_H_identity(pair, 9, beta, gamma))
    H = (X - beta) / gamma
    assert check_symmetry(pair, H, Polynomial([1, 2, 0, 1]), Polynomial([0, -1, 1])) == 0
    Q = phi_operator(beta, gamma, pair.mu, nu)
    assert check_cauchy_identity(Q, 10).is_zero()


def test_bernoulli_inner_measure_nullspace():
    nu = bernoulli([Fraction(1, 2)] * 2, [-1, 1], 12)
    pair = MeasurePair(phi_shift(nu, 0, 1), nu)
    assert linalg.in_span([1, 0, 0, 0, -1], [v.coeffs for v in bochner_nullspace_pair(pair, 10)])


def test_H_identity_fails_for_a_mismatched_pair():
    nu = semicircle(depth=12)
    pair = MeasurePair(phi_shift(nu, 1, 1), nu)
    assert any(r != 0 for r in check_H_identity(pair, 5, 0, 1))


def test_normalised_eigenvalue_is_minus_a_plus_c():
    for b, c in [(0, 0), (1, 0), (Fraction(1, 2), 3), (-1, Fraction(-3, 4))]:
        Q = canonical_operator(FreeMeixnerSpec(b, c))
        assert Q.c + Q.e == -(Q.a + Q.c)


def test_meixner_moments_feed_the_operator():
    spec = FreeMeixnerSpec.marchenko_pastur(2)
    assert canonical_operator(spec, 8).mu == meixner_moments(spec, 8)
