from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import positive_rationals, rationals
from freemeixner.errors import FinitelySupported, InsufficientParameters, NotPositiveDefinite
from freemeixner.measures import (
    JacobiParameters,
    MomentSequence,
    affine,
    bernoulli,
    free_cumulants,
    hankel_check,
    jacobi_to_moments,
    mgf,
    moments_to_jacobi,
    phi_shift,
    point_mass,
    r_transform,
    r_transform_residual,
    semicircle,
    strip,
)
from freemeixner.meixner import FreeMeixnerSpec, meixner_moments
from freemeixner.series import FormalPowerSeries

CATALAN = [1, 1, 2, 5, 14, 42]


def jacobi_params(length=6):
    return st.tuples(
        st.lists(rationals(-2, 2, 4), min_size=length, max_size=length),
        st.lists(positive_rationals(3, 4), min_size=length, max_size=length),
    ).map(lambda bg: JacobiParameters(tuple(bg[0]), tuple(bg[1])))


def test_moment_sequence_requires_unit_mass():
    with pytest.raises(ValueError):
        MomentSequence([2, 0, 1])


def test_semicircle_moments_are_catalan_numbers():
    m = semicircle(depth=10)
    assert list(m.m) == [CATALAN[k // 2] if k % 2 == 0 else 0 for k in range(11)]


def test_semicircle_jacobi_parameters_are_constant():
    j = moments_to_jacobi(semicircle(depth=8))
    assert j.beta == (0,) * 4 and j.gamma == (1,) * 4


def test_point_mass_terminates_after_one_step():
    j = moments_to_jacobi(point_mass(3, 6))
    assert j.beta == (3,) and j.gamma == (0,)
    assert j.atoms == 1


def test_symmetric_bernoulli_has_two_atoms():
    j = moments_to_jacobi(bernoulli([Fraction(1, 2)] * 2, [-1, 1], 6))
    assert j.beta == (0, 0) and j.gamma == (1, 0)


def test_free_meixner_low_moments():
    b, c = Fraction(1, 3), Fraction(-1, 2)
    m = meixner_moments(FreeMeixnerSpec(b, c), 4)
    assert m[3] == b and m[4] == 2 + c + b * b


def test_non_positive_definite_sequence_is_flagged():
    with pytest.raises(NotPositiveDefinite) as exc:
        moments_to_jacobi(MomentSequence([1, 0, 1, 0, Fraction(1, 2)]))
    assert exc.value.index == 3
    report = hankel_check(MomentSequence([1, 0, 1, 0, Fraction(1, 2)]), 3)
    assert report.first_negative == 3 and not report.positive_definite


def test_jacobi_to_moments_needs_enough_parameters():
    with pytest.raises(InsufficientParameters):
        jacobi_to_moments(JacobiParameters((0, 0), (1, 1)), 8)


@given(jacobi_params())
def test_jacobi_moment_round_trip(j):
    assert moments_to_jacobi(jacobi_to_moments(j, 12)) == j


@given(jacobi_params(), rationals(-2, 2, 4), positive_rationals(3, 4))
def test_phi_shift_prepends_and_strip_undoes_it(j, beta, gamma):
    nu = jacobi_to_moments(j, 10)
    mu = phi_shift(nu, beta, gamma)
    assert mu.depth == nu.depth + 2
    got, want = moments_to_jacobi(mu), j.prepend(beta, gamma)
    assert got.beta == want.beta[: len(got.beta)] and got.gamma == want.gamma[: len(got.gamma)]
    assert strip(mu) == nu
    lhs = mgf(mu).reciprocal()
    rhs = FormalPowerSeries([1, -beta], lhs.order) - (mgf(nu) * gamma).shift(2)
    assert lhs.truncate(rhs.order) == rhs.truncate(lhs.order)


def test_phi_of_point_mass_is_symmetric_bernoulli():
    assert phi_shift(point_mass(0, 6), 0, 1) == bernoulli([Fraction(1, 2)] * 2, [-1, 1], 8)


def test_strip_of_point_mass_is_refused():
    with pytest.raises(FinitelySupported):
        strip(point_mass(2, 6))


@given(rationals(-2, 2, 4), rationals(-1, 3, 4).filter(lambda c: c >= -1))
def test_strip_of_free_meixner_is_semicircular(b, c):
    mu = meixner_moments(FreeMeixnerSpec(b, c), 12)
    if c == -1:
        with pytest.raises(FinitelySupported):
            strip(strip(mu))
        return
    assert strip(mu) == semicircle(b, 1 + c, 10)


def test_r_transform_of_semicircle_is_identity():
    R = r_transform(semicircle(depth=10))
    assert R == FormalPowerSeries.identity(R.order)


def test_free_cumulants_of_marchenko_pastur_are_constant():
    alpha = Fraction(2, 3)
    kappas = free_cumulants(meixner_moments(FreeMeixnerSpec.marchenko_pastur(alpha), 8))
    assert all(k == alpha for k in kappas)


@given(jacobi_params())
def test_r_transform_solves_its_defining_equation(j):
    m = jacobi_to_moments(j, 9)
    assert r_transform_residual(m, r_transform(m)).is_zero()


def test_affine_pushforward():
    m = semicircle(depth=6)
    assert affine(m, 1, 0) == m
    assert affine(point_mass(0, 5), 1, Fraction(3, 2)) == point_mass(Fraction(3, 2), 5)
    assert affine(m, 2, 1) == semicircle(1, 4, 6)
