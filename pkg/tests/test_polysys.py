from fractions import Fraction

import pytest
from hypothesis import given

from conftest import positive_rationals, rationals
from test_measures import jacobi_params
from freemeixner.errors import InsufficientMoments
from freemeixner.measures import MeasurePair, jacobi_to_moments, moments_to_jacobi, phi_shift, semicircle
from freemeixner.operators import apply_L
from freemeixner.polysys import cfree_appell, functional, gram_matrix, orthogonal_polys, second_kind
from freemeixner.series import Polynomial


def test_semicircle_orthogonal_polynomials_are_chebyshev_u():
    P = orthogonal_polys(moments_to_jacobi(semicircle(depth=8)), 3)
    assert P[2] == Polynomial([-1, 0, 1])
    assert P[3] == Polynomial([0, -2, 0, 1])


@given(jacobi_params(5))
def test_gram_matrix_is_diagonal_with_products_of_gammas(j):
    m = jacobi_to_moments(j, 8)
    P = orthogonal_polys(j, 4)
    G = gram_matrix(m, P)
    norm = Fraction(1)
    for i in range(5):
        assert G[i][i] == norm
        assert all(G[i][k] == 0 for k in range(5) if k != i)
        if i < 4:
            norm *= j.gamma[i]


def test_second_kind_uses_stripped_measure():
    j = moments_to_jacobi(semicircle(depth=10))
    assert second_kind(semicircle(depth=10), 3) == orthogonal_polys(j, 3)


def test_functional_needs_enough_moments():
    with pytest.raises(InsufficientMoments):
        functional(semicircle(depth=2), Polynomial.monomial(3))


@given(jacobi_params(5), jacobi_params(5))
def test_cfree_appell_defining_relations(jm, jn):
    pair = MeasurePair(jacobi_to_moments(jm, 8), jacobi_to_moments(jn, 8))
    A = cfree_appell(pair, 6)
    for n in range(1, 7):
        assert A[n].is_monic() and A[n].degree == n
        assert apply_L(pair.nu, A[n]) == A[n - 1]
        assert functional(pair.mu, A[n]) == 0


@given(rationals(-2, 2, 4), positive_rationals(3, 4))
def test_cfree_appell_orthogonal_for_semicircular_nu(beta, gamma):
    nu = semicircle(depth=14)
    pair = MeasurePair(phi_shift(nu, 0, 1), nu)
    G = gram_matrix(pair.mu, cfree_appell(pair, 5))
    assert all(G[i][k] == 0 for i in range(6) for k in range(6) if i != k)
