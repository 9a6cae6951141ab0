import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import normalised_specs
from freemeixner.errors import AtomPresent, DegenerateJacobi, EdgeSingularity
from freemeixner.measures import JacobiParameters, moments_to_jacobi, semicircle
from freemeixner.meixner import FreeMeixnerSpec, density_and_atoms, meixner_jacobi, meixner_moments
from freemeixner.numerics import (
    DEFECT_TOL,
    LimitCDF,
    check_A_symmetry,
    check_conjugate,
    density_grid,
    gauss_rule,
    integrate_measure,
    quadrature_moments,
    total_mass,
)
from freemeixner.series import Polynomial

REGULAR = [
    FreeMeixnerSpec.semicircle(),
    FreeMeixnerSpec.marchenko_pastur(2),
    FreeMeixnerSpec.free_binomial(Fraction(3, 2), Fraction(3, 2)),
    FreeMeixnerSpec.gamma_type(2),
    FreeMeixnerSpec.secant_type(1, 1),
    FreeMeixnerSpec.negative_type(-5, 2),
]


def test_two_point_gauss_rule_for_the_semicircle():
    rule = gauss_rule(moments_to_jacobi(semicircle(depth=8)), 2)
    assert np.allclose(rule.nodes, [-1, 1])
    assert np.allclose(rule.weights, [0.5, 0.5])


def test_three_point_gauss_rule_for_the_semicircle():
    rule = gauss_rule(moments_to_jacobi(semicircle(depth=8)), 3)
    assert np.allclose(rule.nodes, [-math.sqrt(2), 0, math.sqrt(2)])
    assert np.allclose(rule.weights, [0.25, 0.5, 0.25])


def test_one_point_rule_is_the_mean():
    rule = gauss_rule(JacobiParameters((Fraction(3),), ()), 1)
    assert rule.nodes.tolist() == [3.0] and rule.weights.tolist() == [1.0]


@given(normalised_specs(lo_c=Fraction(-3, 4), allow_stripe=True))
def test_gauss_rule_is_exact_to_degree_2n_minus_1(spec):
    n = 4
    rule = gauss_rule(meixner_jacobi(spec, n), n)
    m = meixner_moments(spec, 2 * n - 1)
    for k in range(2 * n):
        assert rule.moment(k) == pytest.approx(float(m[k]), rel=1e-9, abs=1e-9)


def test_gauss_rule_needs_enough_parameters():
    with pytest.raises(DegenerateJacobi):
        gauss_rule(JacobiParameters((0, 0), (1,)), 3)
    with pytest.raises(ValueError):
        gauss_rule(JacobiParameters((0,), ()), 0)


@pytest.mark.parametrize("spec", REGULAR + [FreeMeixnerSpec.marchenko_pastur(Fraction(1, 2)), FreeMeixnerSpec.free_binomial(Fraction(1, 3), Fraction(3, 4))], ids=str)
def test_total_mass_is_one(spec):
    assert total_mass(density_and_atoms(spec)) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("spec", REGULAR, ids=str)
def test_quadrature_moments_match_exact_moments(spec):
    exact = meixner_moments(spec, 5)
    numeric = quadrature_moments(density_and_atoms(spec), 5)
    for k in range(6):
        assert numeric[k] == pytest.approx(float(exact[k]), rel=1e-8, abs=1e-8)


def test_atoms_are_added_with_their_exact_weights():
    d = density_and_atoms(FreeMeixnerSpec.free_binomial(Fraction(1, 2), 2))
    # the atom at 0 contributes to the mass but not to the first moment
    assert integrate_measure(d, lambda x: 1.0) == pytest.approx(1.0, abs=1e-9)
    assert integrate_measure(d, lambda x: x) == pytest.approx(0.2, abs=1e-9)


@pytest.mark.parametrize("spec", REGULAR, ids=str)
def test_conjugate_variable_identity(spec):
    for k in range(6):
        assert check_conjugate(spec, k) < DEFECT_TOL


def test_conjugate_check_refuses_atoms_and_edge_singularities():
    with pytest.raises(AtomPresent):
        check_conjugate(FreeMeixnerSpec.marchenko_pastur(Fraction(1, 2)), 2)
    with pytest.raises(EdgeSingularity):
        check_conjugate(FreeMeixnerSpec.marchenko_pastur(1), 2)
    with pytest.raises(AtomPresent):
        check_conjugate(FreeMeixnerSpec(0, -1), 2)


def test_symmetry_identity_for_marchenko_pastur():
    x = Polynomial.x()
    assert check_A_symmetry(FreeMeixnerSpec.marchenko_pastur(2), x**2, x**3) < DEFECT_TOL


@pytest.mark.parametrize("spec", REGULAR, ids=str)
def test_symmetry_identity(spec):
    f = Polynomial([1, -1, 0, 2])
    g = Polynomial([0, 1, 1])
    assert check_A_symmetry(spec, f, g) < DEFECT_TOL


def test_semicircle_cdf():
    F = LimitCDF(density_and_atoms(FreeMeixnerSpec.semicircle()))
    assert F(np.array([-3.0, 0.0, 3.0])) == pytest.approx([0.0, 0.5, 1.0], abs=1e-9)
    assert F(1.0) == pytest.approx(0.5 + (math.sqrt(3) / 2 + math.pi / 3) / (2 * math.pi), abs=1e-8)
    assert F.quantile(np.array([0.5]))[0] == pytest.approx(0.0, abs=1e-4)


def test_cdf_jumps_at_atoms():
    F = LimitCDF(density_and_atoms(FreeMeixnerSpec.marchenko_pastur(Fraction(1, 2))))
    assert F(0.0, left=True) == 0.0
    assert F(0.0) == pytest.approx(0.5)
    assert F(100.0) == pytest.approx(1.0, abs=1e-9)


def test_cdf_of_edge_singular_law_is_finite():
    F = LimitCDF(density_and_atoms(FreeMeixnerSpec.marchenko_pastur(1)))
    values = F(np.linspace(-1, 5, 50))
    assert np.all(np.isfinite(values)) and np.all(np.diff(values) >= 0)
    assert values[-1] == pytest.approx(1.0, abs=1e-6)


def test_density_grid_spans_the_support():
    x, y = density_grid(density_and_atoms(FreeMeixnerSpec.semicircle()), 5)
    assert x.tolist() == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert y[0] == 0.0 and y[2] == pytest.approx(1 / math.pi)
    assert density_grid(density_and_atoms(FreeMeixnerSpec(0, -1)), 5)[0].size == 0
