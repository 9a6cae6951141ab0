from fractions import Fraction

import numpy as np
import pytest

from freemeixner.errors import RankTooLarge, SingularSum
from freemeixner.meixner import FreeMeixnerSpec, density_and_atoms
from freemeixner.numerics import LimitCDF
from freemeixner.rmt import (
    _gue_matrix,
    ks_distance,
    limit_spec,
    run_trials,
    sample_gue,
    sample_jacobi_ensemble,
    sample_wishart,
)


def test_samples_are_deterministic_in_the_seed():
    assert np.array_equal(sample_gue(50, 7).eigenvalues, sample_gue(50, 7).eigenvalues)
    assert not np.array_equal(sample_gue(50, 7).eigenvalues, sample_gue(50, 8).eigenvalues)
    a = sample_jacobi_ensemble(40, 30, 20, 3).eigenvalues
    assert np.array_equal(a, sample_jacobi_ensemble(40, 30, 20, 3).eigenvalues)


def test_gue_matrix_is_hermitian_and_scaled():
    h = _gue_matrix(200, np.random.default_rng(0))
    assert np.allclose(h, h.conj().T)
    # second moment of the spectrum tends to 1
    assert np.trace(h @ h).real / 200 == pytest.approx(1.0, abs=0.05)


def test_gue_of_size_one():
    s = sample_gue(1, 0)
    assert s.eigenvalues.shape == (1,)


def test_wishart_rank_zero_and_rank_bounds():
    assert np.allclose(sample_wishart(10, 0, 1).eigenvalues, 0)
    with pytest.raises(RankTooLarge):
        sample_wishart(10, 11, 1)
    with pytest.raises(RankTooLarge):
        sample_jacobi_ensemble(10, 11, 5, 1)


def test_wishart_has_n_minus_k_zero_eigenvalues():
    ev = sample_wishart(30, 12, 5).eigenvalues
    assert np.sum(np.abs(ev) < 1e-9) == 18
    assert np.all(ev > -1e-9)


def test_jacobi_ensemble_needs_an_invertible_sum():
    with pytest.raises(SingularSum):
        sample_jacobi_ensemble(10, 4, 5, 0)


def test_jacobi_ensemble_eigenvalues_lie_in_the_unit_interval():
    ev = sample_jacobi_ensemble(60, 40, 30, 2).eigenvalues
    assert np.all(ev > -1e-9) and np.all(ev < 1 + 1e-9)


def test_limit_specs():
    assert limit_spec("gue", 10) == FreeMeixnerSpec.semicircle()
    assert limit_spec("wishart", 10, 4) == FreeMeixnerSpec.marchenko_pastur(Fraction(2, 5))
    assert limit_spec("jacobi", 10, 6, 7) == FreeMeixnerSpec.free_binomial(Fraction(3, 5), Fraction(7, 10))
    with pytest.raises(ValueError):
        limit_spec("wishart", 10, 0)
    with pytest.raises(ValueError):
        limit_spec("cauchy", 10)


def test_ks_distance_of_exact_quantiles_is_small():
    cdf = LimitCDF(density_and_atoms(FreeMeixnerSpec.semicircle()))
    n = 2000
    sample = cdf.quantile((np.arange(n) + 0.5) / n)
    assert ks_distance(sample, cdf) < 2 / n


def test_ks_distance_handles_atoms_exactly():
    cdf = LimitCDF(density_and_atoms(FreeMeixnerSpec.marchenko_pastur(Fraction(1, 2))))
    n = 2000
    sample = cdf.quantile((np.arange(n) + 0.5) / n)
    sample[: n // 2] = 1e-12  # within the snapping distance of the atom
    assert ks_distance(sample, cdf) < 5e-3


def test_ks_distance_detects_a_wrong_limit():
    sample = sample_gue(400, 0)
    wrong = density_and_atoms(FreeMeixnerSpec.marchenko_pastur(2))
    assert ks_distance(sample, wrong) > 0.2


def test_ks_distance_of_an_empty_sample_is_one():
    assert ks_distance(np.zeros(0), density_and_atoms(FreeMeixnerSpec.semicircle())) == 1.0


@pytest.mark.parametrize("model, k1, k2", [("gue", 0, 0), ("wishart", 100, 0), ("jacobi", 150, 120)])
def test_trials_converge(model, k1, k2):
    report = run_trials(model, 200, k1, k2, trials=3, seed=11)
    assert len(report.ks) == 3
    assert report.mean_ks < 0.05
    assert report.to_json()["trials"] == 3


def test_trials_are_reproducible_across_worker_counts():
    a = run_trials("wishart", 80, 40, trials=4, seed=1, workers=1)
    b = run_trials("wishart", 80, 40, trials=4, seed=1, workers=4)
    assert a.ks == b.ks
