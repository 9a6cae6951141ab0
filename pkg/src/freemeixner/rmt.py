"""Random-matrix models whose spectra converge to free Meixner laws.

* GUE, normalised so the spectrum fills ``[-2, 2]`` (semicircle).
* Wishart ``W = X P X`` with ``X`` GUE and ``P`` a rank-``k`` projection;
  the limit is Marchenko-Pastur with rate ``k/n``.
* Jacobi ensemble ``S^{-1/2} W_1 S^{-1/2}`` with ``S = W_1 + W_2``; the
  limit is the free binomial law with parameters ``(k1/n, k2/n)``.

Every trial draws from its own generator spawned from a single
:class:`numpy.random.SeedSequence`, so results are reproducible bitwise and
trials may run concurrently.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import RankTooLarge, SingularSum
from .meixner import DensitySpec, FreeMeixnerSpec, density_and_atoms
from .numerics import LimitCDF

ATOM_SNAP = 1e-9
SINGULAR_RCOND = 1e-12


@dataclass(frozen=True)
class EnsembleSample:
    eigenvalues: np.ndarray
    model: str
    params: tuple[int, ...]
    seed: int | None = None


def _gue_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return (a + a.conj().T) / np.sqrt(2 * n)


def _hermitize(w: np.ndarray) -> np.ndarray:
    return (w + w.conj().T) / 2


def _wishart_matrix(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    if not 0 <= k <= n:
        raise RankTooLarge(f"projection rank {k} must lie in [0, {n}]")
    y = _gue_matrix(n, rng)[:, :k]
    return _hermitize(y @ y.conj().T)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _seed_token(seed) -> int | None:
    return seed if isinstance(seed, int) else None


def sample_gue(n: int, seed=None) -> EnsembleSample:
    if n < 1:
        raise ValueError("n must be positive")
    h = _gue_matrix(n, _rng(seed))
    return EnsembleSample(np.linalg.eigvalsh(h), "gue", (n,), _seed_token(seed))


def sample_wishart(n: int, k: int, seed=None) -> EnsembleSample:
    w = _wishart_matrix(n, k, _rng(seed))
    return EnsembleSample(np.linalg.eigvalsh(w), "wishart", (n, k), _seed_token(seed))


def sample_jacobi_ensemble(n: int, k1: int, k2: int, seed=None) -> EnsembleSample:
    if k1 > n or k2 > n:
        raise RankTooLarge(f"ranks ({k1}, {k2}) exceed n = {n}")
    if k1 + k2 < n:
        raise SingularSum(f"k1 + k2 = {k1 + k2} < n = {n}: W1 + W2 is singular")
    rng = _rng(seed)
    w1 = _wishart_matrix(n, k1, rng)
    w2 = _wishart_matrix(n, k2, rng)
    s, v = np.linalg.eigh(w1 + w2)
    if s[0] <= SINGULAR_RCOND * s[-1]:
        raise SingularSum(f"W1 + W2 has condition number above {1 / SINGULAR_RCOND:.0e}")
    root_inv = (v / np.sqrt(s)) @ v.conj().T
    m = _hermitize(root_inv @ w1 @ root_inv)
    return EnsembleSample(np.linalg.eigvalsh(m), "jacobi", (n, k1, k2), _seed_token(seed))


def limit_spec(model: str, n: int, k1: int = 0, k2: int = 0) -> FreeMeixnerSpec:
    """The free Meixner law the model's spectrum converges to."""
    if model == "gue":
        return FreeMeixnerSpec.semicircle()
    if model == "wishart":
        if k1 == 0:
            raise ValueError("the rank-0 Wishart model is a point mass, not a Marchenko-Pastur law")
        return FreeMeixnerSpec.marchenko_pastur(Fraction(k1, n))
    if model == "jacobi":
        return FreeMeixnerSpec.free_binomial(Fraction(k1, n), Fraction(k2, n))
    raise ValueError(f"unknown model {model!r}")


def ks_distance(sample: EnsembleSample | np.ndarray, limit: DensitySpec | LimitCDF) -> float:
    """Kolmogorov-Smirnov distance between the empirical law and ``limit``.

    Eigenvalues within ``1e-9`` of an atom are moved onto it, and both
    one-sided limits are compared at every sample point and atom, so exact
    ties with an atom are scored correctly.  An empty sample is at
    distance 1 by convention.
    """
    x = np.sort(np.asarray(sample.eigenvalues if isinstance(sample, EnsembleSample) else sample, dtype=float))
    if x.size == 0:
        return 1.0
    cdf = limit if isinstance(limit, LimitCDF) else LimitCDF(limit)
    for loc, _ in cdf.atoms:
        x[np.abs(x - loc) <= ATOM_SNAP] = loc
    points = np.union1d(x, [loc for loc, _ in cdf.atoms])
    n = x.size
    emp_right = np.searchsorted(x, points, side="right") / n
    emp_left = np.searchsorted(x, points, side="left") / n
    return float(max(np.max(np.abs(emp_right - cdf(points))), np.max(np.abs(emp_left - cdf(points, left=True)))))


@dataclass(frozen=True)
class TrialReport:
    model: str
    n: int
    k1: int
    k2: int
    seed: int
    ks: tuple[float, ...]

    @property
    def mean_ks(self) -> float:
        return float(np.mean(self.ks))

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "k1": self.k1,
            "k2": self.k2,
            "seed": self.seed,
            "trials": len(self.ks),
            "ks": list(self.ks),
            "mean_ks": self.mean_ks,
        }


def draw(model: str, n: int, k1: int, k2: int, rng) -> EnsembleSample:
    if model == "gue":
        return sample_gue(n, rng)
    if model == "wishart":
        return sample_wishart(n, k1, rng)
    if model == "jacobi":
        return sample_jacobi_ensemble(n, k1, k2, rng)
    raise ValueError(f"unknown model {model!r}")


def run_trials(model: str, n: int, k1: int = 0, k2: int = 0, trials: int = 20, seed: int = 0, workers: int | None = None) -> TrialReport:
    """KS distances of ``trials`` independent samples against the limit law."""
    cdf = LimitCDF(density_and_atoms(limit_spec(model, n, k1, k2)))
    children = np.random.SeedSequence(seed).spawn(trials)

    def one(child):
        return ks_distance(draw(model, n, k1, k2, np.random.default_rng(child)), cdf)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        ks = tuple(pool.map(one, children))
    return TrialReport(model, n, k1, k2, seed, ks)
