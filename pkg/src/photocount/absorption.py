"""k-photon absorption from thermal phase-space cells.

A cell holding ``n`` photons yields a ``k``-photon absorption event with
the geometric probability ``W_k(n) = (1/(n+1)) * (n/(n+1))**k``, whose
mean is ``n``. Averaging over Bose-Einstein cells gives ``U_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .dist import DEFAULT_MAX_TERMS, ThermalCellDistribution, _check_count, geometric_terms
from .errors import DomainError, TruncationError


@dataclass(frozen=True)
class AbsorptionDistribution:
    """Law of the number of photons absorbed from a cell with filling ``n``."""

    cell_filling: int

    def __post_init__(self):
        object.__setattr__(self, "cell_filling", _check_count("cell_filling", self.cell_filling))

    @property
    def rate(self) -> float:
        n = self.cell_filling
        return n / (n + 1.0)

    def pmf(self, k: int) -> float:
        return wk_pmf(self.cell_filling, k)

    def mean(self) -> float:
        return float(self.cell_filling)


@dataclass(frozen=True)
class CellAverageResult:
    value: float
    truncation_error_bound: float
    terms_used: int


def wk_pmf(n: int, k: int) -> float:
    """Probability of absorbing ``k`` photons from a cell holding ``n``.

    >>> wk_pmf(1, 2)
    0.125
    """
    n = _check_count("n", n)
    k = _check_count("k", k)
    return (1.0 / (n + 1.0)) * (n / (n + 1.0)) ** k


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    return tol


def uk_total(
    dist: ThermalCellDistribution, k: int, tol: float = 1e-15, max_terms: int = DEFAULT_MAX_TERMS
) -> CellAverageResult:
    """Cell-averaged probability ``U_k = sum_n P_n W_k(n)`` of a k-photon event.

    The series is cut after ``N`` cells with ``R**N < tol``; since
    ``W_k(n) <= 1`` the discarded mass is at most ``R**N``.
    """
    k = _check_count("k", k)
    tol = _check_tol(tol)
    m = geometric_terms(dist.mean_rate, tol, max_terms)
    value = kernels.uk_series(dist.mean_rate, dist.p0, k, m)
    return CellAverageResult(value=value, truncation_error_bound=dist.mean_rate**m, terms_used=m)


def uk_vector(
    dist: ThermalCellDistribution, kmax: int, tol: float = 1e-15, max_terms: int = DEFAULT_MAX_TERMS
) -> tuple[np.ndarray, float]:
    """All of ``U_0..U_kmax`` at once.

    Returns the values and a per-entry truncation bound ``R**N``.
    """
    kmax = _check_count("kmax", kmax)
    m = geometric_terms(dist.mean_rate, _check_tol(tol), max_terms)
    return kernels.uk_vector(dist.mean_rate, dist.p0, kmax, m), dist.mean_rate**m


@dataclass(frozen=True)
class CompletenessResult:
    total: float  # sum of U_0..U_K as computed
    kmax: int
    deficit_bound: float  # certified 1 - sum_{k<=K} U_k


def _deficit(dist: ThermalCellDistribution, m: int, kmax: int) -> float:
    # 1 - sum_{k<=K} sum_{n<m} P_n W_k(n) = R**m + sum_{n<m} P_n r_n**(K+1)
    n = np.arange(m, dtype=np.float64)
    return dist.mean_rate**m + math.fsum(dist.p0 * dist.mean_rate**n * (n / (n + 1.0)) ** (kmax + 1))


def completeness(
    dist: ThermalCellDistribution, tol: float = 1e-10, max_terms: int = DEFAULT_MAX_TERMS
) -> CompletenessResult:
    """Sum ``U_k`` up to the smallest ``K`` whose certified deficit is below ``tol``."""
    tol = _check_tol(tol)
    m = geometric_terms(dist.mean_rate, tol / 4, max_terms)
    if _deficit(dist, m, max_terms) >= tol:
        raise TruncationError(f"no K <= {max_terms} reaches completeness deficit {tol!r}")
    lo, hi = -1, 1
    while _deficit(dist, m, hi) >= tol:
        lo, hi = hi, min(2 * hi, max_terms)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _deficit(dist, m, mid) >= tol:
            lo = mid
        else:
            hi = mid
    values = kernels.uk_vector(dist.mean_rate, dist.p0, hi, m)
    return CompletenessResult(total=math.fsum(values), kmax=hi, deficit_bound=_deficit(dist, m, hi))


def _li2_series(x: float, tol: float, max_terms: int) -> float:
    """Dilogarithm by its power series, ``|tail| <= x**(M+1)/((M+1)**2 (1-x))``."""
    if x == 0.0:
        return 0.0
    terms = []
    p = x
    m = 1
    while True:
        terms.append(p / (m * m))
        if x ** (m + 1) / ((m + 1) ** 2 * (1.0 - x)) < tol:
            break
        m += 1
        if m > max_terms:
            raise TruncationError(f"dilogarithm at {x!r} needs more than {max_terms} terms")
        p *= x
    return math.fsum(terms)


def u0_closed(dist: ThermalCellDistribution) -> float:
    """Probability that nothing is absorbed: ``-(P_0/R) ln(1-R)``."""
    R = dist.mean_rate
    if R == 0.0:
        return 1.0
    return -(dist.p0 / R) * math.log1p(-R)


def u1_closed(dist: ThermalCellDistribution, tol: float = 1e-17, max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """One-photon absorption probability ``U_0 - (P_0/R) Li2(R)``."""
    R = dist.mean_rate
    if R == 0.0:
        return 0.0
    return u0_closed(dist) - (dist.p0 / R) * _li2_series(R, tol, max_terms)


def _inner_lengths(mean_rate: float, m: int, tol: float, max_terms: int) -> np.ndarray:
    # smallest K with r**(K+1) (K+1+n) < tol, r = n/(n+1): bounds sum_{k>K} k W_k(n)
    n = np.arange(m, dtype=np.float64)
    r = n / (n + 1.0)

    def ok(K):
        return r ** (K + 1.0) * (K + 1.0 + n) < tol

    lo = np.full(m, -1.0)
    hi = np.ones(m)
    while not ok(hi).all():
        bad = ~ok(hi)
        lo[bad] = hi[bad]
        hi[bad] *= 2.0
        if hi.max() > max_terms:
            raise TruncationError(f"inner absorption series needs more than {max_terms} terms")
    while (hi - lo > 1).any():
        mid = np.floor((lo + hi) / 2.0)
        good = ok(mid)
        active = hi - lo > 1
        hi = np.where(active & good, mid, hi)
        lo = np.where(active & ~good, mid, lo)
    return hi.astype(np.int64)


def mean_absorbed(dist: ThermalCellDistribution, tol: float = 1e-10, max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """Mean number of absorbed photons ``sum_k k U_k`` by direct double summation.

    Neither level uses the closed-form mean of the geometric law, so the
    result equalling ``<n>`` is a genuine check. Half of ``tol`` goes to
    the outer tail ``R**(N+1) (N+1+<n>)``, half to the inner tails.
    """
    tol = _check_tol(tol)
    R = dist.mean_rate
    if R == 0.0:
        return 0.0
    m = geometric_terms(R, tol / 2, max_terms)
    while R**m * (m + dist.mean_occupation) >= tol / 2:
        m += 1
        if m > max_terms:
            raise TruncationError(f"outer series needs more than {max_terms} terms")
    return kernels.mean_absorbed_sum(R, dist.p0, _inner_lengths(R, m, tol / 2, max_terms))
