"""Occupation statistics of a thermal photon gas.

A phase-space cell of volume h**3 holds ``n`` photons with the
Bose-Einstein probability ``P_n = P_0 * R**n`` where ``R = <n>/(<n>+1)``
is the mean absorption rate and ``P_0 = 1 - R``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError

SPEED_OF_LIGHT = 299_792_458.0  # m/s
DEFAULT_MAX_TERMS = 10**6


def _check_nonneg_real(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {x!r}")
    return x


def _check_count(name: str, n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"{name} must be >= 0, got {n}")
    return int(n)


def _check_probability(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def mean_rate(mean_occupation: float) -> float:
    """Mean absorption rate ``<n>/(<n>+1)``; strictly below 1."""
    x = _check_nonneg_real("mean_occupation", mean_occupation)
    return x / (x + 1.0)


@dataclass(frozen=True)
class ThermalCellDistribution:
    """Bose-Einstein occupation law of one phase-space cell."""

    mean_occupation: float

    def __post_init__(self):
        object.__setattr__(
            self, "mean_occupation", _check_nonneg_real("mean_occupation", self.mean_occupation)
        )

    @property
    def mean_rate(self) -> float:
        return mean_rate(self.mean_occupation)

    @property
    def p0(self) -> float:
        return 1.0 / (self.mean_occupation + 1.0)

    def pmf(self, n: int) -> float:
        return be_pmf(self, n)

    def tail(self, n: int) -> float:
        """Exact mass beyond index ``n``: ``R**(n+1)``."""
        return self.mean_rate ** (_check_count("n", n) + 1)

    def terms_for(self, tol: float, max_terms: int = DEFAULT_MAX_TERMS) -> int:
        """Number of leading cells needed for a tail below ``tol``."""
        return geometric_terms(self.mean_rate, tol, max_terms)


def be_pmf(dist: ThermalCellDistribution, n: int) -> float:
    """Probability that a cell holds ``n`` photons.

    >>> be_pmf(ThermalCellDistribution(1.0), 2)
    0.125
    """
    n = _check_count("n", n)
    # 0.0 ** 0 == 1.0 covers the empty cavity
    return dist.p0 * dist.mean_rate**n


def geometric_terms(rate: float, tol: float, max_terms: int = DEFAULT_MAX_TERMS) -> int:
    """Smallest ``m >= 1`` with ``rate**m < tol``.

    Summing a geometric-type series over indices ``0..m-1`` then leaves a
    tail bounded by ``rate**m`` times the term envelope.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be > 0, got {tol!r}")
    if not 0.0 <= rate < 1.0:
        raise DomainError(f"rate must lie in [0, 1), got {rate!r}")
    if rate == 0.0 or tol > 1.0:
        return 1
    m = max(1, math.ceil(math.log(tol) / math.log(rate)))
    while rate**m >= tol:
        m += 1
    while m > 1 and rate ** (m - 1) < tol:
        m -= 1
    if m > max_terms:
        raise TruncationError(
            f"rate {rate!r} needs {m} terms for tolerance {tol!r}; ceiling is {max_terms}"
        )
    return m


@dataclass(frozen=True)
class GeometricState:
    """Truncated pure state with geometric Fock amplitudes.

    ``amplitudes[k] = (n+1)**-0.5 * (n/(n+1))**(k/2)``; ``deficit`` is the
    exact norm left out by the truncation.
    """

    cell_filling: int
    amplitudes: np.ndarray
    deficit: float

    @property
    def k_max(self) -> int:
        return len(self.amplitudes) - 1

    def norm(self) -> float:
        return math.fsum(self.amplitudes**2)


def geometric_state(n: int, tail_tol: float) -> GeometricState:
    n = _check_count("n", n)
    tail_tol = float(tail_tol)
    if not 0.0 < tail_tol < 1.0:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    r = n / (n + 1.0)
    m = geometric_terms(r, tail_tol)
    k = np.arange(m, dtype=np.float64)
    amps = (n + 1.0) ** -0.5 * r ** (k / 2.0)
    return GeometricState(cell_filling=n, amplitudes=amps, deficit=r**m)


@dataclass(frozen=True)
class BandSpec:
    volume: float  # m^3
    frequency: float  # Hz
    bandwidth: float  # Hz

    def __post_init__(self):
        for name in ("volume", "frequency", "bandwidth"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
            object.__setattr__(self, name, v)


def cells_in_band(band: BandSpec) -> float:
    """Number of unit phase-space cells ``8*pi*nu**2*V*dnu/c**3`` (a real, not rounded)."""
    return 8.0 * math.pi * band.frequency**2 * band.volume * band.bandwidth / SPEED_OF_LIGHT**3
