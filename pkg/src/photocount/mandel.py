"""Semiclassical photocount statistics (Mandel's counting formula).

``P(n) = int W**n / n! * exp(-W) p(W) dW`` for an integrated-intensity law
``p(W)``. ``W`` is taken already scaled by the quantum efficiency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .dist import _check_count, _check_nonneg_real, _check_probability
from .errors import DomainError

NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class IntegratedIntensityLaw:
    """Distribution of the integrated intensity ``W``.

    Build instances with :meth:`deterministic`, :meth:`exponential` or
    :meth:`tabulated`.
    """

    kind: str
    w: float = 0.0
    grid: np.ndarray = field(default=None, repr=False)
    density: np.ndarray = field(default=None, repr=False)

    @classmethod
    def deterministic(cls, w: float) -> IntegratedIntensityLaw:
        return cls("deterministic", w=_check_nonneg_real("w", w))

    @classmethod
    def exponential(cls, mean_w: float) -> IntegratedIntensityLaw:
        return cls("exponential", w=_check_nonneg_real("mean_w", mean_w))

    @classmethod
    def tabulated(cls, grid, density, normalize: bool = False) -> IntegratedIntensityLaw:
        """Law given by density samples on an increasing grid of ``W >= 0``.

        The trapezoidal integral of the density must be 1 within 1e-8,
        unless ``normalize`` is set, in which case it is rescaled first.
        """
        w = np.array(grid, dtype=np.float64)
        f = np.array(density, dtype=np.float64)
        if w.ndim != 1 or w.shape != f.shape or w.size < 2:
            raise DomainError("grid and density must be 1-d arrays of equal length >= 2")
        if not (np.isfinite(w).all() and np.isfinite(f).all()):
            raise DomainError("grid and density must be finite")
        if w[0] < 0 or np.any(np.diff(w) <= 0):
            raise DomainError("grid must be strictly increasing and start at W >= 0")
        if np.any(f < 0):
            raise DomainError("density must be >= 0")
        total = float(np.trapezoid(f, w))
        if normalize:
            if total <= 0:
                raise DomainError("density integrates to zero")
            f = f / total
        elif abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"tabulated density integrates to {total!r}, not 1 within {NORMALIZATION_TOL}")
        w.flags.writeable = False
        f.flags.writeable = False
        return cls("tabulated", grid=w, density=f)


def _poisson(n: int, w):
    w = np.asarray(w, dtype=np.float64)
    # xlogy(0, 0) == 0 keeps P(0 | W=0) = 1
    return np.exp(xlogy(n, w) - w - math.lgamma(n + 1))


def mandel_pcount(law: IntegratedIntensityLaw, n: int) -> float:
    """Probability of ``n`` photocounts under ``law``."""
    n = _check_count("n", n)
    if law.kind == "deterministic":
        return float(_poisson(n, law.w))
    if law.kind == "exponential":
        m = law.w
        return (1.0 / (m + 1.0)) * (m / (m + 1.0)) ** n
    if law.kind == "tabulated":
        return float(np.trapezoid(_poisson(n, law.grid) * law.density, law.grid))
    raise DomainError(f"unknown law kind {law.kind!r}")


def mandel_pcount_refined(fine: IntegratedIntensityLaw, coarse: IntegratedIntensityLaw, n: int) -> tuple[float, float]:
    """Quadrature value on ``fine`` with the change from ``coarse`` as error estimate."""
    a = mandel_pcount(fine, n)
    return a, abs(a - mandel_pcount(coarse, n))


def binomial_short_time(n_atoms: int, p: float, n: int) -> float:
    """Binomial count law of an ``n_atoms`` detector in a short interval.

    ``p`` is the per-atom detection probability (``eta * I * dt``).
    """
    if isinstance(n_atoms, bool) or not isinstance(n_atoms, (int, np.integer)) or n_atoms < 1:
        raise DomainError(f"n_atoms must be a positive integer, got {n_atoms!r}")
    p = _check_probability("p", p)
    n = _check_count("n", n)
    if n > n_atoms:
        raise DomainError(f"n={n} exceeds n_atoms={n_atoms}")
    return math.comb(n_atoms, n) * p**n * (1.0 - p) ** (n_atoms - n)
