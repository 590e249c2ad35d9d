"""Detector boundary crossing and quantum efficiency.

Light entering a detector either crosses the boundary as a whole state
(wave picture: the full cell state is transmitted with probability tau)
or photon by photon (particle picture: binomial thinning). The quantum
efficiency ``eta = tau * beta`` then plays the role of tau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from ._backend import kernels
from .absorption import CellAverageResult, wk_pmf
from .dist import DEFAULT_MAX_TERMS, ThermalCellDistribution, _check_count, _check_probability, geometric_terms
from .errors import DomainError

PMF_TOL = 1e-12


class Geometry(str, Enum):
    THIN_CATHODE = "thin_cathode"
    VOLUME = "volume"


class Discrimination(str, Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True)
class DetectorSpec:
    tau: float
    beta: float
    geometry: Geometry = Geometry.THIN_CATHODE
    discrimination: Discrimination = Discrimination.GOOD

    def __post_init__(self):
        object.__setattr__(self, "tau", _check_probability("tau", self.tau))
        object.__setattr__(self, "beta", _check_probability("beta", self.beta))
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        object.__setattr__(self, "discrimination", Discrimination(self.discrimination))

    @property
    def eta(self) -> float:
        return self.tau * self.beta

    @classmethod
    def from_eta(cls, eta: float, **kw) -> DetectorSpec:
        return cls(tau=1.0, beta=eta, **kw)


@dataclass(frozen=True)
class OccupationPmf:
    """Finite head ``p_0..p_N`` of an occupation law plus a bound on the rest."""

    probabilities: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise DomainError("probabilities must be a non-empty 1-d sequence")
        if np.any(p < 0) or not np.isfinite(p).all():
            raise DomainError("probabilities must be finite and >= 0")
        if self.tail_bound < 0:
            raise DomainError("tail_bound must be >= 0")
        mass = math.fsum(p) + self.tail_bound
        if abs(mass - 1.0) > PMF_TOL:
            raise DomainError(f"probabilities plus tail bound sum to {mass!r}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    def __len__(self):
        return self.probabilities.size

    @classmethod
    def bose_einstein(cls, dist: ThermalCellDistribution, tol: float = 1e-15) -> OccupationPmf:
        m = geometric_terms(dist.mean_rate, tol)
        n = np.arange(m, dtype=np.float64)
        return cls(dist.p0 * dist.mean_rate**n, dist.mean_rate**m)

    @classmethod
    def poisson(cls, mean: float, tol: float = 1e-15) -> OccupationPmf:
        if not (math.isfinite(mean) and mean >= 0):
            raise DomainError(f"mean must be finite and >= 0, got {mean!r}")
        if mean == 0:
            return cls(np.array([1.0]), 0.0)
        top = int(stats.poisson.isf(tol, mean)) + 1
        return cls(stats.poisson.pmf(np.arange(top + 1), mean), float(stats.poisson.sf(top, mean)))


def wave_boundary(pmf: OccupationPmf, tau: float) -> OccupationPmf:
    """Whole-state transmission: ``P_n -> tau P_n`` for ``n >= 1``, rest to vacuum."""
    tau = _check_probability("tau", tau)
    p = tau * pmf.probabilities
    p[0] = (1.0 - tau) + tau * pmf.probabilities[0]
    return OccupationPmf(p, tau * pmf.tail_bound)


def particle_boundary(pmf: OccupationPmf, tau: float) -> OccupationPmf:
    """Independent per-photon transmission (binomial thinning)."""
    tau = _check_probability("tau", tau)
    p = pmf.probabilities
    n = np.arange(p.size)
    # kernel[n, m] = C(n, m) tau**m (1-tau)**(n-m)
    kernel = stats.binom.pmf(n[None, :], n[:, None], tau)
    out = p @ kernel
    # thinning never raises a count, so the head keeps all of its own mass
    # and the input tail bound carries over unchanged
    return OccupationPmf(out, pmf.tail_bound)


def uk_detector(
    dist: ThermalCellDistribution, eta: float, k: int, tol: float = 1e-15, max_terms: int = DEFAULT_MAX_TERMS
) -> CellAverageResult:
    """Probability of a k-electron detection event, ``k >= 1``.

    Sums ``eta P_n W_k(n)`` over cells. ``k = 0`` is not offered: after the
    boundary the vacuum also collects the reflected states, so the
    no-count probability is the remaining mass ``1 - sum_{k>=1}``.
    """
    eta = _check_probability("eta", eta)
    k = _check_count("k", k)
    if k == 0:
        raise DomainError("uk_detector is defined for k >= 1; the no-count probability is the remaining mass")
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    m = geometric_terms(dist.mean_rate, tol, max_terms)
    value = kernels.uk_series(dist.mean_rate, eta * dist.p0, k, m)
    return CellAverageResult(value, eta * dist.mean_rate**m, m)


@dataclass(frozen=True)
class FundamentalProbs:
    p_any: float
    p_1e: float
    p_2e: float


def fundamental_detect_probs(eta: float) -> FundamentalProbs:
    """Detection probabilities for a one-photon state.

    >>> fundamental_detect_probs(1.0)
    FundamentalProbs(p_any=0.5, p_1e=0.25, p_2e=0.125)
    """
    eta = _check_probability("eta", eta)
    return FundamentalProbs(
        p_any=eta * (1.0 - wk_pmf(1, 0)),
        p_1e=eta * wk_pmf(1, 1),
        p_2e=eta * wk_pmf(1, 2),
    )


def traditional_efficiency(spec: DetectorSpec) -> float:
    """Efficiency a conventional mean-count measurement reports.

    With poor one-electron pulse discrimination every photocount is
    counted (``eta/2``); with good discrimination only one-electron pulses
    are (``eta/4``).
    """
    fp = fundamental_detect_probs(spec.eta)
    return fp.p_1e if spec.discrimination is Discrimination.GOOD else fp.p_any


def two_photon_joint_prob(spec1: DetectorSpec, spec2: DetectorSpec, correlated: bool | None = None) -> float:
    """Probability that both photons of a pair are registered.

    Correlated two-electron emission (``eta1 eta2 / 8``) needs two thin
    photocathodes; otherwise two independent one-photon detections give
    ``(eta1/4)(eta2/4)``. ``correlated`` overrides the geometry rule.
    """
    if correlated is None:
        correlated = spec1.geometry is Geometry.THIN_CATHODE and spec2.geometry is Geometry.THIN_CATHODE
    if correlated:
        return spec1.eta * spec2.eta / 8.0
    return (spec1.eta / 4.0) * (spec2.eta / 4.0)
