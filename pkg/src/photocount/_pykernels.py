"""Numpy implementations of the hot kernels.

Mirrors ``_ckernels.pyx`` call for call. The Monte Carlo tallies are
bit-identical between the two backends: both draw from the same
counter-based stream and both invert geometric CDFs by repeated
multiplication only, so no libm transcendental enters a sampled value.
"""
from __future__ import annotations

import math

import numpy as np

from .rng import uniforms_at

_CHUNK_ELEMS = 1 << 21


def _geometric_search(u: np.ndarray, rate) -> np.ndarray:
    # smallest n with rate**(n+1) < 1 - u
    v = 1.0 - u
    rate = np.broadcast_to(np.asarray(rate, dtype=np.float64), v.shape)
    n = np.zeros(v.shape, dtype=np.int64)
    idx = np.flatnonzero(rate >= v)
    s = rate[idx].copy()
    while idx.size:
        n[idx] += 1
        s *= rate[idx]
        keep = s >= v[idx]
        idx = idx[keep]
        s = s[keep]
    return n


def geometric_draws(key: int, start: int, count: int, rate: float) -> np.ndarray:
    """Geometric variates with ratio ``rate`` at counters ``start..start+count-1``."""
    c = np.arange(start, start + count, dtype=np.uint64)
    return _geometric_search(uniforms_at(key, c), rate)


def thermal_tally(key: int, start: int, count: int, mean_rate: float, eta: float, kmax: int) -> np.ndarray:
    """Tally k-photon absorption events over ``count`` thermal frames.

    Frame ``t`` consumes counters ``3t`` (occupation), ``3t+1`` (boundary)
    and ``3t+2`` (absorption); later draws are skipped when not needed.
    Index ``kmax+1`` of the result is the overflow bucket.
    """
    tally = np.zeros(kmax + 2, dtype=np.int64)
    three = np.uint64(3)
    for lo in range(start, start + count, _CHUNK_ELEMS):
        hi = min(lo + _CHUNK_ELEMS, start + count)
        t = np.arange(lo, hi, dtype=np.uint64)
        n = _geometric_search(uniforms_at(key, t * three), mean_rate)
        occ = np.flatnonzero(n)
        u1 = uniforms_at(key, t[occ] * three + np.uint64(1))
        inside = occ[u1 < eta]
        u2 = uniforms_at(key, t[inside] * three + np.uint64(2))
        ni = n[inside].astype(np.float64)
        k = _geometric_search(u2, ni / (ni + 1.0))
        tally += np.bincount(np.minimum(k, kmax + 1), minlength=kmax + 2)
        tally[0] += (hi - lo) - inside.size
    return tally


def categorical_tally(key: int, start: int, count: int, cumulative: np.ndarray) -> np.ndarray:
    """Tally draws into ``len(cumulative) + 1`` categories.

    Category ``i`` is the first with ``u < cumulative[i]``; the last
    category takes the remainder.
    """
    cum = np.ascontiguousarray(cumulative, dtype=np.float64)
    tally = np.zeros(cum.size + 1, dtype=np.int64)
    for lo in range(start, start + count, _CHUNK_ELEMS):
        hi = min(lo + _CHUNK_ELEMS, start + count)
        u = uniforms_at(key, np.arange(lo, hi, dtype=np.uint64))
        tally += np.bincount(np.searchsorted(cum, u, side="right"), minlength=cum.size + 1)
    return tally


def uk_series(mean_rate: float, weight0: float, k: int, nterms: int) -> float:
    """``sum_{n<nterms} weight0 * R**n / (n+1) * (n/(n+1))**k`` with ``0**0 = 1``."""
    parts = []
    for lo in range(0, nterms, _CHUNK_ELEMS):
        n = np.arange(lo, min(lo + _CHUNK_ELEMS, nterms), dtype=np.float64)
        parts.append(weight0 * mean_rate**n / (n + 1.0) * (n / (n + 1.0)) ** k)
    return math.fsum(np.concatenate(parts)) if parts else 0.0


def uk_vector(mean_rate: float, p0: float, kmax: int, nterms: int) -> np.ndarray:
    """``U_k`` for ``k = 0..kmax``, each truncated after ``nterms`` cells."""
    ks = np.arange(kmax + 1, dtype=np.float64)
    rows = max(1, _CHUNK_ELEMS // (kmax + 1))
    acc = []
    for lo in range(0, nterms, rows):
        n = np.arange(lo, min(lo + rows, nterms), dtype=np.float64)
        w = p0 * mean_rate**n / (n + 1.0)
        r = n / (n + 1.0)
        acc.append((w[:, None] * r[:, None] ** ks[None, :]).sum(axis=0))
    if not acc:
        return np.zeros(kmax + 1)
    return np.array([math.fsum(col) for col in np.array(acc).T])


def mean_absorbed_sum(mean_rate: float, p0: float, inner_lengths: np.ndarray) -> float:
    """``sum_n P_n sum_{k<=K_n} k W_k(n)`` with ``K_n = inner_lengths[n]``."""
    outer = []
    for n, kn in enumerate(np.asarray(inner_lengths, dtype=np.int64)):
        if n == 0 or kn <= 0:
            continue
        r = n / (n + 1.0)
        k = np.arange(1, kn + 1, dtype=np.float64)
        inner = math.fsum(k * r**k) / (n + 1.0)
        outer.append(p0 * mean_rate**n * inner)
    return math.fsum(outer)
