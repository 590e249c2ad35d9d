import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from photocount.dist import (
    SPEED_OF_LIGHT,
    BandSpec,
    ThermalCellDistribution,
    be_pmf,
    cells_in_band,
    geometric_state,
    geometric_terms,
    mean_rate,
)
from photocount.errors import DomainError, TruncationError
from photocount.absorption import wk_pmf

from conftest import GRID

occupations = st.floats(min_value=0.0, max_value=50.0, allow_nan=False)


def test_empty_cavity():
    d = ThermalCellDistribution(0.0)
    assert be_pmf(d, 0) == 1.0
    assert all(be_pmf(d, n) == 0.0 for n in range(1, 5))


def test_small_values():
    assert be_pmf(ThermalCellDistribution(1.0), 2) == 0.125
    assert be_pmf(ThermalCellDistribution(2.0), 1) == pytest.approx(2 / 9, rel=1e-15)


@pytest.mark.parametrize("x,expected", [(0, 0.0), (1, 0.5), (99, 0.99)])
def test_mean_rate_values(x, expected):
    assert mean_rate(x) == expected


@pytest.mark.parametrize("bad", [-1e-9, math.inf, math.nan])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        ThermalCellDistribution(bad)
    with pytest.raises(DomainError):
        mean_rate(bad)


def test_negative_index_rejected():
    with pytest.raises(DomainError):
        be_pmf(ThermalCellDistribution(1.0), -1)


@given(st.floats(min_value=0.0, max_value=1e6), st.floats(min_value=0.0, max_value=1e6))
def test_mean_rate_monotone_and_below_one(a, b):
    lo, hi = sorted((a, b))
    assert mean_rate(lo) <= mean_rate(hi) < 1.0


@pytest.mark.parametrize("nbar", [0.0, 0.1, 1.0, 5.0, 20.0])
def test_partial_sums_below_one_with_exact_tail(nbar):
    d = ThermalCellDistribution(nbar)
    acc = []
    for N in range(400):
        acc.append(be_pmf(d, N))
        partial = math.fsum(acc)
        if nbar > 0:
            # strict while the exact tail is resolvable in double precision
            assert partial < 1.0 if d.tail(N) > 1e-14 else partial <= 1.0 + 1e-15
        assert partial + d.tail(N) == pytest.approx(1.0, abs=2e-15)


@pytest.mark.parametrize("nbar", GRID)
def test_mean_identity_adaptive(nbar):
    d = ThermalCellDistribution(nbar)
    m = d.terms_for(1e-14)
    # tail of sum n P_n beyond m-1 is R**m (m + nbar)
    while d.mean_rate**m * (m + nbar) >= 1e-11:
        m += 1
    assert math.fsum(n * be_pmf(d, n) for n in range(m)) == pytest.approx(nbar, abs=1e-10)


@given(occupations, st.integers(min_value=1, max_value=200))
def test_ratio_law(nbar, n):
    d = ThermalCellDistribution(nbar)
    prev = be_pmf(d, n - 1)
    if prev > 1e-300:
        assert be_pmf(d, n) / prev == pytest.approx(d.mean_rate, rel=1e-12)


def test_geometric_terms_certifies_tail():
    for rate in (0.0, 0.1, 0.5, 0.99, 0.999):
        m = geometric_terms(rate, 1e-12)
        assert rate**m < 1e-12
        assert m == 1 or rate ** (m - 1) >= 1e-12


def test_truncation_ceiling():
    with pytest.raises(TruncationError):
        geometric_terms(1 - 1e-9, 1e-15, max_terms=10**6)


def test_geometric_state_vacuum():
    g = geometric_state(0, 1e-12)
    assert g.amplitudes.tolist() == [1.0]
    assert g.deficit == 0.0


def test_geometric_state_first_amplitude():
    assert geometric_state(1, 1e-6).amplitudes[0] == pytest.approx(1 / math.sqrt(2), rel=1e-15)


def test_geometric_state_norm():
    g = geometric_state(3, 1e-12)
    # independent: sum the squared geometric progression directly
    direct = math.fsum((0.75**k) / 4 for k in range(g.k_max + 1))
    assert direct == pytest.approx(1.0, abs=1e-12)
    assert g.norm() == pytest.approx(1.0, abs=1e-12)
    assert 0 <= 1 - g.norm() < 1e-12
    assert g.deficit == pytest.approx(1 - direct, abs=1e-15)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 10, 50])
def test_geometric_state_squares_reproduce_wk(n):
    g = geometric_state(n, 1e-10)
    for k, c in enumerate(g.amplitudes):
        assert c * c == pytest.approx(wk_pmf(n, k), abs=1e-14)


def test_geometric_state_exact_rational_norm():
    # squares are W_k(n); exact rational tail after K terms is (n/(n+1))**(K+1)
    n, K = 3, 40
    head = sum(Fraction(1, n + 1) * Fraction(n, n + 1) ** k for k in range(K + 1))
    assert 1 - head == Fraction(n, n + 1) ** (K + 1)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1])
def test_geometric_state_tolerance_validation(bad):
    with pytest.raises(DomainError):
        geometric_state(2, bad)


def test_cells_in_band_linear():
    b = BandSpec(volume=1.0, frequency=5e14, bandwidth=1e9)
    assert cells_in_band(BandSpec(2.0, 5e14, 1e9)) == 2 * cells_in_band(b)
    assert cells_in_band(BandSpec(1.0, 5e14, 2e9)) == 2 * cells_in_band(b)


def test_cells_in_band_value():
    # phase-space volume 8 pi h^3 nu^2 V dnu / c^3 divided by h^3
    h = 6.62607015e-34
    phase_volume = 8 * math.pi * h**3 * (5e14) ** 2 * 1.0 * 1e9 / SPEED_OF_LIGHT**3
    n = cells_in_band(BandSpec(1.0, 5e14, 1e9))
    assert n == pytest.approx(phase_volume / h**3, rel=1e-12)
    assert n == pytest.approx(2.33194208115423592e14, rel=1e-14)
    assert round(n / 1e14, 2) == 2.33


@pytest.mark.parametrize("field", ["volume", "frequency", "bandwidth"])
def test_band_validation(field):
    kw = dict(volume=1.0, frequency=1.0, bandwidth=1.0)
    kw[field] = 0.0
    with pytest.raises(DomainError):
        BandSpec(**kw)
