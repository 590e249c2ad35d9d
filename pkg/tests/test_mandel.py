import math

import numpy as np
import pytest

from photocount.dist import ThermalCellDistribution, be_pmf
from photocount.errors import DomainError
from photocount.mandel import IntegratedIntensityLaw, binomial_short_time, mandel_pcount, mandel_pcount_refined

Law = IntegratedIntensityLaw


def exponential_table(mean=1.0, points=200_001, top=50.0):
    w = np.linspace(0.0, top, points)
    return Law.tabulated(w, np.exp(-w / mean) / mean)


def test_deterministic_zero_intensity():
    law = Law.deterministic(0.0)
    assert mandel_pcount(law, 0) == 1.0
    assert all(mandel_pcount(law, n) == 0.0 for n in range(1, 5))


def test_deterministic_is_poisson():
    assert mandel_pcount(Law.deterministic(1.0), 1) == pytest.approx(math.exp(-1), rel=1e-15)
    w = 2.5
    for n in range(15):
        assert mandel_pcount(Law.deterministic(w), n) == pytest.approx(w**n * math.exp(-w) / math.factorial(n), rel=1e-13)


@pytest.mark.parametrize("mean", [0.0, 0.3, 1.0, 7.0])
def test_exponential_law_is_bose_einstein(mean):
    d = ThermalCellDistribution(mean)
    for n in range(30):
        assert mandel_pcount(Law.exponential(mean), n) == pytest.approx(be_pmf(d, n), rel=1e-14, abs=1e-300)


def test_exponential_quadrature_path_matches_bose_einstein():
    law = exponential_table()
    d = ThermalCellDistribution(1.0)
    for n in range(21):
        assert abs(mandel_pcount(law, n) - be_pmf(d, n)) < 1e-6


def test_refined_error_estimate_shrinks():
    fine, coarse = exponential_table(points=400_001), exponential_table(points=200_001)
    value, err = mandel_pcount_refined(fine, coarse, 2)
    assert err < 1e-7
    assert abs(value - 0.125) <= 2 * err + 1e-9


@pytest.mark.parametrize("law", [Law.deterministic(3.0), Law.exponential(2.0), exponential_table(2.0, 400_001, 80.0)], ids=["det", "exp", "tab"])
def test_normalization(law):
    assert math.fsum(mandel_pcount(law, n) for n in range(150)) == pytest.approx(1.0, abs=1e-8)


def test_two_photon_quadratic_scaling():
    ratios = [mandel_pcount(Law.deterministic(2 * w), 2) / mandel_pcount(Law.deterministic(w), 2) for w in (1e-2, 1e-4, 1e-6)]
    assert ratios == sorted(ratios)
    assert ratios[-1] == pytest.approx(4.0, abs=1e-5)
    w = np.array([1e-6, 1e-5, 1e-4])
    p2 = [mandel_pcount(Law.deterministic(x), 2) for x in w]
    slope = np.polyfit(np.log(w), np.log(p2), 1)[0]
    assert slope == pytest.approx(2.0, abs=1e-3)


def test_tabulated_validation():
    w = np.linspace(0, 10, 101)
    with pytest.raises(DomainError):
        Law.tabulated(w, np.full(101, 0.2))
    with pytest.raises(DomainError):
        Law.tabulated(w[::-1], np.full(101, 0.1))
    with pytest.raises(DomainError):
        Law.tabulated(w, -np.ones(101))
    law = Law.tabulated(w, np.full(101, 0.2), normalize=True)
    assert np.trapezoid(law.density, law.grid) == pytest.approx(1.0)


def test_negative_intensity_rejected():
    with pytest.raises(DomainError):
        Law.deterministic(-1.0)


def test_binomial_examples():
    assert binomial_short_time(10, 0.0, 0) == 1.0
    assert binomial_short_time(2, 0.5, 1) == 0.5
    p1 = binomial_short_time(10, 1e-4, 1)
    assert p1 == pytest.approx(10 * 1e-4, rel=1e-3)
    ratios = [binomial_short_time(10, p, 2) / binomial_short_time(10, p, 1) for p in (1e-2, 1e-4, 1e-6)]
    assert ratios == sorted(ratios, reverse=True) and ratios[-1] < 1e-5


def test_binomial_normalized():
    assert math.fsum(binomial_short_time(25, 0.3, n) for n in range(26)) == pytest.approx(1.0, abs=1e-14)


def test_binomial_domain():
    with pytest.raises(DomainError):
        binomial_short_time(3, 0.5, 4)
    with pytest.raises(DomainError):
        binomial_short_time(3, 1.5, 1)
    with pytest.raises(DomainError):
        binomial_short_time(0, 0.5, 0)
