"""Photon-counting statistics toolkit.

Thermal cell statistics, k-photon absorption probabilities, the Mandel
photocount baseline, detector boundary models, pair-photometry
estimators and a seeded Monte Carlo engine.
"""
from ._backend import BACKEND
from .absorption import completeness, mean_absorbed, u0_closed, u1_closed, uk_total, uk_vector, wk_pmf
from .detector import DetectorSpec, OccupationPmf, fundamental_detect_probs, particle_boundary, wave_boundary
from .dist import ThermalCellDistribution, be_pmf
from .errors import DomainError, EstimationError, TruncationError
from .mandel import IntegratedIntensityLaw, mandel_pcount
from .mc import SimConfig, simulate
from .photometry import PhotometryCounts, eta_chopper, eta_pulse_height, eta_two_channel, map_old_to_new, predict_counts

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DetectorSpec",
    "DomainError",
    "EstimationError",
    "IntegratedIntensityLaw",
    "OccupationPmf",
    "PhotometryCounts",
    "SimConfig",
    "ThermalCellDistribution",
    "TruncationError",
    "be_pmf",
    "completeness",
    "eta_chopper",
    "eta_pulse_height",
    "eta_two_channel",
    "fundamental_detect_probs",
    "mandel_pcount",
    "map_old_to_new",
    "mean_absorbed",
    "particle_boundary",
    "predict_counts",
    "simulate",
    "u0_closed",
    "u1_closed",
    "uk_total",
    "uk_vector",
    "wave_boundary",
    "wk_pmf",
]
