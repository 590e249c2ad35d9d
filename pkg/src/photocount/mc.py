"""Seeded Monte Carlo for thermal photodetection and photon-pair photometry.

Trials are cut into blocks of ``BLOCK_SIZE``; block ``b`` of substream
``s`` draws from the counter-based key ``rng.block_key(seed, s, b)``.
Blocks are handed to workers in contiguous runs and the integer tallies
are summed in worker order, so a run is bit-identical for any number of
workers and for either kernel backend.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import rng
from ._backend import kernels
from ._pykernels import _geometric_search
from .absorption import uk_vector
from .detector import DetectorSpec
from .dist import ThermalCellDistribution, _check_count
from .errors import DomainError
from .mandel import IntegratedIntensityLaw, mandel_pcount
from .photometry import ChopperModel

BLOCK_SIZE = 1 << 20
DEFAULT_KMAX = 8


class Experiment(str, Enum):
    THERMAL_COUNTING = "thermal_counting"
    TWO_CHANNEL_PAIRS = "two_channel_pairs"
    CHOPPER_PAIRS = "chopper_pairs"


@dataclass(frozen=True)
class SimConfig:
    seed: int
    trials: int
    experiment: Experiment
    mean_occupation: tuple[float, ...] = (0.0,)
    detector1: DetectorSpec = field(default_factory=lambda: DetectorSpec(1.0, 1.0))
    detector2: DetectorSpec = field(default_factory=lambda: DetectorSpec(1.0, 1.0))
    eta_x: float | None = None
    workers: int = 1
    k_max: int = DEFAULT_KMAX

    def __post_init__(self):
        object.__setattr__(self, "seed", rng.check_seed(self.seed))
        object.__setattr__(self, "experiment", Experiment(self.experiment))
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if isinstance(self.workers, bool) or not isinstance(self.workers, int) or self.workers < 1:
            raise DomainError(f"workers must be a positive integer, got {self.workers!r}")
        _check_count("k_max", self.k_max)
        occ = self.mean_occupation
        occ = (occ,) if isinstance(occ, (int, float)) else tuple(occ)
        if not occ:
            raise DomainError("mean_occupation must not be empty")
        object.__setattr__(self, "mean_occupation", tuple(ThermalCellDistribution(x).mean_occupation for x in occ))
        ChopperModel(self.eta_x)

    @classmethod
    def from_dict(cls, d: dict) -> SimConfig:
        if "seed" not in d:
            raise DomainError("config must set 'seed'")
        known = {"seed", "trials", "experiment", "mean_occupation", "detector1", "detector2", "eta_x", "workers", "k_max"}
        extra = set(d) - known
        if extra:
            raise DomainError(f"unknown config keys: {', '.join(sorted(extra))}")
        kw = dict(d)
        for name in ("detector1", "detector2"):
            if name in kw:
                kw[name] = DetectorSpec(**kw[name])
        return cls(**kw)

    @classmethod
    def from_json(cls, text: str) -> SimConfig:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class EventTally:
    """Outcome counts of one simulated group; counts sum to ``trials``."""

    outcomes: tuple[str, ...]
    counts: tuple[int, ...]
    trials: int

    def __post_init__(self):
        if sum(self.counts) != self.trials:
            raise AssertionError("tally does not account for every trial")

    def __getitem__(self, outcome: str) -> int:
        return self.counts[self.outcomes.index(outcome)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.outcomes, self.counts))


# -- single draws --------------------------------------------------------

def sample_cell_occupation(dist: ThermalCellDistribution, stream: rng.CounterStream, size: int | None = None):
    """Bose-Einstein occupation(s) by inverse-CDF geometric sampling."""
    if size is None:
        return int(_geometric_search(np.array([stream.uniform()]), dist.mean_rate)[0])
    return _geometric_search(stream.uniforms(size), dist.mean_rate)


def sample_absorption(n: int, stream: rng.CounterStream, size: int | None = None):
    """Number of photons absorbed from a cell holding ``n``."""
    n = _check_count("n", n)
    r = n / (n + 1.0)
    if size is None:
        return int(_geometric_search(np.array([stream.uniform()]), r)[0])
    return _geometric_search(stream.uniforms(size), r)


# -- block runner ---------------------------------------------------------

def _run_blocks(job: tuple) -> np.ndarray:
    kind, seed, stream, trials, blocks, args = job
    total = None
    for b in blocks:
        count = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        key = rng.block_key(seed, stream, b)
        if kind == "thermal":
            t = kernels.thermal_tally(key, 0, count, *args)
        else:
            t = kernels.categorical_tally(key, 0, count, np.asarray(args, dtype=np.float64))
        total = t if total is None else total + t
    return total


def _split(nblocks: int, workers: int) -> list[range]:
    edges = [nblocks * i // workers for i in range(workers + 1)]
    return [range(edges[i], edges[i + 1]) for i in range(workers) if edges[i + 1] > edges[i]]


def _tally(kind: str, seed: int, stream: int, trials: int, args, workers: int) -> np.ndarray:
    nblocks = -(-trials // BLOCK_SIZE)
    jobs = [(kind, seed, stream, trials, r, args) for r in _split(nblocks, workers)]
    if len(jobs) == 1:
        parts = [_run_blocks(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as ex:
            parts = list(ex.map(_run_blocks, jobs))
    out = parts[0].copy()
    for p in parts[1:]:
        out += p
    return out


def _cumulative(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if np.any(p < 0) or p.sum() > 1.0 + 1e-15:
        raise AssertionError(f"invalid category probabilities {p}")
    return np.cumsum(p)


# -- experiments ----------------------------------------------------------

def thermal_outcomes(k_max: int) -> tuple[str, ...]:
    return tuple(f"k={k}" for k in range(k_max + 1)) + (f"k>{k_max}",)


def run_thermal_counting(config: SimConfig, group: int = 0) -> EventTally:
    """Frames of thermal light through a wave-like boundary into the detector.

    Per frame: draw the cell occupation, let the whole state enter with
    probability ``eta``, then draw the number of absorbed photons.
    """
    if config.experiment is not Experiment.THERMAL_COUNTING:
        raise DomainError("run_thermal_counting needs experiment = thermal_counting")
    dist = ThermalCellDistribution(config.mean_occupation[group])
    args = (dist.mean_rate, config.detector1.eta, config.k_max)
    counts = _tally("thermal", config.seed, group, config.trials, args, config.workers)
    return EventTally(thermal_outcomes(config.k_max), tuple(int(c) for c in counts), config.trials)


TWO_CHANNEL_OUTCOMES = ("det1_only", "det2_only", "coincidence", "none")
CHOPPER_OUTCOMES = ("A_one_electron", "A_two_electron", "A_none", "B_alone", "B_with_x", "B_none")


def pair_probabilities(config: SimConfig) -> dict[str, float]:
    """Per-pair category probabilities under the phenomenological model."""
    e1, e2 = config.detector1.eta, config.detector2.eta
    if config.experiment is Experiment.TWO_CHANNEL_PAIRS:
        p = (0.25 * e1 * (1 - e2), 0.25 * e2 * (1 - e1), 0.125 * e1 * e2)
        return dict(zip(TWO_CHANNEL_OUTCOMES, p + (1.0 - math.fsum(p),)))
    if config.experiment is Experiment.CHOPPER_PAIRS:
        ex = e1 if config.eta_x is None else config.eta_x
        a = (0.5 * e1 * (1 - e1), 0.125 * e1 * e1)
        b = (0.25 * e1 * (1 - ex), 0.125 * e1 * ex)
        return dict(zip(CHOPPER_OUTCOMES, a + (1.0 - math.fsum(a),) + b + (1.0 - math.fsum(b),)))
    raise DomainError("pair probabilities need a pair experiment")


def run_pair_experiment(config: SimConfig) -> EventTally:
    """Categorical draw per photon pair.

    Chopper runs simulate ``trials`` pairs in each arm (A: both photons on
    the cathode, B: one blocked), so the tally covers ``2 * trials`` draws.
    """
    p = pair_probabilities(config)
    vals = list(p.values())
    if config.experiment is Experiment.TWO_CHANNEL_PAIRS:
        counts = _tally("pairs", config.seed, 0, config.trials, tuple(_cumulative(vals[:3])), config.workers)
        return EventTally(TWO_CHANNEL_OUTCOMES, tuple(int(c) for c in counts), config.trials)
    a = _tally("pairs", config.seed, 0, config.trials, tuple(_cumulative(vals[:2])), config.workers)
    b = _tally("pairs", config.seed, 1, config.trials, tuple(_cumulative(vals[3:5])), config.workers)
    return EventTally(CHOPPER_OUTCOMES, tuple(int(c) for c in np.concatenate([a, b])), 2 * config.trials)


def thermal_probabilities(dist: ThermalCellDistribution, eta: float, k_max: int) -> np.ndarray:
    """Analytic frame-outcome probabilities matching :func:`thermal_outcomes`."""
    u, _ = uk_vector(dist, k_max)
    p = eta * u
    p[0] = 1.0 - eta * (1.0 - u[0])
    overflow = max(0.0, eta * (1.0 - math.fsum(u)))
    return np.append(p, overflow)


# -- comparison with analytic values --------------------------------------

@dataclass(frozen=True)
class Deviation:
    quantity: str
    empirical: float
    expected: float
    sigma: float

    @property
    def z(self) -> float:
        if math.isnan(self.sigma) or math.isnan(self.empirical):
            return math.nan
        if self.sigma > 0:
            return (self.empirical - self.expected) / self.sigma
        return 0.0 if self.empirical == self.expected else math.inf

    @property
    def status(self) -> str:
        z = abs(self.z)
        if math.isnan(z):
            return "info"
        return "ok" if z <= 3 else ("warn" if z <= 4 else "fail")


def frequency_deviation(name: str, count: int, trials: int, p: float) -> Deviation:
    return Deviation(name, count / trials, p, math.sqrt(max(p * (1 - p), 0.0) / trials))


def _ratio_sigma(px: float, py: float, nx: int, ny: int, cov_xy: float = 0.0) -> float:
    # delta method for (X/nx)/(Y/ny)-type ratios of multinomial frequencies
    r = px / py
    var = (1 - px) / (nx * px) + (1 - py) / (ny * py) - 2 * cov_xy
    return abs(r) * math.sqrt(max(var, 0.0))


def pair_estimate_deviations(config: SimConfig, tally: EventTally) -> list[Deviation]:
    """Recovered efficiencies (new model) with delta-method standard deviations."""
    from .photometry import eta_chopper, eta_pulse_height, eta_two_channel

    p = pair_probabilities(config)
    m = config.trials
    e1, e2 = config.detector1.eta, config.detector2.eta
    out = []
    if config.experiment is Experiment.TWO_CHANNEL_PAIRS:
        from .photometry import PhotometryCounts

        counts = PhotometryCounts(n1=tally["det1_only"], n2=tally["det2_only"], nc=tally["coincidence"])
        if min(counts.n1, counts.n2) == 0:
            return out
        est1, est2 = eta_two_channel(counts, "new")
        for i, (est, e, single) in enumerate(((est1, e1, "det2_only"), (est2, e2, "det1_only")), start=1):
            pc, ps = p["coincidence"], p[single]
            if pc == 0 or ps == 0:
                continue
            r = pc / ps
            sr = _ratio_sigma(pc, ps, m, m, cov_xy=-1.0 / m)
            out.append(Deviation(f"eta{i}_two_channel", est.eta, e, 2 / (1 + 2 * r) ** 2 * sr))
        return out
    one, two = tally["A_one_electron"], tally["A_two_electron"]
    if one and p["A_one_electron"] > 0:
        r = p["A_two_electron"] / p["A_one_electron"]
        sr = _ratio_sigma(p["A_two_electron"], p["A_one_electron"], m, m, cov_xy=-1.0 / m)
        out.append(Deviation("eta_pulse_height", eta_pulse_height(two, one, "new").eta, e1, 4 / (1 + 4 * r) ** 2 * sr))
    na = one + two
    nb = tally["B_alone"] + tally["B_with_x"]
    pa = p["A_one_electron"] + p["A_two_electron"]
    pb = p["B_alone"] + p["B_with_x"]
    if nb and pb > 0:
        ratio = pa / pb
        sratio = _ratio_sigma(pa, pb, m, m)
        chopper = ChopperModel(config.eta_x)
        if config.eta_x is None:
            deriv = 2 / (1 + (2 - ratio)) ** 2
        else:
            deriv = (1 - config.eta_x / 2) / 1.5
        out.append(Deviation("eta_chopper", eta_chopper(na, nb, "new", chopper).eta, e1, deriv * sratio))
    return out


def thermal_deviations(config: SimConfig, tallies: list[EventTally]) -> list[Deviation]:
    out = []
    eta = config.detector1.eta
    k2 = []
    for occ, tally in zip(config.mean_occupation, tallies):
        probs = thermal_probabilities(ThermalCellDistribution(occ), eta, config.k_max)
        for name, c, p in zip(tally.outcomes, tally.counts, probs):
            out.append(frequency_deviation(f"nbar={occ!r} {name}", c, tally.trials, p))
        k2.append((occ, tally["k=2"], probs[2]))
    base_occ, base_c, base_p = k2[0]
    for occ, c, p in k2[1:]:
        if base_c == 0 or base_p == 0 or p == 0:
            continue
        sigma = _ratio_sigma(p, base_p, config.trials, config.trials)
        out.append(Deviation(f"k2_ratio nbar={occ!r}/{base_occ!r}", c / base_c, p / base_p, sigma))
        law = IntegratedIntensityLaw.deterministic
        mandel = mandel_pcount(law(eta * occ), 2) / mandel_pcount(law(eta * base_occ), 2) if base_occ > 0 else math.nan
        out.append(Deviation(f"mandel_k2_ratio nbar={occ!r}/{base_occ!r}", math.nan, mandel, math.nan))
    return out


@dataclass(frozen=True)
class SimulationResult:
    groups: tuple[str, ...]
    tallies: tuple[EventTally, ...]
    deviations: tuple[Deviation, ...]

    @property
    def failed(self) -> bool:
        return any(d.status == "fail" for d in self.deviations)


def simulate(config: SimConfig) -> SimulationResult:
    """Run the configured experiment and compare it with the analytic model."""
    if config.experiment is Experiment.THERMAL_COUNTING:
        tallies = [run_thermal_counting(config, i) for i in range(len(config.mean_occupation))]
        groups = tuple(f"nbar={x!r}" for x in config.mean_occupation)
        return SimulationResult(groups, tuple(tallies), tuple(thermal_deviations(config, tallies)))
    tally = run_pair_experiment(config)
    probs = pair_probabilities(config)
    trials = config.trials
    devs = [frequency_deviation(k, tally[k], trials, p) for k, p in probs.items()]
    devs += pair_estimate_deviations(config, tally)
    return SimulationResult((config.experiment.value,), (tally,), tuple(devs))


__all__ = [
    "BLOCK_SIZE",
    "Deviation",
    "EventTally",
    "Experiment",
    "SimConfig",
    "SimulationResult",
    "pair_probabilities",
    "run_pair_experiment",
    "run_thermal_counting",
    "sample_absorption",
    "sample_cell_occupation",
    "simulate",
    "thermal_probabilities",
]
