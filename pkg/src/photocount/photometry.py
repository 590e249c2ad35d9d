"""Quantum-efficiency estimators for absolute photometry with photon pairs.

Two sets of count models are supported:

``old``
    every photon is detected independently with probability ``eta``
    (two-channel coincidences, pulse-height ratio, chopper A/B ratio);
``new``
    the phenomenological model, where a one-photon state gives a
    one-electron pulse with probability ``eta/4`` and a correlated
    two-electron emission from a pair has probability ``eta1*eta2/8``.

Each estimator inverts the forward model of :func:`predict_counts`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

from .dist import _check_probability
from .errors import EstimationError


class Theory(str, Enum):
    OLD = "old"
    NEW = "new"


class Method(str, Enum):
    TWO_CHANNEL = "two_channel"
    PULSE_HEIGHT = "pulse_height"
    CHOPPER = "chopper"


@dataclass(frozen=True)
class PhotometryCounts:
    """Observed (or expected) counts; absent quantities are ``None``.

    Under the new model ``n1`` and ``n2`` count exclusive singles, i.e.
    channel events without a coincidence.
    """

    n1: float | None = None
    n2: float | None = None
    nc: float | None = None
    na: float | None = None
    nb: float | None = None
    n1e: float | None = None
    n2e: float | None = None
    m: float | None = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and not (math.isfinite(v) and v >= 0):
                raise EstimationError(f"count {f.name} must be finite and >= 0, got {v!r}")

    def require(self, *names: str) -> tuple[float, ...]:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise EstimationError(f"missing counts: {', '.join(missing)}")
        return tuple(getattr(self, n) for n in names)

    @property
    def exceeds_old_bounds(self) -> bool:
        """Coincidences outnumber a channel, impossible if every photon is independent."""
        if None in (self.n1, self.n2, self.nc):
            return False
        return self.nc > min(self.n1, self.n2)


@dataclass(frozen=True)
class EfficiencyEstimate:
    eta: float
    theory: Theory
    method: Method
    flags: tuple[str, ...] = ()

    @property
    def clamped(self) -> bool:
        return bool(self.flags)


@dataclass(frozen=True)
class ChopperModel:
    """Blocking element of the second one-channel method.

    ``eta_x`` is the efficiency of a detector that would absorb the blocked
    photon (0 for a perfect mirror, 1 for an ideal absorber). ``None``
    selects the self-consistent choice ``eta_x = eta``.
    """

    eta_x: float | None = None

    def __post_init__(self):
        if self.eta_x is not None:
            object.__setattr__(self, "eta_x", _check_probability("eta_x", self.eta_x))


def _estimate(eta: float, theory: Theory, method: Method) -> EfficiencyEstimate:
    if eta < 0.0:
        return EfficiencyEstimate(0.0, theory, method, ("below_range",))
    if eta > 1.0:
        return EfficiencyEstimate(1.0, theory, method, ("above_range",))
    return EfficiencyEstimate(eta, theory, method)


def _ratio(num: float, den: float, what: str) -> float:
    if den == 0:
        raise EstimationError(f"{what} is zero; ratio undefined")
    return num / den


def eta_two_channel(counts: PhotometryCounts, theory: Theory | str) -> tuple[EfficiencyEstimate, EfficiencyEstimate]:
    """Efficiencies of both channels from singles and coincidences."""
    theory = Theory(theory)
    n1, n2, nc = counts.require("n1", "n2", "nc")
    r1 = _ratio(nc, n2, "N2")
    r2 = _ratio(nc, n1, "N1")
    if theory is Theory.OLD:
        e1, e2 = r1, r2
    else:
        e1, e2 = 2 * r1 / (1 + 2 * r1), 2 * r2 / (1 + 2 * r2)
    return _estimate(e1, theory, Method.TWO_CHANNEL), _estimate(e2, theory, Method.TWO_CHANNEL)


def eta_pulse_height(n2e: float, n1e: float, theory: Theory | str) -> EfficiencyEstimate:
    """Efficiency from the ratio of two-electron to one-electron pulses."""
    theory = Theory(theory)
    PhotometryCounts(n1e=n1e, n2e=n2e)
    r = _ratio(n2e, n1e, "N1e")
    c = 2.0 if theory is Theory.OLD else 4.0
    return _estimate(c * r / (1 + c * r), theory, Method.PULSE_HEIGHT)


def eta_chopper(na: float, nb: float, theory: Theory | str, chopper: ChopperModel = ChopperModel()) -> EfficiencyEstimate:
    """Efficiency from counts with both photons (A) and one blocked (B)."""
    theory = Theory(theory)
    PhotometryCounts(na=na, nb=nb)
    ratio = _ratio(na, nb, "NB")
    if theory is Theory.OLD:
        return _estimate(2.0 - ratio, theory, Method.CHOPPER)
    if chopper.eta_x is not None:
        return _estimate((2.0 - ratio * (1.0 - chopper.eta_x / 2.0)) / 1.5, theory, Method.CHOPPER)
    x = 2.0 - ratio
    if x < 0:
        return _estimate(-1.0, theory, Method.CHOPPER)
    return _estimate(2 * x / (1 + x), theory, Method.CHOPPER)


def map_old_to_new(eta_old: float) -> float:
    """Re-express a one-channel efficiency under the new model: ``2e/(1+e)``."""
    eta_old = _check_probability("eta_old", eta_old)
    return 2 * eta_old / (1 + eta_old)


def two_channel_old_to_new(eta_old: float) -> float:
    """Old-to-new map implied by the two-channel estimators: ``2e/(1+2e)``.

    This differs from :func:`map_old_to_new`; the two are kept separate.
    """
    eta_old = _check_probability("eta_old", eta_old)
    return 2 * eta_old / (1 + 2 * eta_old)


def predict_counts(
    m: float,
    eta1: float,
    eta2: float | None = None,
    theory: Theory | str = Theory.NEW,
    chopper: ChopperModel = ChopperModel(),
) -> PhotometryCounts:
    """Expected counts for ``m`` pairs.

    One-channel quantities (``na``, ``nb``, ``n1e``, ``n2e``) refer to the
    detector with efficiency ``eta1``; two-channel ones need ``eta2``.
    """
    theory = Theory(theory)
    if not (math.isfinite(m) and m >= 0):
        raise EstimationError(f"pair count must be finite and >= 0, got {m!r}")
    e = _check_probability("eta1", eta1)
    e2 = None if eta2 is None else _check_probability("eta2", eta2)
    if theory is Theory.OLD:
        n1e = 2 * e * (1 - e) * m
        n2e = e * e * m
        nb = e * m
        two = (e * m, e2 * m, e * e2 * m) if e2 is not None else (None, None, None)
    else:
        ex = e if chopper.eta_x is None else chopper.eta_x
        n1e = 2 * 0.25 * e * (1 - e) * m
        n2e = 0.125 * e * e * m
        nb = 0.25 * e * (1 - ex) * m + 0.125 * e * ex * m
        if e2 is not None:
            two = (0.25 * e * (1 - e2) * m, 0.25 * e2 * (1 - e) * m, 0.125 * e * e2 * m)
        else:
            two = (None, None, None)
    return PhotometryCounts(
        n1=two[0], n2=two[1], nc=two[2], na=n1e + n2e, nb=nb, n1e=n1e, n2e=n2e, m=m
    )


# PMT type, one-channel %, two-channel % (None if not measured), datasheet %
TABLE1 = (
    ("PMT-79", "3.6", "3.8", "7.8"),
    ("PMT-79", "3.3", "3.0", "6.0"),
    ("PMT-79", "1.8", None, "5.3"),
    ("C31034 A (USA)", "7.0", "7.5", "18.0"),
)

TABLE2_HEADER = ("pmt_type", "eta_old_one_channel", "eta_old_two_channel", "eta_sheet", "eta_new")


def format_percent(value: float) -> str:
    """Render a percentage with one decimal, rounding half-up in two stages.

    The value is first rounded to hundredths, then to tenths, which is how
    the published table was evidently produced (6.9498 -> 6.95 -> 7.0).
    """
    d = Decimal(repr(float(value))).quantize(Decimal("0.01"), ROUND_HALF_UP)
    return str(d.quantize(Decimal("0.1"), ROUND_HALF_UP))


@dataclass(frozen=True)
class Table2Row:
    pmt_type: str
    eta_old_one_channel: str
    eta_old_two_channel: str | None
    eta_sheet: str
    eta_new: float  # percent, full precision

    def cells(self) -> tuple[str, ...]:
        return (
            self.pmt_type,
            self.eta_old_one_channel,
            self.eta_old_two_channel or "-",
            self.eta_sheet,
            format_percent(self.eta_new),
        )


def reproduce_table2() -> list[Table2Row]:
    return [
        Table2Row(kind, one, two, sheet, 100.0 * map_old_to_new(float(one) / 100.0))
        for kind, one, two, sheet in TABLE1
    ]
