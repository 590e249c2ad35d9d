"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the benchmark does not depend on
``PHOTOCOUNT_PURE_PYTHON``. Each case also reports the largest relative
difference between the backends: Monte Carlo tallies must agree exactly,
compensated float sums to a few ulp.
"""
import argparse
import timeit

import numpy as np

from photocount import _pykernels, rng
from photocount.absorption import _inner_lengths
from photocount.dist import ThermalCellDistribution

try:
    from photocount import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    key = rng.block_key(1, 0, 0)
    d = ThermalCellDistribution(1.0)
    d20 = ThermalCellDistribution(20.0)
    inner = _inner_lengths(d20.mean_rate, d20.terms_for(5e-11), 5e-11, 10**6)
    cum = np.cumsum([0.0125, 0.0125, 0.0002])
    return {
        "geometric_draws 1e6": lambda k: k.geometric_draws(key, 0, 10**6, d.mean_rate),
        "thermal_tally 1e6": lambda k: k.thermal_tally(key, 0, 10**6, d.mean_rate, 0.2, 8),
        "categorical_tally 1e6": lambda k: k.categorical_tally(key, 0, 10**6, cum),
        "uk_vector nbar=20": lambda k: k.uk_vector(d20.mean_rate, d20.p0, 8, d20.terms_for(1e-15)),
        "mean_absorbed_sum nbar=20": lambda k: k.mean_absorbed_sum(d20.mean_rate, d20.p0, inner),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not available; nothing to compare")
        return 1
    print(f"{'case':28s} {'cython [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn in cases().items():
        a, b = np.asarray(fn(_ckernels), dtype=float), np.asarray(fn(_pykernels), dtype=float)
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {tc:12.2f} {tp:12.2f} {tp / tc:8.1f} {diff:13.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
