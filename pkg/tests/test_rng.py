import numpy as np
import pytest

from photocount import rng


def test_mix64_reference_value():
    # first output of the reference SplitMix64 generator seeded with 0
    assert rng.mix64(rng.GOLDEN) == 0xE220A8397B1DCDAF


def test_vectorized_matches_scalar():
    key = rng.block_key(123, 2, 7)
    counters = np.arange(1000, 1100, dtype=np.uint64)
    vec = rng.uniforms_at(key, counters)
    assert vec.tolist() == [rng.uniform_at(key, int(c)) for c in counters]


def test_uniforms_in_unit_interval():
    u = rng.uniforms_at(rng.block_key(1, 0, 0), np.arange(100_000, dtype=np.uint64))
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 5 * (1 / 12 / u.size) ** 0.5


def test_stream_is_sequential_view():
    s = rng.CounterStream(99)
    first = [s.uniform() for _ in range(5)]
    rest = s.uniforms(5)
    both = rng.CounterStream(99).uniforms(10)
    assert both.tolist() == first + rest.tolist()


def test_distinct_blocks_and_streams_differ():
    keys = {rng.block_key(5, s, b) for s in range(4) for b in range(64)}
    assert len(keys) == 256


@pytest.mark.parametrize("bad", [-1, 1 << 64, 1.5, True])
def test_seed_validation(bad):
    with pytest.raises((ValueError, TypeError)):
        rng.block_key(bad, 0, 0)
