import math

import numpy as np
import pytest

from gyrator import backend
from gyrator.backend import implementations, kernel_backend


@pytest.fixture(scope="module")
def impls():
    return implementations()


def test_active_backend_is_reported():
    assert kernel_backend() in ("compiled", "python")
    assert "python" in implementations()


def test_direct_sum_backends_agree(impls, rng):
    if len(impls) < 2:
        pytest.skip("compiled extension not built")
    g = np.ascontiguousarray(rng.standard_normal((7, 5))
                             + 1j * rng.standard_normal((7, 5)))
    cot, csc = 1 / math.tan(0.9), 1 / math.sin(0.9)
    outs = [impl.direct_gyrator_sum(g, cot, csc, 0.3, 0.25, 0.2, 0.15, 5, 7, 1.3)
            for impl in impls.values()]
    scale = np.abs(outs[0]).max()
    for other in outs[1:]:
        assert np.abs(outs[0] - other).max() <= 1e-12 * scale


def test_keystreams_bit_identical(impls):
    if len(impls) < 2:
        pytest.skip("compiled extension not built")
    streams = [impl.logistic_keystream(0.123456789, 3.99, 1000, 1 << 14)
               for impl in impls.values()]
    for other in streams[1:]:
        assert np.array_equal(streams[0], other)


def test_keystream_values_are_bits(impls):
    for impl in impls.values():
        bits = impl.logistic_keystream(0.37, 3.99, 10, 256)
        assert bits.dtype == np.uint8
        assert set(np.unique(bits)) <= {0, 1}


def test_keystream_is_balanced_and_aperiodic():
    bits = backend.logistic_keystream(0.37, 3.99, 1000, 1 << 14)
    ones = bits.mean()
    assert 0.3 < ones < 0.7
    # no short cycle: the stream must not repeat with small periods
    for period in (1, 2, 4, 8, 64):
        assert not np.array_equal(bits[period:], bits[:-period])
