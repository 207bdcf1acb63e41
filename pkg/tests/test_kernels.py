import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tagree import _pykernels, kernels

IMPLS = [_pykernels]
try:
    from tagree import _ckernels

    IMPLS.append(_ckernels)
except ImportError:  # extension not built
    pass

primes = st.sampled_from([2, 3, 5, 7, 23, 61, 101, 65537, 2147483647])


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.__name__)
def test_poly_values_against_direct(impl):
    rng = np.random.default_rng(1)
    for prime in (5, 23, 2147483647):
        coeffs = rng.integers(0, prime, size=(30, 4), dtype=np.int64)
        m = min(prime, 40)
        vals = kernels.poly_values(coeffs, m, prime, impl=impl)
        for r in range(30):
            assert vals[r].tolist() == [oracles.poly_eval(coeffs[r].tolist(), x, prime) for x in range(m)]


@settings(max_examples=150, deadline=None)
@given(primes, st.integers(1, 6), st.integers(1, 20), st.integers(0, 2**32), st.data())
def test_backends_agree(prime, t, rows, seed, data):
    m = min(prime, data.draw(st.integers(1, 30)))
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, prime, size=(rows, t), dtype=np.int64)
    id_w = rng.integers(0, 4, size=m)
    flip_w = rng.integers(0, 4, size=m)
    threshold = data.draw(st.integers(-1, prime))
    ref = kernels.weighted_sums(coeffs, prime, threshold, id_w, flip_w, impl=_pykernels)
    vals = kernels.poly_values(coeffs, m, prime, impl=_pykernels)
    if threshold >= 0:
        bits = (vals < threshold).astype(np.int64)
        direct = bits @ id_w + (1 - bits) @ flip_w
    else:
        direct = vals @ id_w + (prime - vals) @ flip_w
    assert np.array_equal(ref, direct)
    for impl in IMPLS[1:]:
        assert np.array_equal(kernels.poly_values(coeffs, m, prime, impl=impl), vals)
        assert np.array_equal(kernels.weighted_sums(coeffs, prime, threshold, id_w, flip_w, impl=impl), ref)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
