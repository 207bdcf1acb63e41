"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``TAGREE_PURE_PYTHON=1`` to force the numpy path.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if not os.environ.get("TAGREE_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        pass

# field values and weights stay below 2**31 so products fit in int64
MAX_PRIME = 2**31 - 1


def poly_values(coeffs, m, prime, impl=None):
    """Evaluate each row's polynomial (c_0 + c_1 x + ...) at x = 0..m-1 mod prime.

    Returns an int64 array of shape (rows, m).
    """
    impl = impl or _impl
    return impl.poly_values(np.ascontiguousarray(coeffs, dtype=np.int64), int(m), int(prime))


def weighted_sums(coeffs, prime, threshold, id_w, flip_w, impl=None):
    """Per row: sum_i id_w[i] * v_i + flip_w[i] * (top - v_i).

    v_i is the field value at x=i, or the bit [value < threshold] when
    threshold >= 0; top is 1 for bits and prime for raw values.
    """
    impl = impl or _impl
    return impl.weighted_sums(
        np.ascontiguousarray(coeffs, dtype=np.int64),
        int(prime),
        int(threshold),
        np.ascontiguousarray(id_w, dtype=np.int64),
        np.ascontiguousarray(flip_w, dtype=np.int64),
    )
