"""Pure numpy implementations of the compiled kernels (same signatures)."""
import numpy as np


def poly_values(coeffs, m, prime):
    coeffs = np.asarray(coeffs, dtype=np.int64)
    x = np.arange(m, dtype=np.int64)
    acc = np.zeros((coeffs.shape[0], m), dtype=np.int64)
    for j in range(coeffs.shape[1] - 1, -1, -1):
        acc = (acc * x + coeffs[:, j : j + 1]) % prime
    return acc


def weighted_sums(coeffs, prime, threshold, id_w, flip_w):
    id_w = np.asarray(id_w, dtype=np.int64)
    flip_w = np.asarray(flip_w, dtype=np.int64)
    vals = poly_values(coeffs, id_w.shape[0], prime)
    if threshold >= 0:
        vals = (vals < threshold).astype(np.int64)
        top = 1
    else:
        top = prime
    return vals @ id_w + (top - vals) @ flip_w
