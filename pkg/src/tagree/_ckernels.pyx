# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: polynomial evaluation over a prime field, batched over seeds."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


def poly_values(i64[:, ::1] coeffs, Py_ssize_t m, i64 prime):
    cdef Py_ssize_t T = coeffs.shape[0], t = coeffs.shape[1]
    cdef Py_ssize_t r, i, j
    cdef i64 acc
    out_arr = np.empty((T, m), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    with nogil:
        for r in range(T):
            for i in range(m):
                acc = 0
                for j in range(t - 1, -1, -1):
                    acc = (acc * i + coeffs[r, j]) % prime
                out[r, i] = acc
    return out_arr


def weighted_sums(i64[:, ::1] coeffs, i64 prime, i64 threshold,
                  i64[::1] id_w, i64[::1] flip_w):
    cdef Py_ssize_t T = coeffs.shape[0], t = coeffs.shape[1]
    cdef Py_ssize_t m = id_w.shape[0]
    cdef Py_ssize_t r, i, j
    cdef i64 acc, v, s
    cdef i64 top = 1 if threshold >= 0 else prime
    out_arr = np.empty(T, dtype=np.int64)
    cdef i64[::1] out = out_arr
    with nogil:
        for r in range(T):
            s = 0
            for i in range(m):
                if id_w[i] == 0 and flip_w[i] == 0:
                    continue
                acc = 0
                for j in range(t - 1, -1, -1):
                    acc = (acc * i + coeffs[r, j]) % prime
                if threshold >= 0:
                    v = 1 if acc < threshold else 0
                else:
                    v = acc
                s += id_w[i] * v + flip_w[i] * (top - v)
            out[r] = s
    return out_arr
