# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled DTW dynamic program (squared Euclidean frame distance)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

cdef enum:
    STEP_DIAG = 0
    STEP_X = 1
    STEP_Y = 2


def dtw_path(const double[:, ::1] x, const double[:, ::1] y):
    """Return ``(total_cost, pairs)`` for the optimal monotone alignment.

    Only two rows of the accumulated cost are kept; the step taken into every
    cell is recorded in a uint8 matrix for the traceback.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = y.shape[0]
    cdef Py_ssize_t p = x.shape[1]
    if n == 0 or m == 0:
        raise ValueError("empty sequence")
    if y.shape[1] != p:
        raise ValueError("dimension mismatch")

    steps_arr = np.empty((n, m), dtype=np.uint8)
    prev_arr = np.full(m, INFINITY, dtype=np.float64)
    curr_arr = np.empty(m, dtype=np.float64)
    cdef cnp.uint8_t[:, ::1] steps = steps_arr
    cdef double[::1] prev = prev_arr
    cdef double[::1] curr = curr_arr
    cdef double[::1] tmp

    cdef Py_ssize_t i, j, k
    cdef double c, d, dg, up, lf, best
    cdef cnp.uint8_t step

    with nogil:
        for i in range(n):
            for j in range(m):
                c = 0.0
                for k in range(p):
                    d = x[i, k] - y[j, k]
                    c = c + d * d
                if i == 0 and j == 0:
                    dg = 0.0
                elif i > 0 and j > 0:
                    dg = prev[j - 1]
                else:
                    dg = INFINITY
                up = prev[j]
                if j > 0:
                    lf = curr[j - 1]
                else:
                    lf = INFINITY
                if dg <= up and dg <= lf:
                    best = dg
                    step = STEP_DIAG
                elif up <= lf:
                    best = up
                    step = STEP_X
                else:
                    best = lf
                    step = STEP_Y
                curr[j] = c + best
                steps[i, j] = step
            tmp = prev
            prev = curr
            curr = tmp

    total = prev[m - 1]

    pairs = np.empty((n + m - 1, 2), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = pairs
    cdef Py_ssize_t pos = n + m - 2
    i = n - 1
    j = m - 1
    while True:
        out[pos, 0] = i
        out[pos, 1] = j
        if i == 0 and j == 0:
            break
        step = steps[i, j]
        if step == STEP_DIAG:
            i -= 1
            j -= 1
        elif step == STEP_X:
            i -= 1
        else:
            j -= 1
        pos -= 1
    return float(total), pairs[pos:].copy()
