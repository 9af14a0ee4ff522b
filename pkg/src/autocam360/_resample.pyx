# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bilinear equirect sampler: horizontal wrap, vertical clamp.

Arithmetic mirrors the NumPy fallback expression-for-expression (and the
extension is built with FMA contraction disabled), so both backends
produce byte-identical frames.
"""

from libc.math cimport floor

import numpy as np

BACKEND = "cython"


def bilinear_wrap_sample(const unsigned char[:, :, ::1] src,
                         const double[::1] xs,
                         const double[::1] ys):
    """Sample src (H, W, 3) at continuous pixel coords; returns (N, 3) uint8."""
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    cdef Py_ssize_t n = xs.shape[0]
    if ys.shape[0] != n:
        raise ValueError("xs and ys must have equal length")
    out_arr = np.empty((n, 3), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t i, ix0, ix1, iy0, iy1
    cdef long long xi, yi
    cdef double sx, sy, x0, y0, fx, fy, w00, w10, w01, w11, val
    cdef int c
    with nogil:
        for i in range(n):
            sx = xs[i] - 0.5
            sy = ys[i] - 0.5
            x0 = floor(sx)
            y0 = floor(sy)
            fx = sx - x0
            fy = sy - y0
            xi = <long long> x0
            ix0 = xi % w
            if ix0 < 0:
                ix0 += w
            ix1 = ix0 + 1
            if ix1 == w:
                ix1 = 0
            yi = <long long> y0
            iy0 = yi
            if iy0 < 0:
                iy0 = 0
            elif iy0 > h - 1:
                iy0 = h - 1
            iy1 = yi + 1
            if iy1 < 0:
                iy1 = 0
            elif iy1 > h - 1:
                iy1 = h - 1
            w00 = (1.0 - fx) * (1.0 - fy)
            w10 = fx * (1.0 - fy)
            w01 = (1.0 - fx) * fy
            w11 = fx * fy
            for c in range(3):
                val = (w00 * src[iy0, ix0, c] + w10 * src[iy0, ix1, c]
                       + w01 * src[iy1, ix0, c] + w11 * src[iy1, ix1, c])
                out[i, c] = <unsigned char> (val + 0.5)
    return out_arr
