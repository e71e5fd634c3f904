# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels (see py_kernels for the
reference semantics)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport log

name = "cython"


def fft_pow2_batch(cnp.complex128_t[:, ::1] a, cnp.complex128_t[::1] tw,
                   cnp.int64_t[::1] rev):
    """In-place radix-2 FFT along the last axis of a (B, N) complex array."""
    cdef Py_ssize_t nb = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t r, i, j, start, off, h, m
    cdef double complex u, t
    if n == 1:
        return
    cdef double complex[::1] buf = np.empty(n, np.complex128)
    for r in range(nb):
        for i in range(n):
            buf[i] = a[r, rev[i]]
        for i in range(n):
            a[r, i] = buf[i]
        m = 2
        off = 0
        while m <= n:
            h = m >> 1
            start = 0
            while start < n:
                for j in range(h):
                    u = a[r, start + j]
                    t = tw[off + j] * a[r, start + j + h]
                    a[r, start + j] = u + t
                    a[r, start + j + h] = u - t
                start += m
            off += h
            m <<= 1


def bin_linear_1d(cnp.float64_t[::1] x, cnp.float64_t[::1] weights,
                  double origin, double spacing, Py_ssize_t count):
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(count)
    cdef double[::1] o = out
    cdef Py_ssize_t i, idx
    cdef double f, r
    # two passes (left nodes then right) to match the bincount accumulation
    # order of the python backend
    for i in range(n):
        f = (x[i] - origin) / spacing
        idx = <Py_ssize_t> f
        if idx > count - 2:
            idx = count - 2
        if idx < 0:
            idx = 0
        r = f - idx
        o[idx] += weights[i] * (1.0 - r)
    for i in range(n):
        f = (x[i] - origin) / spacing
        idx = <Py_ssize_t> f
        if idx > count - 2:
            idx = count - 2
        if idx < 0:
            idx = 0
        r = f - idx
        o[idx + 1] += weights[i] * r
    return out


def bin_linear_2d(cnp.float64_t[::1] y, cnp.float64_t[::1] x,
                  cnp.float64_t[::1] weights,
                  double oy, double sy, Py_ssize_t ny,
                  double ox, double sx, Py_ssize_t nx):
    cdef Py_ssize_t n = y.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(ny * nx)
    cdef double[::1] o = out
    cdef cnp.ndarray[cnp.int64_t, ndim=1] flat = np.empty(n, np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ry = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rx = np.empty(n)
    cdef cnp.int64_t[::1] fl = flat
    cdef double[::1] ryv = ry, rxv = rx
    cdef Py_ssize_t i, iy, ix
    cdef double fy, fx
    for i in range(n):
        fy = (y[i] - oy) / sy
        fx = (x[i] - ox) / sx
        iy = <Py_ssize_t> fy
        ix = <Py_ssize_t> fx
        if iy > ny - 2:
            iy = ny - 2
        if iy < 0:
            iy = 0
        if ix > nx - 2:
            ix = nx - 2
        if ix < 0:
            ix = 0
        ryv[i] = fy - iy
        rxv[i] = fx - ix
        fl[i] = iy * nx + ix
    for i in range(n):
        o[fl[i]] += weights[i] * (1.0 - ryv[i]) * (1.0 - rxv[i])
    for i in range(n):
        o[fl[i] + 1] += weights[i] * (1.0 - ryv[i]) * rxv[i]
    for i in range(n):
        o[fl[i] + nx] += weights[i] * ryv[i] * (1.0 - rxv[i])
    for i in range(n):
        o[fl[i] + nx + 1] += weights[i] * ryv[i] * rxv[i]
    return out.reshape(ny, nx)


cdef Py_ssize_t _lower_right(cnp.float64_t[::1] v, double target) nogil:
    # first index with v[idx] > target  (== searchsorted side='right')
    cdef Py_ssize_t lo = 0, hi = v.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if v[mid] <= target:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef Py_ssize_t _lower_left(cnp.float64_t[::1] v, double target) nogil:
    # first index with v[idx] >= target  (== searchsorted side='left')
    cdef Py_ssize_t lo = 0, hi = v.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if v[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    return lo


def count_strictly_within(cnp.float64_t[::1] sorted_vals,
                          cnp.float64_t[::1] centers,
                          cnp.float64_t[::1] radii):
    cdef Py_ssize_t n = centers.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = (_lower_left(sorted_vals, centers[i] + radii[i])
                - _lower_right(sorted_vals, centers[i] - radii[i]))
    return out


def hist_nlogn_sweep(cnp.float64_t[::1] x, Py_ssize_t d_max,
                     double xmin, double xmax):
    cdef Py_ssize_t n = x.shape[0]
    cdef double width = xmax - xmin
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(d_max)
    cdef double[::1] o = out
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rel = np.empty(n)
    cdef double[::1] rv = rel
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cnt = np.zeros(d_max, np.int64)
    cdef cnp.int64_t[::1] c = cnt
    cdef Py_ssize_t i, d, idx
    cdef double acc
    o[0] = n * log(<double> n)
    for i in range(n):
        rv[i] = (x[i] - xmin) / width
    for d in range(2, d_max + 1):
        for i in range(d):
            c[i] = 0
        for i in range(n):
            idx = <Py_ssize_t> (rv[i] * d)
            if idx > d - 1:
                idx = d - 1
            c[idx] += 1
        acc = 0.0
        for i in range(d):
            if c[i] > 0:
                acc += c[i] * log(<double> c[i])
        o[d - 1] = acc
    return out
