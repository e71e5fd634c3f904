"""Discrete Fourier transforms and FFT-based convolution on equispaced grids.

Normalization convention: the forward transform is unnormalized and the
inverse carries the 1/N factor, so inverse(forward(x)) == x. Power-of-two
lengths run on the radix-2 kernel; every other length goes through the
Bluestein chirp-z reduction to a power-of-two convolution, so all lengths
compute the exact DFT.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DataFormatError

_DFT_DIRECT_MAX = 4096

_plan_cache = {}


@dataclass(frozen=True)
class Grid1D:
    """Equispaced evaluation grid; node i sits at origin + i*spacing."""

    origin: float
    spacing: float
    count: int

    def __post_init__(self):
        if not (self.spacing > 0 and np.isfinite(self.spacing)):
            raise DataFormatError("grid spacing must be positive and finite")
        if self.count < 2:
            raise DataFormatError("grid needs at least 2 nodes")

    def points(self):
        return self.origin + self.spacing * np.arange(self.count)


@dataclass(frozen=True)
class Grid2D:
    axis_y: Grid1D
    axis_x: Grid1D


def _as_complex_checked(signal, min_len=1):
    try:
        a = np.asarray(signal)
    except ValueError:
        raise DataFormatError("input is not a rectangular numeric array") from None
    if a.dtype == object:
        raise DataFormatError("input is not a rectangular numeric array")
    a = a.astype(np.complex128, copy=False)
    if a.size < min_len:
        raise DataFormatError("empty input")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise DataFormatError("non-finite entries in input")
    return a


def _next_pow2(n):
    p = 1
    while p < n:
        p <<= 1
    return p


def _plan(n, inverse):
    key = (n, bool(inverse))
    plan = _plan_cache.get(key)
    if plan is None:
        sign = 1.0 if inverse else -1.0
        parts = []
        m = 2
        while m <= n:
            h = m // 2
            parts.append(np.exp(sign * 2j * np.pi * np.arange(h) / m))
            m *= 2
        tw = np.concatenate(parts) if parts else np.empty(0, np.complex128)
        bits = n.bit_length() - 1
        idx = np.arange(n, dtype=np.int64)
        rev = np.zeros(n, dtype=np.int64)
        for _ in range(bits):
            rev = (rev << 1) | (idx & 1)
            idx >>= 1
        plan = (np.ascontiguousarray(tw), rev)
        _plan_cache[key] = plan
    return plan


def _fft_pow2(batch, inverse):
    """FFT along the last axis of a contiguous (B, N) complex array, in place.
    N must be a power of two. No normalization."""
    n = batch.shape[1]
    tw, rev = _plan(n, inverse)
    _kernels.fft_pow2_batch(batch, tw, rev)
    return batch


def _bluestein(batch, inverse):
    """Arbitrary-length DFT along the last axis via the chirp-z transform.
    No normalization."""
    nb, n = batch.shape
    sign = 1.0 if inverse else -1.0
    # exp(sign*i*pi*j^2/n) with the exponent reduced mod 2n to keep precision
    j = np.arange(n, dtype=np.int64)
    phase = (j * j) % (2 * n)
    c = np.exp(sign * 1j * np.pi * phase / n)
    m = _next_pow2(2 * n - 1)
    b = np.zeros(m, np.complex128)
    b[:n] = np.conj(c)
    b[m - n + 1:] = np.conj(c[1:][::-1])
    fb = _fft_pow2(b.reshape(1, m).copy(), False)
    a = np.zeros((nb, m), np.complex128)
    a[:, :n] = batch * c
    fa = _fft_pow2(a, False)
    fa *= fb
    conv = _fft_pow2(fa, True)
    conv *= 1.0 / m
    return conv[:, :n] * c


def _fft_axis_last(batch, inverse):
    """DFT along the last axis of a (B, N) complex array; returns a new array
    with the package normalization (inverse scaled by 1/N)."""
    nb, n = batch.shape
    if n == 1:
        return batch.copy()
    work = np.ascontiguousarray(batch, dtype=np.complex128)
    if work is batch:
        work = batch.copy()
    if n & (n - 1) == 0:
        out = _fft_pow2(work, inverse)
    else:
        out = _bluestein(work, inverse)
    if inverse:
        out = out * (1.0 / n)
    return out


def fft_1d(signal, inverse=False):
    """DFT (or inverse DFT) of a 1D sequence, any length >= 1."""
    a = _as_complex_checked(signal)
    if a.ndim != 1:
        raise DataFormatError("fft_1d expects a 1D sequence")
    return _fft_axis_last(a.reshape(1, -1), inverse)[0]


def dft_direct(signal, inverse=False):
    """Transform by explicit DFT-matrix multiplication; test oracle only."""
    a = _as_complex_checked(signal)
    if a.ndim != 1:
        raise DataFormatError("dft_direct expects a 1D sequence")
    n = a.shape[0]
    if n > _DFT_DIRECT_MAX:
        raise DataFormatError(f"dft_direct limited to length {_DFT_DIRECT_MAX}")
    sign = 1.0 if inverse else -1.0
    table = np.exp(sign * 2j * np.pi * np.arange(n) / n)
    j = np.arange(n, dtype=np.int64)
    out = np.empty(n, np.complex128)
    for k in range(n):
        out[k] = a @ table[(k * j) % n]
    if inverse:
        out *= 1.0 / n
    return out


def fft_2d(values, inverse=False):
    """Separable 2D DFT: transform rows, then columns."""
    a = _as_complex_checked(values)
    if a.ndim != 2:
        raise DataFormatError("fft_2d expects a 2D array")
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise DataFormatError("fft_2d needs both dimensions >= 2")
    out = _fft_axis_last(a, inverse)
    out = _fft_axis_last(out.T.copy(), inverse).T.copy()
    return out


def _check_spacing(spacing, kernel_spacing):
    s = np.atleast_1d(np.asarray(spacing, dtype=float))
    if kernel_spacing is not None:
        ks = np.atleast_1d(np.asarray(kernel_spacing, dtype=float))
        if ks.shape != s.shape or not np.allclose(ks, s, rtol=1e-12, atol=0):
            raise DataFormatError("kernel sampled on a different grid spacing")
    return s


def convolve_grid(values, kernel_values, spacing=1.0, kernel_spacing=None):
    """Linear convolution of grid samples, restricted to the extent of
    `values` and scaled by the grid spacing so the result approximates the
    continuous convolution integral.

    1D or 2D according to the inputs' shape. Inputs are zero-padded to the
    next power of two at or above len(values)+len(kernel)-1 per axis, which
    prevents circular wrap-around.
    """
    v = np.asarray(values, dtype=float)
    k = np.asarray(kernel_values, dtype=float)
    if v.ndim != k.ndim or v.ndim not in (1, 2):
        raise DataFormatError("values and kernel must both be 1D or both 2D")
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(k))):
        raise DataFormatError("non-finite entries in input")
    s = _check_spacing(spacing, kernel_spacing)
    if v.ndim == 1:
        out = _convolve_same_axis(v.reshape(1, -1), k)[0]
        return out * s[0]
    if s.size == 1:
        s = np.repeat(s, 2)
    out = _convolve_same_axis(v, None, full2d=(v, k))
    return out * (s[0] * s[1])


def _convolve_same_axis(v2d, k, full2d=None):
    """'Same'-mode linear convolution. With `k` a 1D kernel, convolves every
    row of v2d; with full2d=(values, kernel2d), performs the full 2D
    convolution. Output window starts at (len(kernel)-1)//2 per axis."""
    if full2d is None:
        nb, n = v2d.shape
        m = k.shape[0]
        p = _next_pow2(n + m - 1)
        # real kernel: pack two real rows per complex row, so
        # ifft(FK * fft(a + i*b)) = conv(a) + i*conv(b)
        pairs = (nb + 1) // 2
        fa = np.zeros((pairs, p), np.complex128)
        fa[:, :n].real = v2d[0::2]
        fa[:nb // 2, :n].imag = v2d[1::2]
        fk = np.zeros((1, p), np.complex128)
        fk[0, :m] = k
        _fft_pow2(fa, False)
        _fft_pow2(fk, False)
        fa *= fk
        _fft_pow2(fa, True)
        start = (m - 1) // 2
        window = fa[:, start:start + n]
        out = np.empty((nb, n))
        out[0::2] = window.real
        out[1::2] = window.imag[:nb // 2]
        out *= 1.0 / p
        return out
    v, k2 = full2d
    ny, nx = v.shape
    my, mx = k2.shape
    py = _next_pow2(ny + my - 1)
    px = _next_pow2(nx + mx - 1)
    fa = np.zeros((py, px), np.complex128)
    fa[:ny, :nx] = v
    fk = np.zeros((py, px), np.complex128)
    fk[:my, :mx] = k2
    for arr in (fa, fk):
        _fft_pow2(arr, False)
        arr[:, :] = _fft_pow2(arr.T.copy(), False).T
    fa *= fk
    fa = _fft_pow2(fa.T.copy(), True).T.copy()
    _fft_pow2(fa, True)
    sy = (my - 1) // 2
    sx = (mx - 1) // 2
    return fa[sy:sy + ny, sx:sx + nx].real * (1.0 / (py * px))


def convolve_rows(values2d, kernel1d, spacing):
    """Convolve each row of values2d with a centered 1D kernel sampled at the
    same spacing; 'same' extent, scaled by spacing."""
    return _convolve_same_axis(np.asarray(values2d, float),
                               np.asarray(kernel1d, float)) * spacing
