"""Pure-numpy implementations of the hot kernels.

Mirrors cy_kernels operation for operation; used when the compiled
extension is unavailable or when HDMI_PURE_PYTHON is set. Integer-valued
kernels match the compiled backend exactly; float kernels agree to a few
ulps (SIMD versus scalar rounding).
"""

import numpy as np

name = "python"


def fft_pow2_batch(a, tw, rev):
    """In-place radix-2 FFT along the last axis of a (B, N) complex array.

    tw holds the per-stage twiddle factors concatenated (N-1 values),
    rev the bit-reversal permutation. N must be a power of two >= 1.
    """
    nb, n = a.shape
    if n == 1:
        return
    a[:, :] = a[:, rev]
    m = 2
    off = 0
    while m <= n:
        h = m >> 1
        w = tw[off:off + h]
        a3 = a.reshape(nb, n // m, m)
        u = a3[:, :, :h].copy()
        t = a3[:, :, h:] * w
        a3[:, :, :h] = u + t
        a3[:, :, h:] = u - t
        off += h
        m <<= 1


def bin_linear_1d(x, weights, origin, spacing, count):
    """Linear binning: split each point's weight between its two flanking nodes."""
    f = (x - origin) / spacing
    idx = np.minimum(f.astype(np.int64), count - 2)
    np.maximum(idx, 0, out=idx)
    r = f - idx
    out = np.bincount(idx, weights=weights * (1.0 - r), minlength=count)
    out += np.bincount(idx + 1, weights=weights * r, minlength=count)
    return out


def bin_linear_2d(y, x, weights, oy, sy, ny, ox, sx, nx):
    """2D linear binning onto an (ny, nx) grid; four-corner weight split."""
    fy = (y - oy) / sy
    fx = (x - ox) / sx
    iy = np.minimum(fy.astype(np.int64), ny - 2)
    ix = np.minimum(fx.astype(np.int64), nx - 2)
    np.maximum(iy, 0, out=iy)
    np.maximum(ix, 0, out=ix)
    ry = fy - iy
    rx = fx - ix
    flat = iy * nx + ix
    m = ny * nx
    out = np.bincount(flat, weights=weights * (1 - ry) * (1 - rx), minlength=m)
    out += np.bincount(flat + 1, weights=weights * (1 - ry) * rx, minlength=m)
    out += np.bincount(flat + nx, weights=weights * ry * (1 - rx), minlength=m)
    out += np.bincount(flat + nx + 1, weights=weights * ry * rx, minlength=m)
    return out.reshape(ny, nx)


def count_strictly_within(sorted_vals, centers, radii):
    """Per center i, count sorted values v with |v - centers[i]| < radii[i]."""
    lo = np.searchsorted(sorted_vals, centers - radii, side="right")
    hi = np.searchsorted(sorted_vals, centers + radii, side="left")
    return (hi - lo).astype(np.int64)


def hist_nlogn_sweep(x, d_max, xmin, xmax):
    """For each bin count D in 1..d_max, sum of n_j*ln(n_j) over non-empty
    equal-width bins of x on [xmin, xmax]."""
    n = x.shape[0]
    width = xmax - xmin
    out = np.empty(d_max)
    out[0] = n * np.log(n)
    rel = (x - xmin) / width
    for d in range(2, d_max + 1):
        idx = np.minimum((rel * d).astype(np.int64), d - 1)
        cnt = np.bincount(idx, minlength=d)
        nz = cnt[cnt > 0]
        out[d - 1] = float(np.sum(nz * np.log(nz)))
    return out
