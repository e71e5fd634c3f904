"""Independent oracles used across the test suite.

These deliberately avoid the package's fast paths: direct summation,
brute-force enumeration, and quadrature on exact densities.
"""

import numpy as np
from scipy.integrate import quad


def naive_convolve_same(values, kernel):
    """O(N*M) direct 'same'-mode linear convolution (1D)."""
    full = np.zeros(len(values) + len(kernel) - 1)
    for i, v in enumerate(values):
        for j, k in enumerate(kernel):
            full[i + j] += v * k
    start = (len(kernel) - 1) // 2
    return full[start:start + len(values)]


def naive_convolve_same_2d(values, kernel):
    ny, nx = values.shape
    my, mx = kernel.shape
    full = np.zeros((ny + my - 1, nx + mx - 1))
    for i in range(ny):
        for j in range(nx):
            full[i:i + my, j:j + mx] += values[i, j] * kernel
    sy, sx = (my - 1) // 2, (mx - 1) // 2
    return full[sy:sy + ny, sx:sx + nx]


def naive_kde(data, grid_points, h, kernel="epanechnikov"):
    """Direct-sum KDE evaluated at grid points."""
    out = np.zeros(len(grid_points))
    for i, g in enumerate(grid_points):
        u = (g - data) / h
        if kernel == "epanechnikov":
            k = np.where(np.abs(u) <= 1, 0.75 * (1 - u ** 2), 0.0)
        else:
            k = np.exp(-0.5 * u * u) / np.sqrt(2 * np.pi)
        out[i] = k.sum() / (len(data) * h)
    return out


def brute_mi_table(counts):
    """Triple-loop plug-in MI of a contingency table, in nats."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    p = counts / total
    rows = p.sum(axis=1)
    cols = p.sum(axis=0)
    mi = 0.0
    for i in range(p.shape[0]):
        for j in range(p.shape[1]):
            if p[i, j] > 0:
                mi += p[i, j] * np.log(p[i, j] / (rows[i] * cols[j]))
    return mi


def brute_auroc(scores, labels):
    """Pairwise positive-vs-negative comparison with half credit for ties."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    pos = scores[labels]
    neg = scores[~labels]
    wins = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1.0
            elif p == q:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def gaussian_mi(rho):
    """Closed-form MI of a bivariate normal with correlation rho."""
    return -0.5 * np.log1p(-rho * rho)


def normal_pdf(t, mu=0.0, sd=1.0):
    return np.exp(-0.5 * ((t - mu) / sd) ** 2) / (sd * np.sqrt(2 * np.pi))


def binary_mixture_mi(mu0, mu1, p1=0.5, sd=1.0):
    """Quadrature of sum_c pi_c f_c ln(f_c / f_mix) on exact normal
    densities: the MI between the class label and the observation."""
    p0 = 1.0 - p1

    def integrand(t):
        f0 = normal_pdf(t, mu0, sd)
        f1 = normal_pdf(t, mu1, sd)
        mix = p0 * f0 + p1 * f1
        total = 0.0
        if f0 > 0:
            total += p0 * f0 * np.log(f0 / mix)
        if f1 > 0:
            total += p1 * f1 * np.log(f1 / mix)
        return total

    lo = min(mu0, mu1) - 12 * sd
    hi = max(mu0, mu1) + 12 * sd
    value, _ = quad(integrand, lo, hi, limit=400)
    return value
