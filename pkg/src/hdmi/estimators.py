"""Marginal association measures between one outcome and one feature.

Four interchangeable measures: FFT-KDE plug-in mutual information,
binning-based mutual information with penalized-likelihood bin selection,
nearest-neighbor (digamma-corrected) mutual information, and absolute
Pearson correlation. MI values are in nats; ranking uses the clamped
(non-negative) score.
"""

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from . import _kernels
from .errors import DataFormatError, DegenerateInputError
from .fourier import Grid1D
from .kde import (Kernel, bandwidth_isj, kde_2d, linear_binning,
                  _density_on_grid, _axis_grid, _CUTOFF)

METHODS = ("fftkde", "binning", "knn", "pearson")

DENSITY_FLOOR = 1e-12


@dataclass(frozen=True)
class MiEstimate:
    raw: float
    clamped: float
    method: str
    outcome_kind: str

    @classmethod
    def of(cls, raw, method, outcome_kind):
        raw = float(raw)
        if not np.isfinite(raw):
            raise DegenerateInputError("estimator produced a non-finite value")
        return cls(raw, max(raw, 0.0), method, outcome_kind)


def _paired(y, x):
    y = np.ascontiguousarray(y, dtype=float).ravel()
    x = np.ascontiguousarray(x, dtype=float).ravel()
    if y.shape != x.shape:
        raise DataFormatError("paired samples must have equal length")
    if y.size < 2:
        raise DegenerateInputError("need at least 2 paired observations")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(x))):
        raise DataFormatError("non-finite values in input")
    return y, x


def _require_spread(v, what="axis"):
    if v.min() == v.max():
        raise DegenerateInputError(f"{what} has fewer than 2 distinct values")


def binary_classes(y):
    """Validate a binary outcome and return a boolean indicator (True for
    the larger of the two observed values)."""
    vals = np.unique(y)
    if vals.size != 2:
        raise DataFormatError(
            f"binary outcome must take exactly 2 distinct values, got {vals.size}")
    return y == vals[1]


# ---------------------------------------------------------------------------
# discrete plug-in
# ---------------------------------------------------------------------------

def mi_discrete(counts, outcome_kind="binary"):
    """Plug-in mutual information of a contingency table, in nats."""
    table = np.asarray(counts, dtype=float)
    if table.ndim != 2:
        raise DataFormatError("contingency table must be 2D")
    if np.any(table < 0) or not np.all(np.isfinite(table)):
        raise DataFormatError("contingency counts must be non-negative finite")
    total = table.sum()
    if total <= 0:
        raise DegenerateInputError("contingency table is empty")
    p = table / total
    pr = p.sum(axis=1, keepdims=True)
    pc = p.sum(axis=0, keepdims=True)
    nz = p > 0
    raw = float(np.sum(p[nz] * np.log(p[nz] / (pr * pc)[nz])))
    # plug-in MI of an empirical joint is non-negative; strip fp cancellation
    if raw < 0:
        raw = 0.0
    return MiEstimate.of(raw, "binning", outcome_kind)


# ---------------------------------------------------------------------------
# FFT-KDE plug-in
# ---------------------------------------------------------------------------

def _joint_to_mi(density, dy, dx, marg_y, marg_x):
    nz = density > DENSITY_FLOOR
    outer = marg_y[:, None] * marg_x[None, :]
    ratio = np.log(density[nz] / outer[nz])
    return float(np.sum(density[nz] * ratio) * dy * dx)


def mi_fftkde_cc(y, x, kernel=Kernel.EPANECHNIKOV, grid_size=256,
                 marginals="joint", bandwidth_y=None, bandwidth_x=None):
    """MI between two continuous variables via a bivariate FFT KDE with
    per-axis ISJ bandwidths, integrated with the left-Riemann (forward
    Euler) rule.

    marginals="joint" integrates the joint grid for the marginal densities;
    "independent" runs separate univariate KDEs on the same axis grids.
    """
    y, x = _paired(y, x)
    _require_spread(y, "outcome")
    _require_spread(x, "feature")
    bwy = bandwidth_isj(y) if bandwidth_y is None else bandwidth_y
    bwx = bandwidth_isj(x) if bandwidth_x is None else bandwidth_x
    est = kde_2d(y, x, kernel, bwy, bwx, grid_size)
    dy = est.grid.axis_y.spacing
    dx = est.grid.axis_x.spacing
    if marginals == "joint":
        marg_y = est.density.sum(axis=1) * dx
        marg_x = est.density.sum(axis=0) * dy
    elif marginals == "independent":
        by = linear_binning(y, est.grid.axis_y)
        bx = linear_binning(x, est.grid.axis_x)
        marg_y = _density_on_grid(by, kernel, _bw_value(bwy), est.grid.axis_y)
        marg_x = _density_on_grid(bx, kernel, _bw_value(bwx), est.grid.axis_x)
    else:
        raise DataFormatError("marginals must be 'joint' or 'independent'")
    raw = _joint_to_mi(est.density, dy, dx, marg_y, marg_x)
    return MiEstimate.of(raw, "fftkde", "continuous")


def _bw_value(bw):
    return bw.value if hasattr(bw, "value") else float(bw)


def mi_fftkde_bc(y, x, kernel=Kernel.EPANECHNIKOV, grid_size=1024):
    """MI between a binary outcome and a continuous feature: one FFT KDE per
    class on a shared grid, against their mixture."""
    y, x = _paired(y, x)
    ind = binary_classes(y)
    n = y.size
    masks = (~ind, ind)
    for m in masks:
        if m.sum() < 2 or (m.any() and x[m].min() == x[m].max()):
            raise DegenerateInputError(
                "each outcome class needs >= 2 distinct feature values")
    bws = [bandwidth_isj(x[m]).value for m in masks]
    cushion = _CUTOFF[kernel] * max(bws)
    grid = _axis_grid(x.min(), x.max(), cushion, grid_size)
    props = np.array([m.sum() / n for m in masks])
    cond = np.empty((2, grid.count))
    for i, (m, bw) in enumerate(zip(masks, bws)):
        binned = linear_binning(x[m], grid)
        cond[i] = _density_on_grid(binned, kernel, bw, grid)
    mix = props @ cond
    raw = 0.0
    for i in range(2):
        nz = cond[i] > DENSITY_FLOOR
        raw += props[i] * float(
            np.sum(cond[i][nz] * np.log(cond[i][nz] / mix[nz])) * grid.spacing)
    return MiEstimate.of(raw, "fftkde", "binary")


# ---------------------------------------------------------------------------
# binning
# ---------------------------------------------------------------------------

def bin_penalty(d):
    """Penalized-likelihood histogram penalty: D - 1 + (ln D)^2.5."""
    return d - 1.0 + np.log(d) ** 2.5


def select_bin_count(x):
    """Number of equal-width bins maximizing the penalized histogram
    log-likelihood; ties break toward fewer bins."""
    x = np.ascontiguousarray(x, dtype=float).ravel()
    if x.size < 4:
        raise DegenerateInputError("bin selection needs at least 4 observations")
    lo, hi = x.min(), x.max()
    if lo == hi:
        return 1
    n = x.size
    d_max = int(np.ceil(n / np.log(n)))
    d = np.arange(1, d_max + 1, dtype=float)
    nlogn = _kernels.hist_nlogn_sweep(x, d_max, lo, hi)
    scores = nlogn + n * np.log(d) - n * np.log(n) - bin_penalty(d)
    return int(np.argmax(scores)) + 1


def _equal_width_indices(v, d, lo, hi):
    idx = ((v - lo) / (hi - lo) * d).astype(np.int64)
    return np.minimum(idx, d - 1)


def mi_binning(y, x, outcome_kind="continuous", bins_y=None, bins_x=None):
    """MI after discretizing through equal-width binning; bin counts chosen
    by the penalized-likelihood rule unless overridden."""
    y, x = _paired(y, x)
    _require_spread(x, "feature")
    dx = int(bins_x) if bins_x else select_bin_count(x)
    ix = _equal_width_indices(x, dx, x.min(), x.max())
    if outcome_kind == "binary":
        iy = binary_classes(y).astype(np.int64)
        dy = 2
    else:
        _require_spread(y, "outcome")
        dy = int(bins_y) if bins_y else select_bin_count(y)
        iy = _equal_width_indices(y, dy, y.min(), y.max())
    table = np.bincount(iy * dx + ix, minlength=dy * dx).reshape(dy, dx)
    est = mi_discrete(table, outcome_kind)
    return MiEstimate.of(est.raw, "binning", outcome_kind)


# ---------------------------------------------------------------------------
# nearest neighbor
# ---------------------------------------------------------------------------

def _tie_break_jitter(values, partner, seed_material):
    """Deterministic tie-breaking jitter of magnitude 1e-10*sd.

    Draws are assigned in the canonical (value, partner) order, so results
    are invariant to row permutations and to which argument slot the axis
    occupies."""
    if np.unique(values).size == values.size:
        return values
    order = np.lexsort((partner, values))
    sv = values[order]
    digest = hashlib.blake2b(sv.tobytes(), digest_size=8).digest()
    entropy = [int.from_bytes(digest, "little")]
    for s in np.atleast_1d(seed_material):
        entropy.append(int(s) & 0xFFFFFFFFFFFFFFFF)
    rng = np.random.default_rng(np.random.SeedSequence(entropy))
    scale = 1e-10 * float(np.std(values))
    out = values.astype(float, copy=True)
    out[order] = sv + rng.uniform(-scale, scale, values.size)
    return out


def mi_knn_cc(y, x, k=3, tie_seed=0):
    """Nearest-neighbor MI for two continuous variables: digamma-corrected
    neighbor counts with the max-norm in the joint space; marginal counts
    are strictly inside the k-th neighbor distance."""
    y, x = _paired(y, x)
    n = y.size
    k = int(k)
    if not 1 <= k < n:
        raise DegenerateInputError("need 1 <= k < sample size")
    # both jitters key off the original partner values so the estimate is
    # symmetric in the argument order
    y, x = (_tie_break_jitter(y, x, tie_seed),
            _tie_break_jitter(x, y, tie_seed))
    _require_spread(y, "outcome")
    _require_spread(x, "feature")
    pts = np.column_stack([y, x])
    eps = np.ascontiguousarray(cKDTree(pts).query(pts, k=k + 1, p=np.inf)[0][:, k])
    ny = _kernels.count_strictly_within(np.sort(y), y, eps) - 1
    nx = _kernels.count_strictly_within(np.sort(x), x, eps) - 1
    raw = digamma(k) + digamma(n) - float(
        np.mean(digamma(ny + 1) + digamma(nx + 1)))
    return MiEstimate.of(raw, "knn", "continuous")


def mi_knn_bc(y, x, k=3, tie_seed=0):
    """Nearest-neighbor MI for a binary outcome: the k-th neighbor radius is
    taken within the point's own class, and compared with the neighbor count
    over all points on the feature axis."""
    y, x = _paired(y, x)
    ind = binary_classes(y)
    n = y.size
    k = int(k)
    if k < 1:
        raise DegenerateInputError("k must be >= 1")
    x = _tie_break_jitter(x, ind.astype(float), tie_seed)
    _require_spread(x, "feature")
    radius = np.empty(n)
    class_size = np.empty(n)
    for m in (~ind, ind):
        nc = int(m.sum())
        if nc < k + 1:
            raise DegenerateInputError("each class must be larger than k")
        xc = x[m]
        tree = cKDTree(xc[:, None])
        radius[m] = tree.query(xc[:, None], k=k + 1)[0][:, k]
        class_size[m] = nc
    # counts include the point itself, matching the within-radius convention
    m_all = _kernels.count_strictly_within(np.sort(x), x, radius)
    raw = digamma(n) - float(np.mean(digamma(class_size))) \
        + digamma(k) - float(np.mean(digamma(m_all)))
    return MiEstimate.of(raw, "knn", "binary")


# ---------------------------------------------------------------------------
# correlation
# ---------------------------------------------------------------------------

def pearson_abs(y, x, outcome_kind="continuous"):
    """Absolute Pearson correlation: standardized inner product with the
    population (1/n) denominator."""
    y, x = _paired(y, x)
    sy = float(np.std(y))
    sx = float(np.std(x))
    if sy == 0 or sx == 0:
        raise DegenerateInputError("correlation undefined for constant input")
    raw = abs(float(np.mean((y - y.mean()) * (x - x.mean())))) / (sy * sx)
    return MiEstimate.of(min(raw, 1.0), "pearson", outcome_kind)
