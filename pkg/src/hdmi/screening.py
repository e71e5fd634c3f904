"""Columnwise screening of every feature against one outcome.

Each feature column is scored independently on its pairwise-complete rows,
so results are identical for any worker count. The dataset is shared
read-only across workers (forked address space or shared file mapping);
workers allocate only per-column scratch.
"""

import time
import tracemalloc
import multiprocessing as mp
from dataclasses import dataclass, asdict

import numpy as np

from . import _kernels, estimators
from .errors import DataFormatError, DegenerateInputError
from .kde import Kernel, bandwidth_isj

_GRID_DEFAULTS = {("fftkde", "continuous"): 256, ("fftkde", "binary"): 1024}


@dataclass(frozen=True)
class ScreeningConfig:
    method: str = "fftkde"
    outcome_kind: str = "continuous"
    outcome_column: object = 0
    exclude: tuple = ()
    workers: int = 1
    seed: int = 0
    kernel: Kernel = Kernel.EPANECHNIKOV
    grid_size: int = None
    k: int = 3
    bins: int = None
    marginals: str = "joint"

    def __post_init__(self):
        if self.method not in estimators.METHODS:
            raise DataFormatError(f"unknown method {self.method!r}")
        if self.outcome_kind not in ("continuous", "binary"):
            raise DataFormatError(f"unknown outcome kind {self.outcome_kind!r}")
        if self.workers < 1:
            raise DataFormatError("workers must be >= 1")

    def grid(self):
        return self.grid_size or _GRID_DEFAULTS.get(
            (self.method, self.outcome_kind), 256)


@dataclass(frozen=True)
class FeatureScore:
    column_index: int
    column_name: str
    score: float
    raw: float
    n_used: int
    flag: str = ""


@dataclass
class ScreeningReport:
    config: ScreeningConfig
    scores: list
    wall_seconds: float
    workers_used: int
    backend: str = _kernels.BACKEND
    max_worker_peak_bytes: int = None

    def config_echo(self):
        echo = asdict(self)["config"]
        echo["kernel"] = self.config.kernel.value
        return echo

    def score_vector(self):
        return np.array([s.score for s in self.scores])


def top_k(report, k):
    """The k best-scoring features, ties broken by ascending column index."""
    scores = report.scores
    if not 1 <= k <= len(scores):
        raise DataFormatError(f"k must be in [1, {len(scores)}]")
    order = sorted(range(len(scores)),
                   key=lambda i: (-scores[i].score, scores[i].column_index))
    return [scores[i] for i in order[:k]]


def _validate_outcome(y, kind):
    finite = np.isfinite(y)
    if finite.sum() < 2:
        raise DataFormatError("outcome column has fewer than 2 usable rows")
    if kind == "binary":
        estimators.binary_classes(y[finite])


class _OutcomePrecompute:
    """Outcome-side artifacts computed once and shared read-only by workers;
    valid only for features whose pairwise-complete mask keeps every finite
    outcome row."""

    def __init__(self, y, config):
        self.mask_full = np.isfinite(y)
        self.n_full = int(self.mask_full.sum())
        y_clean = y[self.mask_full]
        self.bandwidth = None
        self.bins = None
        if config.method == "fftkde" and config.outcome_kind == "continuous" \
                and y_clean.min() < y_clean.max():
            self.bandwidth = bandwidth_isj(y_clean)
        if config.method == "binning" and config.outcome_kind == "continuous" \
                and y_clean.min() < y_clean.max() and self.n_full >= 4:
            self.bins = estimators.select_bin_count(y_clean)


def _score_pair(y, x, config, pre, full_mask):
    m = config.method
    kind = config.outcome_kind
    if m == "pearson":
        return estimators.pearson_abs(y, x, kind)
    if m == "knn":
        # tie-break jitter is seeded from the run seed plus a canonical hash
        # of the column values inside the estimator, never from row order or
        # column position, keeping scores invariant under both permutations
        tie_seed = config.seed & 0xFFFFFFFFFFFFFFFF
        if kind == "binary":
            return estimators.mi_knn_bc(y, x, config.k, tie_seed)
        return estimators.mi_knn_cc(y, x, config.k, tie_seed)
    if m == "binning":
        bins_y = pre.bins if (full_mask and pre is not None) else None
        return estimators.mi_binning(y, x, kind, bins_y=bins_y,
                                     bins_x=config.bins)
    if kind == "binary":
        return estimators.mi_fftkde_bc(y, x, config.kernel, config.grid())
    bw_y = pre.bandwidth if (full_mask and pre is not None) else None
    return estimators.mi_fftkde_cc(y, x, config.kernel, config.grid(),
                                   config.marginals, bandwidth_y=bw_y)


# worker-process state, set by the pool initializer (fork start method:
# inherited objects, nothing is copied)
_WORKER = {}


def _init_worker(dataset, y, config, pre, feature_cols, instrument):
    _WORKER.update(dataset=dataset, y=y, config=config, pre=pre,
                   cols=feature_cols, instrument=instrument)
    if instrument:
        tracemalloc.start()


def _score_column(dataset, y, config, pre, j):
    x = dataset.column(j)
    mask = pre.mask_full & np.isfinite(x)
    n_used = int(mask.sum())
    name = dataset.column_names[j]
    if n_used < 2:
        return FeatureScore(j, name, 0.0, 0.0, n_used, "insufficient")
    ys = y[mask]
    xs = np.ascontiguousarray(x[mask])
    try:
        est = _score_pair(ys, xs, config, pre,
                          full_mask=(n_used == pre.n_full))
        return FeatureScore(j, name, est.clamped, est.raw, n_used, "")
    except DegenerateInputError:
        return FeatureScore(j, name, 0.0, 0.0, n_used, "degenerate")


def _run_block(block):
    d = _WORKER
    if d["instrument"]:
        tracemalloc.reset_peak()
    out = [_score_column(d["dataset"], d["y"], d["config"], d["pre"], int(j))
           for j in block]
    peak = tracemalloc.get_traced_memory()[1] if d["instrument"] else 0
    return out, peak


def screen(dataset, config, instrument_memory=False):
    """Score every non-excluded feature column against the outcome column.

    Degenerate columns (constant, too few complete pairs, class starvation)
    are flagged and scored 0 instead of aborting the run.
    """
    t0 = time.perf_counter()
    if dataset.rows < 2:
        raise DataFormatError("dataset needs at least 2 rows")
    outcome_j = dataset.column_index(config.outcome_column)
    skip = {outcome_j}
    for name in config.exclude:
        skip.add(dataset.column_index(name))
    y = np.ascontiguousarray(dataset.column(outcome_j), dtype=float)
    _validate_outcome(y, config.outcome_kind)
    pre = _OutcomePrecompute(y, config)
    feature_cols = [j for j in range(dataset.cols) if j not in skip]
    workers = min(config.workers, max(1, len(feature_cols)))

    peaks = []
    if workers == 1:
        _init_worker(dataset, y, config, pre, feature_cols, instrument_memory)
        results = []
        for block in np.array_split(np.array(feature_cols, dtype=np.int64),
                                    max(1, len(feature_cols) // 64) if feature_cols else 1):
            if len(block):
                out, peak = _run_block(block)
                results.extend(out)
                peaks.append(peak)
        if instrument_memory:
            tracemalloc.stop()
        _WORKER.clear()
    else:
        ctx = mp.get_context("fork")
        blocks = [b for b in np.array_split(
            np.array(feature_cols, dtype=np.int64), workers * 4) if len(b)]
        with ctx.Pool(workers, initializer=_init_worker,
                      initargs=(dataset, y, config, pre, feature_cols,
                                instrument_memory)) as pool:
            results = []
            for out, peak in pool.map(_run_block, blocks):
                results.extend(out)
                peaks.append(peak)
    results.sort(key=lambda s: s.column_index)
    report = ScreeningReport(config, results, time.perf_counter() - t0, workers)
    if instrument_memory:
        report.max_worker_peak_bytes = max(peaks) if peaks else 0
    return report
