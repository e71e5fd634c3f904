"""Variable-selection quality metrics against simulated ground truth."""

from dataclasses import dataclass, replace

import numpy as np

from .dataio import DatasetHandle
from .errors import DataFormatError, HdmiError
from .screening import ScreeningConfig, screen
from .simulation import simulate

OUTCOME_NAME = "__outcome__"


def _checked_labels(scores, labels):
    s = np.asarray(scores, dtype=float).ravel()
    lab = np.asarray(labels).ravel()
    if s.shape != lab.shape:
        raise DataFormatError("scores and labels must have equal length")
    if not np.all(np.isfinite(s)):
        raise DataFormatError("scores must be finite")
    if not np.all((lab == 0) | (lab == 1)):
        raise DataFormatError("labels must be 0/1")
    lab = lab.astype(bool)
    if lab.all() or not lab.any():
        raise DataFormatError("labels must contain both classes")
    return s, lab


def _midranks(values):
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sv = values[order]
    i = 0
    while i < len(sv):
        j = i
        while j + 1 < len(sv) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auroc(scores, labels):
    """Mann-Whitney AUROC with midrank tie handling; equals the trapezoidal
    ROC area and the pairwise count with half credit for ties."""
    s, lab = _checked_labels(scores, labels)
    ranks = _midranks(s)
    n_pos = int(lab.sum())
    n_neg = len(s) - n_pos
    u = ranks[lab].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def selection_confusion(scores, labels, k):
    """Confusion counts after taking the top-k scores (index tie-break)."""
    s, lab = _checked_labels(scores, labels)
    if not 1 <= k <= len(s):
        raise DataFormatError(f"k must be in [1, {len(s)}]")
    order = np.lexsort((np.arange(len(s)), -s))
    chosen = order[:k]
    tp = int(lab[chosen].sum())
    fp = k - tp
    fn = int(lab.sum()) - tp
    return tp, fp, fn


@dataclass
class CellSummary:
    spec: object
    method: str
    mean_auroc: float
    ci_half_width: float
    replications: int
    status: str = "ok"


def _rep_seed(root_seed, cell_index, rep):
    ss = np.random.SeedSequence(
        entropy=int(root_seed) & 0xFFFFFFFFFFFFFFFF,
        spawn_key=(cell_index, rep))
    return int(ss.generate_state(1, np.uint64)[0])


def screening_auroc(design, sim, method, workers=1, seed=0, k=3):
    """Simulate-then-screen helper: AUROC of one screening run against the
    simulated support."""
    matrix = np.column_stack([design, sim.y])
    names = [f"x{j}" for j in range(design.shape[1])] + [OUTCOME_NAME]
    handle = DatasetHandle.from_matrix(matrix, names)
    kind = "continuous" if sim.sigma_true is not None else "binary"
    config = ScreeningConfig(method=method, outcome_kind=kind,
                             outcome_column=OUTCOME_NAME, workers=workers,
                             seed=seed, k=k)
    report = screen(handle, config)
    labels = np.zeros(design.shape[1])
    labels[sim.true_support] = 1
    return auroc(report.score_vector(), labels)


def replicate_and_summarize(design, specs, methods, replications,
                            root_seed=0, workers=1):
    """Mean AUROC with a normal-approximation 95% half-width per
    (simulation spec, method) cell over seeded replications."""
    if replications < 2:
        raise DataFormatError("need at least 2 replications")
    design = np.asarray(design, dtype=float)
    cells = []
    for ci, spec in enumerate(specs):
        seeds = [_rep_seed(root_seed, ci, r) for r in range(replications)]
        if len(set(seeds)) != len(seeds):
            raise DataFormatError("derived replication seeds must be distinct")
        sims = []
        status = "ok"
        try:
            for s in seeds:
                sims.append(simulate(design, replace(spec, seed=s)))
        except HdmiError:
            status = "failed"
        for method in methods:
            if status != "ok":
                cells.append(CellSummary(spec, method, None, None,
                                         replications, status))
                continue
            try:
                vals = np.array([
                    screening_auroc(design, sim, method, workers, seed=s)
                    for sim, s in zip(sims, seeds)])
                half = 1.96 * vals.std(ddof=1) / np.sqrt(replications)
                cells.append(CellSummary(spec, method, float(vals.mean()),
                                         float(half), replications))
            except HdmiError:
                cells.append(CellSummary(spec, method, None, None,
                                         replications, "failed"))
    return cells
