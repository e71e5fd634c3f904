"""Synthetic outcome generation from a given design matrix.

One root seed expands into named sub-streams (column choice, coefficients,
noise, Bernoulli draws), so each component is independently reproducible.
All standardization uses the population (1/N) denominator.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DataFormatError, DegenerateInputError

TRANSLATION = float(np.arctanh(np.sqrt(1.0 / 3.0)))

_MODES = ("linear", "nonlinear")
_OUTCOMES = ("continuous", "binary_original", "binary_translated")
# sub-stream order under the root seed
_STREAM_COLUMNS, _STREAM_BETA, _STREAM_NOISE = 0, 1, 2


@dataclass(frozen=True)
class SimulationSpec:
    p_true: int
    mode: str = "linear"
    outcome: str = "continuous"
    snr: float = 3.0
    toeplitz_rho: float = 0.6
    seed: int = 0

    def __post_init__(self):
        if self.p_true < 1:
            raise DataFormatError("p_true must be >= 1")
        if self.mode not in _MODES:
            raise DataFormatError(f"unknown mode {self.mode!r}")
        if self.outcome not in _OUTCOMES:
            raise DataFormatError(f"unknown outcome {self.outcome!r}")
        if not self.snr > 0:
            raise DataFormatError("snr must be positive")
        if not abs(self.toeplitz_rho) < 1:
            raise DataFormatError("toeplitz_rho must lie in (-1, 1)")


@dataclass(frozen=True)
class SimulatedDataset:
    y: np.ndarray
    true_support: np.ndarray
    beta_true: np.ndarray
    sigma_true: float = None


def _rng(seed, stream):
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
                               spawn_key=(stream,)))


def sample_beta(p_true, toeplitz_rho=0.6, seed=0, rng=None):
    """Coefficients drawn from N(1, Sigma) with Sigma_ij = rho^|i-j|."""
    if not abs(toeplitz_rho) < 1:
        raise DataFormatError("toeplitz_rho must lie in (-1, 1)")
    if p_true < 1:
        raise DataFormatError("p_true must be >= 1")
    if rng is None:
        rng = _rng(seed, _STREAM_BETA)
    idx = np.arange(p_true)
    sigma = toeplitz_rho ** np.abs(idx[:, None] - idx[None, :])
    chol = np.linalg.cholesky(sigma)
    return 1.0 + chol @ rng.standard_normal(p_true)


def _standardize(m):
    mean = m.mean(axis=0)
    sd = m.std(axis=0)
    if np.any(sd == 0):
        raise DegenerateInputError("constant column cannot be standardized")
    return (m - mean) / sd


def _as_matrix(design):
    if hasattr(design, "column"):
        cols = [design.column(j) for j in range(design.cols)]
        return np.column_stack(cols)
    m = np.asarray(design, dtype=float)
    if m.ndim != 2:
        raise DataFormatError("design must be a 2D matrix")
    return m


def build_design(design, spec, rng=None):
    """Pick p_true eligible columns uniformly at random, standardize, and in
    nonlinear mode square element-wise and re-standardize.

    Columns with missing values or zero spread are excluded from candidacy.
    Returns (X2, support); support is sorted and pairs with beta by position.
    """
    m = _as_matrix(design)
    if rng is None:
        rng = _rng(spec.seed, _STREAM_COLUMNS)
    finite = np.all(np.isfinite(m), axis=0)
    spread = m.min(axis=0) < m.max(axis=0)
    eligible = np.flatnonzero(finite & spread)
    if eligible.size < spec.p_true:
        raise DataFormatError(
            f"only {eligible.size} eligible columns for p_true={spec.p_true}")
    support = np.sort(rng.choice(eligible, size=spec.p_true, replace=False))
    x1 = _standardize(m[:, support])
    if spec.mode == "nonlinear":
        x2 = _standardize(x1 ** 2)
    else:
        x2 = x1
    return x2, support


def simulate_continuous(x2, beta, snr, seed=0, rng=None):
    """y = X2 beta + eps with sigma_true = sqrt(beta' X2' X2 beta / SNR).

    The printed formula carries no 1/N, so the per-observation noise scale
    grows with sqrt(N); kept verbatim."""
    if rng is None:
        rng = _rng(seed, _STREAM_NOISE)
    signal = x2 @ beta
    gram = float(signal @ signal)
    if gram <= 0:
        raise DegenerateInputError("zero signal vector")
    sigma = float(np.sqrt(gram / snr))
    y = signal + rng.normal(0.0, sigma, size=signal.shape[0])
    return y, sigma


def simulate_binary(x2, beta, variant="original", seed=0, rng=None):
    """Bernoulli(logistic(tau'')) outcomes from the standardized preimage;
    the translated variant shifts by arctanh(sqrt(1/3))."""
    if variant not in ("original", "translated"):
        raise DataFormatError(f"unknown binary variant {variant!r}")
    if rng is None:
        rng = _rng(seed, _STREAM_NOISE)
    tau = x2 @ beta
    sd = tau.std()
    if sd == 0:
        raise DegenerateInputError("constant linear predictor")
    tau2 = (tau - tau.mean()) / sd
    if variant == "translated":
        tau2 = tau2 + TRANSLATION
    y = (rng.random(tau2.shape[0]) < expit(tau2)).astype(float)
    if y.min() == y.max():
        raise DegenerateInputError(
            "simulated binary outcome collapsed to a single class")
    return y


def simulate(design, spec):
    """Run the full boxed procedure against a design matrix."""
    x2, support = build_design(design, spec)
    beta = sample_beta(spec.p_true, spec.toeplitz_rho,
                       rng=_rng(spec.seed, _STREAM_BETA))
    if spec.outcome == "continuous":
        y, sigma = simulate_continuous(x2, beta, spec.snr,
                                       rng=_rng(spec.seed, _STREAM_NOISE))
        return SimulatedDataset(y, support, beta, sigma)
    variant = "translated" if spec.outcome == "binary_translated" else "original"
    y = simulate_binary(x2, beta, variant, rng=_rng(spec.seed, _STREAM_NOISE))
    return SimulatedDataset(y, support, beta, None)


def ar_design(rows, cols, rho=0.5, seed=0):
    """Synthetic design with AR(rho) correlation across adjacent columns."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((rows, cols))
    x = np.empty_like(z)
    x[:, 0] = z[:, 0]
    scale = np.sqrt(1.0 - rho * rho)
    for j in range(1, cols):
        x[:, j] = rho * x[:, j - 1] + scale * z[:, j]
    return x
