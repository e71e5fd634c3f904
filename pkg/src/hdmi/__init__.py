"""High-dimensional marginal association screening.

Scores the association between one outcome and each of up to millions of
feature columns using FFT-accelerated kernel-density mutual information,
binning-based mutual information, nearest-neighbor mutual information, or
absolute Pearson correlation, with simulation and AUROC tooling to
validate screening quality.
"""

from ._kernels import BACKEND
from .dataio import (BinaryMatrixHeader, DatasetHandle, convert_to_binary,
                     open_binary, read_csv, write_binary)
from .errors import DataFormatError, DegenerateInputError, HdmiError
from .estimators import (METHODS, MiEstimate, mi_binning, mi_discrete,
                         mi_fftkde_bc, mi_fftkde_cc, mi_knn_bc, mi_knn_cc,
                         pearson_abs, select_bin_count)
from .evaluation import (auroc, replicate_and_summarize, screening_auroc,
                         selection_confusion)
from .fourier import (Grid1D, Grid2D, convolve_grid, dft_direct, fft_1d,
                      fft_2d)
from .kde import (Bandwidth, DensityGrid1D, DensityGrid2D, Kernel,
                  bandwidth_isj, bandwidth_silverman, kde_1d, kde_2d,
                  linear_binning)
from .screening import (FeatureScore, ScreeningConfig, ScreeningReport,
                        screen, top_k)
from .simulation import (SimulatedDataset, SimulationSpec, ar_design,
                         build_design, sample_beta, simulate,
                         simulate_binary, simulate_continuous)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BinaryMatrixHeader", "DatasetHandle", "convert_to_binary",
    "open_binary", "read_csv", "write_binary", "DataFormatError",
    "DegenerateInputError", "HdmiError", "METHODS", "MiEstimate",
    "mi_binning", "mi_discrete", "mi_fftkde_bc", "mi_fftkde_cc", "mi_knn_bc",
    "mi_knn_cc", "pearson_abs", "select_bin_count", "auroc",
    "replicate_and_summarize", "screening_auroc", "selection_confusion",
    "Grid1D", "Grid2D", "convolve_grid", "dft_direct", "fft_1d", "fft_2d",
    "Bandwidth", "DensityGrid1D", "DensityGrid2D", "Kernel", "bandwidth_isj",
    "bandwidth_silverman", "kde_1d", "kde_2d", "linear_binning",
    "FeatureScore", "ScreeningConfig", "ScreeningReport", "screen", "top_k",
    "SimulatedDataset", "SimulationSpec", "ar_design", "build_design",
    "sample_beta", "simulate", "simulate_binary", "simulate_continuous",
    "__version__",
]
