"""Hot-kernel backend selection.

The compiled extension is preferred; the pure-numpy fallback is used when
the extension is missing or HDMI_PURE_PYTHON is set to a non-empty value.
Both backends expose the same functions with identical semantics.
"""

import os

if os.environ.get("HDMI_PURE_PYTHON"):
    from . import py_kernels as backend
else:
    try:
        from . import cy_kernels as backend  # type: ignore[attr-defined]
    except ImportError:
        from . import py_kernels as backend

fft_pow2_batch = backend.fft_pow2_batch
bin_linear_1d = backend.bin_linear_1d
bin_linear_2d = backend.bin_linear_2d
count_strictly_within = backend.count_strictly_within
hist_nlogn_sweep = backend.hist_nlogn_sweep

BACKEND = backend.name
