"""Kernel backend selection.

Tries the compiled Cython extension first and falls back to the numpy
reference implementation.  `FRAUDPROBE_PURE_PYTHON=1` forces the
fallback (used by the benchmark and the parity tests).

Both backends implement the identical contract documented in
`numpy_impl`; results agree to float rounding (~1e-15), not bit-for-bit,
so a given process always sticks with the backend chosen at import.
"""

import os

from . import numpy_impl

BACKEND = "python"
lstm_forward = numpy_impl.lstm_forward
lstm_backward = numpy_impl.lstm_backward

if os.environ.get("FRAUDPROBE_PURE_PYTHON", "") != "1":
    try:
        from . import _lstm  # compiled extension, optional

        lstm_forward = _lstm.lstm_forward
        lstm_backward = _lstm.lstm_backward
        BACKEND = "compiled"
    except ImportError:
        pass
