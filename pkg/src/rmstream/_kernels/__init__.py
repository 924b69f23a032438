"""Kernel selection for the DTW inner loop.

The compiled Cython kernel is preferred; a pure-Python twin with the exact
same arithmetic (bit-identical results) is used when the extension is not
built or when RMSTREAM_KERNEL=python is set.
"""

import os

from .dtw_py import dtw_cost as dtw_cost_python

if os.environ.get("RMSTREAM_KERNEL", "").lower() == "python":
    dtw_cost = dtw_cost_python
    KERNEL_NAME = "python"
else:
    try:
        from ._dtw_cy import dtw_cost as dtw_cost_compiled

        dtw_cost = dtw_cost_compiled
        KERNEL_NAME = "compiled"
    except ImportError:
        dtw_cost = dtw_cost_python
        KERNEL_NAME = "python"

__all__ = ["dtw_cost", "dtw_cost_python", "KERNEL_NAME"]
