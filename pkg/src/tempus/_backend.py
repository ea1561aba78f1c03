"""Pick the recurrence kernels at import time.

The compiled extension is used when it was built; otherwise the pure-Python
twin. Set ``TEMPUS_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("TEMPUS_PURE_PYTHON", "") not in ("", "0"):
    from tempus import _kernels_py as kernels
else:
    try:
        from tempus import _kernels as kernels
    except ImportError:
        from tempus import _kernels_py as kernels

BACKEND = kernels.BACKEND
