"""Select the kernel implementation at import time.

The compiled extension is preferred. Set ``CNMBI_BACKEND=python`` to force
the numpy fallback (useful for debugging and for the backend benchmark).
"""

import os

_requested = os.environ.get("CNMBI_BACKEND", "auto").lower()

if _requested == "python":
    from . import _pykernels as kernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        if _requested == "cython":
            raise
        from . import _pykernels as kernels

BACKEND = kernels.NAME
