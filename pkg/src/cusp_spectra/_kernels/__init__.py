"""Inertia kernels: compiled extension when available, NumPy fallback otherwise.

Set ``CUSP_SPECTRA_FORCE_PY=1`` to force the fallback (used by the benchmark
harness and to debug suspected extension issues).  ``BACKEND`` records which
implementation is live.
"""

import os

if os.environ.get("CUSP_SPECTRA_FORCE_PY"):
    from .fallback import banded_inertia, tridiag_inertia
    BACKEND = "python"
else:
    try:
        from ._sturm import banded_inertia, tridiag_inertia
        BACKEND = "cython"
    except ImportError:
        from .fallback import banded_inertia, tridiag_inertia
        BACKEND = "python"

__all__ = ["tridiag_inertia", "banded_inertia", "BACKEND"]
