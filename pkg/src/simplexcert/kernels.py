"""Backend selection for the expansion kernels.

The compiled extension is used when importable; set ``SIMPLEXCERT_PURE=1``
to force the pure-Python fallback.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("SIMPLEXCERT_PURE"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

taylor_shift = _active.taylor_shift
scale_terms = _active.scale_terms
permute_terms = _active.permute_terms
sign_counts = _active.sign_counts
