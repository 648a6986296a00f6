"""Numeric kernels: compiled extension when available, Python otherwise.

Set ``CAMIR_EVAL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("CAMIR_EVAL_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend or python_backend
BACKEND_NAME = "compiled" if compiled_backend is not None else "python"

min_cost_assignment = backend.min_cost_assignment
bootstrap_deltas = backend.bootstrap_deltas

__all__ = ["BACKEND_NAME", "bootstrap_deltas", "compiled_backend", "min_cost_assignment", "python_backend"]
