"""Kernel backend selection.

The compiled extension is used when it was built and imports cleanly; set
``LELM_LAB_PURE_PYTHON=1`` to force the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("LELM_LAB_PURE_PYTHON", "") in ("", "0"):
    _active = compiled_backend
    BACKEND = "cython"
else:
    _active = python_backend
    BACKEND = "python"

amplitude_table = _active.amplitude_table
support_components = _active.support_components
label_masks = python_backend.label_masks

__all__ = ["BACKEND", "amplitude_table", "support_components", "label_masks",
           "python_backend", "compiled_backend"]
