"""Selects the holonomy kernel at import time.

``HOLOQC_BACKEND=python`` forces the numpy fallback; ``compiled`` makes a
missing extension an import error. The default uses the extension when built.
"""
from __future__ import annotations

import os

from . import _pykernels

_choice = os.environ.get("HOLOQC_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "python", "compiled"):
    raise ImportError(f"HOLOQC_BACKEND must be auto, python or compiled, not {_choice!r}")

_compiled = None
if _choice != "python":
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "compiled":
            raise

if _compiled is not None:
    polygon_holonomy = _compiled.polygon_holonomy
    BACKEND = "compiled"
else:
    polygon_holonomy = _pykernels.polygon_holonomy
    BACKEND = "python"

python_polygon_holonomy = _pykernels.polygon_holonomy
compiled_polygon_holonomy = None if _compiled is None else _compiled.polygon_holonomy
