"""Hot kernels with a compiled backend and a numpy fallback.

The compiled extension is used when it imports; set ``MOTOR_TP_PURE=1`` to
force the fallback.  ``BACKEND`` names the backend in use.
"""

import os

from . import _dtw_py

if os.environ.get("MOTOR_TP_PURE") == "1":
    _dtw_cy = None
else:
    try:
        from . import _dtw_cy
    except ImportError:
        _dtw_cy = None

if _dtw_cy is not None:
    dtw_path = _dtw_cy.dtw_path
    BACKEND = "cython"
else:
    dtw_path = _dtw_py.dtw_path
    BACKEND = "python"

dtw_path_python = _dtw_py.dtw_path
dtw_path_compiled = None if _dtw_cy is None else _dtw_cy.dtw_path

__all__ = ["dtw_path", "dtw_path_python", "dtw_path_compiled", "BACKEND"]
