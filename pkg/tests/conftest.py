import numpy as np
import pytest

from motor_tp import _kernels

BACKENDS = {"python": _kernels.dtw_path_python}
if _kernels.dtw_path_compiled is not None:
    BACKENDS["cython"] = _kernels.dtw_path_compiled


@pytest.fixture(params=sorted(BACKENDS))
def dtw_backend(request, monkeypatch):
    """Route motor_tp's DTW through each available kernel in turn."""
    fn = BACKENDS[request.param]
    monkeypatch.setattr(_kernels, "dtw_path", fn)
    return fn


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
