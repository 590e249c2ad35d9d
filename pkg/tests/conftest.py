import importlib

import pytest

from photocount import _pykernels

BACKENDS = {"python": _pykernels}
try:
    BACKENDS["cython"] = importlib.import_module("photocount._ckernels")
except ImportError:
    pass

GRID = (0.01, 0.1, 1.0, 5.0, 20.0)


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]
