import importlib.util
import os
import subprocess
import sys

import numpy as np
import pytest

from holoqc import _backend, _pykernels
from holoqc.loops import make_loop
from holoqc.model import System

compiled = _backend.compiled_polygon_holonomy
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _points(rng, system, k):
    return make_loop(system, None, rng.uniform(-np.pi, np.pi, (k, system.dim))).points()


@needs_ext
@pytest.mark.parametrize("system", list(System))
@pytest.mark.parametrize("midpoint", [True, False])
def test_compiled_matches_fallback(rng, system, midpoint):
    for k in (0, 1, 3, 5):
        pts = _points(rng, system, k)
        for steps in (1, 7, 200):
            a = compiled(pts, steps, midpoint)
            b = _pykernels.polygon_holonomy(pts, steps, midpoint)
            assert np.abs(a - b).max() <= 1e-13


@needs_ext
def test_compiled_xi_fast_path(rng):
    # edges with constant xi take the product-of-exponentials route
    pts = _points(rng, System.TWO, 3)
    pts[:, 8] = 0.4
    assert np.abs(compiled(pts, 50, True) - _pykernels.polygon_holonomy(pts, 50, True)).max() <= 1e-13


def test_fallback_expm_batch(rng):
    from scipy.linalg import expm

    from conftest import random_antihermitian

    for scale in (1e-6, 0.3, 5.0):
        a = np.stack([random_antihermitian(rng, 4, scale) for _ in range(6)])
        e = _pykernels.expm_taylor_batch(a)
        for ai, ei in zip(a, e):
            assert np.abs(ei - expm(ai)).max() <= 1e-13


def test_rejects_bad_shapes():
    for kernel in filter(None, (compiled, _pykernels.polygon_holonomy)):
        with pytest.raises((ValueError, TypeError)):
            kernel(np.zeros((3, 5)), 10, True)


def _backend_in_subprocess(value):
    env = dict(os.environ, HOLOQC_BACKEND=value)
    return subprocess.run(
        [sys.executable, "-c", "from holoqc import _backend; print(_backend.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )


def test_backend_selection():
    assert _backend_in_subprocess("python").stdout.strip() == "python"
    assert _backend_in_subprocess("bogus").returncode != 0
    expected = "compiled" if importlib.util.find_spec("holoqc._kernels") else "python"
    assert _backend_in_subprocess("auto").stdout.strip() == expected


def test_extension_keeps_subnormals():
    # a fast-math build would switch the whole process to flush-to-zero
    code = "import numpy as np; import holoqc._backend; assert np.nextafter(0.0, 1.0) > 0 and 5e-324 / 2 == 0.0 and 5e-324 > 0"
    assert subprocess.run([sys.executable, "-c", code]).returncode == 0
    assert np.finfo(np.float64).smallest_subnormal > 0
