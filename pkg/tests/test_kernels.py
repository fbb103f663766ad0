import subprocess
import sys

import numpy as np
import pytest

from phonecam import kernels
from phonecam.kernels import _fallback

try:
    from phonecam.kernels import _labeling
except ImportError:
    _labeling = None


@pytest.mark.skipif(_labeling is None, reason="compiled kernel not built")
def test_backends_agree_on_random_planes(rng):
    for _ in range(50):
        h = int(rng.integers(1, 40))
        w = int(rng.integers(1, 40))
        bins = rng.integers(0, 6, size=(h, w)).astype(np.int32)
        la, aa, ba = _labeling.label_components(bins)
        lb, ab, bb = _fallback.label_components(bins)
        assert np.array_equal(la, lb)
        assert np.array_equal(aa, ab)
        assert np.array_equal(ba, bb)


@pytest.mark.skipif(_labeling is None, reason="compiled kernel not built")
def test_backends_agree_at_standard_size(rng):
    bins = rng.integers(0, 9, size=(144, 192)).astype(np.int32)
    la, aa, ba = _labeling.label_components(bins)
    lb, ab, bb = _fallback.label_components(bins)
    assert np.array_equal(la, lb)
    assert np.array_equal(aa, ab)
    assert np.array_equal(ba, bb)


def test_env_var_forces_fallback():
    code = (
        "import os; os.environ['PHONECAM_PURE_KERNELS'] = '1'; "
        "from phonecam import kernels; print(kernels.BACKEND)"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert out.stdout.strip() == "fallback"


def test_selected_backend_reported():
    assert kernels.BACKEND in ("cython", "fallback")
