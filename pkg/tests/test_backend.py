import math

import numpy as np
import pytest

from frgeom import _backend, _pykernels

ck = pytest.importorskip("frgeom._ckernels")


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")


@pytest.mark.parametrize("n", [1, 2, 5, 11, 16])
def test_subset_search_agrees(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        a = rng.uniform(0.0, 1.0, n)
        # plant an exact half-mass subset half of the time
        if rng.random() < 0.5 and n > 1:
            mask = int(rng.integers(1, 2 ** n))
            chosen = [(mask >> i) & 1 for i in range(n)]
            target = math.fsum(a[i] for i in range(n) if chosen[i])
        else:
            target = 0.5 * math.fsum(a)
        py = _pykernels.half_mass_subset(a, target, 1e-12)
        cy = ck.half_mass_subset(a, target, 1e-12)
        assert py == cy
        if py >= 0:
            assert abs(_pykernels.exact_subset_sum(a, py) - target) <= 1e-12


def test_subset_search_smallest_mask():
    a = np.array([0.25, 0.25, 0.25, 0.25])
    assert _pykernels.half_mass_subset(a, 0.5, 1e-12) == 0b0011
    assert ck.half_mass_subset(a, 0.5, 1e-12) == 0b0011


def test_subset_search_none():
    a = np.array([0.7, 0.2, 0.1]) * 0.5
    a[0] += 1e-3
    assert _pykernels.half_mass_subset(a, 0.5, 1e-12) == -1
    assert ck.half_mass_subset(a, 0.5, 1e-12) == -1


def test_convolution_agrees():
    rng = np.random.default_rng(7)
    for n in (8, 33, 256):
        v = rng.normal(size=n)
        offsets = np.arange(-3, 4)
        coeffs = rng.uniform(size=7)
        py = _pykernels.circular_convolve(v, offsets, coeffs)
        cy = ck.circular_convolve(v, offsets, coeffs)
        # same summation order in both backends
        assert np.array_equal(py, cy)
        # oracle: dense circulant product
        direct = np.array([sum(c * v[(i - o) % n] for o, c in zip(offsets, coeffs)) for i in range(n)])
        assert np.allclose(py, direct, rtol=0, atol=1e-13)


def test_pure_python_mode(tmp_path):
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-c", "import frgeom; print(frgeom.BACKEND)"],
                         env={"FRGEOM_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
