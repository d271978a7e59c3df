"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the half-mass subset search (the worst case: no subset exists, so the
whole meet-in-the-middle table is scanned) and the circular convolution used
by the mollifier. Results are checked for equality before timing.
"""
import argparse
import timeit

import numpy as np

from frgeom import _pykernels

try:
    from frgeom import _ckernels
except ImportError:
    _ckernels = None


def _no_half_subset(n, rng):
    # odd integers scaled to sum to 1: every subset sum is a multiple of the
    # unit, and the odd total makes an exact half impossible
    a = 2 * rng.integers(1, 1000, n) + 1
    if a.sum() % 2 == 0:
        a[0] += 2
    return a / a.sum()


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is available")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")

    for n in (16, 20, 24):
        a = _no_half_subset(n, rng)
        assert _pykernels.half_mass_subset(a, 0.5, 1e-12) == _ckernels.half_mass_subset(a, 0.5, 1e-12)
        py = _best(lambda: _pykernels.half_mass_subset(a, 0.5, 1e-12), args.repeat)
        cy = _best(lambda: _ckernels.half_mass_subset(a, 0.5, 1e-12), args.repeat)
        print(f"{'subset search n=' + str(n):<28}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")

    for n, width in ((4096, 101), (65536, 801)):
        v = rng.random(n)
        offsets = np.arange(-(width // 2), width // 2 + 1)
        coeffs = rng.random(width)
        coeffs /= coeffs.sum()
        assert np.allclose(_pykernels.circular_convolve(v, offsets, coeffs),
                           _ckernels.circular_convolve(v, offsets, coeffs), atol=1e-14)
        py = _best(lambda: _pykernels.circular_convolve(v, offsets, coeffs), args.repeat)
        cy = _best(lambda: _ckernels.circular_convolve(v, offsets, coeffs), args.repeat)
        print(f"{f'convolution n={n} w={width}':<28}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
