"""Pick the compiled kernels when available, else the numpy fallback.

Set ``FRGEOM_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("FRGEOM_PURE_PYTHON"):
    from frgeom import _pykernels as kernels
    BACKEND = "python"
else:
    try:
        from frgeom import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:
        from frgeom import _pykernels as kernels
        BACKEND = "python"

half_mass_subset = kernels.half_mass_subset
circular_convolve = kernels.circular_convolve

__all__ = ["BACKEND", "half_mass_subset", "circular_convolve"]
