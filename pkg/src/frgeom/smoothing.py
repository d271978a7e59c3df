"""Bump-kernel mollification on circle meshes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from frgeom import _backend
from frgeom.errors import DomainError, MeshMismatchError
from frgeom.measure import Density, QuadratureMesh, TangentDensity, wsum


@dataclass(frozen=True, eq=False)
class BumpKernel:
    """Discrete bump ``exp(1/((d/delta)**2 - 1))`` on the node offsets of a circle mesh.

    ``offsets`` are node shifts ``k`` (angle ``2 pi k / n``) inside the
    support and ``coeffs`` the matching kernel values times the node weight,
    so ``coeffs.sum() == 1``.
    """

    mesh: QuadratureMesh
    delta: float
    offsets: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def dense(self) -> np.ndarray:
        """Kernel values (before weighting) indexed by offset ``0..n-1``."""
        out = np.zeros(self.mesh.n)
        out[self.offsets % self.mesh.n] = self.coeffs / self.mesh.weights[0]
        return out


def _require_circle(mesh: QuadratureMesh) -> None:
    if mesh.kind != "circle" or mesh.positions is None:
        raise DomainError("mollification needs a circle mesh")


def make_kernel(mesh: QuadratureMesh, delta: float) -> BumpKernel:
    _require_circle(mesh)
    n = mesh.n
    h = 2.0 * math.pi / n
    if not h < delta < math.pi:
        raise DomainError(f"delta must lie in ({h!r}, pi), got {delta!r}")
    kmax = int(math.floor(delta / h))
    offsets = np.arange(-kmax, kmax + 1)
    ratio = (offsets * h) / delta
    inside = np.abs(ratio) < 1.0
    offsets, ratio = offsets[inside], ratio[inside]
    vals = np.exp(1.0 / (ratio * ratio - 1.0))
    w = mesh.weights[0]
    vals = vals / wsum(vals * w)
    return BumpKernel(mesh, float(delta), offsets, vals * w)


def _convolve(values, kernel: BumpKernel, mesh: QuadratureMesh) -> np.ndarray:
    if not kernel.mesh.same_as(mesh):
        raise MeshMismatchError("kernel was built for a different mesh")
    return _backend.circular_convolve(values, kernel.offsets, kernel.coeffs)


def mollify(p: Density, kernel: BumpKernel, full_output: bool = False):
    """Circular convolution followed by exact renormalization.

    With ``full_output`` also returns the renormalizing factor (the mass of
    the raw convolution, 1 up to rounding on uniform circle meshes).
    """
    _require_circle(p.mesh)
    raw = _convolve(p.values, kernel, p.mesh)
    mass = wsum(p.mesh.weights * raw)
    out = Density(p.mesh, raw / mass)
    return (out, mass) if full_output else out


def mollify_tangent(q: TangentDensity, kernel: BumpKernel) -> TangentDensity:
    _require_circle(q.mesh)
    raw = _convolve(q.values, kernel, q.mesh)
    return TangentDensity(q.mesh, raw - wsum(q.mesh.weights * raw))
