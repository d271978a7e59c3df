"""Discrete stand-ins for the measured space, densities and tangent vectors.

A :class:`QuadratureMesh` is a list of positive node weights summing to one.
Densities are stored *with respect to the mesh measure*, so the total mass of
a density ``p`` is ``sum(w * p)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from frgeom.errors import InvalidDensityError, MeshMismatchError

WEIGHT_TOL = 1e-12
MASS_TOL = 1e-10

MESH_KINDS = ("two_atom", "n_atom_uniform", "circle", "custom")


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


def wsum(x) -> float:
    """Correctly rounded sum; all mesh integrals go through here."""
    return math.fsum(x)


@dataclass(frozen=True, eq=False)
class QuadratureMesh:
    """Finite node set with positive weights summing to one.

    ``positions`` holds node angles (radians) for circle meshes and is
    ``None`` otherwise.
    """

    weights: np.ndarray
    kind: str = "custom"
    positions: Optional[np.ndarray] = None

    def __post_init__(self):
        w = _frozen(self.weights)
        object.__setattr__(self, "weights", w)
        if self.positions is not None:
            pos = _frozen(self.positions)
            if pos.size != w.size:
                raise InvalidDensityError("positions and weights differ in length")
            object.__setattr__(self, "positions", pos)
        if self.kind not in MESH_KINDS:
            raise InvalidDensityError(f"unknown mesh kind {self.kind!r}")
        if w.size < 2:
            raise InvalidDensityError(f"a mesh needs at least 2 nodes, got {w.size}")
        bad = np.flatnonzero(~(w > 0))
        if bad.size:
            i = int(bad[0])
            raise InvalidDensityError(f"mesh weight at node {i} is {float(w[i])!r}; weights must be > 0")
        total = wsum(w)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvalidDensityError(f"mesh weights sum to {total!r}, not 1")

    @property
    def n(self) -> int:
        return int(self.weights.size)

    def same_as(self, other: "QuadratureMesh") -> bool:
        if self is other:
            return True
        if self.n != other.n or not np.array_equal(self.weights, other.weights):
            return False
        if (self.positions is None) != (other.positions is None):
            return False
        return self.positions is None or np.array_equal(self.positions, other.positions)

    def __eq__(self, other):
        return isinstance(other, QuadratureMesh) and self.same_as(other)

    __hash__ = object.__hash__


def build_mesh(kind: str, n: int, custom_weights: Optional[Sequence[float]] = None) -> QuadratureMesh:
    """Build a mesh of one of the supported kinds.

    ``two_atom`` needs ``n == 2``; ``circle`` places nodes at ``2*pi*k/n``
    with uniform weights. Custom weights override the uniform split for
    the atom kinds.
    """
    if int(n) != n or n < 2:
        raise InvalidDensityError(f"mesh needs n >= 2 nodes, got {n!r}")
    n = int(n)
    if kind == "two_atom" and n != 2:
        raise InvalidDensityError(f"two_atom mesh has exactly 2 nodes, got {n}")
    if kind == "circle":
        if custom_weights is not None:
            raise InvalidDensityError("circle meshes always carry uniform weights")
        return QuadratureMesh(np.full(n, 1.0 / n), kind="circle",
                              positions=2.0 * np.pi * np.arange(n) / n)
    if kind not in ("two_atom", "n_atom_uniform"):
        raise InvalidDensityError(f"unknown mesh kind {kind!r}")
    if custom_weights is None:
        return QuadratureMesh(np.full(n, 1.0 / n), kind=kind)
    w = np.asarray(custom_weights, dtype=np.float64)
    if w.size != n:
        raise InvalidDensityError(f"expected {n} custom weights, got {w.size}")
    return QuadratureMesh(w, kind=kind)


def check_same_mesh(*objs) -> QuadratureMesh:
    """Return the shared mesh of ``objs`` or raise :class:`MeshMismatchError`."""
    meshes = [o if isinstance(o, QuadratureMesh) else o.mesh for o in objs]
    first = meshes[0]
    for m in meshes[1:]:
        if not first.same_as(m):
            raise MeshMismatchError("operands are defined on different meshes")
    return first


@dataclass(frozen=True, eq=False)
class _NodeValues:
    mesh: QuadratureMesh
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _frozen(self.values)
        if v.size != self.mesh.n:
            raise InvalidDensityError(
                f"expected {self.mesh.n} node values, got {v.size}")
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise InvalidDensityError(f"value at node {int(bad[0])} is not finite")
        object.__setattr__(self, "values", v)
        self._validate()

    def _validate(self):
        pass

    def mass(self) -> float:
        return wsum(self.mesh.weights * self.values)

    def __repr__(self):
        vals = np.array2string(self.values, precision=7, threshold=8)
        return f"{type(self).__name__}({vals})"

    def __eq__(self, other):
        return (type(other) is type(self) and self.mesh.same_as(other.mesh)
                and np.array_equal(self.values, other.values))

    __hash__ = object.__hash__


def _check_mass(obj, target):
    m = obj.mass()
    if abs(m - target) > MASS_TOL:
        raise InvalidDensityError(
            f"{type(obj).__name__} has total mass {m!r}, expected {target}")


class Density(_NodeValues):
    """Strictly positive density of unit mass w.r.t. the mesh measure."""

    def _validate(self):
        bad = np.flatnonzero(~(self.values > 0))
        if bad.size:
            i = int(bad[0])
            raise InvalidDensityError(
                f"density value at node {i} is {float(self.values[i])!r}; values must be > 0")
        _check_mass(self, 1.0)


class NonnegativeDensity(_NodeValues):
    """Unit-mass density that may vanish at some nodes (boundary of the space)."""

    def _validate(self):
        bad = np.flatnonzero(self.values < 0)
        if bad.size:
            i = int(bad[0])
            raise InvalidDensityError(
                f"density value at node {i} is {float(self.values[i])!r}; values must be >= 0")
        _check_mass(self, 1.0)


class TangentDensity(_NodeValues):
    """Signed density with zero total mass: a tangent vector at any density."""

    def _validate(self):
        _check_mass(self, 0.0)

    def __mul__(self, scalar):
        return TangentDensity(self.mesh, float(scalar) * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentDensity(self.mesh, -self.values)

    def __add__(self, other):
        if not isinstance(other, TangentDensity):
            return NotImplemented
        check_same_mesh(self, other)
        return TangentDensity(self.mesh, self.values + other.values)

    def __sub__(self, other):
        if not isinstance(other, TangentDensity):
            return NotImplemented
        return self + (-other)


def make_density(mesh: QuadratureMesh, raw_values, normalize: bool = False) -> Density:
    v = np.asarray(raw_values, dtype=np.float64).reshape(-1)
    if normalize:
        bad = np.flatnonzero(~(v > 0))
        if bad.size:
            i = int(bad[0])
            raise InvalidDensityError(
                f"density value at node {i} is {float(v[i])!r}; values must be > 0")
        v = v / wsum(mesh.weights * v)
    return Density(mesh, v)


def make_tangent(mesh: QuadratureMesh, raw_values, center: bool = False) -> TangentDensity:
    v = np.asarray(raw_values, dtype=np.float64).reshape(-1)
    if center:
        v = v - wsum(mesh.weights * v)
    return TangentDensity(mesh, v)


def zero_tangent(mesh: QuadratureMesh) -> TangentDensity:
    return TangentDensity(mesh, np.zeros(mesh.n))


def radon_nikodym(num: Union[Density, TangentDensity], den: Density) -> np.ndarray:
    """Pointwise ratio ``(dnum/dlambda) / (dden/dlambda)``."""
    check_same_mesh(num, den)
    return num.values / den.values


def integrate(values, against: Union[_NodeValues, QuadratureMesh]) -> float:
    """``sum(w * f * p)`` against a density, or ``sum(w * f)`` against the mesh."""
    f = np.asarray(values, dtype=np.float64).reshape(-1)
    if isinstance(against, QuadratureMesh):
        mesh, dens = against, None
    else:
        mesh, dens = against.mesh, against.values
    if f.size != mesh.n:
        raise MeshMismatchError(f"expected {mesh.n} node values, got {f.size}")
    if dens is None:
        return wsum(mesh.weights * f)
    return wsum(mesh.weights * f * dens)
