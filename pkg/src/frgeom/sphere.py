"""Sphere-embedding oracle.

``p -> sqrt(p)`` maps densities onto the positive part of the unit sphere in
weighted L2, and pulls the round metric back to a quarter of the Fisher
metric. Fisher-Rao geodesics are therefore great circles traversed at half
speed. The code here works on the sphere directly (slerp, great-circle
angles) so it can cross-check the density formulas in :mod:`frgeom.geodesics`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from frgeom.errors import DegenerateError, DomainError, InvalidDensityError
from frgeom.geodesics import log_map
from frgeom.measure import Density, QuadratureMesh, check_same_mesh, make_density
from frgeom.metric import fisher_inner, fisher_norm, fisher_rao_distance

SPHERE_TOL = 1e-12
_BELOW_PI = math.nextafter(math.pi, 0.0)
# floor ratio exp(-2 sharpness) must stay a normal float
_LOG_TINY = -math.log(np.finfo(float).tiny)


def _dot(mesh: QuadratureMesh, x, y) -> float:
    return math.fsum(mesh.weights * x * y)


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """Point on the unit sphere of weighted L2 (``sum w x**2 == 1``)."""

    mesh: QuadratureMesh
    coords: np.ndarray

    def __post_init__(self):
        x = np.array(self.coords, dtype=np.float64).reshape(-1)
        x.setflags(write=False)
        object.__setattr__(self, "coords", x)
        if x.size != self.mesh.n:
            raise InvalidDensityError(f"expected {self.mesh.n} coordinates, got {x.size}")
        nrm = _dot(self.mesh, x, x)
        if abs(nrm - 1.0) > SPHERE_TOL:
            raise InvalidDensityError(f"sphere point has squared norm {nrm!r}, not 1")


def embed(mu: Density) -> SpherePoint:
    return SpherePoint(mu.mesh, np.sqrt(mu.values))


def unembed(x: SpherePoint) -> Density:
    bad = np.flatnonzero(~(x.coords > 0))
    if bad.size:
        i = int(bad[0])
        raise InvalidDensityError(f"coordinate at node {i} is {float(x.coords[i])!r}; must be > 0")
    return Density(x.mesh, x.coords * x.coords)


def sphere_angle(x: SpherePoint, y: SpherePoint) -> float:
    """Great-circle angle from the chord: ``2 arcsin(|x - y| / 2)``."""
    check_same_mesh(x, y)
    d = x.coords - y.coords
    return 2.0 * math.asin(min(1.0, math.sqrt(_dot(x.mesh, d, d)) / 2.0))


def slerp(x: SpherePoint, y: SpherePoint, s: float) -> SpherePoint:
    """Great-circle interpolation; ``s`` in [0, 1]."""
    theta = sphere_angle(x, y)
    if theta == 0.0 or math.sin(theta) < 1e-15:
        raise DegenerateError("slerp needs two points that are neither equal nor antipodal")
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s!r}")
    st = math.sin(theta)
    z = (math.sin((1.0 - s) * theta) * x.coords + math.sin(s * theta) * y.coords) / st
    return SpherePoint(x.mesh, z)


def oracle_geodesic(mu: Density, mu1: Density, t: float) -> Density:
    """Fisher-Rao geodesic point at arc length ``t``, via slerp at half angle."""
    x, y = embed(mu), embed(mu1)
    total = 2.0 * sphere_angle(x, y)
    if total == 0.0:
        raise DegenerateError("endpoints coincide")
    if not -1e-12 * total <= t <= total * (1.0 + 1e-12):
        raise DomainError(f"t={t!r} is outside [0, {total!r}]")
    return unembed(slerp(x, y, min(1.0, max(0.0, t / total))))


def oracle_distance(mu: Density, mu1: Density) -> float:
    """Twice the great-circle angle between the embedded points."""
    return min(2.0 * sphere_angle(embed(mu), embed(mu1)), _BELOW_PI)


def oracle_unit_velocity(mu: Density, mu1: Density) -> np.ndarray:
    """Fisher unit initial velocity (node values) from the great-circle tangent.

    The unit sphere tangent at ``x`` toward ``y`` is ``(y - cos(theta) x) / sin(theta)``;
    unit Fisher speed is half sphere speed and ``dp = 2 sqrt(p) dx``.
    """
    x, y = embed(mu), embed(mu1)
    theta = sphere_angle(x, y)
    u = (y.coords - math.cos(theta) * x.coords) / math.sin(theta)
    return x.coords * u


def oracle_geometric_mean(mu: Density, mu1: Density) -> np.ndarray:
    """Normalized pointwise product of the embedded points (node values)."""
    x, y = embed(mu), embed(mu1)
    return x.coords * y.coords / _dot(x.mesh, x.coords, y.coords)


def _vertex_angle(a_d, b_d, c_d):
    u, v = log_map(a_d, b_d), log_map(a_d, c_d)
    cos_a = fisher_inner(a_d, u, v) / (fisher_norm(a_d, u) * fisher_norm(a_d, v))
    return min(1.0, max(-1.0, cos_a))


def spherical_triangle_residual(a_d: Density, b_d: Density, c_d: Density) -> float:
    """Law-of-cosines defect on a sphere of radius 2 (curvature 1/4).

    Side lengths are Fisher-Rao distances; the angle at ``a_d`` is the
    Riemannian angle between log maps. Returns
    ``|cos(a/2) - cos(b/2)cos(c/2) - sin(b/2)sin(c/2)cos A|``.
    """
    check_same_mesh(a_d, b_d, c_d)
    for p, q in ((a_d, b_d), (a_d, c_d), (b_d, c_d)):
        if np.max(np.abs(p.values - q.values)) <= 1e-12:
            raise DegenerateError("triangle has coincident vertices")
    a = fisher_rao_distance(b_d, c_d)
    b = fisher_rao_distance(a_d, c_d)
    c = fisher_rao_distance(a_d, b_d)
    cos_a = _vertex_angle(a_d, b_d, c_d)
    if 1.0 - abs(cos_a) < 1e-10:
        raise DegenerateError("triangle is degenerate (vertices lie on one geodesic)")
    return abs(math.cos(a / 2.0) - math.cos(b / 2.0) * math.cos(c / 2.0)
               - math.sin(b / 2.0) * math.sin(c / 2.0) * cos_a)


def vertex_angles(a_d: Density, b_d: Density, c_d: Density):
    """Interior angles at the three vertices, in radians."""
    return tuple(math.acos(_vertex_angle(*v)) for v in
                 ((a_d, b_d, c_d), (b_d, c_d, a_d), (c_d, a_d, b_d)))


def diameter_witness(mesh: QuadratureMesh, sharpness: float):
    """Two positive densities that are nearly antipodal for large ``sharpness``.

    The pair is ``exp(+-sharpness * cos(theta))`` normalized, peaked on
    opposite halves of the node circle (node angles, or ``2 pi k / n`` on
    meshes without positions). The minimum-to-maximum ratio of each is
    ``exp(-2 sharpness)`` so both stay strictly positive (sharpness up to
    about 354 before that underflows). Returns
    ``(mu, mu1, ell)``.
    """
    if mesh.n < 8:
        raise DomainError(f"diameter witness needs at least 8 nodes, got {mesh.n}")
    if not sharpness > 0:
        raise DomainError(f"sharpness must be positive, got {sharpness!r}")
    if 2.0 * sharpness > _LOG_TINY:
        raise DomainError(f"sharpness {sharpness!r} pushes the floor value below the float range")
    theta = mesh.positions if mesh.positions is not None else 2 * np.pi * np.arange(mesh.n) / mesh.n
    c = np.cos(theta)
    mu = make_density(mesh, np.exp(sharpness * (c - 1.0)), normalize=True)
    mu1 = make_density(mesh, np.exp(-sharpness * (c + 1.0)), normalize=True)
    return mu, mu1, oracle_distance(mu, mu1)
