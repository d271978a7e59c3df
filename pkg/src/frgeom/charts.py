"""Exponential charts centred at a density.

On a finite mesh every centred function is an admissible coordinate, so the
chart domain is simply ``{u : E_mu[u] = 0}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from frgeom.errors import DomainError, InvalidDensityError
from frgeom.means import geometric_mean
from frgeom.measure import MASS_TOL, Density, TangentDensity, check_same_mesh, wsum

_EXP_MAX = math.log(np.finfo(np.float64).max)


def _expect(mu: Density, v) -> float:
    return wsum(mu.mesh.weights * np.asarray(v) * mu.values)


@dataclass(frozen=True, eq=False)
class ChartVector:
    """Coordinates ``u`` in the chart centred at ``base``; ``E_base[u] == 0``."""

    base: Density
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.array(self.values, dtype=np.float64).reshape(-1)
        u.setflags(write=False)
        object.__setattr__(self, "values", u)
        if u.size != self.base.mesh.n:
            raise InvalidDensityError(f"expected {self.base.mesh.n} coordinates, got {u.size}")
        m = _expect(self.base, u)
        if abs(m) > MASS_TOL:
            raise InvalidDensityError(f"chart vector has mean {m!r} under its base, not 0")

    @classmethod
    def centered(cls, base: Density, values) -> "ChartVector":
        """Build a chart vector after subtracting the ``base``-mean of ``values``."""
        v = np.asarray(values, dtype=np.float64)
        return cls(base, v - _expect(base, v))


def chart_inverse(u: ChartVector) -> Density:
    """``exp(u) / E_mu[exp u] * mu``."""
    if np.max(u.values) >= _EXP_MAX:
        i = int(np.argmax(u.values))
        raise DomainError(f"exp overflows at node {i} (u = {float(u.values[i])!r})")
    # shifting by max(u) changes nothing after normalization
    e = np.exp(u.values - np.max(u.values)) * u.base.values
    return Density(u.base.mesh, e / wsum(u.base.mesh.weights * e))


def chart_forward(base: Density, nu: Density) -> ChartVector:
    """``log(dnu/dmu) - E_mu[log(dnu/dmu)]``."""
    check_same_mesh(base, nu)
    return ChartVector.centered(base, np.log(nu.values / base.values))


def chart_transition(u: ChartVector, new_base: Density) -> ChartVector:
    """Affine change of chart: same point, coordinates centred at ``new_base``."""
    check_same_mesh(u.base, new_base)
    return ChartVector.centered(new_base, u.values + np.log(u.base.values / new_base.values))


def covariance_metric(mu: Density, v1, v2) -> float:
    """``Cov_mu(v1, v2)``; equals the Fisher metric when ``v = dtau/dmu``."""
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    if v1.shape != mu.values.shape or v2.shape != mu.values.shape:
        raise InvalidDensityError("coordinate vectors must have one value per node")
    d1 = v1 - _expect(mu, v1)
    d2 = v2 - _expect(mu, v2)
    return _expect(mu, d1 * d2)


def fisher_via_covariance(mu: Density, tau1: TangentDensity, tau2: TangentDensity) -> float:
    check_same_mesh(mu, tau1, tau2)
    return covariance_metric(mu, tau1.values / mu.values, tau2.values / mu.values)


def geometric_mean_in_coords(u: ChartVector, u_p: ChartVector, mu1: Density) -> ChartVector:
    """Coordinates of ``phi(sigma_mu(u), sigma_mu'(u'))`` in the chart at ``mu1``.

    ``mu1`` must be ``phi(mu, mu')``. The result is the average
    ``(u + u')/2`` of the (already centred) inputs, re-centred under ``mu1``.
    """
    check_same_mesh(u.base, u_p.base, mu1)
    expected = geometric_mean(u.base, u_p.base)
    gap = float(np.max(np.abs(expected.values - mu1.values)))
    if gap > 1e-10:
        raise DomainError(f"mu1 is not the geometric mean of the chart centres (gap {gap:.3e})")
    avg = 0.5 * (u.values - _expect(u.base, u.values) + u_p.values - _expect(u_p.base, u_p.values))
    return ChartVector.centered(mu1, avg)


def mixture_arc_bounds(mu: Density, mu1: Density):
    """``(min, max)`` of ``dmu1/dmu``; they always straddle 1."""
    check_same_mesh(mu, mu1)
    ratio = mu1.values / mu.values
    return float(np.min(ratio)), float(np.max(ratio))


def positivity_radius(mu: Density, tau: TangentDensity) -> float:
    """Largest ``eps`` with ``mu + t*tau`` positive for all ``|t| < eps``."""
    check_same_mesh(mu, tau)
    q = tau.values
    nz = q != 0
    if not np.any(nz):
        return math.inf
    return float(np.min(mu.values[nz] / np.abs(q[nz])))
