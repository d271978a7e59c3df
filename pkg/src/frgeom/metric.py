"""Fisher information metric, Hellinger quantities and the distance ell."""
from __future__ import annotations

import math

import numpy as np

from frgeom.measure import (Density, TangentDensity, check_same_mesh, make_tangent,
                            wsum)


def fisher_inner(mu: Density, tau1: TangentDensity, tau2: TangentDensity) -> float:
    """Fisher metric ``G_mu(tau1, tau2) = sum w (q1/p)(q2/p) p``."""
    mesh = check_same_mesh(mu, tau1, tau2)
    p = mu.values
    return wsum(mesh.weights * (tau1.values / p) * (tau2.values / p) * p)


def fisher_norm(mu: Density, tau: TangentDensity) -> float:
    return math.sqrt(max(fisher_inner(mu, tau, tau), 0.0))


def hellinger_affinity(mu1: Density, mu2: Density) -> float:
    """Hellinger coefficient ``sum w sqrt(p1) sqrt(p2)``, in (0, 1]."""
    mesh = check_same_mesh(mu1, mu2)
    return wsum(mesh.weights * np.sqrt(mu1.values) * np.sqrt(mu2.values))


_BELOW_PI = math.nextafter(math.pi, 0.0)


def sqrt_gap(mu1: Density, mu2: Density) -> np.ndarray:
    """``sqrt(p1) - sqrt(p2)`` per node, free of cancellation for close densities."""
    check_same_mesh(mu1, mu2)
    return (mu1.values - mu2.values) / (np.sqrt(mu1.values) + np.sqrt(mu2.values))


def distance_from_affinity(c: float) -> float:
    """``2 arccos(c)`` clamped into ``[0, pi)``."""
    return min(2.0 * math.acos(min(1.0, max(-1.0, c))), _BELOW_PI)


def fisher_rao_distance(mu1: Density, mu2: Density) -> float:
    """Riemannian distance ``ell = 2 arccos C_H``, always in ``[0, pi)``.

    Evaluated as ``4 arcsin(d_H / 2)`` (the same number, since
    ``d_H**2 = 2 - 2 C_H``), which stays accurate for nearby densities where
    arccos near 1 would lose half the digits. Nearly disjoint densities are
    capped just below pi.
    """
    d = hellinger_distance(mu1, mu2)
    return min(4.0 * math.asin(min(1.0, d / 2.0)), _BELOW_PI)


def hellinger_distance(mu1: Density, mu2: Density) -> float:
    """``sqrt(2 (1 - C_H))``, i.e. the weighted L2 gap between square roots."""
    g = sqrt_gap(mu1, mu2)
    return math.sqrt(wsum(mu1.mesh.weights * g * g))


def levi_civita(mu: Density, tau1: TangentDensity, tau2: TangentDensity) -> TangentDensity:
    """Levi-Civita connection for constant vector fields ``tau1``, ``tau2`` at ``mu``.

    Returns ``-1/2 ((q1/p)(q2/p) - G_mu(tau1, tau2)) p``.
    """
    g = fisher_inner(mu, tau1, tau2)
    p = mu.values
    vals = -0.5 * ((tau1.values / p) * (tau2.values / p) - g) * p
    return TangentDensity(mu.mesh, vals)


def l2_embed(mu: Density) -> np.ndarray:
    """Square-root embedding into weighted L2; the image has unit norm."""
    return np.sqrt(mu.values)


def l2_embed_differential(mu: Density, tau: TangentDensity) -> np.ndarray:
    """Pushforward of ``tau`` under the square-root embedding: ``q / (2 sqrt p)``."""
    check_same_mesh(mu, tau)
    return tau.values / (2.0 * np.sqrt(mu.values))


def weighted_l2_norm(f, mesh) -> float:
    f = np.asarray(f, dtype=np.float64)
    return math.sqrt(wsum(mesh.weights * f * f))


def unit(mu: Density, tau: TangentDensity) -> TangentDensity:
    s = fisher_norm(mu, tau)
    if s == 0.0:
        raise ZeroDivisionError("cannot normalize the zero tangent vector")
    return make_tangent(mu.mesh, tau.values / s)
