"""Normalized geometric and alpha-power means, plus the continuity bounds
for ``ell`` and ``phi`` as checkable (lhs, rhs) pairs."""
from __future__ import annotations

import math

import numpy as np

from frgeom.errors import DomainError
from frgeom.measure import Density, check_same_mesh, wsum
from frgeom.metric import hellinger_affinity, weighted_l2_norm


def geometric_mean(mu1: Density, mu2: Density) -> Density:
    """Normalized geometric mean ``sqrt(p1 p2) / C_H``.

    The product is formed as ``p1 * p2`` (commutative in IEEE arithmetic)
    so the result is exactly symmetric in its arguments.
    """
    mesh = check_same_mesh(mu1, mu2)
    g = np.sqrt(mu1.values * mu2.values)
    return Density(mesh, g / wsum(mesh.weights * g))


def _log_half_one_plus_exp(x: np.ndarray) -> np.ndarray:
    # log((1 + e^x) / 2) without losing digits near x = 0
    out = np.empty_like(x)
    small = x < 30.0
    out[small] = np.log1p(np.expm1(x[small]) / 2.0)
    big = ~small
    out[big] = x[big] + np.log1p(np.exp(-x[big])) - math.log(2.0)
    return out


def alpha_power_mean(mu1: Density, mu2: Density, alpha: float) -> Density:
    """Normalized alpha-power mean ``{1 + (p2/p1)^a}^(1/a) p1`` rescaled to unit mass.

    ``alpha == 0`` is the geometric mean. Evaluation happens in log space:
    the constant ``2**(1/alpha)`` cancels in the normalization, which keeps
    small ``alpha`` finite.
    """
    mesh = check_same_mesh(mu1, mu2)
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    if alpha == 0.0:
        return geometric_mean(mu1, mu2)
    log_ratio = np.log(mu2.values) - np.log(mu1.values)
    with np.errstate(over="ignore", invalid="ignore"):
        log_v = _log_half_one_plus_exp(alpha * log_ratio) / alpha + np.log(mu1.values)
        if not np.all(np.isfinite(log_v)):
            i = int(np.flatnonzero(~np.isfinite(log_v))[0])
            raise DomainError(f"alpha-power mean is not finite at node {i} for alpha={alpha}")
        v = np.exp(log_v - log_v.max())
    return Density(mesh, v / wsum(mesh.weights * v))


def ell_continuity_gap(mu, mu1, mu_p, mu1_p):
    """Both sides of the Cauchy-Schwarz bound on ``|cos(l/2) - cos(l'/2)|``.

    Returns ``(lhs, rhs)``; ``lhs <= rhs`` always holds.
    """
    mesh = check_same_mesh(mu, mu1, mu_p, mu1_p)
    lhs = abs(hellinger_affinity(mu, mu1) - hellinger_affinity(mu_p, mu1_p))
    rhs = (weighted_l2_norm(np.sqrt(mu.values) - np.sqrt(mu_p.values), mesh)
           + weighted_l2_norm(np.sqrt(mu1.values) - np.sqrt(mu1_p.values), mesh))
    return lhs, rhs


def phi_continuity_gap(mu, mu1, mu_p, mu1_p):
    """Both sides of the bound ``|sqrt P - sqrt P'|^2 <= 2/C_H (...)`` for ``P = phi(mu, mu1)``."""
    mesh = check_same_mesh(mu, mu1, mu_p, mu1_p)
    big_p = geometric_mean(mu, mu1)
    big_pp = geometric_mean(mu_p, mu1_p)
    lhs = weighted_l2_norm(np.sqrt(big_p.values) - np.sqrt(big_pp.values), mesh) ** 2
    rhs = (2.0 / hellinger_affinity(mu, mu1)) * (
        weighted_l2_norm(np.sqrt(mu.values) - np.sqrt(mu_p.values), mesh)
        + weighted_l2_norm(np.sqrt(mu1.values) - np.sqrt(mu1_p.values), mesh))
    return lhs, rhs
