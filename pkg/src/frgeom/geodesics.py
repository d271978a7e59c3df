"""Closed-form geodesics of the Fisher metric on positive densities.

Every geodesic has the density form::

    p_t = (cos(t/2) + (q/p) sin(t/2))**2 * p        (unit initial speed)

and nothing here integrates an ODE numerically. The ODE and Gauss-lemma
helpers exist only to *check* the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from frgeom import _backend
from frgeom.errors import DegenerateError, DomainError, GeometryError
from frgeom.means import alpha_power_mean, geometric_mean
from frgeom.measure import (Density, NonnegativeDensity, TangentDensity, check_same_mesh,
                            make_tangent, wsum, zero_tangent)
from frgeom.metric import fisher_inner, fisher_norm, fisher_rao_distance, hellinger_affinity

COINCIDENT_TOL = 1e-12
UNIT_TOL = 1e-10
NEAR_ANTIPODAL = 1e-8
MAX_SUBSET_NODES = 24
FD_STEP = 1e-4


def _check_distinct(mu: Density, mu1: Density) -> None:
    check_same_mesh(mu, mu1)
    if np.max(np.abs(mu.values - mu1.values)) <= COINCIDENT_TOL:
        raise DegenerateError("endpoints coincide; no geodesic direction is defined")


def _check_unit(mu: Density, tau: TangentDensity) -> None:
    s = fisher_norm(mu, tau)
    if abs(s - 1.0) > UNIT_TOL:
        raise DomainError(f"tangent vector must have unit Fisher norm, got {s!r}")


@dataclass(frozen=True, eq=False)
class GeodesicSegment:
    """Arc-length parametrized segment from ``base`` with unit initial velocity.

    ``near_antipodal`` flags endpoints whose Hellinger affinity is below
    1e-8; such segments are valid but poorly conditioned.
    """

    base: Density
    unit_velocity: TangentDensity
    length: float
    near_antipodal: bool = False

    def __post_init__(self):
        check_same_mesh(self.base, self.unit_velocity)
        _check_unit(self.base, self.unit_velocity)
        if not 0.0 < self.length < math.pi:
            raise DomainError(f"segment length must lie in (0, pi), got {self.length!r}")

    def at(self, t: float) -> Density:
        return geodesic_ivp(self.base, self.unit_velocity, t)

    def velocity(self, t: float) -> TangentDensity:
        return geodesic_velocity(self.base, self.unit_velocity, t)

    def sample(self, ts: Sequence[float]) -> list:
        return [self.at(t) for t in ts]

    @property
    def end(self) -> Density:
        return self.at(self.length)


@dataclass(frozen=True)
class ThreeTermCoefficients:
    a1: float
    a2: float
    a3: float

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3))


def _ivp_factor(mu, tau, t):
    """Per-node factor ``f`` with ``p_t = f**2 p``, plus the speed ``s``."""
    s = fisher_norm(mu, tau)
    r = tau.values / mu.values
    if s == 0.0:
        return np.ones_like(r), r, s
    return np.cos(s * t / 2.0) + (r / s) * np.sin(s * t / 2.0), r, s


def geodesic_ivp(mu: Density, tau: TangentDensity, t: float) -> Density:
    """Point at parameter ``t`` on the geodesic with ``gamma(0)=mu``, ``gamma'(0)=tau``.

    The speed ``s = |tau|_mu`` is arbitrary; ``|t| * s`` must stay below pi.
    Raises :class:`DomainError` if the ray has left the positive densities
    by time ``t``; the message names the first node that went through zero.
    """
    check_same_mesh(mu, tau)
    f, _, s = _ivp_factor(mu, tau, t)
    if abs(t) * s >= math.pi:
        raise DomainError(f"arc parameter |t|*|tau| = {abs(t) * s!r} is not below pi")
    bad = np.flatnonzero(~(f > 0))
    if bad.size:
        raise DomainError(
            f"geodesic leaves the positive densities before t={t!r} (node {int(bad[0])})")
    return Density(mu.mesh, f * f * mu.values)


def geodesic_velocity(mu: Density, tau: TangentDensity, t: float) -> TangentDensity:
    """Closed-form ``d/dt`` of :func:`geodesic_ivp`."""
    f, r, s = _ivp_factor(mu, tau, t)
    if s == 0.0:
        return zero_tangent(mu.mesh)
    df = (-s * np.sin(s * t / 2.0) + r * np.cos(s * t / 2.0))
    return make_tangent(mu.mesh, f * df * mu.values, center=True)


def positivity_breakdown(mu: Density, tau: TangentDensity) -> float:
    """First ``t > 0`` at which the ray ``geodesic_ivp(mu, tau, .)`` hits zero somewhere.

    Returns ``pi / |tau|`` when no node reaches zero earlier, and ``inf`` for
    the zero vector.
    """
    s = fisher_norm(mu, tau)
    if s == 0.0:
        return math.inf
    r = tau.values / mu.values
    neg = r[r < 0]
    t_star = math.pi / s
    if neg.size:
        t_star = min(t_star, float(np.min(2.0 / s * np.arctan(-s / neg))))
    return t_star


def geodesic_bvp(mu: Density, mu1: Density) -> GeodesicSegment:
    """The unique segment from ``mu`` to ``mu1``, with length ``ell(mu, mu1)``."""
    _check_distinct(mu, mu1)
    c_h = hellinger_affinity(mu, mu1)
    length = fisher_rao_distance(mu, mu1)
    p = mu.values
    # sqrt(p1/p) - cos(l/2) and sin(l/2), both in a form free of cancellation
    delta = (mu1.values - p) / (np.sqrt(mu1.values) + np.sqrt(p))
    chord2 = wsum(mu.mesh.weights * delta * delta)
    dir_vals = (delta / np.sqrt(p) + 0.5 * chord2) * p
    sin_half = math.sqrt(chord2) * math.sqrt(max(0.0, 1.0 - chord2 / 4.0))
    unit = make_tangent(mu.mesh, dir_vals / sin_half, center=True)
    length = min(length, math.nextafter(math.pi, 0.0))
    return GeodesicSegment(mu, unit, length, near_antipodal=c_h < NEAR_ANTIPODAL)


def three_term_coeffs(l: float, t: float) -> ThreeTermCoefficients:
    """Weights of ``mu``, ``mu1`` and ``phi(mu, mu1)`` at arc length ``t``."""
    if not 0.0 < l < math.pi:
        raise DomainError(f"segment length must lie in (0, pi), got {l!r}")
    if not -1e-12 * l <= t <= l * (1.0 + 1e-12):
        raise DomainError(f"t={t!r} is outside [0, {l!r}]")
    t = min(l, max(0.0, t))
    sh = math.sin(l / 2.0)
    a = math.sin((l - t) / 2.0) / sh
    b = math.sin(t / 2.0) / sh
    return ThreeTermCoefficients(a * a, b * b, 2.0 * math.cos(l / 2.0) * a * b)


def geodesic_three_term(mu: Density, mu1: Density, t: float) -> Density:
    """``a1 mu + a2 mu1 + a3 phi(mu, mu1)``: the segment as a curve in a plane."""
    _check_distinct(mu, mu1)
    l = fisher_rao_distance(mu, mu1)
    a1, a2, a3 = three_term_coeffs(l, t)
    phi = geometric_mean(mu, mu1)
    return Density(mu.mesh, a1 * mu.values + a2 * mu1.values + a3 * phi.values)


def midpoint(mu: Density, mu1: Density) -> Density:
    """Midpoint ``(1 + sqrt(p1/p))**2 p / (4 cos^2(l/4))`` of the segment."""
    _check_distinct(mu, mu1)
    l = fisher_rao_distance(mu, mu1)
    v = (1.0 + np.sqrt(mu1.values / mu.values)) ** 2 * mu.values
    return Density(mu.mesh, v / (4.0 * math.cos(l / 4.0) ** 2))


def midpoint_power_mean(mu: Density, mu1: Density) -> Density:
    return alpha_power_mean(mu, mu1, 0.5)


def exp_domain_contains(mu: Density, tau: TangentDensity, eps: float = math.pi) -> bool:
    """Whether ``tau`` lies in the set where ``exp_mu`` is a diffeomorphism onto ``B(mu; eps)``.

    Requires ``|tau| < eps`` and ``min(q/p) > -|tau| cot(|tau|/2)`` (bound 2 at zero).
    """
    if not 0.0 < eps <= math.pi:
        raise DomainError(f"eps must lie in (0, pi], got {eps!r}")
    s = fisher_norm(mu, tau)
    bound = 2.0 if s == 0.0 else s / math.tan(s / 2.0)
    return s < eps and float(np.min(tau.values / mu.values)) > -bound


def exp_map(mu: Density, tau: TangentDensity) -> Density:
    if not exp_domain_contains(mu, tau, math.pi):
        raise DomainError("tangent vector is outside the domain of the exponential map")
    s = fisher_norm(mu, tau)
    if s == 0.0:
        return mu
    r = tau.values / mu.values
    f = math.cos(s / 2.0) + (math.sin(s / 2.0) / s) * r
    return Density(mu.mesh, f * f * mu.values)


def log_map(mu: Density, mu1: Density) -> TangentDensity:
    """Inverse of :func:`exp_map`; the zero vector when ``mu1 == mu``."""
    check_same_mesh(mu, mu1)
    if np.max(np.abs(mu.values - mu1.values)) <= COINCIDENT_TOL:
        return zero_tangent(mu.mesh)
    seg = geodesic_bvp(mu, mu1)
    return seg.length * seg.unit_velocity


def tangent_line_intersection(mu: Density, mu1: Density, full_output: bool = False):
    """Intersect the tangent lines of the segment at its two endpoints.

    The lines ``mu + s*gamma'(0)`` and ``mu1 + s'*gamma'(l)`` are intersected
    as signed measures by least squares over all nodes; the residual must
    vanish on every node. On a two-atom mesh the lines coincide, and the
    reversal symmetry ``s' = -s`` picks the point.

    Returns the intersection, or ``(density, s, s_prime)`` with ``full_output``.
    """
    seg = geodesic_bvp(mu, mu1)
    v0 = seg.unit_velocity.values
    v1 = seg.velocity(seg.length).values
    rhs = mu1.values - mu.values
    a = np.column_stack([v0, -v1])
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[1] <= 1e-10 * sv[0]:
        a = np.vstack([a, [1.0, 1.0]])
        rhs = np.append(rhs, 0.0)
    (s, s_prime), *_ = np.linalg.lstsq(a, rhs, rcond=None)
    x = mu.values + s * v0
    resid = np.max(np.abs(x - (mu1.values + s_prime * v1)))
    scale = max(1.0, float(np.max(np.abs(x))))
    if resid > 1e-10 * scale:
        raise GeometryError(f"tangent lines do not intersect (residual {resid:.3e})")
    out = Density(mu.mesh, x)
    return (out, float(s), float(s_prime)) if full_output else out


def _log_density(curve, t):
    return np.log(geodesic_ivp(curve.base, curve.unit_velocity, t).values)


def geodesic_ode_residual(seg, t: float, h: float = FD_STEP) -> float:
    """Max over nodes of ``|d/dt(p'/p) + (p'/p)**2/2 + 1/2|`` by central differences.

    ``seg`` only needs ``base``, ``unit_velocity`` and ``length`` attributes, so
    deliberately corrupted curves can be checked too. The stencil uses
    ``t - h``, ``t``, ``t + h``, all of which must lie in ``(0, length)``.
    """
    if not h > 0:
        raise DomainError(f"step must be positive, got {h!r}")
    if not (0.0 < t - h and t + h < seg.length):
        raise DomainError(f"stencil [{t - h!r}, {t + h!r}] leaves (0, {seg.length!r})")
    lm, l0, lp = (_log_density(seg, x) for x in (t - h, t, t + h))
    rate = (lp - lm) / (2.0 * h)
    drate = (lp - 2.0 * l0 + lm) / (h * h)
    return float(np.max(np.abs(drate + 0.5 * rate * rate + 0.5)))


def fd_speed(seg: GeodesicSegment, t: float, h: float = FD_STEP) -> float:
    """Fisher norm of the central-difference velocity at ``t``."""
    mid = seg.at(t)
    v = (seg.at(t + h).values - seg.at(t - h).values) / (2.0 * h)
    return math.sqrt(wsum(mid.mesh.weights * v * v / mid.values))


def gauss_orthogonality(mu: Density, tau: TangentDensity, delta_tau: TangentDensity,
                        t: float) -> float:
    """``G_f(df/dt, df/dtau[delta_tau])`` at ``f = exp_mu(t tau)``.

    ``tau`` must be a unit vector and ``delta_tau`` tangent to the unit
    sphere at ``tau``; the Gauss lemma says the result is zero.
    """
    check_same_mesh(mu, tau, delta_tau)
    _check_unit(mu, tau)
    g = fisher_inner(mu, tau, delta_tau)
    if abs(g) > UNIT_TOL:
        raise DomainError(f"delta_tau is not orthogonal to tau (G = {g!r})")
    if not 0.0 < t < math.pi:
        raise DomainError(f"t must lie in (0, pi), got {t!r}")
    p = mu.values
    r = tau.values / p
    dr = delta_tau.values / p
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    f = c + r * s
    if not np.all(f > 0):
        raise DomainError(f"exp_mu(t tau) is not a positive density at t={t!r}")
    foot = f * f * p
    d_t = f * (-s + r * c) * p
    d_tau = 2.0 * f * s * dr * p
    return wsum(mu.mesh.weights * (d_t / foot) * (d_tau / foot) * foot)


def extended_geodesic(mu: Density, tau: TangentDensity, t: float) -> NonnegativeDensity:
    """Closed form at any real ``t``; 2*pi periodic and allowed to touch zero."""
    check_same_mesh(mu, tau)
    _check_unit(mu, tau)
    r = tau.values / mu.values
    f = math.cos(t / 2.0) + r * math.sin(t / 2.0)
    return NonnegativeDensity(mu.mesh, f * f * mu.values)


def relaxed_antipodal(mu: Density, mu1: Density):
    """Geodesic reaching ``mu1`` at ``t = pi`` through discontinuous velocities.

    Splits the nodes into a set ``S`` carrying exactly half the mass of
    ``phi = phi(mu, mu1)`` and returns ``(tau1, endpoint)`` where ``tau1`` is
    ``+phi`` on ``S`` and ``-phi`` off it. ``cos(l/2) tau1`` is then a unit
    tangent vector at ``mu`` and the curve
    ``(cos(t/2) + sin(t/2) cos(l/2) tau1/p)**2 p`` ends at ``mu1`` when
    ``t = pi``.
    """
    _check_distinct(mu, mu1)
    mesh = mu.mesh
    if mesh.n > MAX_SUBSET_NODES:
        raise DomainError(
            f"half-mass subset search is limited to {MAX_SUBSET_NODES} nodes, mesh has {mesh.n}")
    phi = geometric_mean(mu, mu1).values
    mask = _backend.half_mass_subset(mesh.weights * phi, 0.5, 1e-12)
    if mask < 0:
        raise DomainError("no node subset carries exactly half the geometric-mean mass")
    in_s = np.array([(mask >> i) & 1 for i in range(mesh.n)], dtype=bool)
    tau1 = np.where(in_s, phi, -phi)
    return tau1, Density(mesh, relaxed_curve(mu, tau1, fisher_rao_distance(mu, mu1), math.pi))


def relaxed_curve(mu: Density, tau1, l: float, t: float) -> np.ndarray:
    """Node values of the relaxed geodesic at ``t`` (may vanish; not validated)."""
    r = math.cos(l / 2.0) * np.asarray(tau1) / mu.values
    return (math.cos(t / 2.0) + math.sin(t / 2.0) * r) ** 2 * mu.values
