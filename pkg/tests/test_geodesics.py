import math
from types import SimpleNamespace

import numpy as np
import pytest

from frgeom import (DegenerateError, DomainError, alpha_power_mean, exp_domain_contains, exp_map,
                    extended_geodesic, fisher_inner, fisher_norm, fisher_rao_distance,
                    gauss_orthogonality, geodesic_bvp, geodesic_ivp, geodesic_ode_residual,
                    geodesic_three_term, geometric_mean, log_map, make_density, make_tangent,
                    midpoint, positivity_breakdown, relaxed_antipodal,
                    tangent_line_intersection, three_term_coeffs)
from frgeom.geodesics import fd_speed, relaxed_curve
from frgeom.measure import zero_tangent
from frgeom.sphere import oracle_geodesic
from frgeom.verify import random_in_domain, random_pair, random_unit_tangent

from conftest import ARC_LENGTH


def test_ivp_examples(flat, swing):
    assert np.array_equal(geodesic_ivp(flat, swing, 0.0).values, flat.values)
    for t in (0.2, 0.9, -0.4):
        assert np.allclose(geodesic_ivp(flat, swing, t).values,
                           [1 + math.sin(t), 1 - math.sin(t)], atol=1e-15)
    assert np.allclose(geodesic_ivp(flat, swing, 0.2).values, [1.1986693, 0.8013307], atol=1e-7)
    assert np.allclose(geodesic_ivp(flat, swing, ARC_LENGTH).values, [1.6, 0.4], atol=1e-15)


def test_ivp_general_speed(flat, swing):
    # speed 2 covers the same curve twice as fast
    assert np.allclose(geodesic_ivp(flat, 2 * swing, 0.3).values,
                       geodesic_ivp(flat, swing, 0.6).values, atol=1e-15)


def test_ivp_leaves_space_names_node(u4):
    mu = make_density(u4, [1, 1, 1, 1])
    tau = make_tangent(u4, [0.0, 0.0, 1.0, -1.0], center=True)
    tau = (1 / fisher_norm(mu, tau)) * tau
    t_star = positivity_breakdown(mu, tau)
    geodesic_ivp(mu, tau, 0.999 * t_star)
    with pytest.raises(DomainError, match="node 3"):
        geodesic_ivp(mu, tau, 1.001 * t_star)


def test_positivity_breakdown_matches_bisection(rng, u4):
    mu = make_density(u4, rng.uniform(0.5, 2.0, 4), normalize=True)
    for _ in range(20):
        tau = random_unit_tangent(rng, mu)
        t_star = positivity_breakdown(mu, tau)
        lo, hi = 0.0, min(t_star * 1.5, math.pi - 1e-12)

        def alive(t):
            try:
                geodesic_ivp(mu, tau, t)
                return True
            except DomainError:
                return False
        if alive(hi):
            assert t_star == pytest.approx(math.pi)
            continue
        for _ in range(80):
            m = 0.5 * (lo + hi)
            lo, hi = (m, hi) if alive(m) else (lo, m)
        assert t_star == pytest.approx(lo, rel=1e-9)


def test_ivp_arc_range(flat, swing):
    with pytest.raises(DomainError):
        geodesic_ivp(flat, swing, math.pi)


def test_bvp_examples(flat, tilted, mirrored):
    seg = geodesic_bvp(flat, tilted)
    assert seg.length == pytest.approx(ARC_LENGTH, abs=1e-15)
    assert np.allclose(seg.unit_velocity.values, [1.0, -1.0], atol=1e-14)
    seg = geodesic_bvp(tilted, mirrored)
    assert seg.length == pytest.approx(2 * math.acos(0.8), abs=1e-15)
    assert np.allclose(seg.unit_velocity.values, [-0.8, 0.8], atol=1e-14)
    with pytest.raises(DegenerateError):
        geodesic_bvp(flat, flat)


def test_bvp_endpoints(rng, circle16):
    for _ in range(100):
        a, b = random_pair(rng, circle16)
        seg = geodesic_bvp(a, b)
        assert np.max(np.abs(seg.at(0.0).values - a.values)) < 1e-10
        assert np.max(np.abs(seg.end.values - b.values)) < 1e-10
        assert not seg.near_antipodal


def test_three_term_coeffs():
    l = ARC_LENGTH
    assert tuple(three_term_coeffs(l, 0.0)) == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)
    assert tuple(three_term_coeffs(l, l)) == pytest.approx((0.0, 1.0, 0.0), abs=1e-15)
    a1, a2, a3 = three_term_coeffs(l, l / 2)
    assert (a1, a2, a3) == pytest.approx((0.2565835, 0.2565835, 0.4868330), abs=1e-7)
    assert a1 + a2 + a3 == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        three_term_coeffs(l, 1.1 * l)
    with pytest.raises(DomainError):
        three_term_coeffs(math.pi, 0.1)


def test_three_term_coeffs_simplex():
    for l in np.linspace(0.01, math.pi - 1e-6, 40):
        for t in np.linspace(0.0, l, 101):
            a = three_term_coeffs(l, t)
            assert min(a) >= 0.0
            assert abs(sum(a) - 1.0) < 1e-12


def test_three_term_examples(flat, tilted):
    assert np.allclose(geodesic_three_term(flat, tilted, 0.0).values, flat.values, atol=1e-15)
    assert np.allclose(geodesic_three_term(flat, tilted, ARC_LENGTH).values, tilted.values, atol=1e-15)
    half = geodesic_three_term(flat, tilted, ARC_LENGTH / 2)
    assert np.allclose(half.values, [1 + 1 / math.sqrt(10), 1 - 1 / math.sqrt(10)], atol=1e-15)


def test_three_term_equals_ivp(rng, u4):
    for _ in range(100):
        a, b = random_pair(rng, u4)
        seg = geodesic_bvp(a, b)
        for t in np.linspace(0.0, seg.length, 33):
            assert np.max(np.abs(geodesic_three_term(a, b, t).values - seg.at(t).values)) < 1e-12


def test_midpoint(flat, tilted, rng, circle16):
    m = midpoint(flat, tilted)
    assert np.allclose(m.values, [1.3162278, 0.6837722], atol=1e-7)
    assert fisher_rao_distance(flat, m) == pytest.approx(ARC_LENGTH / 2, abs=1e-15)
    assert fisher_rao_distance(m, tilted) == pytest.approx(ARC_LENGTH / 2, abs=1e-15)
    assert np.allclose(midpoint(tilted, flat).values, m.values, atol=1e-15)
    for _ in range(100):
        a, b = random_pair(rng, circle16)
        m = midpoint(a, b)
        l = fisher_rao_distance(a, b)
        assert np.max(np.abs(m.values - geodesic_three_term(a, b, l / 2).values)) < 1e-12
        assert np.max(np.abs(m.values - alpha_power_mean(a, b, 0.5).values)) < 1e-12


def test_exp_map_examples(flat, tilted, swing, u2):
    assert exp_map(flat, zero_tangent(u2)) is flat
    assert np.allclose(exp_map(flat, ARC_LENGTH * swing).values, tilted.values, atol=1e-15)
    with pytest.raises(DomainError):
        exp_map(flat, make_tangent(u2, [10.0, -10.0]))


def test_log_map_examples(flat, tilted):
    assert np.array_equal(log_map(flat, flat).values, [0.0, 0.0])
    assert np.allclose(log_map(flat, tilted).values, [ARC_LENGTH, -ARC_LENGTH], atol=1e-14)


def test_exp_log_round_trips(rng, circle16):
    for _ in range(100):
        a, b = random_pair(rng, circle16)
        tau = log_map(a, b)
        assert fisher_norm(a, tau) == pytest.approx(fisher_rao_distance(a, b), abs=1e-10)
        assert np.max(np.abs(exp_map(a, tau).values - b.values)) < 1e-10
        v = random_in_domain(rng, a)
        assert np.max(np.abs(log_map(a, exp_map(a, v)).values - v.values)) < 1e-10


def test_exp_domain_examples(flat, swing, u2):
    assert exp_domain_contains(flat, zero_tangent(u2), 0.1)
    assert exp_domain_contains(flat, swing, math.pi)
    assert not exp_domain_contains(flat, 3 * swing, math.pi)
    # min(q/p) = -3 against the bound -3 cot(1.5) = -0.21274...
    assert 3 / math.tan(1.5) == pytest.approx(0.21274, abs=1e-5)
    with pytest.raises(DomainError):
        exp_domain_contains(flat, swing, 0.0)


def test_tangent_line_intersection(flat, tilted, rng, u4):
    x, s, s_prime = tangent_line_intersection(flat, tilted, full_output=True)
    assert np.allclose(x.values, [4 / 3, 2 / 3], atol=1e-14)
    assert s == pytest.approx(1 / 3, abs=1e-14)
    assert np.allclose(tangent_line_intersection(tilted, flat).values, x.values, atol=1e-14)
    for _ in range(100):
        a, b = random_pair(rng, u4)
        phi = geometric_mean(a, b).values
        assert np.max(np.abs(tangent_line_intersection(a, b).values - phi)) < 1e-10


def test_ode_residual(rng, circle16, flat, u2):
    for _ in range(20):
        a, b = random_pair(rng, circle16)
        seg = geodesic_bvp(a, b)
        assert geodesic_ode_residual(seg, seg.length / 2, 1e-4) < 1e-6
        assert abs(fd_speed(seg, seg.length / 2) - 1.0) < 1e-6
        bent = SimpleNamespace(base=seg.base, unit_velocity=1.1 * seg.unit_velocity, length=seg.length)
        assert geodesic_ode_residual(bent, seg.length / 2, 1e-4) > 1e-2
    still = SimpleNamespace(base=flat, unit_velocity=zero_tangent(u2), length=1.0)
    assert geodesic_ode_residual(still, 0.5, 1e-4) == 0.5
    with pytest.raises(DomainError):
        geodesic_ode_residual(seg, 1e-5, 1e-4)


def _orthogonal_to(mu, tau, rng):
    d = make_tangent(mu.mesh, rng.normal(size=mu.mesh.n) * mu.values, center=True)
    return d - fisher_inner(mu, tau, d) * tau


def test_gauss_lemma(rng, u4, circle16):
    for mesh in (u4, circle16):
        for _ in range(50):
            mu = make_density(mesh, rng.uniform(0.5, 2.0, mesh.n), normalize=True)
            tau = random_unit_tangent(rng, mu)
            d = _orthogonal_to(mu, tau, rng)
            t = 0.9 * min(positivity_breakdown(mu, tau), math.pi)
            assert abs(gauss_orthogonality(mu, tau, d, t)) < 1e-10
    assert gauss_orthogonality(mu, tau, zero_tangent(circle16), 0.5 * t) == 0.0
    with pytest.raises(DomainError):
        gauss_orthogonality(mu, tau, tau, 0.5 * t)
    with pytest.raises(DomainError):
        gauss_orthogonality(mu, 2 * tau, d, 0.5 * t)


def test_extended_geodesic(flat, swing, u4, rng):
    assert np.allclose(extended_geodesic(flat, swing, math.pi).values, [1.0, 1.0], atol=1e-15)
    assert np.allclose(extended_geodesic(flat, swing, 0.0).values, flat.values, atol=0)
    mu = make_density(u4, [1, 1, 1, 1])
    tau = make_tangent(u4, [0.0, 1.0, -1.0, 0.0])
    tau = (1 / fisher_norm(mu, tau)) * tau
    end = extended_geodesic(mu, tau, math.pi)
    assert end.values[0] == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(end.values, tau.values ** 2 / mu.values, atol=1e-14)
    for t in np.linspace(-7, 7, 29):
        gap = np.max(np.abs(extended_geodesic(mu, tau, t).values
                            - extended_geodesic(mu, tau, t + 2 * math.pi).values))
        assert gap < 1e-12
    with pytest.raises(DomainError):
        extended_geodesic(mu, 2 * tau, 0.1)


def test_relaxed_antipodal_example(tilted, mirrored, flat):
    tau1, end = relaxed_antipodal(tilted, mirrored)
    assert np.allclose(tau1, [1.0, -1.0], atol=1e-15)
    assert np.allclose(end.values, mirrored.values, atol=1e-12)
    c = math.cos(fisher_rao_distance(tilted, mirrored) / 2)
    assert c == pytest.approx(0.8, abs=1e-15)
    v = c * np.asarray(tau1)
    assert math.fsum(tilted.mesh.weights * v) == pytest.approx(0.0, abs=1e-15)
    assert math.fsum(tilted.mesh.weights * v * v / tilted.values) == pytest.approx(1.0, abs=1e-12)
    # the relaxed curve is a geodesic only piecewise; it starts at mu
    assert np.allclose(relaxed_curve(tilted, tau1, 2 * math.acos(0.8), 0.0), tilted.values)
    with pytest.raises(DomainError):
        relaxed_antipodal(flat, tilted)


def test_relaxed_antipodal_larger_mesh(u4):
    a = make_density(u4, [1.6, 0.4, 1.6, 0.4])
    b = make_density(u4, [0.4, 1.6, 0.4, 1.6])
    tau1, end = relaxed_antipodal(a, b)
    assert np.max(np.abs(end.values - b.values)) < 1e-12
