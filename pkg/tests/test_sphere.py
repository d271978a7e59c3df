import math

import numpy as np
import pytest

from frgeom import (DegenerateError, DomainError, InvalidDensityError, SpherePoint, build_mesh,
                    diameter_witness, embed, fisher_rao_distance, geodesic_three_term,
                    make_density, oracle_distance, oracle_geodesic, slerp,
                    spherical_triangle_residual, unembed)
from frgeom.sphere import oracle_unit_velocity, sphere_angle, vertex_angles
from frgeom.geodesics import geodesic_bvp
from frgeom.verify import random_density, random_pair

from conftest import ARC_LENGTH


def test_embed_unembed(flat, tilted):
    assert np.array_equal(embed(flat).coords, [1.0, 1.0])
    x = embed(tilted)
    assert np.allclose(x.coords, [1.2649111, 0.6324555], atol=1e-7)
    assert math.fsum(tilted.mesh.weights * x.coords ** 2) == pytest.approx(1.0, abs=1e-15)
    assert np.allclose(unembed(x).values, tilted.values, atol=1e-15)
    with pytest.raises(InvalidDensityError):
        unembed(SpherePoint(tilted.mesh, [math.sqrt(2.0), 0.0]))


def test_embed_unit_norm(rng, circle16):
    for _ in range(100):
        x = embed(random_density(rng, circle16, scale=2.0))
        assert abs(math.fsum(circle16.weights * x.coords ** 2) - 1.0) < 1e-12


def test_slerp(u2):
    x = SpherePoint(u2, [math.sqrt(2.0), 0.0])
    y = SpherePoint(u2, [0.0, math.sqrt(2.0)])
    assert np.allclose(slerp(x, y, 0.5).coords, [1.0, 1.0], atol=1e-15)
    assert np.allclose(slerp(x, y, 0.0).coords, x.coords, atol=0)
    assert np.allclose(slerp(x, y, 1.0).coords, y.coords, atol=1e-15)
    theta = sphere_angle(x, y)
    assert theta == pytest.approx(math.pi / 2, abs=1e-15)
    for s in np.linspace(0, 1, 11):
        assert sphere_angle(x, slerp(x, y, s)) == pytest.approx(s * theta, abs=1e-12)
    with pytest.raises(DegenerateError):
        slerp(x, x, 0.5)
    with pytest.raises(DegenerateError):
        slerp(x, SpherePoint(u2, [-math.sqrt(2.0), 0.0]), 0.5)


def test_oracle_geodesic_examples(flat, tilted):
    assert np.allclose(oracle_geodesic(flat, tilted, 0.0).values, flat.values, atol=1e-15)
    half = oracle_geodesic(flat, tilted, ARC_LENGTH / 2)
    assert np.allclose(half.values, [1.3162278, 0.6837722], atol=1e-7)


def test_oracle_agrees_with_density_formulas(rng, circle16, u4):
    for mesh in (circle16, u4):
        for _ in range(50):
            a, b = random_pair(rng, mesh)
            l = fisher_rao_distance(a, b)
            assert abs(l - oracle_distance(a, b)) < 1e-14
            for t in np.linspace(0, l, 33):
                gap = np.max(np.abs(oracle_geodesic(a, b, t).values - geodesic_three_term(a, b, t).values))
                assert gap < 1e-10
            v = geodesic_bvp(a, b).unit_velocity.values
            assert np.max(np.abs(oracle_unit_velocity(a, b) - v)) < 1e-10


def test_oracle_distance_examples(flat, tilted):
    assert oracle_distance(flat, flat) == 0.0
    assert oracle_distance(flat, tilted) == pytest.approx(0.6435011, abs=1e-7)


def test_triangle_residual_random(rng, u4, circle16):
    for mesh in (u4, circle16):
        for _ in range(100):
            a, b, c = (random_density(rng, mesh) for _ in range(3))
            assert spherical_triangle_residual(a, b, c) < 1e-8


def test_triangle_on_two_atoms_is_degenerate(flat, tilted, mirrored):
    with pytest.raises(DegenerateError):
        spherical_triangle_residual(flat, tilted, mirrored)
    with pytest.raises(DegenerateError):
        spherical_triangle_residual(flat, flat, tilted)


def test_equilateral_triangle(u4):
    # three slerps out of the centre of the simplex, 120 degrees apart
    centre = np.ones(4)
    # unit and orthogonal under the weights 1/4
    e1 = np.array([1.0, -1.0, 0.0, 0.0]) * math.sqrt(2.0)
    e2 = np.array([1.0, 1.0, -2.0, 0.0]) * math.sqrt(2.0 / 3.0)
    r = 0.3
    verts = []
    for k in range(3):
        th = 2 * math.pi * k / 3
        x = math.cos(r) * centre + math.sin(r) * (math.cos(th) * e1 + math.sin(th) * e2)
        verts.append(make_density(u4, x * x))
    assert spherical_triangle_residual(*verts) < 1e-8
    angles = vertex_angles(*verts)
    assert max(angles) - min(angles) < 1e-10
    sides = [fisher_rao_distance(verts[i], verts[(i + 1) % 3]) for i in range(3)]
    assert max(sides) - min(sides) < 1e-12
    # positive curvature: angle sum exceeds pi
    assert sum(angles) > math.pi


def test_diameter_witness():
    mesh = build_mesh("circle", 64)
    mu, mu1, ell = diameter_witness(mesh, math.log(1e6) / 2)
    for d in (mu, mu1):
        assert np.all(d.values > 0)
        assert d.values.min() / d.values.max() == pytest.approx(1e-6, rel=1e-9)
    c_h = math.fsum(mesh.weights * np.sqrt(mu.values * mu1.values))
    assert ell == pytest.approx(2 * math.acos(c_h), abs=1e-12)
    assert ell >= math.pi - 0.05
    assert diameter_witness(mesh, 1e-4)[2] < 1e-3
    ells = [diameter_witness(mesh, s)[2] for s in np.geomspace(0.01, 300, 30)]
    assert all(x < math.pi for x in ells)
    assert all(b >= a for a, b in zip(ells, ells[1:]))
    with pytest.raises(DomainError):
        diameter_witness(mesh, 400.0)
    with pytest.raises(DomainError):
        diameter_witness(build_mesh("circle", 6), 1.0)
