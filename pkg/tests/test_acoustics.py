"""Scalar scattering: incident waves, hard spheres, field evaluation and sweeps."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nsbem.acoustics import (
    PlaneWave,
    evaluate_field,
    incident_scalar,
    solve_hard,
    solve_neumann,
    sweep,
    total_field,
    velocity_boundary,
)
from nsbem.errors import PointOnSurfaceError
from nsbem.geometry import generate_sphere_mesh, sphere_points
from nsbem.oracles import rigid_sphere_scatter, rigid_sphere_surface_static

unit = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda v: np.linalg.norm(v) > 0.1
).map(lambda v: np.array(v) / np.linalg.norm(v))


# ---------------------------------------------------------------- incident wave


@given(unit, st.floats(0.1, 5.0))
def test_plane_wave_normal_derivative_matches_fd(direction, k):
    wave = PlaneWave(k, direction)
    x = np.array([[0.3, -0.2, 0.7]])
    n = np.array([[0.0, 0.6, 0.8]])
    h = 1e-6
    fd = (wave.evaluate(x + h * n) - wave.evaluate(x - h * n)) / (2 * h)
    assert np.allclose(wave.normal_derivative(x, n), fd, rtol=1e-6, atol=1e-8)


def test_plane_wave_basics(sphere1):
    mesh, frames = sphere1
    assert PlaneWave(2.0).evaluate([[0, 0, 0]])[0] == 1.0
    phi, dphi = incident_scalar(PlaneWave(2.0, amplitude=0.0), mesh, frames)
    assert not phi.any() and not dphi.any()
    with pytest.raises(ValueError):
        PlaneWave(1.0, (1.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        PlaneWave(np.inf)


# ---------------------------------------------------------------- hard sphere


@pytest.fixture(scope="module")
def hard2(sphere2):
    mesh, frames = sphere2
    return solve_hard(mesh, frames, PlaneWave(1.0))


def test_low_frequency_surface_field(sphere2):
    mesh, frames = sphere2
    ka = 1e-3
    sol = solve_hard(mesh, frames, PlaneWave(ka))
    theta = np.arccos(np.clip(mesh.nodes[:, 2], -1, 1))
    ref = rigid_sphere_surface_static(ka, theta)
    assert np.max(np.abs(sol.phi - ref)) < 0.01 * np.max(np.abs(ref))


def test_hard_sphere_against_series(sphere2, hard2):
    mesh, _ = sphere2
    pts = sphere_points(30, 1.5)
    got = evaluate_field(mesh, hard2, pts)
    ref = rigid_sphere_scatter(1.0, 1.5, np.arccos(pts[:, 2] / 1.5))
    assert np.max(np.abs(got - ref)) < 1e-2 * np.max(np.abs(ref))
    assert hard2.bc_kind == "hard" and hard2.formulation == "standard"
    assert hard2.solve_residual < 1e-12


def test_scattered_field_decays_like_inverse_distance(sphere2, hard2):
    mesh, _ = sphere2
    d = np.array([[0.0, 0.6, 0.8]])
    near, far = (np.abs(evaluate_field(mesh, hard2, r * d))[0] for r in (100.0, 1000.0))
    assert near / far == pytest.approx(10.0, rel=0.02)


def test_solution_is_linear_in_amplitude(sphere1):
    mesh, frames = sphere1
    a = solve_hard(mesh, frames, PlaneWave(1.2))
    b = solve_hard(mesh, frames, PlaneWave(1.2, amplitude=2.0 - 1.0j))
    assert np.allclose(b.phi, (2.0 - 1.0j) * a.phi, rtol=1e-12, atol=1e-14)


def test_total_field_adds_incident(sphere1):
    mesh, frames = sphere1
    sol = solve_hard(mesh, frames, PlaneWave(1.0))
    pts = np.array([[0.0, 0.0, 2.0], [1.5, 0.0, 0.0]])
    assert np.allclose(
        total_field(mesh, sol, pts), evaluate_field(mesh, sol, pts) + np.exp(1j * pts[:, 2])
    )


def test_far_field_reciprocity(sphere2, hard2):
    # swapping incidence and observation directions leaves the far amplitude unchanged
    mesh, frames = sphere2
    d1 = np.array([0.0, 0.0, 1.0])
    d2 = np.array([0.6, 0.0, 0.8])
    s2 = solve_hard(mesh, frames, PlaneWave(1.0, d2))
    r = 200.0
    f12 = evaluate_field(mesh, hard2, [-r * d2])[0]
    f21 = evaluate_field(mesh, s2, [-r * d1])[0]
    assert abs(f12 - f21) < 0.01 * abs(f12)


def test_field_close_to_surface_is_smooth(sphere2, hard2):
    mesh, _ = sphere2
    d = np.array([0.48, 0.6, 0.64])
    vals = evaluate_field(mesh, hard2, [d * (1 + 1e-3), d * (1 + 2e-3)])
    assert abs(vals[0] - vals[1]) < 0.01 * abs(vals[0])


def test_point_on_surface_is_rejected(sphere1):
    mesh, frames = sphere1
    sol = solve_hard(mesh, frames, PlaneWave(1.0))
    with pytest.raises(PointOnSurfaceError):
        evaluate_field(mesh, sol, mesh.nodes[:1])


def test_solve_neumann_validation(sphere1):
    mesh, frames = sphere1
    with pytest.raises(ValueError):
        solve_neumann(mesh, frames, 1.0, np.ones(3))
    with pytest.raises(ValueError):
        solve_neumann(mesh, frames, 1.0, np.ones(mesh.n_nodes), "galerkin")
    other = generate_sphere_mesh(1.0, 0)
    sol = solve_hard(mesh, frames, PlaneWave(1.0))
    with pytest.raises(ValueError):
        evaluate_field(other, sol, [[0, 0, 3.0]])


def test_pulsating_sphere(sphere2):
    # uniform normal velocity radiates a monopole exp(ikr)/r exactly
    mesh, frames = sphere2
    k = 0.8
    dphi = np.full(mesh.n_nodes, (1j * k - 1.0) * np.exp(1j * k), dtype=complex)
    sol = solve_neumann(mesh, frames, k, dphi)
    assert np.max(np.abs(sol.phi - np.exp(1j * k))) < 1e-3
    r = 3.0
    val = evaluate_field(mesh, sol, [[0.0, 0.0, r]])[0]
    assert abs(val - np.exp(1j * k * r) / r) < 1e-3 / r


# ---------------------------------------------------------------- velocity data and sweeps


def test_velocity_boundary(sphere1):
    mesh, _ = sphere1
    v = velocity_boundary(mesh, [0], 1.5j)
    driven = np.unique(mesh.elements[mesh.tags == 0])
    assert np.all(v[driven] == 1.5j)
    assert np.count_nonzero(v) == driven.size
    assert not velocity_boundary(mesh, [99]).any()


def test_sweep_shapes_and_callback(sphere1):
    mesh, frames = sphere1
    probes = np.array([[0.0, 0.0, 1.5], [0.0, 0.0, -1.5]])
    seen = []
    res = sweep(mesh, frames, [0.5, 1.0], probes, callback=lambda ka, s, v: seen.append(ka))
    assert seen == [0.5, 1.0]
    assert res.max_abs.shape == (2,) and res.argmax.shape == (2,)
    assert res.peak_ka in (0.5, 1.0)
    assert np.all(res.residual < 1e-10)
    with pytest.raises(ValueError):
        sweep(mesh, frames, [], probes)


def test_sweep_formulations_agree_away_from_resonance(sphere2):
    mesh, frames = sphere2
    probes = sphere_points(8, 1.5)
    a = sweep(mesh, frames, [1.0], probes, "standard")
    b = sweep(mesh, frames, [1.0], probes, "burton-miller")
    assert a.max_abs[0] == pytest.approx(b.max_abs[0], rel=5e-3)


# ---------------------------------------------------------------- Helmholtz resonator


def test_resonator_cavity_centre_pressure():
    from nsbem.geometry import cavity_probes, generate_resonator_mesh, node_frames

    mesh = generate_resonator_mesh(refinement=2)
    centre = cavity_probes()[62:63]
    assert np.allclose(centre, 0.0)
    res = sweep(mesh, node_frames(mesh), [0.05, 0.5], centre, direction=(1.0, 0.0, 0.0))
    assert res.max_abs[0] == pytest.approx(1.05, rel=0.05)
    assert res.max_abs[1] == pytest.approx(0.25, rel=0.2)
