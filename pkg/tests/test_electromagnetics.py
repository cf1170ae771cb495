"""Field-only electromagnetic scattering by conducting and dielectric spheres."""

from __future__ import annotations

import numpy as np
import pytest

from nsbem.assembly import MeshQuadrature
from nsbem.electromagnetics import (
    MaterialError,
    divergence_check,
    evaluate_em_field,
    incident_em,
    solve_dielectric,
    solve_pec,
)
from nsbem.geometry import sphere_points
from nsbem.oracles import mie_dielectric, mie_pec

Z = (0.0, 0.0, 1.0)
X = (1.0, 0.0, 0.0)


@pytest.fixture(scope="module")
def pec2(sphere2):
    mesh, frames = sphere2
    mq = MeshQuadrature(mesh)
    inc = incident_em(1.0, Z, X, mesh, frames)
    return solve_pec(mesh, frames, inc, mq), mq


@pytest.fixture(scope="module")
def diel2(sphere2):
    mesh, frames = sphere2
    mq = MeshQuadrature(mesh)
    inc = incident_em(1.0, Z, X, mesh, frames)
    return solve_dielectric(mesh, frames, inc, 1.5625, quadrature=mq), mq


# ---------------------------------------------------------------- incident field


def test_incident_sampling(sphere1):
    mesh, frames = sphere1
    inc = incident_em(1.7, Z, X, mesh, frames, amplitude=0.5j)
    assert np.allclose(inc.E, inc.evaluate(mesh.nodes))
    assert np.allclose(frames.to_cartesian(inc.local), inc.E, atol=1e-14)
    assert np.allclose(frames.to_cartesian(inc.dlocal), inc.dE_dn, atol=1e-14)
    h = 1e-6
    fd = (inc.evaluate(mesh.nodes + h * frames.normal)
          - inc.evaluate(mesh.nodes - h * frames.normal)) / (2 * h)
    assert np.allclose(inc.dE_dn, fd, atol=1e-8)


def test_incident_validation(sphere1):
    mesh, frames = sphere1
    with pytest.raises(ValueError):
        incident_em(1.0, Z, (0.6, 0.0, 0.8), mesh, frames)
    with pytest.raises(ValueError):
        incident_em(1.0, (0.0, 0.0, 2.0), X, mesh, frames)
    with pytest.raises(ValueError):
        incident_em(0.0, Z, X, mesh, frames)


def test_incident_is_divergence_free(sphere1):
    mesh, frames = sphere1
    inc = incident_em(2.0, (0.0, 0.6, 0.8), X, mesh, frames)
    assert divergence_check(mesh, inc, sphere_points(10, 3.0), 1e-4) < 1e-8


# ---------------------------------------------------------------- perfect conductor


def test_pec_tangential_total_field_vanishes(sphere2, pec2):
    _, frames = sphere2
    sol, _ = pec2
    total = frames.to_local(sol.E) + sol.incident.local
    assert np.max(np.abs(total[:, 1:])) < 1e-12


def test_pec_surface_divergence(sphere2, pec2):
    # with E_t = 0 the divergence condition reduces to n . dE/dn + kappa E_n = 0
    _, frames = sphere2
    sol, _ = pec2
    e_tot = frames.to_local(sol.E) + sol.incident.local
    d_tot = frames.to_local(sol.dE_dn) + sol.incident.dlocal
    scale = np.max(np.linalg.norm(sol.E + sol.incident.E, axis=1))
    assert np.max(np.abs(d_tot[:, 0] + frames.kappa * e_tot[:, 0])) < 1e-2 * sol.k * scale


def test_pec_against_mie(sphere2, pec2):
    mesh, _ = sphere2
    sol, mq = pec2
    pts = sphere_points(20, 3.0)
    got = evaluate_em_field(mesh, sol, pts, mq)
    ref = mie_pec(1.0, pts)
    assert np.max(np.linalg.norm(got - ref, axis=1)) < 0.02 * np.max(np.linalg.norm(ref, axis=1))
    assert sol.residual < 1e-12


def test_pec_exterior_divergence(sphere2, pec2):
    mesh, _ = sphere2
    sol, mq = pec2
    assert divergence_check(mesh, sol, sphere_points(6, 2.0), 1e-3, mq) < 1e-2


def test_pec_zero_incident(sphere1):
    mesh, frames = sphere1
    inc = incident_em(1.0, Z, X, mesh, frames, amplitude=0.0)
    sol = solve_pec(mesh, frames, inc)
    assert not sol.E.any()
    assert divergence_check(mesh, sol, [[0.0, 0.0, 3.0]], 1e-3) == 0.0


def test_pec_polarization_superposition(sphere1):
    mesh, frames = sphere1
    mq = MeshQuadrature(mesh)
    c, s = np.cos(0.4), np.sin(0.4)
    sx = solve_pec(mesh, frames, incident_em(1.0, Z, X, mesh, frames), mq)
    sy = solve_pec(mesh, frames, incident_em(1.0, Z, (0, 1, 0), mesh, frames), mq)
    sr = solve_pec(mesh, frames, incident_em(1.0, Z, (c, s, 0), mesh, frames), mq)
    assert np.max(np.abs(sr.E - (c * sx.E + s * sy.E))) < 1e-6
    assert np.max(np.abs(sr.dE_dn - (c * sx.dE_dn + s * sy.dE_dn))) < 1e-6


def test_pec_interior_points_rejected(sphere1):
    mesh, frames = sphere1
    sol = solve_pec(mesh, frames, incident_em(1.0, Z, X, mesh, frames))
    with pytest.raises(ValueError):
        evaluate_em_field(mesh, sol, [[0.0, 0.0, 0.2]])


def test_pec_mesh_mismatch(sphere1, sphere2):
    mesh1, frames1 = sphere1
    mesh2, frames2 = sphere2
    inc = incident_em(1.0, Z, X, mesh1, frames1)
    with pytest.raises(ValueError):
        solve_pec(mesh2, frames2, inc)


# ---------------------------------------------------------------- dielectric


def test_dielectric_interface_conditions(sphere2, diel2):
    _, frames = sphere2
    sol, _ = diel2
    out = frames.to_local(sol.E) + sol.incident.local
    inn = frames.to_local(sol.E_tr)
    assert np.allclose(out[:, 1:], inn[:, 1:], atol=1e-12)
    assert np.allclose(out[:, 0], sol.eps_ratio * inn[:, 0], atol=1e-12)


def test_dielectric_against_mie(sphere2, diel2):
    mesh, _ = sphere2
    sol, mq = diel2
    outside = sphere_points(12, 2.0)
    inside = sphere_points(12, 0.5)
    m = np.sqrt(1.5625)
    for pts in (outside, inside):
        got = evaluate_em_field(mesh, sol, pts, mq)
        ref = mie_dielectric(1.0, m, pts)
        err = np.max(np.linalg.norm(got - ref, axis=1))
        assert err < 0.02 * np.max(np.linalg.norm(ref, axis=1))


def test_dielectric_transparent_limit(sphere1):
    mesh, frames = sphere1
    inc = incident_em(1.0, Z, X, mesh, frames)
    sol = solve_dielectric(mesh, frames, inc, 1.0)
    # the scattered field is pure discretisation error, 6e-4 on this coarse mesh
    assert np.linalg.norm(sol.E) < 1e-3 * np.linalg.norm(inc.E)
    assert np.linalg.norm(sol.E_tr - inc.E) < 1e-3 * np.linalg.norm(inc.E)


def test_dielectric_material_errors(sphere1):
    mesh, frames = sphere1
    inc = incident_em(1.0, Z, X, mesh, frames)
    for eps in (0.0, -2.0, np.nan):
        with pytest.raises(MaterialError):
            solve_dielectric(mesh, frames, inc, eps)
    with pytest.raises(MaterialError):
        solve_dielectric(mesh, frames, inc, 2.0, k_in=1.0)
    # the sign of k_in is immaterial
    solve_dielectric(mesh, frames, inc, 4.0, k_in=-2.0)
