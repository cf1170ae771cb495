"""Acceptance criteria, each run at its stated tolerance and runtime budget.

Every test records ``(passed, detail)`` in the session-wide
``acceptance_results`` fixture; the terminal summary prints one line per
criterion.  A criterion that fails is reported and fails its test, it is
never relaxed here.
"""

from __future__ import annotations

import subprocess
import sys
import time

import numpy as np
import pytest

from nsbem.acoustics import PlaneWave, evaluate_field, solve_hard, sweep
from nsbem.assembly import MeshQuadrature, assemble, tangential_ops
from nsbem.electromagnetics import (
    divergence_check,
    evaluate_em_field,
    incident_em,
    solve_dielectric,
    solve_pec,
)
from nsbem.geometry import (
    cavity_probes,
    generate_resonator_mesh,
    generate_sphere_mesh,
    node_frames,
    sphere_points,
)
from nsbem.io import read_csv
from nsbem.kernels import eval_kernels, regularized_limit
from nsbem.oracles import dielectric_sphere_field, mie_pec, rigid_sphere_scatter
from nsbem.validation import point_source_residual

FOUR_PI = 4.0 * np.pi

pytestmark = pytest.mark.slow


def _record(results, number, passed, detail):
    results[number] = (bool(passed), detail)
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(line)
    assert passed, line


def _scatter_error(mesh, sol, mq, ka, points):
    r = np.linalg.norm(points, axis=1)
    got = evaluate_field(mesh, sol, points, quadrature=mq)
    ref = rigid_sphere_scatter(ka, r, np.arccos(points[:, 2] / r))
    return float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))


@pytest.fixture(scope="module")
def pec3(sphere3):
    mesh, frames = sphere3
    mq = MeshQuadrature(mesh)
    t0 = time.perf_counter()
    sol = solve_pec(mesh, frames, incident_em(1.0, (0, 0, 1), (1, 0, 0), mesh, frames), mq)
    return sol, mq, time.perf_counter() - t0


def test_criterion_01_constant_potential(acceptance_results):
    t0 = time.perf_counter()
    mesh = generate_sphere_mesh(1.0, 3)
    mats = assemble(mesh, node_frames(mesh), 0.0, True, store_g=False)
    err = float(np.max(np.abs(mats.H.sum(axis=1) - FOUR_PI)))
    dt = time.perf_counter() - t0
    _record(acceptance_results, 1, err < 1e-6 and dt < 30,
            f"max |H 1 - 4 pi| = {err:.2e} (< 1e-6), {dt:.1f} s (< 30 s)")


def test_criterion_02_point_sources(acceptance_results):
    # sources within 0.5a of the centre, as in the built-in validate suite; the
    # residual grows quickly as a source approaches the surface
    rng = np.random.default_rng(20240607)
    dirs = rng.normal(size=(20, 3))
    sources = dirs / np.linalg.norm(dirs, axis=1)[:, None] * rng.uniform(0.0, 0.5, (20, 1))
    t0 = time.perf_counter()
    worst = {k: point_source_residual(sources, k, 3, norm="l2") for k in (1.0, 2.0)}
    dt = time.perf_counter() - t0
    err = max(worst.values())
    _record(acceptance_results, 2, err < 1e-4 and dt < 120,
            "20 sources with |x| <= 0.5a, relative L2 residual " + ", ".join(f"ka={k:g}: {v:.2e}" for k, v in worst.items())
            + f" (< 1e-4), {dt:.1f} s (< 120 s)")


def test_criterion_03_convergence_near_pi(acceptance_results):
    ka = 1.01 * np.pi
    pts = sphere_points(20, 1.2)
    errors, times = {}, {}
    for refinement in (3, 4):
        t0 = time.perf_counter()
        mesh = generate_sphere_mesh(1.0, refinement)
        mq = MeshQuadrature(mesh)
        sol = solve_hard(mesh, node_frames(mesh), PlaneWave(ka), "standard", quadrature=mq)
        errors[mesh.n_nodes] = _scatter_error(mesh, sol, mq, ka, pts)
        times[mesh.n_nodes] = time.perf_counter() - t0
        del sol, mq
    (n3, e3), (n4, e4) = errors.items()
    passed = e3 <= 3e-3 and e4 <= 3e-4 and times[n4] <= 600
    _record(acceptance_results, 3, passed,
            f"ka=1.01 pi, r=1.2a: {e3:.2e} at {n3} nodes (<= 3e-3), {e4:.2e} at {n4} nodes "
            f"(<= 3e-4), large mesh {times[n4]:.0f} s (<= 600 s)")


def test_criterion_04_fictitious_frequencies(acceptance_results, sphere3):
    mesh, frames = sphere3
    mq = MeshQuadrature(mesh)
    ops = tangential_ops(mesh, frames)
    pts = sphere_points(20, 1.2)
    low = 2.8 + 0.05 * np.arange(17)
    high = 6.2 + 0.05 * np.arange(9)
    grid = np.concatenate([low, high])
    errors = {"burton-miller": [], "standard": []}
    t0 = time.perf_counter()
    for ka in grid:
        for form, err in errors.items():
            sol = solve_hard(mesh, frames, PlaneWave(ka), form, quadrature=mq, tangential=ops)
            err.append(_scatter_error(mesh, sol, mq, ka, pts))
    dt = time.perf_counter() - t0
    # off the grid: the standard formulation exactly at the fictitious frequency
    at_pi = _scatter_error(
        mesh, solve_hard(mesh, frames, PlaneWave(np.pi), "standard", quadrature=mq), mq, np.pi, pts
    )
    bm = np.array(errors["burton-miller"])
    std = np.array(errors["standard"])
    near_pi = np.abs(grid - np.pi) < 0.2
    bm_ratio = bm.max() / np.median(bm)
    std_ratio = std[near_pi].max() / np.median(std)
    passed = bm.max() < 1e-2 and bm_ratio <= 3 and std_ratio > 10 and dt <= 900
    _record(
        acceptance_results, 4, passed,
        f"Burton-Miller max error {bm.max():.2e} (< 1e-2) at ka={grid[bm.argmax()]:.2f}, "
        f"max/median {bm_ratio:.2f} (<= 3); standard max/median near pi {std_ratio:.2f} (> 10) "
        f"at ka={grid[near_pi][std[near_pi].argmax()]:.2f}; {dt:.0f} s (<= 900 s); "
        f"for reference the standard error at ka = pi exactly is {at_pi:.2e}",
    )


def test_criterion_05_kernel_limit(acceptance_results):
    t0 = time.perf_counter()
    k = 1.0
    n = np.array([0.0, 0.0, 1.0])
    n0 = np.array([0.0, 0.6, 0.8])
    ex = np.array([1.0, 0.0, 0.0])  # tangential to both normals
    rs = 0.2 / 2.0 ** np.arange(8)
    table = [r * eval_kernels(r * ex, np.zeros(3), k, n, n0).d2_diff for r in rs]
    for m in range(1, len(rs)):  # Neville extrapolation to r = 0
        table = [
            (rs[i] * table[i + 1] - rs[i + m] * table[i]) / (rs[i] - rs[i + m])
            for i in range(len(table) - 1)
        ]
    limit = regularized_limit(k, n, n0).d2_coeff
    err = abs(table[0] - limit)
    dt = time.perf_counter() - t0
    _record(acceptance_results, 5, err < 1e-8 and dt < 1,
            f"Richardson limit {table[0].real:.12f} vs k^2/2 n.n0 = {limit.real:.12f}, "
            f"error {err:.1e} (< 1e-8), {dt:.2f} s (< 1 s)")


def test_criterion_06_helmholtz_resonator(acceptance_results):
    t0 = time.perf_counter()
    mesh = generate_resonator_mesh(refinement=2)
    frames = node_frames(mesh)
    grid = 0.15 + 0.005 * np.arange(31)
    res = sweep(mesh, frames, np.concatenate([[0.05], grid]), cavity_probes(),
                direction=(1.0, 0.0, 0.0))
    dt = time.perf_counter() - t0
    p_low = res.max_abs[0]
    peak = float(grid[int(np.argmax(res.max_abs[1:]))])
    passed = 0.195 <= peak <= 0.255 and 1.0 <= p_low <= 1.1 and dt <= 1200
    _record(acceptance_results, 6, passed,
            f"{mesh.n_nodes} nodes: peak at ka={peak:.3f} (in [0.195, 0.255]), "
            f"max |p| at ka=0.05 = {p_low:.4f} (in [1.0, 1.1]), {dt:.0f} s (<= 1200 s)")


def test_criterion_07_pec_mie(acceptance_results, sphere3, pec3):
    mesh, _ = sphere3
    sol, mq, t_solve = pec3
    t0 = time.perf_counter()
    pts = sphere_points(20, 2.0)
    got = np.linalg.norm(evaluate_em_field(mesh, sol, pts, mq), axis=1)
    ref = np.linalg.norm(mie_pec(1.0, pts), axis=1)
    err = float(np.max(np.abs(got - ref) / ref))
    dt = t_solve + time.perf_counter() - t0
    _record(acceptance_results, 7, err < 0.02 and dt <= 300,
            f"max relative |E_sc| error at r=2a {err:.2e} (< 2e-2), {dt:.0f} s (<= 300 s)")


def test_criterion_08_dielectric_limits(acceptance_results, sphere2):
    mesh, frames = sphere2
    mq = MeshQuadrature(mesh)
    ops = tangential_ops(mesh, frames)
    t0 = time.perf_counter()
    inc = incident_em(1.0, (0, 0, 1), (1, 0, 0), mesh, frames)
    clear = solve_dielectric(mesh, frames, inc, 1.0, quadrature=mq, tangential=ops)
    transparency = float(np.linalg.norm(clear.E) / np.linalg.norm(inc.E))
    static_inc = incident_em(1e-3, (0, 0, 1), (1, 0, 0), mesh, frames)
    static = solve_dielectric(mesh, frames, static_inc, 2.0, quadrature=mq, tangential=ops)
    inside = sphere_points(10, 0.5)
    got = evaluate_em_field(mesh, static, inside, mq)
    expected = dielectric_sphere_field(inside, np.array([1.0, 0.0, 0.0]), 2.0)
    static_err = float(np.max(np.linalg.norm(got - expected, axis=1)) / 0.75)
    dt = time.perf_counter() - t0
    passed = transparency < 1e-3 and static_err < 0.05 and dt <= 600
    _record(acceptance_results, 8, passed,
            f"{mesh.n_nodes} nodes: ||E_sc|| / ||E_inc|| at eps ratio 1 = {transparency:.1e} "
            f"(< 1e-3); interior field at ka=1e-3, eps_r=2 within {static_err:.1e} of 3/(eps_r+2) "
            f"(< 5e-2); {dt:.0f} s (<= 600 s)")


def test_criterion_09_divergence_free(acceptance_results, sphere3, pec3):
    mesh, _ = sphere3
    sol, mq, _ = pec3
    div = divergence_check(mesh, sol, sphere_points(10, 2.0), 1e-3, mq)
    _record(acceptance_results, 9, div < 1e-2,
            f"max |div E| / (k max |E|) at 10 points, r=2a: {div:.2e} (< 1e-2)")


DETERMINISM_CONFIG = """
[run]
scenario = acoustic-hard
formulation = burton-miller
[mesh]
generator = sphere
refinement = 2
[sweep]
start = 1.0
stop = 1.5
step = 0.25
[probes]
preset = sphere
count = 10
"""


def test_criterion_10_thread_determinism(acceptance_results, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(DETERMINISM_CONFIG)
    bodies = {}
    for threads in (1, 8):
        out = tmp_path / f"t{threads}"
        proc = subprocess.run(
            [sys.executable, "-m", "nsbem", "sweep", "--config", str(cfg), "--out", str(out),
             "--threads", str(threads), "--quiet"],
            capture_output=True, text=True, timeout=600,
        )
        assert proc.returncode == 0, proc.stderr
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0].startswith("#")
        bodies[threads] = lines[1:]
        assert read_csv(out / "sweep.csv")[1].shape == (3, 6)
    same = bodies[1] == bodies[8]
    _record(acceptance_results, 10, same,
            f"sweep.csv bodies with --threads 1 and --threads 8 "
            f"{'are bit-identical' if same else 'differ'} ({len(bodies[1]) - 1} rows)")
