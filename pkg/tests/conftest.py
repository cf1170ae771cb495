"""Shared fixtures and the acceptance summary printed at the end of a run."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nsbem.geometry import generate_sphere_mesh, node_frames

settings.register_profile(
    "nsbem", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("nsbem")

ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_results(request):
    """Criterion number -> (passed, detail), printed in the terminal summary."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


@pytest.fixture(scope="session")
def sphere1():
    mesh = generate_sphere_mesh(1.0, 1)
    return mesh, node_frames(mesh)


@pytest.fixture(scope="session")
def sphere2():
    mesh = generate_sphere_mesh(1.0, 2)
    return mesh, node_frames(mesh)


@pytest.fixture(scope="session")
def sphere3():
    mesh = generate_sphere_mesh(1.0, 3)
    return mesh, node_frames(mesh)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        passed, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
