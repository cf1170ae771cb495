"""Run configuration parsing and validation."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from nsbem.config import GridSpec, SweepSpec, load_config, parse_config
from nsbem.errors import ConfigError

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

BASE = """
[run]
scenario = acoustic-hard
[mesh]
generator = sphere
refinement = 1
"""


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.ini")), ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert cfg.scenario
    assert cfg.raw


def test_defaults():
    cfg = parse_config(BASE)
    assert cfg.formulation == "standard"
    assert cfg.direction == (0.0, 0.0, 1.0)
    assert cfg.mesh.refinement == 1 and cfg.ka is None and cfg.sweep is None
    assert not cfg.is_em


def test_sweep_grid_length():
    cfg = load_config(CONFIGS / "rigid_sphere_wide_sweep.ini")
    assert len(cfg.sweep.values()) == 117
    assert cfg.sweep.values()[-1] == pytest.approx(30.0)
    assert len(SweepSpec(2.8, 3.6, 0.05).values()) == 17


def test_grid_points_x_fastest():
    pts = GridSpec((0.0, 0.0, 0.0), (1.0, 2.0, 3.0), (2, 2, 1)).points()
    assert np.array_equal(pts, [[0, 0, 0], [1, 0, 0], [0, 2, 0], [1, 2, 0]])


def test_direction_is_normalised():
    cfg = parse_config(BASE + "[wave]\nka = 1\ndirection = 0 0 2\n")
    assert cfg.direction == (0.0, 0.0, 1.0)


@pytest.mark.parametrize(
    "extra, message",
    [
        ("[wave]\nka = abc\n", "wave.ka must be a number"),
        ("[wave]\nka = -1\n", "positive"),
        ("[wave]\nkaa = 1\n", "unknown key wave.kaa"),
        ("[bogus]\nx = 1\n", "unknown section [bogus]"),
        ("[sweep]\nstart = 1\nstop = 2\nstep = 0\n", "sweep.step must be positive"),
        ("[sweep]\nstart = 2\nstop = 1\nstep = 0.1\n", "sweep.stop"),
        ("[sweep]\nstart = 1\n", "sweep.stop is required"),
        ("[wave]\ndirection = 1 0\n", "wave.direction must be 3"),
        ("[wave]\ndirection = 0 0 0\n", "nonzero"),
        ("[probes]\npreset = cavity\n", "cavity needs"),
        ("[probes]\npreset = ring\n", "probes.preset"),
        ("[grid]\norigin = 0 0 0\nspacing = 0.1\nshape = 2 0 1\n", "grid.shape"),
        ("[quadrature]\nfar_degree = x\n", "far_degree"),
    ],
)
def test_invalid_values(extra, message):
    with pytest.raises(ConfigError, match=message.replace("[", r"\[").replace("]", r"\]")):
        parse_config(BASE + extra)


def test_scenario_rules():
    with pytest.raises(ConfigError, match="run.scenario is required"):
        parse_config("[mesh]\ngenerator = sphere\n")
    with pytest.raises(ConfigError, match="run.scenario must be one of"):
        parse_config("[run]\nscenario = optics\n[mesh]\ngenerator = sphere\n")
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config("[run]\nscenario = pec\n")
    with pytest.raises(ConfigError, match="acoustic scenarios only"):
        parse_config("[run]\nscenario = pec\nformulation = burton-miller\n"
                     "[mesh]\ngenerator = sphere\n")
    with pytest.raises(ConfigError, match="material.eps_ratio is required"):
        parse_config("[run]\nscenario = dielectric\n[mesh]\ngenerator = sphere\n")
    with pytest.raises(ConfigError, match="orthogonal"):
        parse_config("[run]\nscenario = pec\n[mesh]\ngenerator = sphere\n"
                     "[wave]\npolarization = 0 0 1\n")


def test_malformed_and_missing_files(tmp_path):
    with pytest.raises(ConfigError, match="malformed"):
        parse_config("no section header\n")
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.ini")


def test_mesh_path_relative_to_config(tmp_path):
    from nsbem.geometry import generate_sphere_mesh, save_mesh

    save_mesh(generate_sphere_mesh(1.0, 0), tmp_path / "s.mesh")
    (tmp_path / "run.ini").write_text("[run]\nscenario = pec\n[mesh]\npath = s.mesh\n")
    cfg = load_config(tmp_path / "run.ini")
    assert cfg.mesh.path == tmp_path / "s.mesh"
