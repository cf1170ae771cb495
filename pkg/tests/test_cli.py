"""Command line interface: exit codes, output files and formats."""

from __future__ import annotations

import json

import numpy as np
import pytest

from nsbem.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from nsbem.io import read_csv

SPHERE = """
[run]
scenario = {scenario}
[mesh]
generator = sphere
refinement = 1
[wave]
ka = 1.0
"""


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def _run(capsys, *args):
    code = main(["--threads", "1", "--quiet", *map(str, args)])
    return code, capsys.readouterr()


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in ("solve", "sweep", "field", "validate", "mesh-info"):
        assert name in out


def test_config_error_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, SPHERE.format(scenario="acoustic-hard") + "[wave]\n")
    code, io = _run(capsys, "solve", "--config", cfg)
    assert code == EXIT_CONFIG
    assert "config error" in io.err
    cfg = _write(tmp_path, "[run]\nscenario = pec\n[mesh]\ngenerator = sphere\nradius = -1\n")
    code, io = _run(capsys, "solve", "--config", cfg)
    assert code == EXIT_CONFIG and "mesh.radius must be positive" in io.err
    code, io = _run(capsys, "solve")
    assert code == EXIT_CONFIG and "needs --config" in io.err


def test_missing_ka_is_config_error(tmp_path, capsys):
    cfg = _write(tmp_path, "[run]\nscenario = pec\n[mesh]\ngenerator = sphere\n")
    code, io = _run(capsys, "solve", "--config", cfg, "--out", tmp_path / "o")
    assert code == EXIT_CONFIG and "wave.ka is required" in io.err


def test_bad_thread_count(capsys):
    code, io = _run(capsys, "validate", "--threads", "0")
    assert code == EXIT_CONFIG


def test_runtime_error_exit_code(tmp_path, capsys):
    (tmp_path / "bad.mesh").write_text("garbage\n")
    cfg = _write(tmp_path, "[run]\nscenario = pec\n[mesh]\npath = bad.mesh\n[wave]\nka = 1\n")
    code, io = _run(capsys, "solve", "--config", cfg, "--out", tmp_path / "o")
    assert code == EXIT_RUNTIME and "error (solve)" in io.err


def test_solve_outputs(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        SPHERE.format(scenario="acoustic-hard") + "[probes]\npoints = 0 0 2; 0 0 0.5\n",
    )
    out = tmp_path / "out"
    code, io = _run(capsys, "solve", "--config", cfg, "--out", out)
    assert code == EXIT_OK, io.err
    cols, data = read_csv(out / "surface.csv")
    assert cols[:4] == ["node", "x", "y", "z"] and "re_phi" in cols
    assert data.shape == (162, 8)
    cols, probes = read_csv(out / "probes.csv")
    assert cols == ["x", "y", "z", "re_phi", "im_phi", "abs_phi"]
    assert np.isfinite(probes[0, 5]) and np.isnan(probes[1, 5])  # interior probe of a hard body
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "solve" and manifest["threads"] == 1
    assert manifest["mesh"]["n_nodes"] == 162
    assert set(manifest["files"]) == {"surface.csv", "probes.csv"}


def test_sweep_outputs(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        SPHERE.format(scenario="acoustic-hard")
        + "[sweep]\nstart = 0.5\nstop = 1.0\nstep = 0.25\n[probes]\npreset = sphere\ncount = 5\n",
    )
    out = tmp_path / "out"
    code, io = _run(capsys, "sweep", "--config", cfg, "--out", out)
    assert code == EXIT_OK, io.err
    cols, data = read_csv(out / "sweep.csv")
    assert cols == ["ka", "max_abs", "argmax_probe", "residual", "condition", "oracle_error"]
    assert np.allclose(data[:, 0], [0.5, 0.75, 1.0])
    assert np.all(data[:, 5] < 0.05)
    assert io.out.count("ka=") == 3


def test_sweep_needs_probes(tmp_path, capsys):
    cfg = _write(tmp_path, SPHERE.format(scenario="acoustic-hard")
                 + "[sweep]\nstart = 0.5\nstop = 1.0\nstep = 0.25\n")
    code, io = _run(capsys, "sweep", "--config", cfg, "--out", tmp_path / "o")
    assert code == EXIT_CONFIG and "probes" in io.err


def test_field_outputs(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        SPHERE.format(scenario="pec") + "[grid]\norigin = -2 0 -2\nspacing = 1\nshape = 5 1 5\n",
    )
    out = tmp_path / "out"
    code, io = _run(capsys, "field", "--config", cfg, "--out", out)
    assert code == EXIT_OK, io.err
    cols, data = read_csv(out / "field.csv")
    assert len(data) == 25 and cols[-1] == "abs_E"
    centre = np.flatnonzero(np.all(data[:, :3] == 0.0, axis=1))
    assert np.isnan(data[centre, -1]).all()  # inside the conductor
    vtk = (out / "field.vtk").read_text().splitlines()
    assert vtk[0] == "# vtk DataFile Version 3.0"
    assert "DIMENSIONS 5 1 5" in vtk and "POINT_DATA 25" in vtk
    values = np.array(" ".join(vtk[10:]).split(), float)
    assert values.size == 25 and np.all(np.isfinite(values))


def test_dielectric_field_inside(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        SPHERE.format(scenario="dielectric")
        + "[material]\neps_ratio = 2.0\nk_in_ratio = 1.4142135623730951\n"
        + "[probes]\npoints = 0 0 0; 0 0 2\n",
    )
    code, io = _run(capsys, "solve", "--config", cfg, "--out", tmp_path / "o")
    assert code == EXIT_OK, io.err
    _, probes = read_csv(tmp_path / "o" / "probes.csv")
    assert np.all(np.isfinite(probes[:, -1]))


def test_mesh_info(tmp_path, capsys):
    cfg = _write(tmp_path, SPHERE.format(scenario="pec"))
    code, io = _run(capsys, "mesh-info", "--config", cfg)
    assert code == EXIT_OK
    lines = dict(line.split(": ", 1) for line in io.out.strip().splitlines())
    assert lines["n_nodes"] == "162" and lines["n_elements"] == "80"
    assert float(lines["area"]) == pytest.approx(4 * np.pi, rel=1e-2)


def test_validate(capsys):
    code, io = _run(capsys, "validate")
    assert code == EXIT_OK, io.out + io.err
    assert io.out.count("PASS") == 4
    assert "4/4 checks passed" in io.out
