"""Batch command line interface.

Subcommands
-----------
``solve``      one wavenumber: surface unknowns and optional probe values
``sweep``      a ``ka`` grid: maximum field magnitude over probes per ``ka``
``field``      one wavenumber: field on a regular grid (CSV and legacy VTK)
``validate``   built-in oracle suite (no config needed)
``mesh-info``  mesh statistics

Exit status is 0 on success, 1 on a runtime failure and 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

logger = logging.getLogger("nsbem.cli")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="run configuration (INI)")
    common.add_argument("--out", type=Path, help="output directory (overrides run.output)")
    common.add_argument(
        "--threads", type=int, default=None,
        help="worker threads for assembly (default: hardware parallelism)",
    )
    common.add_argument("--quiet", action="store_true", help="only report warnings and errors")
    parser = argparse.ArgumentParser(
        prog="nsbem",
        description="Desingularised boundary element solver for 3D Helmholtz problems.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, text in (
        ("solve", "solve at wave.ka and write surface and probe values"),
        ("sweep", "solve over the [sweep] ka grid and tabulate probe maxima"),
        ("field", "evaluate the field on the [grid] points"),
        ("validate", "run the built-in oracle suite"),
        ("mesh-info", "print mesh statistics"),
    ):
        sub.add_parser(name, help=text, parents=[common])
    return parser


def _configure_threads(requested: Optional[int]) -> int:
    """Size the assembly thread pool; must run before numba starts its workers."""
    threads = requested if requested is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError("--threads must be positive")
    os.environ["NUMBA_NUM_THREADS"] = str(threads)
    import numba

    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    threads = min(threads, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(threads)
    return threads


# ---------------------------------------------------------------------------
# scenario plumbing


@dataclass
class _Context:
    """Per-run objects reused across wavenumbers."""

    cfg: object
    mesh: object
    frames: object
    quadrature: object
    locator: object
    probes: Optional[object] = None
    tangential: Optional[object] = None


@dataclass
class _Solved:
    """Scenario-independent view of one solve."""

    ka: float
    field_name: str
    surface_columns: list
    surface_data: object
    evaluate: Callable
    oracle: Optional[Callable]
    residual: float
    condition: float
    timings: dict = field(default_factory=dict)


def _build_mesh(cfg):
    from .geometry import (
        generate_resonator_mesh,
        generate_sphere_mesh,
        generate_transducer_mesh,
        load_mesh,
    )
    from .geometry.revolution import DishParams

    spec = cfg.mesh
    if spec.path is not None:
        return load_mesh(spec.path, spec.format, spec.characteristic_length)
    if spec.generator == "sphere":
        return generate_sphere_mesh(spec.radius, spec.refinement)
    if spec.generator == "resonator":
        return generate_resonator_mesh(refinement=spec.refinement, element_size=spec.element_size)
    return generate_transducer_mesh(DishParams(), cfg.separation, spec.element_size or 0.2)


def _probes(cfg, mesh):
    import numpy as np

    from .geometry import cavity_probes, sphere_points

    a = mesh.characteristic_length
    if cfg.probe_points is not None:
        return np.array(cfg.probe_points, dtype=float)
    if cfg.probe_preset == "cavity":
        return cavity_probes(a=a)
    if cfg.probe_preset == "sphere":
        return sphere_points(cfg.probe_count, cfg.probe_radius * a)
    return None


def _context(cfg, need_probes: bool = False) -> _Context:
    from .assembly import MeshQuadrature, QuadratureConfig, tangential_ops
    from .errors import ConfigError
    from .geometry import SurfaceLocator, node_frames

    mesh = _build_mesh(cfg)
    frames = node_frames(mesh)
    try:
        qcfg = QuadratureConfig(**cfg.quadrature)
    except Exception as exc:
        raise ConfigError(f"quadrature: {exc}") from None
    ctx = _Context(cfg, mesh, frames, MeshQuadrature(mesh, qcfg), SurfaceLocator(mesh))
    ctx.probes = _probes(cfg, mesh)
    if need_probes and ctx.probes is None:
        raise ConfigError("probes: this command needs probes.points or probes.preset")
    if cfg.scenario == "dielectric" or cfg.formulation == "burton-miller":
        ctx.tangential = tangential_ops(mesh, frames)
    logger.info("mesh %s: %d nodes, %d elements", mesh.fingerprint[:12], mesh.n_nodes,
                mesh.n_elements)
    return ctx


def _masked(ctx, points, fn, interior_ok: bool, width: int):
    """Evaluate ``fn`` at exterior points (and interior ones if allowed); NaN elsewhere.

    Points on the surface are NaN as well.
    """
    import numpy as np

    from .assembly.field import ON_SURFACE_TOLERANCE

    pts = np.atleast_2d(np.asarray(points, float))
    out = np.full((len(pts), width), np.nan + 0j)
    prox = ctx.locator.query(pts)
    keep = np.ones(len(pts), bool) if interior_ok else prox.side > 0
    on_surface = prox.distance < ON_SURFACE_TOLERANCE * ctx.mesh.characteristic_length
    if on_surface.any():
        logger.warning("%d evaluation points lie on the surface; reported as NaN",
                       int(on_surface.sum()))
        keep &= ~on_surface
    if keep.any():
        out[keep] = np.asarray(fn(pts[keep])).reshape(int(keep.sum()), width)
    return out


def _solve_one(ctx: _Context, ka: float) -> _Solved:
    import numpy as np

    cfg, mesh, frames, mq = ctx.cfg, ctx.mesh, ctx.frames, ctx.quadrature
    a = mesh.characteristic_length
    k = ka / a
    sphere = cfg.mesh.generator == "sphere"
    if cfg.scenario in ("acoustic-hard", "demo-transducer"):
        from .acoustics import PlaneWave, evaluate_field, solve_hard, solve_neumann, velocity_boundary
        from .geometry.revolution import TAG_DISH_FRONT

        if cfg.scenario == "acoustic-hard":
            wave = PlaneWave(k, np.array(cfg.direction), cfg.amplitude)
            sol = solve_hard(
                mesh, frames, wave, cfg.formulation, beta=cfg.beta, quadrature=mq,
                tangential=ctx.tangential,
            )

            def evaluate(p):
                return evaluate_field(mesh, sol, p, mq, ctx.locator) + wave.evaluate(p)
        else:
            v = velocity_boundary(mesh, [TAG_DISH_FRONT], cfg.velocity)
            sol = solve_neumann(
                mesh, frames, k, v, cfg.formulation, beta=cfg.beta, quadrature=mq,
                tangential=ctx.tangential,
            )

            def evaluate(p):
                return evaluate_field(mesh, sol, p, mq, ctx.locator)
        oracle = None
        if sphere and cfg.scenario == "acoustic-hard":
            from .oracles import rigid_sphere_scatter

            def oracle(p):
                r = np.linalg.norm(p, axis=1)
                mu = np.clip(p @ np.array(cfg.direction) / r, -1.0, 1.0)
                scattered = evaluate_field(mesh, sol, p, mq, ctx.locator)
                ref = cfg.amplitude * rigid_sphere_scatter(ka, r / a, np.arccos(mu))
                return scattered, ref
        cols = ["re_phi", "im_phi", "re_dphi_dn", "im_dphi_dn"]
        data = np.stack([sol.phi.real, sol.phi.imag, sol.dphi_dn.real, sol.dphi_dn.imag], 1)
        return _Solved(
            ka, "phi", cols, data,
            lambda p: _masked(ctx, p, evaluate, False, 1), oracle,
            sol.solve_residual, sol.condition, sol.timings,
        )

    from .electromagnetics import evaluate_em_field, incident_em, solve_dielectric, solve_pec
    from .io import complex_columns

    inc = incident_em(k, cfg.direction, cfg.polarization, mesh, frames, cfg.amplitude)
    if cfg.scenario == "pec":
        sol = solve_pec(mesh, frames, inc, mq)
        interior_ok = False
    else:
        sol = solve_dielectric(mesh, frames, inc, cfg.eps_ratio, k * cfg.k_in_ratio, mq,
                               ctx.tangential)
        interior_ok = True

    def evaluate(p):
        return evaluate_em_field(mesh, sol, p, mq, ctx.locator)

    oracle = None
    if sphere:
        from .oracles import mie_dielectric, mie_pec

        def oracle(p):
            if cfg.scenario == "pec":
                ref = mie_pec(ka, p, cfg.direction, cfg.polarization, a)
            else:
                ref = mie_dielectric(ka, cfg.k_in_ratio, p, cfg.direction, cfg.polarization, a)
            return evaluate(p), cfg.amplitude * ref
    c1, d1 = complex_columns("E", sol.E)
    c2, d2 = complex_columns("dE_dn", sol.dE_dn)
    return _Solved(
        ka, "E", c1 + c2, np.hstack([d1, d2]),
        lambda p: _masked(ctx, p, evaluate, interior_ok, 3), oracle,
        sol.residual, sol.condition, sol.timings,
    )


def _require_ka(cfg) -> float:
    from .errors import ConfigError

    if cfg.ka is None:
        raise ConfigError("wave.ka is required for this command")
    return cfg.ka


def _field_table(points, values):
    import numpy as np

    from .io import complex_columns

    name = "phi" if values.shape[1] == 1 else "E"
    cols, data = complex_columns(name, values)
    mag = np.linalg.norm(values, axis=1)
    return ["x", "y", "z"] + cols + [f"abs_{name}"], np.hstack([points, data, mag[:, None]])


def _mesh_record(mesh) -> dict:
    return {
        "fingerprint": mesh.fingerprint,
        "n_nodes": mesh.n_nodes,
        "n_elements": mesh.n_elements,
        "characteristic_length": mesh.characteristic_length,
    }


def _solved_record(s: _Solved) -> dict:
    return {"ka": s.ka, "residual": s.residual, "condition": s.condition, "timings": s.timings}


def cmd_solve(cfg, out: Path) -> dict:
    import numpy as np

    from .io import write_csv

    ka = _require_ka(cfg)
    ctx = _context(cfg)
    s = _solve_one(ctx, ka)
    mesh = ctx.mesh
    write_csv(
        out / "surface.csv", ["node", "x", "y", "z"] + s.surface_columns,
        np.hstack([np.arange(mesh.n_nodes)[:, None], mesh.nodes, s.surface_data]),
        f"solve {cfg.scenario} ka={ka:.17g}",
    )
    files = ["surface.csv"]
    if ctx.probes is not None:
        cols, data = _field_table(ctx.probes, s.evaluate(ctx.probes))
        write_csv(out / "probes.csv", cols, data, f"probes {cfg.scenario} ka={ka:.17g}")
        files.append("probes.csv")
    return {"mesh": _mesh_record(mesh), "solves": [_solved_record(s)], "files": files}


def cmd_sweep(cfg, out: Path, report: Callable[[str], None]) -> dict:
    import numpy as np

    from .errors import ConfigError
    from .io import write_csv

    if cfg.sweep is None:
        raise ConfigError("sweep: a [sweep] section with start, stop and step is required")
    ctx = _context(cfg, need_probes=True)
    rows, records = [], []
    with_oracle = False
    for ka in cfg.sweep.values():
        s = _solve_one(ctx, float(ka))
        vals = s.evaluate(ctx.probes)
        mags = np.linalg.norm(vals, axis=1)
        finite = np.where(np.isfinite(mags), mags, -np.inf)
        j = int(np.argmax(finite))
        row = [ka, mags[j], j, s.residual, s.condition]
        if s.oracle is not None:
            with_oracle = True
            got, ref = s.oracle(ctx.probes)
            got = np.asarray(got).reshape(len(ctx.probes), -1)
            ref = np.asarray(ref).reshape(len(ctx.probes), -1)
            err = np.max(np.linalg.norm(got - ref, axis=1)) / np.max(np.linalg.norm(ref, axis=1))
            row.append(err)
        rows.append(row)
        records.append(_solved_record(s))
        report(f"ka={ka:.6g} max|{s.field_name}|={mags[j]:.6g} probe={j}"
               + (f" oracle_error={row[-1]:.3e}" if s.oracle is not None else ""))
    cols = ["ka", "max_abs", "argmax_probe", "residual", "condition"]
    if with_oracle:
        cols.append("oracle_error")
    write_csv(out / "sweep.csv", cols, np.array(rows, float), f"sweep {cfg.scenario}")
    return {"mesh": _mesh_record(ctx.mesh), "solves": records, "files": ["sweep.csv"],
            "n_probes": int(len(ctx.probes))}


def cmd_field(cfg, out: Path) -> dict:
    from .errors import ConfigError
    from .io import write_csv, write_vtk_structured_points

    if cfg.grid is None:
        raise ConfigError("grid: a [grid] section with origin, spacing and shape is required")
    ka = _require_ka(cfg)
    ctx = _context(cfg)
    s = _solve_one(ctx, ka)
    pts = cfg.grid.points()
    vals = s.evaluate(pts)
    cols, data = _field_table(pts, vals)
    write_csv(out / "field.csv", cols, data, f"field {cfg.scenario} ka={ka:.17g}")
    write_vtk_structured_points(
        out / "field.vtk", data[:, -1], cfg.grid.origin, cfg.grid.spacing, cfg.grid.shape,
        f"abs_{s.field_name}", f"nsbem {cfg.scenario} |{s.field_name}| ka={ka:.6g}",
    )
    return {"mesh": _mesh_record(ctx.mesh), "solves": [_solved_record(s)],
            "files": ["field.csv", "field.vtk"], "grid_points": int(len(pts))}


def cmd_mesh_info(cfg, report: Callable[[str], None]) -> dict:
    import numpy as np

    from .geometry import node_frames

    mesh = _build_mesh(cfg)
    frames = node_frames(mesh)
    corners = mesh.nodes[mesh.elements[:, :3]]
    edges = np.linalg.norm(corners - np.roll(corners, 1, axis=1), axis=2)
    info = _mesh_record(mesh)
    info.update(
        area=mesh.total_area(),
        volume=mesh.enclosed_volume(),
        min_edge=float(edges.min()),
        max_edge=float(edges.max()),
        kappa_min=float(frames.kappa.min()),
        kappa_max=float(frames.kappa.max()),
    )
    for key in ("fingerprint", "n_nodes", "n_elements", "characteristic_length", "area",
                "volume", "min_edge", "max_edge", "kappa_min", "kappa_max"):
        value = info[key]
        report(f"{key}: {value:.10g}" if isinstance(value, float) else f"{key}: {value}")
    return info


def _run(args, report: Callable[[str], None]) -> int:
    from .config import load_config
    from .errors import ConfigError
    from .io import write_manifest

    if args.command == "validate":
        from .assembly import QuadratureConfig
        from .validation import run_suite

        qcfg = None
        if args.config is not None:
            qcfg = QuadratureConfig(**load_config(args.config).quadrature)
        results = run_suite(qcfg, report)
        failed = sum(not r.passed for r in results)
        report(f"{len(results) - failed}/{len(results)} checks passed")
        return EXIT_OK if failed == 0 else EXIT_RUNTIME

    if args.config is None:
        raise ConfigError(f"{args.command} needs --config")
    cfg = load_config(args.config)
    if args.command == "mesh-info":
        cmd_mesh_info(cfg, report)
        return EXIT_OK

    out = args.out or cfg.output or Path("nsbem-out")
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if args.command == "solve":
        record = cmd_solve(cfg, out)
    elif args.command == "sweep":
        record = cmd_sweep(cfg, out, report)
    else:
        record = cmd_field(cfg, out)
    record.update(
        command=args.command,
        scenario=cfg.scenario,
        config=cfg.raw,
        threads=args.threads_used,
        wall_seconds=time.perf_counter() - t0,
    )
    write_manifest(out / "manifest.json", record)
    report(f"wrote {', '.join(record['files'])} and manifest.json to {out}")
    return EXIT_OK


def main(argv=None) -> int:
    """Entry point; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    def report(line: str) -> None:
        print(line, flush=True)

    try:
        args.threads_used = _configure_threads(args.threads)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    from .errors import ConfigError, NsbemError

    try:
        return _run(args, report)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NsbemError, ValueError, MemoryError, OSError) as exc:
        print(f"error ({args.command}): {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
