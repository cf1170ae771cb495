"""Run configuration: an INI file with one section per concern.

Sections and keys (all optional unless noted)::

    [run]
    scenario = acoustic-hard | pec | dielectric | demo-transducer   (required)
    formulation = standard | burton-miller       (acoustic only)
    beta = <float>                               (Burton-Miller coupling length)
    output = <directory>

    [mesh]                                       (exactly one of generator, path)
    generator = sphere | resonator | transducer
    path = <mesh file>
    format = native | msh
    radius = 1.0                                 (sphere)
    refinement = 2                               (sphere, resonator)
    element_size = <float>                       (resonator, transducer)
    characteristic_length = 1.0                  (file meshes)

    [wave]
    ka = <float>                                 (solve and field)
    direction = 0 0 1
    polarization = 1 0 0                         (electromagnetic scenarios)
    amplitude = 1.0

    [sweep]
    start, stop, step = <float>                  (sweep; step > 0)

    [material]                                   (dielectric, both required)
    eps_ratio = eps_in / eps_out
    k_in_ratio = k_in / k_out

    [quadrature]
    far_degree, distant_degree, near_degree, duffy_order, near_ratio,
    distant_ratio, max_depth, field_max_depth

    [probes]
    points = x y z; x y z; ...
    preset = cavity | sphere                     (sphere: fibonacci points)
    radius = 1.2, count = 20                     (sphere preset)

    [grid]
    origin = x y z
    spacing = h  or  hx hy hz
    shape = nx ny nz

    [transducer]
    velocity = 1.0
    separation = 2.0

Wavenumbers are given as ``ka`` with ``a`` the characteristic length of
the mesh (sphere radius, resonator outer radius, dish aperture radius).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError

SCENARIOS = ("acoustic-hard", "pec", "dielectric", "demo-transducer")
GENERATORS = ("sphere", "resonator", "transducer")

_KEYS = {
    "run": {"scenario", "formulation", "beta", "output"},
    "mesh": {
        "generator", "path", "format", "radius", "refinement", "element_size",
        "characteristic_length",
    },
    "wave": {"ka", "direction", "polarization", "amplitude"},
    "sweep": {"start", "stop", "step"},
    "material": {"eps_ratio", "k_in_ratio"},
    "quadrature": {
        "far_degree", "distant_degree", "near_degree", "duffy_order", "near_ratio",
        "distant_ratio", "max_depth", "field_max_depth",
    },
    "probes": {"points", "preset", "radius", "count"},
    "grid": {"origin", "spacing", "shape"},
    "transducer": {"velocity", "separation"},
}
_INT_QUADRATURE = {"far_degree", "distant_degree", "near_degree", "duffy_order", "max_depth",
                   "field_max_depth"}


@dataclass(frozen=True)
class MeshSpec:
    """Where the surface mesh comes from."""

    generator: Optional[str] = None
    path: Optional[Path] = None
    format: str = "native"
    radius: float = 1.0
    refinement: int = 2
    element_size: Optional[float] = None
    characteristic_length: float = 1.0


@dataclass(frozen=True)
class SweepSpec:
    """Uniform ``ka`` grid ``start, start + step, ...`` up to ``stop``."""

    start: float
    stop: float
    step: float

    def values(self) -> np.ndarray:
        """Grid values, inclusive of ``stop`` up to rounding.

        Examples
        --------
        >>> len(SweepSpec(1.0, 30.0, 0.25).values())
        117
        """
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)


@dataclass(frozen=True)
class GridSpec:
    """Regular grid of evaluation points, ``x`` varying fastest."""

    origin: tuple
    spacing: tuple
    shape: tuple

    def points(self) -> np.ndarray:
        axes = [self.origin[i] + self.spacing[i] * np.arange(self.shape[i]) for i in range(3)]
        Z, Y, X = np.meshgrid(axes[2], axes[1], axes[0], indexing="ij")
        return np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration (see the module docstring for the file format)."""

    scenario: str
    mesh: MeshSpec
    formulation: str = "standard"
    beta: Optional[float] = None
    output: Optional[Path] = None
    ka: Optional[float] = None
    direction: tuple = (0.0, 0.0, 1.0)
    polarization: tuple = (1.0, 0.0, 0.0)
    amplitude: float = 1.0
    sweep: Optional[SweepSpec] = None
    eps_ratio: Optional[float] = None
    k_in_ratio: Optional[float] = None
    quadrature: dict = field(default_factory=dict)
    probe_points: Optional[tuple] = None
    probe_preset: Optional[str] = None
    probe_radius: float = 1.2
    probe_count: int = 20
    grid: Optional[GridSpec] = None
    velocity: float = 1.0
    separation: float = 2.0
    raw: dict = field(default_factory=dict)

    @property
    def is_em(self) -> bool:
        return self.scenario in ("pec", "dielectric")


def _float(sec, key, name=None, positive=False):
    text = sec.get(key)
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{name or key} must be a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{name or key} must be finite")
    if positive and value <= 0:
        raise ConfigError(f"{name or key} must be positive")
    return value


def _int(sec, key, name, minimum=None):
    text = sec.get(key)
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {text!r}") from None
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be at least {minimum}")
    return value


def _vector(text, name, length=3):
    try:
        vals = tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"{name} must be {length} numbers, got {text!r}") from None
    if len(vals) != length or not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{name} must be {length} finite numbers, got {text!r}")
    return vals


def _unit_vector(text, name):
    v = np.array(_vector(text, name))
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ConfigError(f"{name} must be nonzero")
    return tuple((v / norm).tolist())


def parse_config(text: str, base_dir: Optional[Path] = None) -> RunConfig:
    """Parse and validate configuration text.

    Parameters
    ----------
    text : str
        INI-formatted configuration.
    base_dir : Path, optional
        Directory against which relative mesh paths are resolved.

    Raises
    ------
    ConfigError
        With a message naming the offending ``section.key``.

    Examples
    --------
    >>> cfg = parse_config("[run]\\nscenario = pec\\n[mesh]\\ngenerator = sphere\\n")
    >>> cfg.scenario, cfg.mesh.generator
    ('pec', 'sphere')
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None
    for section in cp.sections():
        if section not in _KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp[section]:
            if key not in _KEYS[section]:
                raise ConfigError(f"unknown key {section}.{key}")
    sec = lambda name: cp[name] if cp.has_section(name) else {}  # noqa: E731

    run = sec("run")
    scenario = run.get("scenario")
    if scenario is None:
        raise ConfigError("run.scenario is required")
    if scenario not in SCENARIOS:
        raise ConfigError(f"run.scenario must be one of {', '.join(SCENARIOS)}")
    formulation = run.get("formulation", "standard")
    if formulation not in ("standard", "burton-miller"):
        raise ConfigError("run.formulation must be standard or burton-miller")
    if formulation == "burton-miller" and scenario not in ("acoustic-hard", "demo-transducer"):
        raise ConfigError("run.formulation burton-miller applies to acoustic scenarios only")
    beta = _float(run, "beta", "run.beta", positive=True) if "beta" in run else None
    output = Path(run["output"]) if "output" in run else None

    m = sec("mesh")
    has_gen, has_path = "generator" in m, "path" in m
    if has_gen == has_path:
        raise ConfigError("mesh: exactly one of mesh.generator or mesh.path is required")
    generator = m.get("generator")
    if generator is not None and generator not in GENERATORS:
        raise ConfigError(f"mesh.generator must be one of {', '.join(GENERATORS)}")
    path = None
    if has_path:
        path = Path(m["path"])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
    fmt = m.get("format", "native")
    if fmt not in ("native", "msh"):
        raise ConfigError("mesh.format must be native or msh")
    mesh = MeshSpec(
        generator=generator,
        path=path,
        format=fmt,
        radius=_float(m, "radius", "mesh.radius", True) if "radius" in m else 1.0,
        refinement=_int(m, "refinement", "mesh.refinement", 0) if "refinement" in m else 2,
        element_size=(
            _float(m, "element_size", "mesh.element_size", True) if "element_size" in m else None
        ),
        characteristic_length=(
            _float(m, "characteristic_length", "mesh.characteristic_length", True)
            if "characteristic_length" in m else 1.0
        ),
    )
    if scenario == "demo-transducer" and generator not in (None, "transducer"):
        raise ConfigError("mesh.generator must be transducer for the demo-transducer scenario")

    w = sec("wave")
    ka = _float(w, "ka", "wave.ka", positive=True) if "ka" in w else None
    direction = _unit_vector(w["direction"], "wave.direction") if "direction" in w else (0.0, 0.0, 1.0)
    polarization = (
        _unit_vector(w["polarization"], "wave.polarization") if "polarization" in w
        else (1.0, 0.0, 0.0)
    )
    if scenario in ("pec", "dielectric") and abs(np.dot(direction, polarization)) > 1e-12:
        raise ConfigError("wave.polarization must be orthogonal to wave.direction")
    amplitude = _float(w, "amplitude", "wave.amplitude") if "amplitude" in w else 1.0

    sweep = None
    s = sec("sweep")
    if s:
        for key in ("start", "stop", "step"):
            if key not in s:
                raise ConfigError(f"sweep.{key} is required in a [sweep] section")
        step = _float(s, "step", "sweep.step")
        if step <= 0:
            raise ConfigError("sweep.step must be positive")
        start = _float(s, "start", "sweep.start", positive=True)
        stop = _float(s, "stop", "sweep.stop", positive=True)
        if stop < start:
            raise ConfigError("sweep.stop must not be below sweep.start")
        sweep = SweepSpec(start, stop, step)

    mat = sec("material")
    eps_ratio = k_in_ratio = None
    if scenario == "dielectric":
        for key in ("eps_ratio", "k_in_ratio"):
            if key not in mat:
                raise ConfigError(f"material.{key} is required for the dielectric scenario")
        eps_ratio = _float(mat, "eps_ratio", "material.eps_ratio", positive=True)
        k_in_ratio = _float(mat, "k_in_ratio", "material.k_in_ratio", positive=True)
        if abs(k_in_ratio**2 - eps_ratio) > 1e-8 * eps_ratio:
            raise ConfigError(
                "material.k_in_ratio must equal sqrt(material.eps_ratio) "
                "(equal permeabilities)"
            )

    q = {}
    for key, text in sec("quadrature").items():
        name = f"quadrature.{key}"
        q[key] = _int({key: text}, key, name, 1) if key in _INT_QUADRATURE else _float(
            {key: text}, key, name, positive=True
        )

    p = sec("probes")
    points = None
    if "points" in p:
        rows = [r for r in p["points"].split(";") if r.strip()]
        points = tuple(_vector(r, "probes.points") for r in rows)
        if not points:
            raise ConfigError("probes.points is empty")
    preset = p.get("preset")
    if preset is not None and preset not in ("cavity", "sphere"):
        raise ConfigError("probes.preset must be cavity or sphere")
    if preset is not None and points is not None:
        raise ConfigError("probes: give either probes.points or probes.preset, not both")
    if preset == "cavity" and generator != "resonator":
        raise ConfigError("probes.preset cavity needs mesh.generator = resonator")
    probe_radius = _float(p, "radius", "probes.radius", True) if "radius" in p else 1.2
    probe_count = _int(p, "count", "probes.count", 1) if "count" in p else 20

    g = sec("grid")
    grid = None
    if g:
        for key in ("origin", "spacing", "shape"):
            if key not in g:
                raise ConfigError(f"grid.{key} is required in a [grid] section")
        origin = _vector(g["origin"], "grid.origin")
        parts = g["spacing"].split()
        spacing = _vector(g["spacing"], "grid.spacing", 1) * 3 if len(parts) == 1 else _vector(
            g["spacing"], "grid.spacing"
        )
        if min(spacing) <= 0:
            raise ConfigError("grid.spacing must be positive")
        shape_vals = _vector(g["shape"], "grid.shape")
        if any(v < 1 or v != int(v) for v in shape_vals):
            raise ConfigError("grid.shape must be three positive integers")
        grid = GridSpec(origin, spacing, tuple(int(v) for v in shape_vals))

    t = sec("transducer")
    velocity = _float(t, "velocity", "transducer.velocity") if "velocity" in t else 1.0
    separation = (
        _float(t, "separation", "transducer.separation", True) if "separation" in t else 2.0
    )

    raw = {name: dict(cp[name]) for name in cp.sections()}
    return RunConfig(
        scenario=scenario, mesh=mesh, formulation=formulation, beta=beta, output=output,
        ka=ka, direction=direction, polarization=polarization, amplitude=amplitude,
        sweep=sweep, eps_ratio=eps_ratio, k_in_ratio=k_in_ratio, quadrature=q,
        probe_points=points, probe_preset=preset, probe_radius=probe_radius,
        probe_count=probe_count, grid=grid, velocity=velocity, separation=separation, raw=raw,
    )


def load_config(path) -> RunConfig:
    """Read and validate a configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, path.parent)
