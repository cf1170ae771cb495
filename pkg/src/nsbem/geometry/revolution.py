"""Quadratic meshes of surfaces of revolution about the z axis.

A surface is described by its meridian profile, a chain of segments in the
``(rho, z)`` half-plane that starts and ends on the axis.  Rings of nodes
are placed along the profile with a graded spacing, neighbouring rings are
joined by a zipper triangulation, the axis points become fan centres, and
every mid-edge node is placed on the exact surface.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import GeometryError
from .mesh import QuadMesh

logger = logging.getLogger(__name__)


class Segment:
    """Profile segment parametrised by ``u`` in ``[0, 1]``.

    Subclasses provide ``point(u)`` and ``deriv(u)`` returning arrays of
    shape ``(..., 2)`` holding ``(rho, z)``.
    """

    tag: int = 0

    def point(self, u):
        raise NotImplementedError

    def deriv(self, u):
        raise NotImplementedError

    def curvature(self, u) -> np.ndarray:
        h = 1e-5
        u = np.asarray(u, float)
        d1 = self.deriv(u)
        d2 = (self.deriv(np.clip(u + h, 0, 1)) - self.deriv(np.clip(u - h, 0, 1))) / (
            np.clip(u + h, 0, 1) - np.clip(u - h, 0, 1)
        )[..., None]
        cross = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        return np.abs(cross) / np.linalg.norm(d1, axis=-1) ** 3


@dataclass
class Line(Segment):
    p0: np.ndarray
    p1: np.ndarray
    tag: int = 0

    def __post_init__(self):
        self.p0 = np.asarray(self.p0, float)
        self.p1 = np.asarray(self.p1, float)

    def point(self, u):
        u = np.asarray(u, float)[..., None]
        return self.p0 + u * (self.p1 - self.p0)

    def deriv(self, u):
        u = np.asarray(u, float)
        return np.broadcast_to(self.p1 - self.p0, u.shape + (2,)).copy()

    def curvature(self, u):
        return np.zeros(np.shape(u))


@dataclass
class Arc(Segment):
    """Circular arc from angle ``theta0`` to ``theta1`` (counterclockwise if increasing)."""

    center: np.ndarray
    radius: float
    theta0: float
    theta1: float
    tag: int = 0

    def __post_init__(self):
        self.center = np.asarray(self.center, float)

    def angle(self, u):
        return self.theta0 + np.asarray(u, float) * (self.theta1 - self.theta0)

    def point(self, u):
        t = self.angle(u)
        return self.center + self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def deriv(self, u):
        t = self.angle(u)
        s = self.radius * (self.theta1 - self.theta0)
        return s * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def curvature(self, u):
        return np.full(np.shape(u), 1.0 / self.radius)

    @property
    def orientation(self) -> int:
        return 1 if self.theta1 > self.theta0 else -1


@dataclass
class Parametric(Segment):
    """Arbitrary smooth curve ``u -> (rho, z)`` with its derivative."""

    func: Callable
    dfunc: Callable
    tag: int = 0

    def point(self, u):
        return np.asarray(self.func(np.asarray(u, float)))

    def deriv(self, u):
        return np.asarray(self.dfunc(np.asarray(u, float)))


def _left_normal(t):
    return np.array([-t[1], t[0]])


def _offset_intersections(a: Segment, b: Segment, side: int, r: float):
    """Intersections of the two segment supports offset by ``side * r`` to the left."""
    shapes = []
    for seg in (a, b):
        if isinstance(seg, Line):
            d = seg.p1 - seg.p0
            d = d / np.linalg.norm(d)
            shapes.append(("line", seg.p0 + side * r * _left_normal(d), d))
        elif isinstance(seg, Arc):
            shapes.append(("circle", seg.center, seg.radius - seg.orientation * side * r))
        else:
            raise GeometryError("fillets are supported between lines and arcs only")
    (ka, pa, qa), (kb, pb, qb) = shapes
    if ka == "line" and kb == "line":
        m = np.stack([qa, -qb], axis=1)
        if abs(np.linalg.det(m)) < 1e-14:
            return []
        t = np.linalg.solve(m, pb - pa)
        return [pa + t[0] * qa]
    if ka == "circle" and kb == "circle":
        return _circle_circle(pa, qa, pb, qb)
    if ka == "circle":
        (ka, pa, qa), (kb, pb, qb) = (kb, pb, qb), (ka, pa, qa)
    # line (pa, qa) against circle (pb, qb)
    f = pa - pb
    bq = 2 * f @ qa
    cq = f @ f - qb**2
    disc = bq * bq - 4 * cq
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    return [pa + t * qa for t in ((-bq - sq) / 2, (-bq + sq) / 2)]


def _circle_circle(c0, r0, c1, r1):
    d = np.linalg.norm(c1 - c0)
    if d < 1e-14 or d > r0 + r1 or d < abs(r0 - r1):
        return []
    a = (r0 * r0 - r1 * r1 + d * d) / (2 * d)
    h = math.sqrt(max(r0 * r0 - a * a, 0.0))
    e = (c1 - c0) / d
    m = c0 + a * e
    return [m + h * _left_normal(e), m - h * _left_normal(e)]


def _foot(seg: Segment, q: np.ndarray) -> np.ndarray:
    if isinstance(seg, Line):
        d = seg.p1 - seg.p0
        t = (q - seg.p0) @ d / (d @ d)
        return seg.p0 + t * d
    v = q - seg.center
    return seg.center + seg.radius * v / np.linalg.norm(v)


def _retarget_arc(arc: Arc, p: np.ndarray, end: bool) -> None:
    ang = math.atan2(p[1] - arc.center[1], p[0] - arc.center[0])
    ref = arc.theta1 if end else arc.theta0
    ang += 2 * math.pi * round((ref - ang) / (2 * math.pi))
    if end:
        arc.theta1 = ang
    else:
        arc.theta0 = ang


def fillet(a: Segment, b: Segment, radius: float, tag: Optional[int] = None) -> Arc:
    """Round the corner where segment ``a`` ends and ``b`` begins.

    ``a`` and ``b`` are trimmed in place; the tangent arc is returned.

    Raises
    ------
    GeometryError
        If no tangent circle of the requested radius exists near the corner.
    """
    x = a.point(1.0)
    ta = a.deriv(1.0)
    tb = b.deriv(0.0)
    cross = ta[0] * tb[1] - ta[1] * tb[0]
    if abs(cross) < 1e-12 * np.linalg.norm(ta) * np.linalg.norm(tb):
        raise GeometryError("segments meet tangentially; no fillet needed")
    side = 1 if cross > 0 else -1
    cands = _offset_intersections(a, b, side, radius)
    if not cands:
        raise GeometryError("fillet radius too large for the corner")
    q = min(cands, key=lambda c: np.linalg.norm(c - x))
    pa, pb = _foot(a, q), _foot(b, q)
    for seg, p, end in ((a, pa, True), (b, pb, False)):
        if isinstance(seg, Line):
            if end:
                seg.p1 = p
            else:
                seg.p0 = p
        else:
            _retarget_arc(seg, p, end)
    t0 = math.atan2(pa[1] - q[1], pa[0] - q[0])
    t1 = math.atan2(pb[1] - q[1], pb[0] - q[0])
    if side > 0:
        while t1 <= t0:
            t1 += 2 * math.pi
    else:
        while t1 >= t0:
            t1 -= 2 * math.pi
    return Arc(q, radius, t0, t1, tag=a.tag if tag is None else tag)


class Profile:
    """Chain of segments from the axis back to the axis.

    Parameters
    ----------
    segments : sequence of Segment
        Consecutive segments must share end points (to 1e-9); the first
        starts and the last ends at ``rho = 0``.
    """

    def __init__(self, segments: Sequence[Segment], n_table: int = 400):
        self.segments = list(segments)
        for s0, s1 in zip(self.segments[:-1], self.segments[1:]):
            gap = np.linalg.norm(s0.point(1.0) - s1.point(0.0))
            if gap > 1e-9:
                raise GeometryError(f"profile segments do not connect (gap {gap:.3e})")
        if abs(self.segments[0].point(0.0)[0]) > 1e-12 or abs(self.segments[-1].point(1.0)[0]) > 1e-12:
            raise GeometryError("profile must start and end on the axis")
        # arclength tables per segment (composite Gauss-Legendre)
        gx, gw = np.polynomial.legendre.leggauss(8)
        gx, gw = 0.5 * (gx + 1), 0.5 * gw
        self._u = np.linspace(0.0, 1.0, n_table + 1)
        self._s = []
        offset = 0.0
        self._starts = []
        for seg in self.segments:
            a, b = self._u[:-1], self._u[1:]
            uq = a[:, None] + (b - a)[:, None] * gx
            speed = np.linalg.norm(seg.deriv(uq), axis=-1)
            pieces = (speed * gw).sum(axis=1) * (b - a)
            s = np.concatenate([[0.0], np.cumsum(pieces)])
            self._starts.append(offset)
            self._s.append(offset + s)
            offset += s[-1]
        self.length = offset
        self._check_simple()

    def _check_simple(self) -> None:
        pts = self.sample(np.linspace(0, self.length, 2000))
        if np.any(pts[1:-1, 0] <= 0):
            raise GeometryError("profile touches the axis between its end points")
        segs = np.stack([pts[:-1], pts[1:]], axis=1)
        mins = np.minimum(segs[:, 0], segs[:, 1])
        maxs = np.maximum(segs[:, 0], segs[:, 1])
        n = len(segs)
        for i in range(n):
            cand = np.flatnonzero(
                np.all(mins[i + 2 :] <= maxs[i], axis=1) & np.all(maxs[i + 2 :] >= mins[i], axis=1)
            ) + i + 2
            for j in cand:
                if i == 0 and j == n - 1:
                    continue
                if _segments_cross(segs[i], segs[j]):
                    raise GeometryError("profile intersects itself")

    def locate(self, s):
        """Segment index and local parameter for arclength(s) ``s``."""
        s = np.atleast_1d(np.asarray(s, float))
        idx = np.searchsorted(self._starts, s, side="right") - 1
        idx = np.clip(idx, 0, len(self.segments) - 1)
        u = np.empty_like(s)
        for i in np.unique(idx):
            mask = idx == i
            u[mask] = np.interp(s[mask], self._s[i], self._u)
        return idx, u

    def sample(self, s) -> np.ndarray:
        idx, u = self.locate(s)
        out = np.empty((len(u), 2))
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self.segments[i].point(u[mask])
        return out

    def curvature(self, s) -> np.ndarray:
        idx, u = self.locate(s)
        out = np.empty(len(u))
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self.segments[i].curvature(u[mask])
        return out

    def tags(self, s) -> np.ndarray:
        idx, _ = self.locate(s)
        return np.array([self.segments[i].tag for i in idx], dtype=int)


def _segments_cross(p, q) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q[0], q[1], p[0])
    d2 = orient(q[0], q[1], p[1])
    d3 = orient(p[0], p[1], q[0])
    d4 = orient(p[0], p[1], q[1])
    return d1 * d2 < 0 and d3 * d4 < 0


def _spacing(profile: Profile, h: float, max_angle: float, grading: float, n: int = 4000):
    s = np.linspace(0.0, profile.length, n)
    kappa = profile.curvature(s)
    local = np.minimum(h, max_angle / np.maximum(kappa, 1e-300))
    # grade: h(s) <= local(s') + grading * |s - s'|
    graded = local.copy()
    ds = s[1] - s[0]
    for i in range(1, n):
        graded[i] = min(graded[i], graded[i - 1] + grading * ds)
    for i in range(n - 2, -1, -1):
        graded[i] = min(graded[i], graded[i + 1] + grading * ds)
    return s, graded


def _smooth_cap(s: np.ndarray, h: np.ndarray, grading: float) -> np.ndarray:
    out = h.copy()
    for i in range(1, len(s)):
        out[i] = min(out[i], out[i - 1] + grading * (s[i] - s[i - 1]))
    for i in range(len(s) - 2, -1, -1):
        out[i] = min(out[i], out[i + 1] + grading * (s[i + 1] - s[i]))
    return out


def revolve(
    profile: Profile,
    h: float,
    characteristic_length: float = 1.0,
    max_angle: float = math.pi / 4,
    grading: float = 0.6,
    max_aspect: float = 4.0,
) -> QuadMesh:
    """Mesh the surface obtained by rotating ``profile`` about the z axis.

    Parameters
    ----------
    profile : Profile
    h : float
        Target corner-node spacing on flat or gently curved parts.
    max_angle : float
        Largest profile turning angle per ring interval (refines fillets).
    grading : float
        Maximum growth rate of the spacing per unit arclength.
    max_aspect : float
        Ring spacing may exceed the profile spacing by this factor, so
        tightly curved fillets get elongated rather than tiny elements.

    Returns
    -------
    QuadMesh
        Outward orientation is chosen so the enclosed volume is positive.
        Element tags copy the tag of the profile segment under the
        element's mean arclength.
    """
    if not h > 0:
        raise GeometryError("element size must be positive")
    s_tab, h_tab = _spacing(profile, h, max_angle, grading)
    density = 1.0 / h_tab
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(s_tab))])
    n_int = max(2, int(math.ceil(cum[-1])))
    stations = np.interp(np.linspace(0, cum[-1], n_int + 1), cum, s_tab)
    stations[0], stations[-1] = 0.0, profile.length
    rz = profile.sample(stations)
    h_st = np.interp(stations, s_tab, h_tab)
    h_az = _smooth_cap(stations, np.minimum(h, max_aspect * h_st), grading)

    # ring nodes: (s, phi) parameters
    params = []
    rings = []
    for i, (s, (rho, _)) in enumerate(zip(stations, rz)):
        if i == 0 or i == len(stations) - 1:
            rings.append([len(params)])
            params.append((s, 0.0))
            continue
        count = max(3, int(round(2 * math.pi * rho / h_az[i])))
        shift = 0.5 * (i % 2) * 2 * math.pi / count
        ids = []
        for j in range(count):
            ids.append(len(params))
            params.append((s, (shift + 2 * math.pi * j / count) % (2 * math.pi)))
        rings.append(ids)
    params = np.array(params)

    tris = []
    for i in range(len(rings) - 1):
        tris.extend(_zip_rings(rings[i], rings[i + 1], params))
    tris = np.array(tris, dtype=np.int64)

    def to_xyz(s, phi):
        p = profile.sample(s)
        return np.stack([p[:, 0] * np.cos(phi), p[:, 0] * np.sin(phi), p[:, 1]], axis=1)

    # mid-edge nodes at the parametric midpoint, on the exact surface
    pole_ids = {rings[0][0], rings[-1][0]}
    edge_mid = {}
    mid_params = []
    elements = np.empty((len(tris), 6), dtype=np.int64)
    n_corner = len(params)
    for e, (a, b, c) in enumerate(tris):
        elements[e, :3] = (a, b, c)
        for slot, (u, v) in zip((3, 4, 5), ((a, b), (b, c), (c, a))):
            key = (min(u, v), max(u, v))
            if key not in edge_mid:
                edge_mid[key] = n_corner + len(mid_params)
                mid_params.append(_mid_param(params, u, v, pole_ids))
            elements[e, slot] = edge_mid[key]
    all_params = np.vstack([params, np.array(mid_params)])
    nodes = to_xyz(all_params[:, 0], all_params[:, 1])
    nodes[np.abs(nodes) < 1e-15] = 0.0
    mesh_s = all_params[elements[:, :3], 0].mean(axis=1)
    tags = profile.tags(mesh_s)
    mesh = QuadMesh(nodes, elements, characteristic_length, True, tags)
    if mesh.enclosed_volume() < 0:
        elements = elements[:, [0, 2, 1, 5, 4, 3]]
        mesh = QuadMesh(nodes, elements, characteristic_length, True, tags)
    logger.info("revolved mesh: %d nodes, %d elements", mesh.n_nodes, mesh.n_elements)
    return mesh


def _mid_param(params, u, v, pole_ids):
    s = 0.5 * (params[u, 0] + params[v, 0])
    if u in pole_ids:
        return (s, params[v, 1])
    if v in pole_ids:
        return (s, params[u, 1])
    p0, p1 = params[u, 1], params[v, 1]
    d = (p1 - p0 + math.pi) % (2 * math.pi) - math.pi
    return (s, (p0 + 0.5 * d) % (2 * math.pi))


def _zip_rings(r0: list, r1: list, params: np.ndarray) -> list:
    """Triangles between consecutive rings, oriented with increasing s then phi."""
    if len(r0) == 1 and len(r1) == 1:
        raise GeometryError("profile too coarse: two consecutive pole rings")
    if len(r0) == 1:
        p = r0[0]
        return [(p, r1[(j + 1) % len(r1)], r1[j]) for j in range(len(r1))]
    if len(r1) == 1:
        p = r1[0]
        return [(r0[j], r0[(j + 1) % len(r0)], p) for j in range(len(r0))]
    # sort both rings by angle and walk around once
    a = sorted(r0, key=lambda n: params[n, 1])
    b = sorted(r1, key=lambda n: params[n, 1])
    # start b at the node nearest to a[0]
    pa0 = params[a[0], 1]
    off = int(np.argmin([abs((params[n, 1] - pa0 + math.pi) % (2 * math.pi) - math.pi) for n in b]))
    b = b[off:] + b[:off]

    def ang(n, base):
        return (params[n, 1] - base) % (2 * math.pi)

    base = params[a[0], 1]
    b_ang = [ang(n, base) for n in b]
    # b[0] may be slightly behind a[0]; express its angle as negative if so
    if b_ang[0] > math.pi:
        b_ang[0] -= 2 * math.pi
    a_ang = [ang(n, base) for n in a]
    a_seq = a + [a[0]]
    b_seq = b + [b[0]]
    a_ang = a_ang + [2 * math.pi]
    b_ang = b_ang + [b_ang[0] + 2 * math.pi]
    i = j = 0
    tris = []
    while i < len(a) or j < len(b):
        adv_a = j >= len(b) or (i < len(a) and a_ang[i + 1] <= b_ang[j + 1])
        if adv_a:
            tris.append((a_seq[i], a_seq[i + 1], b_seq[j]))
            i += 1
        else:
            tris.append((a_seq[i], b_seq[j + 1], b_seq[j]))
            j += 1
    return tris


# ----------------------------------------------------------------------------
# Resonator and dish generators
# ----------------------------------------------------------------------------

#: Element tags of the resonator mesh.
TAG_OUTER, TAG_NECK_OUTER, TAG_RIM, TAG_CHANNEL, TAG_CAVITY = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class ResonatorParams:
    """Helmholtz resonator dimensions in units of ``a``.

    Attributes
    ----------
    outer_radius, inner_radius : float
        Radii of the spherical shell.
    neck_length : float
        Length ``L`` of the channel from its junction with the inner sphere
        to the top of the neck.
    channel_radius_base, channel_radius_top : float
        Channel radius at the inner-sphere junction and at the top.
    neck_wall : float
        Horizontal wall thickness of the neck tube.
    fillet : float
        Radius of the fillets that round the junctions of the neck with
        the shell; the rim is a half circle across the wall.
    """

    outer_radius: float = 1.08
    inner_radius: float = 0.92
    neck_length: float = 0.67
    channel_radius_base: float = 0.32
    channel_radius_top: float = 0.168
    neck_wall: float = 0.08
    fillet: float = 0.04

    def validate(self) -> None:
        if not self.neck_length > 0:
            raise GeometryError("neck length must be positive")
        if not 0 < self.inner_radius < self.outer_radius:
            raise GeometryError("need 0 < inner_radius < outer_radius")
        if not (0 < self.channel_radius_top and 0 < self.channel_radius_base):
            raise GeometryError("channel radii must be positive")
        if self.channel_radius_base >= self.inner_radius:
            raise GeometryError("channel wider than the cavity")
        if not (0 < self.neck_wall and self.fillet > 0):
            raise GeometryError("neck wall and fillet must be positive")

    @property
    def cavity_volume(self) -> float:
        return 4.0 / 3.0 * math.pi * self.inner_radius**3


def resonator_profile(params: ResonatorParams = ResonatorParams()) -> Profile:
    """Meridian profile of the resonator shell with its neck along ``+z``."""
    params.validate()
    ro, ri = params.outer_radius, params.inner_radius
    cb, ct, w = params.channel_radius_base, params.channel_radius_top, params.neck_wall
    zb = math.sqrt(ri * ri - cb * cb)
    zt = zb + params.neck_length
    slope = (ct - cb) / params.neck_length  # d rho / d z of the channel wall

    def outer_wall_rho(z):
        return cb + w + slope * (z - zb)

    # junction of the outer neck wall with the outer sphere
    lo, hi = -ro, ro
    f = lambda z: outer_wall_rho(z) ** 2 + z * z - ro * ro  # noqa: E731
    if f(zt) <= 0:
        raise GeometryError("neck too short: it does not clear the outer sphere")
    lo = zb
    if f(lo) > 0:
        raise GeometryError("neck wall intersects the outer sphere below the channel base")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15:
            break
    zj = 0.5 * (lo + hi)
    if outer_wall_rho(zj) <= 0 or ct <= 0:
        raise GeometryError("neck taper collapses the channel")
    pj = np.array([outer_wall_rho(zj), zj])
    outer = Arc((0.0, 0.0), ro, -math.pi / 2, math.atan2(pj[1], pj[0]), tag=TAG_OUTER)
    top_out = np.array([ct + w, zt])
    top_in = np.array([ct, zt])
    neck_out = Line(pj, top_out, tag=TAG_NECK_OUTER)
    # half-circle rim across the wall, tangent to both (parallel) walls
    d = (top_out - pj) / np.linalg.norm(top_out - pj)
    nrm = _left_normal(d)  # points from outer wall toward the channel
    width = abs((top_in - top_out) @ nrm)
    centre = top_out + 0.5 * width * nrm
    start = centre - 0.5 * width * nrm
    end = centre + 0.5 * width * nrm
    neck_out.p1 = start
    t0 = math.atan2(start[1] - centre[1], start[0] - centre[0])
    rim = Arc(centre, 0.5 * width, t0, t0 + math.pi, tag=TAG_RIM)
    pbase = np.array([cb, zb])
    channel = Line(end, end + (pbase - top_in), tag=TAG_CHANNEL)
    channel.p1 = _channel_base(channel, ri)
    inner = Arc((0.0, 0.0), ri, math.atan2(channel.p1[1], channel.p1[0]), -math.pi / 2, tag=TAG_CAVITY)
    f1 = fillet(outer, neck_out, params.fillet, tag=TAG_NECK_OUTER)
    f2 = fillet(channel, inner, params.fillet, tag=TAG_CHANNEL)
    return Profile([outer, f1, neck_out, rim, channel, f2, inner])


def _channel_base(channel: Line, ri: float) -> np.ndarray:
    """Where the channel wall line meets the inner sphere."""
    p, q = channel.p0, channel.p1
    d = q - p
    a = d @ d
    b = 2 * p @ d
    c = p @ p - ri * ri
    disc = b * b - 4 * a * c
    if disc < 0:
        raise GeometryError("channel does not reach the inner sphere")
    t = (-b - math.sqrt(disc)) / (2 * a)
    if t < 0:
        t = (-b + math.sqrt(disc)) / (2 * a)
    return p + t * d


def resonator_element_size(refinement: int) -> float:
    """Target spacing ``0.42 / 2**(refinement - 1)`` (in units of ``a``)."""
    if refinement < 0:
        raise GeometryError("refinement must be nonnegative")
    return 0.42 / 2.0 ** (refinement - 1)


def generate_resonator_mesh(
    a: float = 1.0,
    params: ResonatorParams = ResonatorParams(),
    refinement: int = 2,
    element_size: Optional[float] = None,
) -> QuadMesh:
    """Spherical-shell Helmholtz resonator with a tapered neck along ``+z``.

    Parameters
    ----------
    a : float
        Length unit; all ``params`` are multiplied by it and it becomes the
        mesh characteristic length.
    params : ResonatorParams
    refinement : int
        Selects the spacing ``0.42 a / 2**(refinement - 1)``; refinement 2
        gives about 3000 nodes.
    element_size : float, optional
        Explicit spacing (in units of ``a``) overriding ``refinement``.

    Raises
    ------
    GeometryError
        For invalid dimensions (for example a zero neck length).
    """
    if not a > 0:
        raise GeometryError("a must be positive")
    h = element_size if element_size is not None else resonator_element_size(refinement)
    mesh = revolve(resonator_profile(params), h, 1.0)
    if a != 1.0:
        mesh = QuadMesh(mesh.nodes * a, mesh.elements, a, True, mesh.tags)
    return mesh


def cavity_volume(mesh: QuadMesh, tag: int = TAG_CAVITY) -> float:
    """Volume bounded by the elements carrying ``tag`` and the flat disk
    closing their boundary ring (the opening into the neck).
    """
    from .mesh import _eval_all
    from .quadrature import gauss_rule

    sel = np.flatnonzero(mesh.tags == tag)
    if sel.size == 0:
        raise GeometryError(f"no elements tagged {tag}")
    rule = gauss_rule(6)
    sub = QuadMesh.__new__(QuadMesh)
    object.__setattr__(sub, "nodes", mesh.nodes)
    object.__setattr__(sub, "elements", mesh.elements[sel])
    pos, _, _, normal, jac = _eval_all(sub, rule.xi, rule.eta)
    # body normals on the cavity wall point into the cavity
    flux = -np.einsum("eqi,eqi,eq,q->", pos, normal, jac, rule.weights) / 3.0
    # boundary ring: corner edges used once within the selection
    edges = {}
    for el in mesh.elements[sel]:
        for a, b in ((el[0], el[1]), (el[1], el[2]), (el[2], el[0])):
            key = (min(a, b), max(a, b))
            edges[key] = edges.get(key, 0) + 1
    ring = sorted({n for e, c in edges.items() if c == 1 for n in e})
    if ring:
        pts = mesh.nodes[ring]
        z = float(pts[:, 2].mean())
        rho = float(np.linalg.norm(pts[:, :2], axis=1).mean())
        flux += z * math.pi * rho * rho / 3.0
    return float(flux)


@dataclass(frozen=True)
class DishParams:
    """Paraboloidal dish ``z = rho^2 / (4 f)`` with a rounded rim.

    Attributes
    ----------
    aperture_radius : float
    focal_length : float
    thickness : float
        Shell thickness measured along the normal; the rim is a half circle.
    """

    aperture_radius: float = 1.0
    focal_length: float = 0.6
    thickness: float = 0.08


#: Element tags of the dish mesh.
TAG_DISH_FRONT, TAG_DISH_RIM, TAG_DISH_BACK = 10, 11, 12


def dish_profile(params: DishParams = DishParams()) -> Profile:
    """Meridian profile of a paraboloidal shell opening toward ``+z``."""
    R, f, t = params.aperture_radius, params.focal_length, params.thickness
    if not (R > 0 and f > 0 and 0 < t < R):
        raise GeometryError("invalid dish dimensions")

    def normal(rho):
        n = np.stack([-rho / (2 * f), np.ones_like(rho)], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    def back(u):
        rho = R * u
        base = np.stack([rho, rho * rho / (4 * f)], axis=-1)
        return base - t * normal(rho)

    def dback(u, h=1e-6):
        up = np.clip(u + h, 0, 1)
        um = np.clip(u - h, 0, 1)
        return (back(up) - back(um)) / (up - um)[..., None]

    def front(u):
        rho = R * (1.0 - u)
        return np.stack([rho, rho * rho / (4 * f)], axis=-1)

    def dfront(u):
        rho = R * (1.0 - u)
        return np.stack([-R * np.ones_like(rho), -R * rho / (2 * f)], axis=-1)

    back_seg = Parametric(back, dback, tag=TAG_DISH_BACK)
    front_seg = Parametric(front, dfront, tag=TAG_DISH_FRONT)
    p_back = back(np.array(1.0))
    p_front = front(np.array(0.0))
    centre = 0.5 * (p_back + p_front)
    t0 = math.atan2(p_back[1] - centre[1], p_back[0] - centre[0])
    rim = Arc(centre, 0.5 * t, t0, t0 + math.pi, tag=TAG_DISH_RIM)
    return Profile([back_seg, rim, front_seg])


def cavity_probes(params: ResonatorParams = ResonatorParams(), a: float = 1.0) -> np.ndarray:
    """Probe set for the maximum cavity pressure.

    A 5 x 5 x 5 lattice on the cube inscribed in 85% of the inner sphere,
    followed by 5 points on the channel axis at the centres of five equal
    slices of the neck.  Returns ``(130, 3)`` points scaled by ``a``.
    """
    c = 0.85 * params.inner_radius / math.sqrt(3.0)
    g = np.linspace(-c, c, 5)
    lattice = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    zb = math.sqrt(params.inner_radius**2 - params.channel_radius_base**2)
    z = zb + (np.arange(5) + 0.5) / 5 * params.neck_length
    axis = np.stack([np.zeros(5), np.zeros(5), z], axis=1)
    return a * np.vstack([lattice, axis])


def generate_dish_mesh(
    params: DishParams = DishParams(),
    element_size: float = 0.12,
    z_offset: float = 0.0,
    flip: bool = False,
    characteristic_length: float = 1.0,
) -> QuadMesh:
    """Paraboloidal reflector shell; ``flip`` makes it open toward ``-z``."""
    mesh = revolve(dish_profile(params), element_size, characteristic_length)
    nodes = mesh.nodes.copy()
    elements = mesh.elements
    if flip:
        nodes[:, 2] *= -1.0
        nodes[:, 0] *= -1.0  # mirror twice: a rotation keeps the orientation
    nodes[:, 2] += z_offset
    return QuadMesh(nodes, elements, characteristic_length, True, mesh.tags)


def merge_meshes(meshes: Sequence[QuadMesh], characteristic_length: Optional[float] = None) -> QuadMesh:
    """Disjoint union of closed meshes (tags are kept)."""
    nodes, elems, tags = [], [], []
    offset = 0
    for m in meshes:
        nodes.append(m.nodes)
        elems.append(m.elements + offset)
        tags.append(m.tags if m.tags is not None else np.zeros(m.n_elements, dtype=int))
        offset += m.n_nodes
    a = characteristic_length or meshes[0].characteristic_length
    return QuadMesh(np.vstack(nodes), np.vstack(elems), a, True, np.concatenate(tags))


#: Tag offset applied to the receiver dish in :func:`generate_transducer_mesh`.
RECEIVER_TAG_OFFSET = 10


def generate_transducer_mesh(
    params: DishParams = DishParams(),
    separation: float = 2.0,
    element_size: float = 0.2,
) -> QuadMesh:
    """Two coaxial dishes facing each other across ``separation``.

    The emitter opens toward ``+z`` at the origin and keeps the dish tags
    10, 11, 12; the receiver opens toward ``-z`` with its vertex at
    ``z = separation`` and carries the same tags plus
    :data:`RECEIVER_TAG_OFFSET`.
    """
    if separation <= 2.0 * params.thickness:
        raise GeometryError("separation too small for the dish thickness")
    emitter = generate_dish_mesh(params, element_size)
    receiver = generate_dish_mesh(params, element_size, z_offset=separation, flip=True)
    receiver = QuadMesh(
        receiver.nodes, receiver.elements, receiver.characteristic_length, True,
        receiver.tags + RECEIVER_TAG_OFFSET,
    )
    return merge_meshes([emitter, receiver], params.aperture_radius)
