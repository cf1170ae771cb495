"""Compiled inner loops for collocation assembly and field evaluation.

Every loop runs in parallel over collocation rows (or evaluation points) and
each row is written by exactly one iteration with a fixed element order, so
results are bit-identical for any thread count.

Element integration uses one of four rules per (row, element) pair:

* distant  -- precomputed low-order rule, ``d > distant_ratio * radius``;
* far      -- precomputed rule, ``d > near_ratio * radius``;
* near     -- adaptive 1-to-4 subdivision in the reference triangle until
  every sub-triangle satisfies the far criterion;
* singular -- the element contains the collocation node: Duffy (collapsed
  Gauss-Legendre) sub-triangles with their apex at the node.

``d`` is the distance from the collocation point to the element's bounding
sphere centre.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

# Prefer OpenMP; an outdated TBB otherwise triggers a warning at launch.
_numba_config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

from ..kernels import SERIES_SWITCH, d2_coefficients

FOUR_PI = 4.0 * math.pi

# local reference coordinates of the six nodes
_LOCAL = np.array(
    [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]]
)
# Duffy sub-triangles (B, C corners) for an apex at each local node
_DUFFY_SUBS = np.array(
    [
        [[1, 2], [-1, -1]],
        [[2, 0], [-1, -1]],
        [[0, 1], [-1, -1]],
        [[1, 2], [2, 0]],
        [[2, 0], [0, 1]],
        [[0, 1], [1, 2]],
    ],
    dtype=np.int64,
)

STATUS_OK = 0
STATUS_DEPTH = 1
STATUS_OVERFLOW = 2


@njit(cache=True, inline="always")
def _shape(xi, eta, out):
    lam = 1.0 - xi - eta
    out[0] = lam * (2.0 * lam - 1.0)
    out[1] = xi * (2.0 * xi - 1.0)
    out[2] = eta * (2.0 * eta - 1.0)
    out[3] = 4.0 * xi * lam
    out[4] = 4.0 * xi * eta
    out[5] = 4.0 * eta * lam


@njit(cache=True)
def _map_point(xe, xi, eta, sv, pos):
    _shape(xi, eta, sv)
    for c in range(3):
        s = 0.0
        for j in range(6):
            s += sv[j] * xe[j, c]
        pos[c] = s


@njit(cache=True)
def _geom(xe, xi, eta, sv, pos, nrm):
    """Position, unit normal and area element at (xi, eta); fills ``sv``."""
    lam = 1.0 - xi - eta
    _shape(xi, eta, sv)
    d1 = (1.0 - 4.0 * lam, 4.0 * xi - 1.0, 0.0, 4.0 * (lam - xi), 4.0 * eta, -4.0 * eta)
    d2 = (1.0 - 4.0 * lam, 0.0, 4.0 * eta - 1.0, -4.0 * xi, 4.0 * xi, 4.0 * (lam - eta))
    a1x = a1y = a1z = 0.0
    a2x = a2y = a2z = 0.0
    px = py = pz = 0.0
    for j in range(6):
        x = xe[j, 0]
        y = xe[j, 1]
        z = xe[j, 2]
        px += sv[j] * x
        py += sv[j] * y
        pz += sv[j] * z
        a1x += d1[j] * x
        a1y += d1[j] * y
        a1z += d1[j] * z
        a2x += d2[j] * x
        a2y += d2[j] * y
        a2z += d2[j] * z
    cx = a1y * a2z - a1z * a2y
    cy = a1z * a2x - a1x * a2z
    cz = a1x * a2y - a1y * a2x
    jac = math.sqrt(cx * cx + cy * cy + cz * cz)
    pos[0] = px
    pos[1] = py
    pos[2] = pz
    nrm[0] = cx / jac
    nrm[1] = cy / jac
    nrm[2] = cz / jac
    return jac


@njit(cache=True)
def _sub_bounds(xe, a0, a1, b0, b1, c0, c1, sv, tmp, cen):
    """Bounding sphere of the image of a reference sub-triangle."""
    _map_point(xe, (a0 + b0 + c0) / 3.0, (a1 + b1 + c1) / 3.0, sv, cen)
    rad = 0.0
    for v in range(6):
        if v == 0:
            u0, u1 = a0, a1
        elif v == 1:
            u0, u1 = b0, b1
        elif v == 2:
            u0, u1 = c0, c1
        elif v == 3:
            u0, u1 = 0.5 * (a0 + b0), 0.5 * (a1 + b1)
        elif v == 4:
            u0, u1 = 0.5 * (b0 + c0), 0.5 * (b1 + c1)
        else:
            u0, u1 = 0.5 * (c0 + a0), 0.5 * (c1 + a1)
        _map_point(xe, u0, u1, sv, tmp)
        d = math.sqrt((tmp[0] - cen[0]) ** 2 + (tmp[1] - cen[1]) ** 2 + (tmp[2] - cen[2]) ** 2)
        if d > rad:
            rad = d
    return rad


@njit(cache=True)
def _near_ref_points(
    xe, x0, loc, near_ratio, max_depth, rule_xi, rule_eta, rule_w, gl_x, gl_w,
    out_xi, out_eta, out_w, stack,
):
    """Reference-triangle points and weights for a near or singular element.

    Returns ``(count, status)``.
    """
    sv = np.empty(6)
    tmp = np.empty(3)
    cen = np.empty(3)
    cnt = 0
    cap = out_xi.shape[0]
    if loc >= 0:
        p0 = _LOCAL[loc, 0]
        p1 = _LOCAL[loc, 1]
        ng = gl_x.shape[0]
        for s in range(2):
            ib = _DUFFY_SUBS[loc, s, 0]
            if ib < 0:
                continue
            ic = _DUFFY_SUBS[loc, s, 1]
            e0 = _LOCAL[ib, 0] - p0
            e1 = _LOCAL[ib, 1] - p1
            f0 = _LOCAL[ic, 0] - _LOCAL[ib, 0]
            f1 = _LOCAL[ic, 1] - _LOCAL[ib, 1]
            det = abs(e0 * f1 - e1 * f0)
            if cnt + ng * ng > cap:
                return cnt, STATUS_OVERFLOW
            for iu in range(ng):
                u = gl_x[iu]
                for iv in range(ng):
                    v = gl_x[iv]
                    out_xi[cnt] = p0 + u * (e0 + v * f0)
                    out_eta[cnt] = p1 + u * (e1 + v * f1)
                    out_w[cnt] = gl_w[iu] * gl_w[iv] * u * det
                    cnt += 1
        return cnt, STATUS_OK

    nq = rule_xi.shape[0]
    top = 0
    stack[0, 0] = 0.0
    stack[0, 1] = 0.0
    stack[0, 2] = 1.0
    stack[0, 3] = 0.0
    stack[0, 4] = 0.0
    stack[0, 5] = 1.0
    stack[0, 6] = 0.0
    top = 1
    while top > 0:
        top -= 1
        a0 = stack[top, 0]
        a1 = stack[top, 1]
        b0 = stack[top, 2]
        b1 = stack[top, 3]
        c0 = stack[top, 4]
        c1 = stack[top, 5]
        depth = stack[top, 6]
        rad = _sub_bounds(xe, a0, a1, b0, b1, c0, c1, sv, tmp, cen)
        dist = math.sqrt((x0[0] - cen[0]) ** 2 + (x0[1] - cen[1]) ** 2 + (x0[2] - cen[2]) ** 2)
        if dist > near_ratio * rad:
            if cnt + nq > cap:
                return cnt, STATUS_OVERFLOW
            area2 = abs((b0 - a0) * (c1 - a1) - (b1 - a1) * (c0 - a0))
            for q in range(nq):
                s = rule_xi[q]
                t = rule_eta[q]
                out_xi[cnt] = a0 + s * (b0 - a0) + t * (c0 - a0)
                out_eta[cnt] = a1 + s * (b1 - a1) + t * (c1 - a1)
                out_w[cnt] = rule_w[q] * area2
                cnt += 1
            continue
        if depth >= max_depth:
            return cnt, STATUS_DEPTH
        if top + 4 > stack.shape[0]:
            return cnt, STATUS_OVERFLOW
        ab0 = 0.5 * (a0 + b0)
        ab1 = 0.5 * (a1 + b1)
        bc0 = 0.5 * (b0 + c0)
        bc1 = 0.5 * (b1 + c1)
        ca0 = 0.5 * (c0 + a0)
        ca1 = 0.5 * (c1 + a1)
        nd = depth + 1.0
        for child in range(4):
            if child == 0:
                v = (a0, a1, ab0, ab1, ca0, ca1)
            elif child == 1:
                v = (ab0, ab1, b0, b1, bc0, bc1)
            elif child == 2:
                v = (ca0, ca1, bc0, bc1, c0, c1)
            else:
                v = (bc0, bc1, ca0, ca1, ab0, ab1)
            stack[top, 0] = v[0]
            stack[top, 1] = v[1]
            stack[top, 2] = v[2]
            stack[top, 3] = v[3]
            stack[top, 4] = v[4]
            stack[top, 5] = v[5]
            stack[top, 6] = nd
            top += 1
    return cnt, STATUS_OK


@njit(cache=True)
def _near_points(
    xe, x0, loc, near_ratio, max_depth, rule_xi, rule_eta, rule_w, gl_x, gl_w,
    ref_xi, ref_eta, ref_w, stack, P, NRM, W, S,
):
    """Physical near-element quadrature points.  Returns ``(count, status)``."""
    cnt, status = _near_ref_points(
        xe, x0, loc, near_ratio, max_depth, rule_xi, rule_eta, rule_w, gl_x, gl_w,
        ref_xi, ref_eta, ref_w, stack,
    )
    sv = np.empty(6)
    pos = np.empty(3)
    nrm = np.empty(3)
    for q in range(cnt):
        jac = _geom(xe, ref_xi[q], ref_eta[q], sv, pos, nrm)
        for c in range(3):
            P[q, c] = pos[c]
            NRM[q, c] = nrm[c]
        W[q] = ref_w[q] * jac
        for j in range(6):
            S[q, j] = sv[j]
    return cnt, status


@njit(cache=True, inline="always")
def _classify(x0, row, el, center, radius, near_ratio, distant_ratio):
    """Return (tier, local index): tier 0 distant, 1 far, 2 near/singular."""
    loc = -1
    for j in range(6):
        if el[j] == row:
            loc = j
    if loc >= 0:
        return 2, loc
    d = math.sqrt(
        (x0[0] - center[0]) ** 2 + (x0[1] - center[1]) ** 2 + (x0[2] - center[2]) ** 2
    )
    if d > distant_ratio * radius:
        return 0, -1
    if d > near_ratio * radius:
        return 1, -1
    return 2, -1


# ----------------------------------------------------------------------------
# Standard desingularised formulation
# ----------------------------------------------------------------------------


@njit(cache=True)
def _acc_standard(
    P, NRM, W, S, BQ, cnt, el, x0, n0, k, sigma, Hrow, Grow, store_h, store_g,
    nb, state, gbrow,
):
    hloc = np.zeros(6, dtype=np.complex128)
    gloc = np.zeros(6, dtype=np.complex128)
    for q in range(cnt):
        rx = P[q, 0] - x0[0]
        ry = P[q, 1] - x0[1]
        rz = P[q, 2] - x0[2]
        R2 = rx * rx + ry * ry + rz * rz
        R = math.sqrt(R2)
        R3 = R2 * R
        nx = sigma * NRM[q, 0]
        ny = sigma * NRM[q, 1]
        nz = sigma * NRM[q, 2]
        rn = rx * nx + ry * ny + rz * nz
        rn0 = rx * n0[0] + ry * n0[1] + rz * n0[2]
        nn0 = nx * n0[0] + ny * n0[1] + nz * n0[2]
        w = W[q]
        z = 1j * k * R
        ez = cmath.exp(z)
        gk = ez / R
        dgk = (z - 1.0) * ez * (rn / R3)
        dg0 = -rn / R3
        for j in range(6):
            sj = w * S[q, j]
            hloc[j] += sj * dgk
            gloc[j] += sj * gk
        wg = w * gk
        for m in range(nb):
            gbrow[m] += wg * BQ[q, m]
        state[0] -= w * dg0
        state[1] -= w * (nn0 / R - rn0 * dg0)
    for j in range(6):
        if store_h:
            Hrow[el[j]] += hloc[j]
        if store_g:
            Grow[el[j]] += gloc[j]


@njit(cache=True)
def _interp_rhs(S, cnt, el, B, BQ):
    nb = B.shape[1]
    for q in range(cnt):
        for m in range(nb):
            s = 0j
            for j in range(6):
                s += S[q, j] * B[el[j], m]
            BQ[q, m] = s


@njit(cache=True, parallel=True)
def assemble_standard_rows(
    nodes, elems, normals, centers, radii,
    Xd, Nd, Wd, Sd, Xf, Nf, Wf, Sf,
    BQd, BQf, B,
    rule_xi, rule_eta, rule_w, gl_x, gl_w,
    near_ratio, distant_ratio, max_depth, max_points,
    k, sigma, exterior, H, G, GB, store_h, store_g, chunk,
):
    """Fill ``H``, ``G`` and ``GB = G @ B`` (any subset) row by row.

    ``sigma`` is +1 when the domain normal equals the mesh normal (interior
    problem) and -1 for exterior problems.  Returned matrices already use
    the mesh (body-outward) normal for ``dphi/dn``.  Returns a status array
    with one entry per row.
    """
    n_nodes = nodes.shape[0]
    n_elem = elems.shape[0]
    nb = B.shape[1]
    status = np.zeros(n_nodes, dtype=np.int64)
    n_chunks = (n_nodes + chunk - 1) // chunk
    for ci in prange(n_chunks):
        ref_xi = np.empty(max_points)
        ref_eta = np.empty(max_points)
        ref_w = np.empty(max_points)
        P = np.empty((max_points, 3))
        NRM = np.empty((max_points, 3))
        W = np.empty(max_points)
        S = np.empty((max_points, 6))
        BQ = np.empty((max_points, max(nb, 1)), dtype=np.complex128)
        stack = np.empty((4 * max_depth + 8, 7))
        x0 = np.empty(3)
        n0 = np.empty(3)
        state = np.zeros(2, dtype=np.complex128)
        gbrow = np.zeros(max(nb, 1), dtype=np.complex128)
        hdummy = np.zeros(1, dtype=np.complex128)
        for row in range(ci * chunk, min(n_nodes, (ci + 1) * chunk)):
            for c in range(3):
                x0[c] = nodes[row, c]
                n0[c] = sigma * normals[row, c]
            state[0] = 0.0
            state[1] = 0.0
            for m in range(nb):
                gbrow[m] = 0.0
            Hrow = H[row] if store_h else hdummy
            Grow = G[row] if store_g else hdummy
            for e in range(n_elem):
                el = elems[e]
                tier, loc = _classify(x0, row, el, centers[e], radii[e], near_ratio, distant_ratio)
                if tier == 0:
                    _acc_standard(Xd[e], Nd[e], Wd[e], Sd, BQd[e], Wd.shape[1], el, x0, n0, k,
                                  sigma, Hrow, Grow, store_h, store_g, nb, state, gbrow)
                elif tier == 1:
                    _acc_standard(Xf[e], Nf[e], Wf[e], Sf, BQf[e], Wf.shape[1], el, x0, n0, k,
                                  sigma, Hrow, Grow, store_h, store_g, nb, state, gbrow)
                else:
                    xe = nodes[el]
                    cnt, st = _near_points(
                        xe, x0, loc, near_ratio, max_depth, rule_xi, rule_eta, rule_w,
                        gl_x, gl_w, ref_xi, ref_eta, ref_w, stack, P, NRM, W, S,
                    )
                    if st != STATUS_OK:
                        status[row] = st
                        continue
                    if nb > 0:
                        _interp_rhs(S, cnt, el, B, BQ)
                    _acc_standard(P, NRM, W, S, BQ, cnt, el, x0, n0, k, sigma, Hrow, Grow,
                                  store_h, store_g, nb, state, gbrow)
            # lumped subtraction terms and the exterior free term
            if store_h:
                Hrow[row] += state[0]
                if exterior:
                    Hrow[row] += FOUR_PI
            if store_g:
                Grow[row] += state[1]
                for c in range(n_nodes):
                    Grow[c] *= sigma
            for m in range(nb):
                GB[row, m] = sigma * (gbrow[m] + state[1] * B[row, m])
    return status


# ----------------------------------------------------------------------------
# Burton-Miller formulation
# ----------------------------------------------------------------------------


@njit(cache=True)
def _acc_bm(
    P, NRM, W, S, cnt, el, x0, n0, t1, t2, k, ib, sigma, taylor, Lrow, Rrow, state,
    GB, own,
):
    lloc = np.zeros(6, dtype=np.complex128)
    rloc = np.zeros(6, dtype=np.complex128)
    half_k2 = 0.5 * k * k
    for q in range(cnt):
        rx = P[q, 0] - x0[0]
        ry = P[q, 1] - x0[1]
        rz = P[q, 2] - x0[2]
        R2 = rx * rx + ry * ry + rz * rz
        R = math.sqrt(R2)
        R3 = R2 * R
        nx = sigma * NRM[q, 0]
        ny = sigma * NRM[q, 1]
        nz = sigma * NRM[q, 2]
        rn = rx * nx + ry * ny + rz * nz
        rn0 = rx * n0[0] + ry * n0[1] + rz * n0[2]
        nn0 = nx * n0[0] + ny * n0[1] + nz * n0[2]
        w = W[q]
        z = 1j * k * R
        ez = cmath.exp(z)
        gk = ez / R
        g0 = 1.0 / R
        dgk = (z - 1.0) * ez * (rn / R3)
        dg0 = -rn / R3
        dgk0 = (1.0 - z) * ez * (rn0 / R3)
        dg00 = rn0 / R3
        a, b = d2_coefficients(z, abs(z) < SERIES_SWITCH)
        d2diff = (nn0 * a - (rn0 * rn / R2) * b) / R3
        d2g0 = (nn0 - 3.0 * rn0 * rn / R2) / R3
        lk = dgk + ib * (d2diff + taylor * d2g0)
        rk = gk + ib * dgk0
        for j in range(6):
            sj = w * S[q, j]
            lloc[j] += sj * lk
            rloc[j] += sj * rk
        if own:
            # the element's own linearisation at the node replaces the
            # tangential part of the nodal Taylor term on this element
            c = w * ib * taylor * d2g0
            for j in range(6):
                lloc[j] -= c * (GB[j, 0] * rx + GB[j, 1] * ry + GB[j, 2] * rz)
        state[0] += w * (-dg0 + ib * (-half_k2 * nn0 * g0 + half_k2 * rn0 * dg0 - taylor * d2g0))
        state[1] += w * (
            -(nn0 * g0 - rn0 * dg0)
            + ib * ((1.0 - taylor) * dg0 + taylor * (rn0 * d2g0 - nn0 * dg00))
        )
        if taylor != 0.0:
            rt1 = rx * t1[0] + ry * t1[1] + rz * t1[2]
            rt2 = rx * t2[0] + ry * t2[1] + rz * t2[2]
            nt1 = nx * t1[0] + ny * t1[1] + nz * t1[2]
            nt2 = nx * t2[0] + ny * t2[1] + nz * t2[2]
            if own:
                rt1 = 0.0
                rt2 = 0.0
            state[2] += w * ib * (-rt1 * d2g0 + nt1 * dg00)
            state[3] += w * ib * (-rt2 * d2g0 + nt2 * dg00)
    for j in range(6):
        Lrow[el[j]] += lloc[j]
        Rrow[el[j]] += rloc[j]


@njit(cache=True)
def _node_gradient_basis(xe, loc, GB, ne):
    """Surface-gradient weights and unit normal of an element at local node ``loc``.

    Fills ``GB`` (6, 3) such that the gradient of the interpolant of nodal
    values ``v`` at that node is ``sum_j v[j] * GB[j]``, and ``ne`` with
    the element's own unit normal there.
    """
    xi = _LOCAL[loc, 0]
    eta = _LOCAL[loc, 1]
    lam = 1.0 - xi - eta
    d1 = (1.0 - 4.0 * lam, 4.0 * xi - 1.0, 0.0, 4.0 * (lam - xi), 4.0 * eta, -4.0 * eta)
    d2 = (1.0 - 4.0 * lam, 0.0, 4.0 * eta - 1.0, -4.0 * xi, 4.0 * xi, 4.0 * (lam - eta))
    a1 = np.zeros(3)
    a2 = np.zeros(3)
    for j in range(6):
        for c in range(3):
            a1[c] += d1[j] * xe[j, c]
            a2[c] += d2[j] * xe[j, c]
    m00 = a1[0] * a1[0] + a1[1] * a1[1] + a1[2] * a1[2]
    m01 = a1[0] * a2[0] + a1[1] * a2[1] + a1[2] * a2[2]
    m11 = a2[0] * a2[0] + a2[1] * a2[1] + a2[2] * a2[2]
    det = m00 * m11 - m01 * m01
    i00 = m11 / det
    i01 = -m01 / det
    i11 = m00 / det
    for j in range(6):
        c1 = i00 * d1[j] + i01 * d2[j]
        c2 = i01 * d1[j] + i11 * d2[j]
        for c in range(3):
            GB[j, c] = c1 * a1[c] + c2 * a2[c]
    ne[0] = a1[1] * a2[2] - a1[2] * a2[1]
    ne[1] = a1[2] * a2[0] - a1[0] * a2[2]
    ne[2] = a1[0] * a2[1] - a1[1] * a2[0]
    size = math.sqrt(ne[0] * ne[0] + ne[1] * ne[1] + ne[2] * ne[2])
    for c in range(3):
        ne[c] /= size


@njit(cache=True, parallel=True)
def assemble_bm_rows(
    nodes, elems, normals, tan1, tan2, centers, radii,
    Xd, Nd, Wd, Sd, Xf, Nf, Wf, Sf,
    rule_xi, rule_eta, rule_w, gl_x, gl_w,
    near_ratio, distant_ratio, max_depth, max_points,
    k, beta, sigma, exterior, taylor, L, R, CT, chunk,
):
    """Fill the Burton-Miller pair ``L``, ``R`` and tangential coefficients.

    ``CT[row]`` receives the coefficients multiplying the tangential
    derivatives ``d phi/d t1`` and ``d phi/d t2`` at the row node (non-zero
    only for the Taylor-subtracted variant, ``taylor = 1``).  ``R`` is
    returned in the body-outward normal convention.
    """
    n_nodes = nodes.shape[0]
    n_elem = elems.shape[0]
    ib = 1j * beta
    status = np.zeros(n_nodes, dtype=np.int64)
    n_chunks = (n_nodes + chunk - 1) // chunk
    for ci in prange(n_chunks):
        ref_xi = np.empty(max_points)
        ref_eta = np.empty(max_points)
        ref_w = np.empty(max_points)
        P = np.empty((max_points, 3))
        NRM = np.empty((max_points, 3))
        W = np.empty(max_points)
        S = np.empty((max_points, 6))
        stack = np.empty((4 * max_depth + 8, 7))
        x0 = np.empty(3)
        n0 = np.empty(3)
        t1 = np.empty(3)
        t2 = np.empty(3)
        state = np.zeros(4, dtype=np.complex128)
        GB = np.zeros((6, 3))
        ne = np.empty(3)
        for row in range(ci * chunk, min(n_nodes, (ci + 1) * chunk)):
            for c in range(3):
                x0[c] = nodes[row, c]
                n0[c] = sigma * normals[row, c]
                t1[c] = tan1[row, c]
                t2[c] = tan2[row, c]
            for s in range(4):
                state[s] = 0.0
            Lrow = L[row]
            Rrow = R[row]
            for e in range(n_elem):
                el = elems[e]
                tier, loc = _classify(x0, row, el, centers[e], radii[e], near_ratio, distant_ratio)
                if tier == 0:
                    _acc_bm(Xd[e], Nd[e], Wd[e], Sd, Wd.shape[1], el, x0, n0, t1, t2, k, ib,
                            sigma, taylor, Lrow, Rrow, state, GB, False)
                elif tier == 1:
                    _acc_bm(Xf[e], Nf[e], Wf[e], Sf, Wf.shape[1], el, x0, n0, t1, t2, k, ib,
                            sigma, taylor, Lrow, Rrow, state, GB, False)
                else:
                    xe = nodes[el]
                    cnt, st = _near_points(
                        xe, x0, loc, near_ratio, max_depth, rule_xi, rule_eta, rule_w,
                        gl_x, gl_w, ref_xi, ref_eta, ref_w, stack, P, NRM, W, S,
                    )
                    if st != STATUS_OK:
                        status[row] = st
                        continue
                    if loc >= 0:
                        # The nodal normal is an average over a C0 mesh and
                        # meets each adjacent element at an O(h^2) angle; on
                        # these elements the n0-kernels use the element's own
                        # normal so that they stay integrable.
                        _node_gradient_basis(xe, loc, GB, ne)
                        for c in range(3):
                            ne[c] *= sigma
                        _acc_bm(P, NRM, W, S, cnt, el, x0, ne, t1, t2, k, ib, sigma,
                                taylor, Lrow, Rrow, state, GB, taylor != 0.0)
                    else:
                        _acc_bm(P, NRM, W, S, cnt, el, x0, n0, t1, t2, k, ib, sigma,
                                taylor, Lrow, Rrow, state, GB, False)
            Lrow[row] += state[0]
            Rrow[row] += state[1]
            if exterior:
                Lrow[row] += FOUR_PI
                Rrow[row] -= FOUR_PI * ib
            for c in range(n_nodes):
                Rrow[c] *= sigma
            CT[row, 0] = state[2]
            CT[row, 1] = state[3]
    return status


# ----------------------------------------------------------------------------
# Field evaluation off the surface
# ----------------------------------------------------------------------------


@njit(cache=True)
def _acc_field(P, NRM, W, PHQ, DNQ, cnt, x0, k, out, nb):
    for q in range(cnt):
        rx = P[q, 0] - x0[0]
        ry = P[q, 1] - x0[1]
        rz = P[q, 2] - x0[2]
        R2 = rx * rx + ry * ry + rz * rz
        R = math.sqrt(R2)
        rn = rx * NRM[q, 0] + ry * NRM[q, 1] + rz * NRM[q, 2]
        z = 1j * k * R
        ez = cmath.exp(z)
        wgk = W[q] * ez / R
        wdgk = W[q] * (z - 1.0) * ez * (rn / (R2 * R))
        for m in range(nb):
            out[m] += wdgk * PHQ[q, m] - wgk * DNQ[q, m]


@njit(cache=True, parallel=True)
def evaluate_points(
    points, nodes, elems, centers, radii,
    Xd, Nd, Wd, Xf, Nf, Wf,
    PHd, DNd, PHf, DNf, PHI, DPHI,
    rule_xi, rule_eta, rule_w, gl_x, gl_w,
    near_ratio, distant_ratio, max_depth, max_points,
    k, sign, chunk,
):
    """``sign / 4pi * [int phi dG/dn - int dphi/dn G]`` with body normals.

    ``sign`` is +1 for points in the exterior domain and -1 for points
    inside the body.  Returns ``(values, status)``.
    """
    n_pts = points.shape[0]
    n_elem = elems.shape[0]
    nb = PHI.shape[1]
    out = np.zeros((n_pts, nb), dtype=np.complex128)
    status = np.zeros(n_pts, dtype=np.int64)
    n_chunks = (n_pts + chunk - 1) // chunk
    for ci in prange(n_chunks):
        ref_xi = np.empty(max_points)
        ref_eta = np.empty(max_points)
        ref_w = np.empty(max_points)
        P = np.empty((max_points, 3))
        NRM = np.empty((max_points, 3))
        W = np.empty(max_points)
        S = np.empty((max_points, 6))
        PHQ = np.empty((max_points, nb), dtype=np.complex128)
        DNQ = np.empty((max_points, nb), dtype=np.complex128)
        stack = np.empty((4 * max_depth + 8, 7))
        x0 = np.empty(3)
        acc = np.zeros(nb, dtype=np.complex128)
        for p in range(ci * chunk, min(n_pts, (ci + 1) * chunk)):
            for c in range(3):
                x0[c] = points[p, c]
            for m in range(nb):
                acc[m] = 0.0
            for e in range(n_elem):
                el = elems[e]
                tier, loc = _classify(x0, -1, el, centers[e], radii[e], near_ratio, distant_ratio)
                if tier == 0:
                    _acc_field(Xd[e], Nd[e], Wd[e], PHd[e], DNd[e], Wd.shape[1], x0, k, acc, nb)
                elif tier == 1:
                    _acc_field(Xf[e], Nf[e], Wf[e], PHf[e], DNf[e], Wf.shape[1], x0, k, acc, nb)
                else:
                    xe = nodes[el]
                    cnt, st = _near_points(
                        xe, x0, -1, near_ratio, max_depth, rule_xi, rule_eta, rule_w,
                        gl_x, gl_w, ref_xi, ref_eta, ref_w, stack, P, NRM, W, S,
                    )
                    if st != STATUS_OK:
                        status[p] = st
                        continue
                    _interp_rhs(S, cnt, el, PHI, PHQ)
                    _interp_rhs(S, cnt, el, DPHI, DNQ)
                    _acc_field(P, NRM, W, PHQ, DNQ, cnt, x0, k, acc, nb)
            for m in range(nb):
                out[p, m] = sign * acc[m] / FOUR_PI
    return out, status
