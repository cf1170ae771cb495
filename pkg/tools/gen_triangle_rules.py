"""Regenerate the symmetric triangle quadrature tables.

Solves the moment equations of the reference triangle for fully symmetric
rules with a fixed orbit structure (centroid, S21 and S111 orbits) by
nonlinear least squares from random starts.  Moments are taken against an
orthogonal (Dubiner) basis so the system stays well conditioned up to
degree 14.  Only rules with positive weights and interior points are kept.

Usage::

    python tools/gen_triangle_rules.py > src/nsbem/geometry/_triangle_rules.py
"""

import sys

import numpy as np
from scipy.optimize import least_squares
from scipy.special import eval_jacobi

# degree -> (n_centroid, n_s21, n_s111)
ORBITS = {
    2: (0, 1, 0),
    4: (0, 2, 0),
    5: (1, 2, 0),
    6: (0, 2, 1),
    8: (1, 3, 1),
    9: (1, 4, 1),
    10: (1, 2, 3),
    12: (0, 5, 3),
    13: (1, 6, 3),
    14: (0, 6, 4),
}


def dubiner(deg, x, y):
    """Orthogonal basis on the reference triangle, columns ordered by (p, q)."""
    a = np.where(np.abs(1.0 - y) > 1e-300, 2.0 * x / np.where(y == 1.0, 1.0, 1.0 - y) - 1.0, -1.0)
    b = 2.0 * y - 1.0
    cols = []
    for p in range(deg + 1):
        for q in range(deg + 1 - p):
            cols.append(
                eval_jacobi(p, 0, 0, a)
                * ((1.0 - b) / 2.0) ** p
                * eval_jacobi(q, 2 * p + 1, 0, b)
            )
    return np.array(cols)


def expand(params, orbits):
    n0, n1, n2 = orbits
    pts, wts = [], []
    i = 0
    if n0:
        pts.append((1 / 3, 1 / 3))
        wts.append(params[i])
        i += 1
    for _ in range(n1):
        a, w = params[i], params[i + 1]
        i += 2
        c = 1.0 - 2.0 * a
        for p in ((a, a), (a, c), (c, a)):
            pts.append(p)
            wts.append(w)
    for _ in range(n2):
        a, b, w = params[i], params[i + 1], params[i + 2]
        i += 3
        c = 1.0 - a - b
        for p in ((a, b), (b, a), (a, c), (c, a), (b, c), (c, b)):
            pts.append(p)
            wts.append(w)
    return np.array(pts), np.array(wts)


def residual(params, orbits, deg):
    pts, wts = expand(params, orbits)
    basis = dubiner(deg, pts[:, 0], pts[:, 1])
    moments = basis @ wts
    target = np.zeros(len(moments))
    target[0] = 0.5
    return moments - target


def solve(deg, orbits, rng, tries=20000):
    n0, n1, n2 = orbits
    npar = n0 + 2 * n1 + 3 * n2
    lo, hi = [], []
    if n0:
        lo.append(0.0)
        hi.append(0.5)
    lo += [0.0, 0.0] * n1
    hi += [0.5, 0.5] * n1
    lo += [0.0, 0.0, 0.0] * n2
    hi += [1.0, 1.0, 0.5] * n2
    for _ in range(tries):
        x0 = rng.uniform(lo, hi)
        x0 = np.clip(x0, 1e-3, None)
        if n0:
            x0[0] *= 0.2
        try:
            sol = least_squares(residual, x0, args=(orbits, deg), bounds=(lo, hi),
                                xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        except ValueError:
            continue
        if np.max(np.abs(sol.fun)) > 1e-14:
            continue
        pts, wts = expand(sol.x, orbits)
        inside = np.all(pts > 1e-8) and np.all(pts.sum(axis=1) < 1 - 1e-8)
        if inside and np.all(wts > 0):
            # polish with plain Newton-type iterations (no bounds)
            sol2 = least_squares(residual, sol.x, args=(orbits, deg), method="lm",
                                 xtol=1e-15, ftol=1e-15, gtol=1e-15)
            if np.max(np.abs(sol2.fun)) <= np.max(np.abs(sol.fun)):
                sol = sol2
            return expand(sol.x, orbits)
    raise RuntimeError(f"no rule found for degree {deg}")


def main():
    rng = np.random.default_rng(12345)
    out = sys.stdout
    out.write('"""Symmetric quadrature rules on the reference triangle.\n\n'
              "Generated by tools/gen_triangle_rules.py; do not edit by hand.\n"
              "Points are (xi, eta) on the triangle (0,0), (1,0), (0,1); weights\n"
              'sum to 1/2.\n"""\n\n')
    out.write("RULES = {\n")
    for deg, orbits in ORBITS.items():
        pts, wts = solve(deg, orbits, rng)
        out.write(f"    {deg}: (\n        [\n")
        for p in pts:
            out.write(f"            ({float(p[0])!r}, {float(p[1])!r}),\n")
        out.write("        ],\n        [\n")
        for w in wts:
            out.write(f"            {float(w)!r},\n")
        out.write("        ],\n    ),\n")
        print(f"degree {deg}: {len(wts)} points", file=sys.stderr)
    out.write("}\n")


if __name__ == "__main__":
    main()
