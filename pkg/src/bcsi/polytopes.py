"""Low-dimensional polyhedral helpers.

Everything here works on plain float tuples/arrays: vertex enumeration for
half-plane systems in the nonnegative quadrant, monotone-chain convex hulls,
shoelace areas, Hausdorff distances, Pareto corners, and an LP membership
distance for point-cloud hulls in any small dimension.  Written by hand
because the regions we handle are tiny and frequently degenerate (segments,
single points), which general hull codes reject.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

GEOM_TOL = 1e-9


def vertices_of_halfplanes(rows, nonneg: bool = True) -> list[tuple[float, float]]:
    """Vertices of {a0 x + a1 y <= b} (optionally within the quadrant x,y >= 0).

    Pairwise line intersections filtered by feasibility; exact for the
    convex systems produced here.  Empty list when infeasible.
    """
    sys_rows = [(float(a0), float(a1), float(b)) for a0, a1, b in rows]
    if nonneg:
        sys_rows += [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
    pts: list[tuple[float, float]] = []
    m = len(sys_rows)
    for i in range(m):
        a0, a1, b0 = sys_rows[i]
        for j in range(i + 1, m):
            c0, c1, b1 = sys_rows[j]
            det = a0 * c1 - a1 * c0
            if abs(det) < 1e-12:
                continue
            x = (b0 * c1 - b1 * a1) / det
            y = (a0 * b1 - c0 * b0) / det
            if all(r0 * x + r1 * y <= rb + GEOM_TOL for r0, r1, rb in sys_rows):
                pts.append((x, y))
    return dedupe_points(pts)


def dedupe_points(pts, tol: float = GEOM_TOL):
    """Tolerance-dedupe; exact pairwise for small sets, rounding for large."""
    pts = [tuple(float(c) for c in p) for p in pts]
    if len(pts) > 512:
        seen = {}
        for p in pts:
            seen.setdefault(tuple(round(c, 9) for c in p), p)
        pts = list(seen.values())
        if len(pts) > 512:
            return pts
    out: list[tuple[float, ...]] = []
    for p in pts:
        if not any(max(abs(a - b) for a, b in zip(p, q)) <= tol for q in out):
            out.append(p)
    return out


def halfplanes_unbounded(rows) -> bool:
    """Whether the quadrant system has a nonzero recession direction."""
    dirs = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    for a0, a1, _ in rows:
        n = (a0 * a0 + a1 * a1) ** 0.5
        if n < 1e-12:
            continue
        for d in ((-a1 / n, a0 / n), (a1 / n, -a0 / n)):
            if d[0] >= -1e-12 and d[1] >= -1e-12 and max(d) > 1e-12:
                dirs.append(d)
    for dx, dy in dirs:
        if all(a0 * dx + a1 * dy <= 1e-12 for a0, a1, _ in rows):
            return True
    return False


def hull2(points) -> list[tuple[float, float]]:
    """Convex hull, counterclockwise from the lexicographic minimum.

    Monotone chain with collinear points dropped; degenerate inputs (point,
    segment) come back as-is in lexicographic order.
    """
    pts = sorted(dedupe_points(points))
    if len(pts) <= 2:
        return pts
    scale = max(max(abs(c) for c in p) for p in pts)
    eps = 1e-12 * max(1.0, scale * scale)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= eps:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= eps:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        return pts[:1] + pts[-1:]
    if len(hull) == 2:
        # a cloud whose cross products all sit under eps collapses to a
        # segment; lexicographic order is steered by noise in x when the
        # real spread is in y, so re-pick the endpoints along the wider axis
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if max(ys) - min(ys) > max(xs) - min(xs):
            by_y = sorted(pts, key=lambda p: (p[1], p[0]))
            hull = sorted((by_y[0], by_y[-1]))
    return hull


def polygon_area(ccw) -> float:
    pts = list(ccw)
    if len(pts) < 3:
        return 0.0
    s = 0.0
    for i, (x0, y0) in enumerate(pts):
        x1, y1 = pts[(i + 1) % len(pts)]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2.0


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance (L-inf ground metric) between point sets."""
    pa = [tuple(map(float, p)) for p in a]
    pb = [tuple(map(float, p)) for p in b]
    if not pa and not pb:
        return 0.0
    if not pa or not pb:
        return float("inf")

    def one_way(src, dst):
        return max(min(max(abs(u - v) for u, v in zip(p, q)) for q in dst) for p in src)

    return max(one_way(pa, pb), one_way(pb, pa))


def hull_distance(points, target, tol_feas: float = 1e-11) -> float:
    """L-inf distance from `target` to the convex hull of `points`, via LP.

    min t  s.t.  |sum_i w_i v_i - target| <= t componentwise, sum w = 1, w >= 0.
    """
    verts = np.asarray(list(points), dtype=np.float64)
    tgt = np.asarray(target, dtype=np.float64)
    if verts.ndim != 2 or verts.shape[0] == 0:
        raise ValueError("need a nonempty 2-D array of hull points")
    n, d = verts.shape
    c = np.zeros(n + 1)
    c[-1] = 1.0
    a_ub = np.zeros((2 * d, n + 1))
    b_ub = np.zeros(2 * d)
    a_ub[:d, :n] = verts.T
    a_ub[:d, -1] = -1.0
    b_ub[:d] = tgt
    a_ub[d:, :n] = -verts.T
    a_ub[d:, -1] = -1.0
    b_ub[d:] = -tgt
    a_eq = np.zeros((1, n + 1))
    a_eq[0, :n] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(0, None)], method="highs")
    if not res.success:  # pragma: no cover
        raise RuntimeError(f"membership solve failed: {res.message}")
    return max(0.0, float(res.fun) - tol_feas)


def pareto_corners(points, tol: float = GEOM_TOL):
    """Points of the cloud not coordinatewise dominated by another point."""
    pts = dedupe_points(points, tol)
    keep = []
    for p in pts:
        dominated = any(
            q is not p and all(qc >= pc - tol for qc, pc in zip(q, p))
            and any(qc > pc + tol for qc, pc in zip(q, p))
            for q in pts
        )
        if not dominated:
            keep.append(p)
    return keep
