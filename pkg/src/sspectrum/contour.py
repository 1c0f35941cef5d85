"""Discretized slice contours and the two one-sided quadrature pairings.

A contour lives in one plane C_J and is a union of circles, each either
centered on the real axis or given as a conjugate disk pair expanding to
circles around u + Jv and u - Jv.  The trapezoid rule on a circle is
spectrally accurate for integrands holomorphic in a surrounding annulus,
which every kernel is away from the S-spectrum, so node counts in the
hundreds already reach 1e-12 territory.

Node and weight convention for a circle centered at z0 with radius r:

    s_k = z0 + r exp(J theta_k),  theta_k = 2 pi k / N
    w_k = orientation * (2 pi / N) * r * exp(J theta_k)

which realizes the oriented measure ds (-J) under s(theta).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, InputError
from .qlinalg import QuatMatrix, qmul_arr
from .quat import E1, Quaternion, imaginary_unit

__all__ = [
    "Circle",
    "DiskPair",
    "Contour",
    "nodes",
    "integrate",
    "auto_contour",
    "enclosing_circle",
    "converge_nodes",
    "load_contour",
    "save_contour",
]

DEFAULT_NODES = 256
MIN_NODES = 8
MAX_NODES = 8192


@dataclass(frozen=True)
class Circle:
    """Circle centered on the real axis."""

    center: float
    radius: float
    orientation: int = 1

    def plane_circles(self):
        return ((self.center, 0.0, self.radius),)


@dataclass(frozen=True)
class DiskPair:
    """Conjugate pair of circles around u + Jv and u - Jv, v > 0."""

    u: float
    v: float
    radius: float
    orientation: int = 1

    def plane_circles(self):
        return ((self.u, self.v, self.radius), (self.u, -self.v, self.radius))


@dataclass(frozen=True)
class Contour:
    J: Quaternion
    components: tuple
    nodes_per_circle: int = DEFAULT_NODES

    def __post_init__(self):
        object.__setattr__(self, "J", imaginary_unit(self.J))
        object.__setattr__(self, "components", tuple(self.components))
        for comp in self.components:
            if not isinstance(comp, (Circle, DiskPair)):
                raise InputError("contour components must be Circle or DiskPair")
            if comp.radius <= 0.0:
                raise GeometryError("circle radii must be positive")
            if isinstance(comp, DiskPair) and comp.radius >= comp.v:
                raise GeometryError(
                    "disk pair radius must stay below v to avoid the real axis")
            if comp.orientation not in (-1, 1):
                raise InputError("orientation must be +1 or -1")
        if self.components and self.nodes_per_circle < MIN_NODES:
            raise InputError(f"need at least {MIN_NODES} nodes per circle")

    def with_nodes(self, N: int) -> "Contour":
        return Contour(self.J, self.components, N)

    def plane_circles(self):
        """All circles as (center u, center v, radius) triples in C_J."""
        out = []
        for comp in self.components:
            out.extend(comp.plane_circles())
        return out

    def contains_point(self, u: float, v: float, clearance: float = 0.0) -> bool:
        """Whether (u, v) in C_J lies inside the union, by at least
        clearance away from every boundary circle."""
        inside = False
        for (cu, cv, r) in self.plane_circles():
            d = math.hypot(u - cu, v - cv)
            if abs(d - r) < clearance:
                return False
            if d < r:
                inside = True
        return inside


def nodes(c: Contour):
    """Quadrature nodes and weights as (Quaternion, Quaternion) pairs."""
    s_arr, w_arr = node_arrays(c)
    return [(Quaternion.from_array(s), Quaternion.from_array(w))
            for s, w in zip(s_arr, w_arr)]


def node_arrays(c: Contour):
    """Vectorized nodes: two (M, 4) arrays of points and weights."""
    N = c.nodes_per_circle
    J = c.J.as_array()
    chunks_s, chunks_w = [], []
    theta = 2.0 * np.pi * np.arange(N) / N
    ring = np.zeros((N, 4))
    ring[:, 0] = np.cos(theta)
    ring += np.sin(theta)[:, None] * J
    for comp in c.components:
        for (cu, cv, r) in comp.plane_circles():
            center = np.zeros(4)
            center[0] = cu
            center += cv * J
            s = center + r * ring
            w = (comp.orientation * 2.0 * np.pi / N * r) * ring
            chunks_s.append(s)
            chunks_w.append(w)
    if not chunks_s:
        return np.zeros((0, 4)), np.zeros((0, 4))
    return np.concatenate(chunks_s), np.concatenate(chunks_w)


def integrate(c: Contour, K, f, side: str = "left", n: int | None = None) -> QuatMatrix:
    """Discrete pairing of a matrix kernel with a scalar function.

    side='left' accumulates K(s_k) w_k f(s_k); side='right' accumulates
    f(s_k) w_k K(s_k).  No prefactor is applied.  K may expose a batched
    ``at_nodes`` method; otherwise it is called per node.  The reduction
    runs in ascending node order so results are bit-reproducible.
    """
    if side not in ("left", "right"):
        raise InputError("side must be 'left' or 'right'")
    s_arr, w_arr = node_arrays(c)
    if len(s_arr) == 0:
        if n is None:
            n = getattr(K, "n", None)
        if n is None:
            raise InputError("empty contour needs explicit dimension n")
        return QuatMatrix.zeros(n)

    if hasattr(K, "at_nodes"):
        kvals = K.at_nodes(s_arr)
    else:
        kvals = np.stack([K(Quaternion.from_array(s)).data for s in s_arr])
    fvals = np.stack([f(Quaternion.from_array(s)).as_array() for s in s_arr])

    if side == "left":
        scal = qmul_arr(w_arr, fvals)
        terms = qmul_arr(kvals, scal[:, None, None, :])
    else:
        scal = qmul_arr(fvals, w_arr)
        terms = qmul_arr(scal[:, None, None, :], kvals)

    acc = terms[0].copy()
    for k in range(1, terms.shape[0]):
        acc += terms[k]
    return QuatMatrix(acc)


# ---------------------------------------------------------------------------
# automatic contour construction around spectral spheres


def _min_enclosing_circle(points):
    """Smallest circle containing a small set of plane points."""
    pts = [np.array(p, dtype=float) for p in points]
    if len(pts) == 1:
        return pts[0], 0.0

    def covers(center, r2, eps=1e-12):
        return all(np.sum((p - center) ** 2) <= r2 * (1.0 + eps) + eps for p in pts)

    best_c, best_r2 = None, math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            c = 0.5 * (pts[i] + pts[j])
            r2 = float(np.sum((pts[i] - c) ** 2))
            if r2 < best_r2 and covers(c, r2):
                best_c, best_r2 = c, r2
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            for k in range(j + 1, len(pts)):
                c = _circumcenter(pts[i], pts[j], pts[k])
                if c is None:
                    continue
                r2 = float(np.sum((pts[i] - c) ** 2))
                if r2 < best_r2 and covers(c, r2):
                    best_c, best_r2 = c, r2
    return best_c, math.sqrt(best_r2)


def _circumcenter(a, b, c):
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if abs(d) < 1e-14:
        return None
    ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
    uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
    return np.array([ux, uy])


def _axis_centered_radius(points):
    """Minimize over real c the max distance from (c, 0) to the points."""
    us = [p[0] for p in points]
    lo, hi = min(us), max(us)
    radius_at = lambda c: max(math.hypot(p[0] - c, p[1]) for p in points)
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if radius_at(m1) <= radius_at(m2):
            hi = m2
        else:
            lo = m1
    c = 0.5 * (lo + hi)
    return c, radius_at(c)


def _cluster(points, threshold):
    """Single-linkage clusters of half-plane points; merge when closer
    than threshold."""
    m = len(points)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if math.hypot(points[i][0] - points[j][0],
                          points[i][1] - points[j][1]) < threshold:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=min)


def default_margin(spheres) -> float:
    """0.25 of the smallest gap between distinct spheres; for a single
    sphere, half of (1 + its distance from the origin)."""
    gaps = [spheres[i].distance(spheres[j])
            for i in range(len(spheres)) for j in range(i + 1, len(spheres))
            if spheres[i].distance(spheres[j]) > 0.0]
    if gaps:
        return 0.25 * min(gaps)
    reach = max((math.hypot(sp.u, sp.v) for sp in spheres), default=0.0)
    return 0.5 * (1.0 + reach)


def auto_contour(spheres, selection, margin: float | None = None,
                 J: Quaternion = E1, N: int = DEFAULT_NODES) -> Contour:
    """Minimal union of circles enclosing exactly the selected spheres.

    Selected spheres are clustered by single linkage with gap threshold
    4 * margin; each cluster becomes a conjugate disk pair when it sits
    far enough from the real axis and a real-centered circle otherwise.
    Every boundary keeps clearance >= margin from both the enclosed and
    the excluded spheres, and the precondition that selected and
    unselected spheres are separated by more than 2 * margin is checked.
    """
    spheres = list(spheres)
    selection = sorted(set(int(i) for i in selection))
    for i in selection:
        if not 0 <= i < len(spheres):
            raise InputError(f"selection index {i} out of range")
    if margin is None:
        margin = default_margin(spheres) if spheres else 1.0
    if margin <= 0.0:
        raise GeometryError("margin must be positive")
    selected = [spheres[i] for i in selection]
    excluded = [sp for i, sp in enumerate(spheres) if i not in selection]
    if not selected:
        return Contour(J, (), N)

    for sin in selected:
        for sout in excluded:
            if sin.distance(sout) <= 2.0 * margin:
                raise GeometryError(
                    f"selected sphere ({sin.u}, {sin.v}) and excluded sphere "
                    f"({sout.u}, {sout.v}) are separated by "
                    f"{sin.distance(sout):.3e} <= 2 * margin")

    pts = [(sp.u, sp.v) for sp in selected]
    components = []
    for group in _cluster(pts, 4.0 * margin):
        gpts = [pts[i] for i in group]
        center, r = _min_enclosing_circle(gpts)
        if center is not None and center[1] - (r + margin) > 0.0:
            components.append(DiskPair(float(center[0]), float(center[1]),
                                       r + margin))
        else:
            sym = gpts + [(u, -v) for (u, v) in gpts if v != 0.0]
            c, rr = _axis_centered_radius(sym)
            components.append(Circle(float(c), rr + margin))
    contour = Contour(J, tuple(components), N)
    _validate_geometry(contour, selected, excluded, margin)
    return contour


def enclosing_circle(spheres, margin: float | None = None, J: Quaternion = E1,
                     N: int = DEFAULT_NODES) -> Contour:
    """One real-centered circle around the whole spectrum."""
    spheres = list(spheres)
    if not spheres:
        return Contour(J, (), N)
    if margin is None:
        margin = default_margin(spheres)
    sym = [(sp.u, sp.v) for sp in spheres] + [(sp.u, -sp.v) for sp in spheres]
    c, r = _axis_centered_radius(sym)
    return Contour(J, (Circle(float(c), r + margin),), N)


def _validate_geometry(contour, selected, excluded, margin):
    circles = contour.plane_circles()
    slack = margin * (1.0 - 1e-9)
    for sp in selected:
        for (u, v) in {(sp.u, sp.v), (sp.u, -sp.v)}:
            dists = [math.hypot(u - cu, v - cv) for (cu, cv, _) in circles]
            inside = [d < r for d, (_, _, r) in zip(dists, circles)]
            if not any(inside):
                raise GeometryError(f"sphere point ({u}, {v}) not enclosed")
            if min(abs(d - r) for d, (_, _, r) in zip(dists, circles)) < slack:
                raise GeometryError(
                    f"sphere point ({u}, {v}) closer than margin to a boundary")
    for sp in excluded:
        for (u, v) in {(sp.u, sp.v), (sp.u, -sp.v)}:
            for (cu, cv, r) in circles:
                if math.hypot(u - cu, v - cv) < r + slack:
                    raise GeometryError(
                        f"excluded sphere point ({u}, {v}) not cleared")
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            (u1, v1, r1), (u2, v2, r2) = circles[i], circles[j]
            if math.hypot(u1 - u2, v1 - v2) <= r1 + r2:
                raise GeometryError("contour circles overlap")


def converge_nodes(evaluate, c: Contour, rtol: float = 1e-10,
                   n_max: int = MAX_NODES):
    """Double nodes until successive values agree within rtol (relative).

    evaluate maps a contour to a QuatMatrix.  Returns (value, N_used).
    """
    N = c.nodes_per_circle
    prev = evaluate(c.with_nodes(N))
    while N < n_max:
        N *= 2
        cur = evaluate(c.with_nodes(N))
        scale = max(cur.norm(), prev.norm(), 1.0)
        if (cur - prev).norm() <= rtol * scale:
            return cur, N
        prev = cur
    return prev, N


# ---------------------------------------------------------------------------
# file format


def contour_from_dict(doc) -> Contour:
    if not isinstance(doc, dict) or "circles" not in doc or "J" not in doc:
        raise InputError("contour document needs 'J' and 'circles'")
    comps = []
    for item in doc["circles"]:
        orientation = int(item.get("orientation", 1))
        if "center" in item:
            comps.append(Circle(float(item["center"]), float(item["radius"]),
                                orientation))
        elif "u" in item:
            comps.append(DiskPair(float(item["u"]), float(item["v"]),
                                  float(item["radius"]), orientation))
        else:
            raise InputError("each circle needs 'center' or a ('u', 'v') pair")
    return Contour(imaginary_unit(doc["J"]), tuple(comps),
                   int(doc.get("nodes", DEFAULT_NODES)))


def contour_to_dict(c: Contour) -> dict:
    circles = []
    for comp in c.components:
        if isinstance(comp, Circle):
            circles.append({"center": comp.center, "radius": comp.radius,
                            "orientation": comp.orientation})
        else:
            circles.append({"u": comp.u, "v": comp.v, "radius": comp.radius,
                            "orientation": comp.orientation})
    return {"J": [c.J.w, c.J.x, c.J.y, c.J.z], "circles": circles,
            "nodes": c.nodes_per_circle}


def load_contour(path) -> Contour:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read contour file {path}: {exc}") from exc
    return contour_from_dict(doc)


def save_contour(c: Contour, path) -> None:
    with open(path, "w") as fh:
        json.dump(contour_to_dict(c), fh)
