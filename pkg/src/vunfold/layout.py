"""Linear vertex-unfolding layout along a Hamiltonian face path.

Each face gets its own vertical slab ``[x_left, x_right]`` with its entry
vertex on the left boundary and its exit vertex on the right one. A
non-triangular face is entered and left at its two farthest-apart corners,
so every other corner projects between them. A triangle ``pqr`` is turned
so that ``x(p) <= x(r) <= x(q)``. Slabs are chained left to right, so two
faces can meet only on a shared boundary line.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArcMismatch, DegenerateTriangle, NotLongestPair
from .mesh import Polyhedron, newell_normal

TIE_RTOL = 1e-12
CONGRUENCE_RTOL = 1e-9
COINCIDENCE_ATOL = 1e-9

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlatFace:
    """A face developed into the plane, outward normal towards +z."""

    face: int
    vertices: tuple[int, ...]
    corners: np.ndarray

    def corner(self, v: int) -> np.ndarray:
        return self.corners[self.vertices.index(v)]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class PlacedFace:
    face: int
    vertices: tuple[int, ...]
    corners: np.ndarray
    x_left: float
    x_right: float
    entry: int
    exit: int

    @property
    def width(self) -> float:
        return self.x_right - self.x_left

    def corner(self, v: int) -> np.ndarray:
        return self.corners[self.vertices.index(v)]

    def translated(self, dx: float, dy: float) -> "PlacedFace":
        c = self.corners + np.array([dx, dy])
        return PlacedFace(self.face, self.vertices, c, self.x_left + dx,
                          self.x_right + dx, self.entry, self.exit)


@dataclass(frozen=True)
class LinearLayout:
    """Placed faces in strip order.

    ``shared[i]`` records that the exit of face ``i`` and the entry of face
    ``i + 1`` are the same vertex and must be the same point.
    """

    placed: tuple[PlacedFace, ...]
    shared: tuple[tuple[int, int, int], ...]
    name: str = ""

    @property
    def width(self) -> float:
        return self.placed[-1].x_right - self.placed[0].x_left

    def bounds(self) -> tuple[float, float, float, float]:
        pts = np.vstack([pf.corners for pf in self.placed])
        return (float(pts[:, 0].min()), float(pts[:, 1].min()),
                float(pts[:, 0].max()), float(pts[:, 1].max()))


def flatten_face(p: Polyhedron, f: int) -> FlatFace:
    """Isometric copy of face ``f`` in the plane, keeping its orientation."""
    walk = p.graph.faces[f]
    pts = p.face_points(f)
    n = newell_normal(pts)
    n = n / np.linalg.norm(n)
    e1 = pts[1] - pts[0]
    e1 = e1 - np.dot(e1, n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    rel = pts - pts[0]
    flat = np.column_stack([rel @ e1, rel @ e2])
    return FlatFace(f, tuple(walk), flat)


def _sqdist(a, b) -> float:
    d = a - b
    return float(d[0] * d[0] + d[1] * d[1])


def longest_span_endpoints(f: FlatFace) -> tuple[int, int]:
    """Farthest-apart pair of corners, lowest ids on (relative) ties."""
    k = len(f)
    best = max(_sqdist(f.corners[i], f.corners[j])
               for i in range(k) for j in range(i + 1, k))
    cands = []
    for i in range(k):
        for j in range(i + 1, k):
            if _sqdist(f.corners[i], f.corners[j]) >= best * (1 - TIE_RTOL):
                u, v = f.vertices[i], f.vertices[j]
                cands.append((min(u, v), max(u, v)))
    return min(cands)


def _rotate_into_slab(f: FlatFace, entry: int, exit: int, d: np.ndarray) -> PlacedFace:
    # rotate so that unit direction d becomes +x, entry at the origin
    c, s = float(d[0]), float(d[1])
    rot = np.array([[c, s], [-s, c]])
    rel = f.corners - f.corner(entry)
    placed = rel @ rot.T
    i_in = f.vertices.index(entry)
    i_out = f.vertices.index(exit)
    placed[i_in] = 0.0
    return PlacedFace(f.face, f.vertices, placed, 0.0, float(placed[i_out, 0]),
                      entry, exit)


def place_polygon_in_slab(f: FlatFace, u: int, v: int) -> PlacedFace:
    """Place ``f`` with ``u`` on the left slab boundary and ``v`` on the right."""
    if {u, v} != set(longest_span_endpoints(f)):
        raise NotLongestPair(f"({u}, {v}) is not the longest pair of face {f.face}")
    d = f.corner(v) - f.corner(u)
    pf = _rotate_into_slab(f, u, v, d / math.hypot(*d))
    # the exit lies on the x-axis up to rounding; pin it there
    c = pf.corners.copy()
    c[f.vertices.index(v), 1] = 0.0
    return PlacedFace(pf.face, pf.vertices, c, pf.x_left, pf.x_right, u, v)


def triangle_direction(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Unit ``d`` with ``(r-p).d >= 0`` and ``(q-r).d >= 0``.

    The bisector of the two edge directions works for every triangle with
    positive area.
    """
    a, b = r - p, q - r
    la, lb = math.hypot(*a), math.hypot(*b)
    d = a / la + b / lb
    return d / math.hypot(*d)


def place_triangle(f: FlatFace, p: int, q: int) -> PlacedFace:
    """Place triangle ``f`` entered at ``p`` and left at ``q``."""
    if len(f) != 3:
        raise ArcMismatch(f"face {f.face} is not a triangle")
    if p == q or p not in f.vertices or q not in f.vertices:
        raise ArcMismatch(f"({p}, {q}) are not two corners of face {f.face}")
    (r,) = [w for w in f.vertices if w not in (p, q)]
    P, Q, R = f.corner(p), f.corner(q), f.corner(r)
    area2 = abs(float((Q[0] - P[0]) * (R[1] - P[1]) - (Q[1] - P[1]) * (R[0] - P[0])))
    scale = max(_sqdist(P, Q), _sqdist(Q, R), _sqdist(R, P))
    if area2 <= 1e-12 * scale:
        raise DegenerateTriangle(f"face {f.face} has zero area")
    return _rotate_into_slab(f, p, q, triangle_direction(P, Q, R))


def place_face(f: FlatFace, entry: int, exit: int) -> PlacedFace:
    if len(f) == 3:
        return place_triangle(f, entry, exit)
    if {entry, exit} != set(longest_span_endpoints(f)):
        raise ArcMismatch(
            f"arc ({entry}, {exit}) of face {f.face} is not its longest pair")
    return place_polygon_in_slab(f, entry, exit)


def _steps(path) -> list[tuple[int, int, int]]:
    if hasattr(path, "steps"):
        return path.steps()
    return [tuple(s) for s in path]


def layout_face_path(p: Polyhedron, path) -> LinearLayout:
    """Chain the faces of a directed face path into one horizontal strip.

    ``path`` is a :class:`~vunfold.tight.FacePath` or a list of
    ``(entry, face, exit)`` steps.
    """
    placed: list[PlacedFace] = []
    shared = []
    anchor = (0.0, 0.0)
    for i, (u, f, v) in enumerate(_steps(path)):
        pf = place_face(flatten_face(p, f), u, v)
        # the entry sits at exactly (0, 0), so this translation is exact for it
        pf = pf.translated(*anchor)
        log.debug("face %d: enter %d, leave %d, slab width %.6g", f, u, v, pf.width)
        if placed:
            shared.append((i - 1, i, u))
        placed.append(pf)
        anchor = tuple(float(c) for c in pf.corner(v))
    return LinearLayout(tuple(placed), tuple(shared), p.name)


def designated_longest_pairs(p: Polyhedron) -> dict[int, tuple[int, int]]:
    """Longest pair of every non-triangular face."""
    return {f: longest_span_endpoints(flatten_face(p, f))
            for f, walk in enumerate(p.graph.faces) if len(walk) > 3}


# exact interior-disjointness checks

def _orient(a, b, c) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _exact(corners: np.ndarray) -> list[tuple[Fraction, Fraction]]:
    return [(Fraction(float(x)), Fraction(float(y))) for x, y in corners]


def _ear_clip(poly):
    """Triangles of a simple ccw polygon; zero-area ears are dropped."""
    idx = list(range(len(poly)))
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10 * len(poly) ** 2:
        guard += 1
        k = len(idx)
        for j in range(k):
            a, b, c = idx[j - 1], idx[j], idx[(j + 1) % k]
            o = _orient(poly[a], poly[b], poly[c])
            if o < 0:
                continue
            if o > 0 and any(
                    _orient(poly[a], poly[b], poly[m]) >= 0
                    and _orient(poly[b], poly[c], poly[m]) >= 0
                    and _orient(poly[c], poly[a], poly[m]) >= 0
                    for m in idx if m not in (a, b, c) and poly[m] not in
                    (poly[a], poly[b], poly[c])):
                continue
            if o > 0:
                tris.append((poly[a], poly[b], poly[c]))
            idx.pop(j)
            break
        else:
            raise ValueError("polygon is not simple and counter-clockwise")
    if len(idx) == 3:
        t = tuple(poly[i] for i in idx)
        if _orient(*t) > 0:
            tris.append(t)
    return tris


def _separated(t1, t2) -> bool:
    # some edge line of one ccw triangle has the other on its closed outside
    for s, o in ((t1, t2), (t2, t1)):
        for i in range(3):
            a, b = s[i], s[(i + 1) % 3]
            if all(_orient(a, b, c) <= 0 for c in o):
                return True
    return False


def _box(poly):
    xs = [c[0] for c in poly]
    ys = [c[1] for c in poly]
    return min(xs), max(xs), min(ys), max(ys)


def interiors_overlap(c1: np.ndarray, c2: np.ndarray) -> bool:
    """Exact test whether two simple ccw polygons share interior points."""
    p1, p2 = _exact(c1), _exact(c2)
    b1, b2 = _box(p1), _box(p2)
    if b1[1] <= b2[0] or b2[1] <= b1[0] or b1[3] <= b2[2] or b2[3] <= b1[2]:
        return False
    for t1 in _ear_clip(p1):
        for t2 in _ear_clip(p2):
            if not _separated(t1, t2):
                return True
    return False


def _signed_area(c: np.ndarray) -> float:
    x, y = c[:, 0], c[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def verify_layout(l: LinearLayout, p: Polyhedron | None = None) -> str | None:
    """First violated layout property, or None.

    With ``p`` the placed faces are also compared with the source faces and
    every face must appear exactly once. Tolerances scale with the model
    diameter (or the layout height when ``p`` is absent).
    """
    if not l.placed:
        return "empty layout"
    if p is not None:
        diam = p.diameter()
    else:
        pts = np.vstack([pf.corners for pf in l.placed])
        diam = float(np.ptp(pts, axis=0).max())
    tol = COINCIDENCE_ATOL * diam
    if p is not None:
        ids = sorted(pf.face for pf in l.placed)
        if ids != list(range(p.face_count)):
            return "faces are not each placed exactly once"
    for i, pf in enumerate(l.placed):
        c = pf.corners
        if p is not None:
            if tuple(p.graph.faces[pf.face]) != pf.vertices:
                return f"face {pf.face}: corner ids differ from the model"
            src = p.face_points(pf.face)
            k = len(src)
            for a in range(k):
                for b in range(a + 1, k):
                    d3 = float(np.linalg.norm(src[a] - src[b]))
                    d2 = float(np.linalg.norm(c[a] - c[b]))
                    if abs(d2 - d3) > CONGRUENCE_RTOL * max(d3, diam):
                        return f"face {pf.face}: not congruent to the model face"
        if _signed_area(c) <= 0:
            return f"face {pf.face}: placed mirror-imaged or degenerate"
        if pf.entry not in pf.vertices or pf.exit not in pf.vertices:
            return f"face {pf.face}: entry or exit is not a corner"
        if abs(pf.corner(pf.entry)[0] - pf.x_left) > tol:
            return f"face {pf.face}: entry not on the left slab boundary"
        if abs(pf.corner(pf.exit)[0] - pf.x_right) > tol:
            return f"face {pf.face}: exit not on the right slab boundary"
        if pf.x_right < pf.x_left - tol:
            return f"face {pf.face}: slab has negative width"
        if np.any(c[:, 0] < pf.x_left - tol) or np.any(c[:, 0] > pf.x_right + tol):
            return f"face {pf.face}: corner outside its slab"
        if i > 0:
            prev = l.placed[i - 1]
            if abs(prev.x_right - pf.x_left) > tol:
                return f"slabs {i - 1} and {i} are not consecutive"
            if prev.exit != pf.entry:
                return f"faces {i - 1} and {i} do not share their joint vertex"
            if np.linalg.norm(prev.corner(prev.exit) - pf.corner(pf.entry)) > tol:
                return f"faces {i - 1} and {i}: shared corner not coincident"
    for i, j, v in l.shared:
        a, b = l.placed[i], l.placed[j]
        if np.linalg.norm(a.corner(v) - b.corner(v)) > tol:
            return f"faces {i} and {j}: vertex {v} not coincident"
    n = len(l.placed)
    xmax = [max(float(x) for x in pf.corners[:, 0]) for pf in l.placed]
    xmin = [min(float(x) for x in pf.corners[:, 0]) for pf in l.placed]
    for i in range(n):
        for j in range(i + 1, n):
            # a vertical line between them settles it without arithmetic
            if xmax[i] <= xmin[j] or xmax[j] <= xmin[i]:
                continue
            if interiors_overlap(l.placed[i].corners, l.placed[j].corners):
                return f"faces {l.placed[i].face} and {l.placed[j].face} overlap"
    return None


def unfold(p: Polyhedron, path=None) -> LinearLayout:
    """Full pipeline: Hamiltonian face path with longest pairs, then layout."""
    from .tight import hamiltonian_face_path
    if path is None:
        path = hamiltonian_face_path(p.graph, designated_longest_pairs(p))
    return layout_face_path(p, path)


def layout_steps(l: LinearLayout) -> list[tuple[int, int, int]]:
    return [(pf.entry, pf.face, pf.exit) for pf in l.placed]

