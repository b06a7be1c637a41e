"""Builtin polyhedra with closed-form coordinates.

Names: ``tetrahedron``, ``octahedron``, ``icosahedron``, ``pyramid:n``,
``antiprism:n``, ``snub-cube``, ``truncated-cube``, ``standard:n``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.spatial import ConvexHull

from .errors import UnfoldError, UnknownShape
from .flips import flip, is_flippable, standard_faces
from .mesh import PlaneGraph, Polyhedron, build_plane_graph, make_polyhedron, signed_volume

PHI = (1 + math.sqrt(5)) / 2


def hull_faces(points: np.ndarray, tol: float = 1e-9) -> list[tuple[int, ...]]:
    """Faces of the convex hull, coplanar triangles merged, outward-oriented.

    Every point must be a hull vertex.
    """
    hull = ConvexHull(points)
    groups: list[tuple[np.ndarray, float, set[int]]] = []
    for simplex, eq in zip(hull.simplices, hull.equations):
        n, off = eq[:3], eq[3]
        for gn, goff, verts in groups:
            if abs(np.dot(gn, n) - 1) < tol and abs(goff - off) < tol:
                verts.update(int(i) for i in simplex)
                break
        else:
            groups.append((n, off, {int(i) for i in simplex}))
    faces = []
    for n, _, verts in groups:
        vs = sorted(verts)
        pts = points[vs]
        c = pts.mean(axis=0)
        e1 = pts[0] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        ang = [math.atan2(np.dot(p - c, e2), np.dot(p - c, e1)) for p in pts]
        walk = [v for _, v in sorted(zip(ang, vs))]
        i = walk.index(min(walk))
        faces.append(tuple(walk[i:] + walk[:i]))
    faces.sort()
    return faces


def _from_hull(points, name) -> Polyhedron:
    pts = np.asarray(points, dtype=float)
    return make_polyhedron(hull_faces(pts), pts, name)


def tetrahedron() -> Polyhedron:
    return _from_hull([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], "tetrahedron")


def octahedron() -> Polyhedron:
    pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    return _from_hull(pts, "octahedron")


def icosahedron() -> Polyhedron:
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts += [(0, s1, s2 * PHI), (s1, s2 * PHI, 0), (s2 * PHI, 0, s1)]
    return _from_hull(pts, "icosahedron")


def pyramid(n: int) -> Polyhedron:
    """Pyramid over a regular n-gon of side 1, apex at height 1."""
    if n < 3:
        raise UnknownShape(f"pyramid needs n >= 3, got {n}")
    r = 0.5 / math.sin(math.pi / n)
    pts = [(r * math.cos(2 * math.pi * k / n), r * math.sin(2 * math.pi * k / n), 0.0)
           for k in range(n)]
    pts.append((0.0, 0.0, 1.0))
    return _from_hull(pts, f"pyramid:{n}")


def antiprism(n: int) -> Polyhedron:
    """Uniform n-antiprism with unit edges."""
    if n < 3:
        raise UnknownShape(f"antiprism needs n >= 3, got {n}")
    r = 0.5 / math.sin(math.pi / n)
    h = math.sqrt(1 - 2 * r * r * (1 - math.cos(math.pi / n)))
    pts = []
    for k in range(n):
        t = 2 * math.pi * k / n
        pts.append((r * math.cos(t), r * math.sin(t), h / 2))
    for k in range(n):
        t = 2 * math.pi * k / n + math.pi / n
        pts.append((r * math.cos(t), r * math.sin(t), -h / 2))
    return _from_hull(pts, f"antiprism:{n}")


def _tribonacci() -> float:
    s = math.sqrt(33)
    return (1 + (19 + 3 * s) ** (1 / 3) + (19 - 3 * s) ** (1 / 3)) / 3


def snub_cube() -> Polyhedron:
    t = _tribonacci()
    base = (1.0, 1 / t, t)
    even = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    odd = [(0, 2, 1), (2, 1, 0), (1, 0, 2)]
    pts = []
    for signs in itertools.product((1, -1), repeat=3):
        plus = sum(s > 0 for s in signs)
        perms = even if plus % 2 == 0 else odd
        for perm in perms:
            v = [signs[i] * base[i] for i in range(3)]
            pts.append(tuple(v[perm[j]] for j in range(3)))
    return _from_hull(pts, "snub-cube")


def truncated_cube() -> Polyhedron:
    xi = math.sqrt(2) - 1
    pts = set()
    for perm in itertools.permutations((xi, 1.0, 1.0)):
        for signs in itertools.product((1, -1), repeat=3):
            pts.add(tuple(s * c for s, c in zip(signs, perm)))
    return _from_hull(sorted(pts), "truncated-cube")


def standard(n: int) -> Polyhedron:
    """Convex realization of the standard triangulation on n vertices."""
    if n < 4:
        raise UnknownShape(f"standard triangulation needs n >= 4, got {n}")
    pts = [(0.0, -1.0, 1.0), (0.0, -1.0, -1.0)]
    for i in range(1, n - 1):
        th = math.pi * i / (n - 1)
        pts.append((math.cos(th), math.sin(th), 0.0))
    faces = standard_faces(n)
    p = make_polyhedron(faces, pts, f"standard:{n}")
    if signed_volume(p) < 0:
        pts = [(-x, y, z) for x, y, z in pts]
        p = make_polyhedron(faces, pts, f"standard:{n}")
    return p


def random_sphere_triangulation(n: int, seed: int = 0) -> Polyhedron:
    """Hull of ``n`` random points on the unit sphere (a triangulation)."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return _from_hull(pts, f"random:{n}:{seed}")


def random_triangulation(n: int, seed: int = 0, flips: int | None = None) -> PlaneGraph:
    """Combinatorial triangulation: a sphere hull scrambled by random flips."""
    rng = np.random.default_rng(seed)
    g = random_sphere_triangulation(n, seed).graph
    for _ in range(n if flips is None else flips):
        edges = g.edges()
        u, v = edges[int(rng.integers(len(edges)))]
        if is_flippable(g, u, v):
            g = flip(g, u, v)[0]
    return g


def merge_across(faces: list[tuple[int, ...]], u: int, v: int) -> list[tuple[int, ...]]:
    """Delete edge ``uv``, merging its two faces into one walk."""
    fi = next(i for i, w in enumerate(faces) if _has_dir(w, u, v))
    hi = next(i for i, w in enumerate(faces) if _has_dir(w, v, u))
    f, h = list(faces[fi]), list(faces[hi])
    f = f[f.index(v):] + f[:f.index(v)]
    h = h[h.index(u):] + h[:h.index(u)]
    merged = tuple(f + h[1:-1])
    rest = [w for i, w in enumerate(faces) if i not in (fi, hi)]
    return rest + [merged]


def _has_dir(walk, u, v):
    k = len(walk)
    return any(walk[i] == u and walk[(i + 1) % k] == v for i in range(k))


def random_tight(n: int, seed: int = 0, attempts: int | None = None) -> PlaneGraph:
    """Tight graph from a random triangulation by deleting edges greedily.

    An edge is deleted when its two faces only touch triangles elsewhere and
    the result stays 3-connected, so big faces may grow past quadrilaterals.
    """
    rng = np.random.default_rng(seed + 7919)
    g = random_triangulation(n, seed)
    faces = list(g.faces)
    for _ in range(attempts if attempts is not None else 2 * n):
        cur = build_plane_graph(faces)
        edges = cur.edges()
        u, v = edges[int(rng.integers(len(edges)))]
        f, h = cur.faces_of_edge(u, v)
        merged = set(cur.faces[f]) | set(cur.faces[h])
        clash = False
        for k, w in enumerate(cur.faces):
            if k not in (f, h) and len(w) > 3 and merged.intersection(w):
                clash = True
                break
        if clash:
            continue
        cand = merge_across(faces, u, v)
        try:
            build_plane_graph(cand)
        except UnfoldError:
            continue
        faces = cand
    return build_plane_graph(faces)


_FIXED = {
    "tetrahedron": tetrahedron,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "snub-cube": snub_cube,
    "truncated-cube": truncated_cube,
}
_PARAM = {"pyramid": pyramid, "antiprism": antiprism, "standard": standard}


def builtin_shape(name: str) -> Polyhedron:
    if name in _FIXED:
        return _FIXED[name]()
    kind, _, arg = name.partition(":")
    if kind in _PARAM and arg:
        try:
            n = int(arg)
        except ValueError:
            raise UnknownShape(f"bad parameter in {name!r}") from None
        return _PARAM[kind](n)
    raise UnknownShape(f"unknown shape {name!r}")


SHAPE_NAMES = sorted(_FIXED) + ["pyramid:n", "antiprism:n", "standard:n"]
