"""Combinatorial and geometric model of a polyhedron.

A :class:`PlaneGraph` is stored as its list of facial walks. Every walk is
a cyclic sequence of vertex ids, counterclockwise as seen from outside, so
each directed edge ``(u, v)`` lies on exactly one face. The rotation system
and all adjacency queries are derived from that directed-edge map.

A :class:`Polyhedron` adds one 3D point per vertex.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EdgeNotOnFace,
    EulerViolation,
    FaceNotPlanar,
    NonManifold,
    NotThreeConnected,
)

PLANARITY_RTOL = 1e-9


class PlaneGraph:
    """Simple 3-connected plane graph given by its facial walks.

    Instances are treated as immutable values. Use :func:`build_plane_graph`
    to construct a validated graph.
    """

    __slots__ = ("faces", "vertex_count", "_dface", "_rotation", "_fans")

    def __init__(self, faces: Sequence[Sequence[int]], vertex_count: int):
        self.faces: tuple[tuple[int, ...], ...] = tuple(tuple(f) for f in faces)
        self.vertex_count = vertex_count
        dface = {}
        for fid, walk in enumerate(self.faces):
            k = len(walk)
            for i in range(k):
                dface[walk[i], walk[(i + 1) % k]] = fid
        self._dface: dict[tuple[int, int], int] = dface
        self._rotation: list[tuple[int, ...]] | None = None
        self._fans: list[tuple[int, ...]] | None = None

    def __repr__(self):
        return (f"PlaneGraph(V={self.vertex_count}, E={self.edge_count}, "
                f"F={self.face_count})")

    def __eq__(self, other):
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return (self.vertex_count == other.vertex_count
                and self.faces == other.faces)

    def __hash__(self):
        return hash((self.vertex_count, self.faces))

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def edge_count(self) -> int:
        return len(self._dface) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as sorted pairs, in sorted order."""
        return sorted((u, v) for (u, v) in self._dface if u < v)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._dface

    def face_of(self, u: int, v: int) -> int:
        """Face containing the directed edge ``u -> v``."""
        return self._dface[u, v]

    def faces_of_edge(self, u: int, v: int) -> tuple[int, int]:
        return self._dface[u, v], self._dface[v, u]

    def degree(self, v: int) -> int:
        return len(self.rotation(v))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation(v)

    def rotation(self, v: int) -> tuple[int, ...]:
        """Neighbors of ``v`` in counterclockwise order."""
        if self._rotation is None:
            self._build_rotation()
        return self._rotation[v]

    def faces_around_vertex(self, v: int) -> tuple[int, ...]:
        """Faces incident to ``v`` in rotation order.

        Entry ``i`` is the face lying between ``rotation(v)[i]`` and
        ``rotation(v)[i + 1]``.
        """
        if self._fans is None:
            self._build_rotation()
        return self._fans[v]

    def adjacent_face_across(self, f: int, edge: tuple[int, int]) -> int:
        u, v = edge
        if self._dface.get((u, v)) == f:
            return self._dface[v, u]
        if self._dface.get((v, u)) == f:
            return self._dface[u, v]
        raise EdgeNotOnFace(f"edge {edge} is not on face {f}")

    def face_size(self, f: int) -> int:
        return len(self.faces[f])

    def is_triangle(self, f: int) -> bool:
        return len(self.faces[f]) == 3

    def apex(self, f: int, u: int, v: int) -> int:
        """Third corner of triangular face ``f`` opposite the edge ``uv``."""
        (w,) = set(self.faces[f]) - {u, v}
        return w

    def degree_sum(self) -> int:
        return 2 * self.edge_count

    def graph_hash(self) -> str:
        h = hashlib.sha1(repr((self.vertex_count, self.faces)).encode())
        return h.hexdigest()[:16]

    def _build_rotation(self):
        succ: dict[int, list[int]] = {v: [] for v in range(self.vertex_count)}
        for (u, v) in self._dface:
            succ[u].append(v)
        rotation = []
        fans = []
        for v in range(self.vertex_count):
            outs = succ[v]
            if not outs:
                rotation.append(())
                fans.append(())
                continue
            start = min(outs)
            rot = [start]
            fan = []
            w = start
            while True:
                f = self._dface[v, w]
                fan.append(f)
                walk = self.faces[f]
                i = walk.index(v)
                w = walk[i - 1]
                if w == start:
                    break
                rot.append(w)
                if len(rot) > len(outs):
                    break
            if len(rot) != len(outs):
                raise NonManifold(f"vertex {v} has a disconnected fan")
            rotation.append(tuple(rot))
            fans.append(tuple(fan))
        self._rotation = rotation
        self._fans = fans


def build_plane_graph(face_list: Iterable[Sequence[int]],
                      vertex_count: int | None = None) -> PlaneGraph:
    """Build and validate a :class:`PlaneGraph` from facial walks."""
    faces = [tuple(int(x) for x in f) for f in face_list]
    if not faces:
        raise NonManifold("no faces")
    used = {v for f in faces for v in f}
    n = max(used) + 1 if vertex_count is None else vertex_count
    if used != set(range(n)):
        raise NonManifold("vertex ids must be dense 0..V-1 and all used")
    seen: set[tuple[int, int]] = set()
    for fid, walk in enumerate(faces):
        if len(walk) < 3 or len(set(walk)) != len(walk):
            raise NonManifold(f"face {fid} is not a simple cycle: {walk}")
        for i in range(len(walk)):
            d = (walk[i], walk[(i + 1) % len(walk)])
            if d in seen:
                raise NonManifold(f"directed edge {d} used twice")
            seen.add(d)
    for (u, v) in seen:
        if (v, u) not in seen:
            raise NonManifold(f"edge {u}-{v} lies on only one face")
    g = PlaneGraph(faces, n)
    g._build_rotation()
    V, E, F = g.vertex_count, g.edge_count, g.face_count
    if V - E + F != 2:
        raise EulerViolation(f"V - E + F = {V - E + F} (V={V}, E={E}, F={F})")
    if not is_three_connected(g):
        raise NotThreeConnected("graph is not 3-connected")
    return g


def _connected_without(g: PlaneGraph, removed: set[int]) -> bool:
    alive = [v for v in range(g.vertex_count) if v not in removed]
    if len(alive) <= 1:
        return True
    seen = {alive[0]}
    queue = deque([alive[0]])
    while queue:
        x = queue.popleft()
        for y in g.rotation(x):
            if y not in removed and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(alive)


def is_three_connected(g: PlaneGraph) -> bool:
    # brute force over all vertex pairs; fine at desk scale
    n = g.vertex_count
    if n < 4:
        return False
    if not _connected_without(g, set()):
        return False
    for a in range(n):
        for b in range(a + 1, n):
            if not _connected_without(g, {a, b}):
                return False
    return True


def is_tight(g: PlaneGraph) -> bool:
    """True iff every vertex touches at most one non-triangular face."""
    touched: set[int] = set()
    for walk in g.faces:
        if len(walk) > 3:
            if touched.intersection(walk):
                return False
            touched.update(walk)
    return True


def is_triangulation(g: PlaneGraph) -> bool:
    return all(len(f) == 3 for f in g.faces)


def faces_around_vertex(g: PlaneGraph, v: int) -> tuple[int, ...]:
    return g.faces_around_vertex(v)


def adjacent_face_across(g: PlaneGraph, f: int, edge: tuple[int, int]) -> int:
    return g.adjacent_face_across(f, edge)


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """A plane graph with one 3D point per vertex and planar faces."""

    graph: PlaneGraph
    coords: np.ndarray
    name: str = ""
    planes: tuple[tuple[np.ndarray, float], ...] = field(default=(), repr=False)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def face_count(self) -> int:
        return self.graph.face_count

    def face_points(self, f: int) -> np.ndarray:
        return self.coords[list(self.graph.faces[f])]

    def diameter(self) -> float:
        c = self.coords
        d = c[:, None, :] - c[None, :, :]
        return float(np.sqrt((d ** 2).sum(axis=-1)).max())


def newell_normal(pts: np.ndarray) -> np.ndarray:
    """Area-weighted normal of a closed polygon (right-hand rule)."""
    nxt = np.roll(pts, -1, axis=0)
    n = np.array([
        np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
        np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
        np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
    ])
    return n


def fit_plane(pts: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Least-squares plane through ``pts``.

    Returns ``(unit_normal, offset, residual)`` where the plane is
    ``normal . x = offset``, the normal follows the walk orientation and
    ``residual`` is the largest point-to-plane distance.
    """
    c = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - c)
    n = vt[-1]
    if np.dot(n, newell_normal(pts)) < 0:
        n = -n
    off = float(np.dot(n, c))
    resid = float(np.abs((pts - c) @ n).max())
    return n, off, resid


def _diameter(pts: np.ndarray) -> float:
    d = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((d ** 2).sum(axis=-1)).max())


def check_planarity_of_faces(p: Polyhedron, rtol: float = PLANARITY_RTOL) -> list[float]:
    """Per-face maximum distance to the least-squares plane.

    Raises FaceNotPlanar as soon as a residual exceeds ``rtol`` times the
    face diameter.
    """
    out = []
    for fid in range(p.graph.face_count):
        pts = p.face_points(fid)
        _, _, resid = fit_plane(pts)
        if resid > rtol * _diameter(pts):
            raise FaceNotPlanar(f"face {fid} residual {resid:.3e}")
        out.append(resid)
    return out


def make_polyhedron(faces: Iterable[Sequence[int]], coords, name: str = "",
                    graph: PlaneGraph | None = None) -> Polyhedron:
    """Validate combinatorics and geometry and return a :class:`Polyhedron`."""
    g = graph if graph is not None else build_plane_graph(faces)
    xyz = np.asarray(coords, dtype=float).reshape(-1, 3)
    if len(xyz) != g.vertex_count:
        raise NonManifold(f"{len(xyz)} coordinates for {g.vertex_count} vertices")
    for fid, walk in enumerate(g.faces):
        pts = xyz[list(walk)]
        if np.any(np.all(pts == np.roll(pts, -1, axis=0), axis=1)):
            raise FaceNotPlanar(f"face {fid} has coincident consecutive corners")
    p = Polyhedron(g, xyz, name)
    check_planarity_of_faces(p)
    planes = []
    for fid in range(g.face_count):
        n, off, _ = fit_plane(p.face_points(fid))
        planes.append((n, off))
    object.__setattr__(p, "planes", tuple(planes))
    return p


def signed_volume(p: Polyhedron) -> float:
    """Signed enclosed volume; positive for outward-oriented faces."""
    vol = 0.0
    for walk in p.graph.faces:
        a = p.coords[walk[0]]
        for i in range(1, len(walk) - 1):
            b, c = p.coords[walk[i]], p.coords[walk[i + 1]]
            vol += float(np.dot(a, np.cross(b, c)))
    return vol / 6.0
