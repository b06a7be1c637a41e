"""Propagation walks for triangular recombinations.

Replacing the arc of a triangle ``abc`` from ``{a, b}`` to ``{a, c}``
toggles the parity of arc-ends at ``b`` and ``c``. A switch or a reflect is
two such toggles on the same edge, so any batch of recombinations is a set
of triangles, each toggling one pair that contains its free corner (the
corner its arc skips).

Classical constructions walk around vertex fans, switching and reflecting until
some arc can be moved. In parity terms such a walk is a path ``x -> ... ->
y`` whose steps are toggles of distinct triangles, and its net effect is to
toggle exactly ``{x, y}``. :func:`find_chain` finds a shortest such walk by
breadth-first search.
"""

from __future__ import annotations

from collections import deque
from typing import Collection

from .errors import PropagationOverrun
from .mesh import PlaneGraph
from .tour import VertexFaceTour

_DFS_BUDGET = 200_000


def _steps(g: PlaneGraph, t: VertexFaceTour, w: int, locked: Collection[int]):
    """Toggle moves out of vertex ``w``: yields ``(triangle, next_vertex)``."""
    for f in g.faces_around_vertex(w):
        if f in locked or not g.is_triangle(f):
            continue
        a, b = t.arcs[f]
        c = g.apex(f, a, b)
        if w == c:
            yield f, a
            yield f, b
        else:
            yield f, c


def _net_arcs(g, t, path):
    net: dict[int, set[int]] = {}
    for f, p, q in path:
        s = net.setdefault(f, set())
        s ^= {p, q}
    out = {}
    for f, s in net.items():
        if not s:
            continue
        new = set(t.arcs[f]) ^ s
        if len(new) != 2:
            return None
        out[f] = tuple(sorted(new))
    return out


def find_chain(g: PlaneGraph, t: VertexFaceTour, x: int, y: int,
               locked: Collection[int] = (), max_steps: int | None = None
               ) -> dict[int, tuple[int, int]]:
    """New arcs for a batch of triangles whose net toggle is ``{x, y}``.

    Only triangles not in ``locked`` are used. Raises PropagationOverrun if
    no walk of at most ``max_steps`` steps (default ``2 * sum(deg)``) exists.
    """
    if x == y:
        return {}
    if max_steps is None:
        max_steps = 2 * g.degree_sum()
    locked = frozenset(locked)
    start = (x, -1)
    prev: dict[tuple[int, int], tuple[tuple[int, int], int, int, int] | None] = {start: None}
    queue = deque([(start, 0)])
    goal = None
    while queue:
        state, depth = queue.popleft()
        w, last = state
        if w == y:
            goal = state
            break
        if depth >= max_steps:
            continue
        for f, nxt in _steps(g, t, w, locked):
            if f == last:
                continue
            s2 = (nxt, f)
            if s2 not in prev:
                prev[s2] = (state, f, w, nxt)
                queue.append((s2, depth + 1))
    if goal is not None:
        path = []
        s = goal
        while prev[s] is not None:
            ps, f, p, q = prev[s]
            path.append((f, p, q))
            s = ps
        path.reverse()
        out = _net_arcs(g, t, path)
        if out is not None:
            return out
    out = _dfs_chain(g, t, x, y, locked, max_steps)
    if out is None:
        raise PropagationOverrun(
            f"no recombination walk from {x} to {y} within {max_steps} steps")
    return out


def _dfs_chain(g, t, x, y, locked, max_steps):
    # simple paths with distinct triangles; exponential in principle, only
    # reached when the shortest walk reuses a triangle
    budget = [_DFS_BUDGET]
    used: set[int] = set()
    visited = {x}
    path: list[tuple[int, int, int]] = []

    def rec(w):
        if w == y:
            return True
        if len(path) >= max_steps or budget[0] <= 0:
            return False
        budget[0] -= 1
        for f, nxt in _steps(g, t, w, locked):
            if f in used or nxt in visited:
                continue
            used.add(f)
            visited.add(nxt)
            path.append((f, w, nxt))
            if rec(nxt):
                return True
            path.pop()
            visited.discard(nxt)
            used.discard(f)
        return False

    if rec(x):
        return _net_arcs(g, t, path)
    return None
