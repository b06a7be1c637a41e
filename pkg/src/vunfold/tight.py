"""Hamiltonian, non-crossing vertex-face tours of tight plane graphs.

Pipeline, in proof order:

1. :func:`triangulate_tight` cuts a triangle off the largest face until
   every face is a triangle.
2. :func:`~vunfold.flips.spanning_tour_of_triangulation` gives a spanning
   tour of the triangulation.
3. :func:`remove_diagonal_merge` undoes the cuts in reverse, merging the two
   arcs of each split face into one.
4. :func:`reroute_designated_arcs` forces each designated face onto its
   prescribed vertex pair.
5. :func:`hamiltonize` merges components; :func:`uncross` rematches passes
   at every vertex so none interleave.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Collection, Mapping

from .chains import find_chain
from .errors import (
    DesignationInvalid,
    NoConnectedRewiring,
    NotTight,
    NoValidDiagonal,
    PatternMismatch,
    PropagationOverrun,
)
from .flips import spanning_tour_of_triangulation
from .mesh import PlaneGraph, is_tight
from .tour import (
    VertexFaceTour,
    component_index,
    components,
    crossing_count,
    crossings_at,
    recombine,
    reflect,
    rematch,
    switch,
    validate_spanning_tour,
)

log = logging.getLogger(__name__)

DesignatedPairs = Mapping[int, tuple[int, int]]


@dataclass(frozen=True)
class Cut:
    """Diagonal ``v1 v3`` cutting triangle ``(v1, v2, v3)`` off ``face``.

    The remainder keeps the id ``face``; the triangle gets id ``new_face``.
    """

    face: int
    new_face: int
    corners: tuple[int, int, int]
    before: tuple[int, ...]

    @property
    def diagonal(self) -> tuple[int, int]:
        return (self.corners[0], self.corners[2])


@dataclass
class TriangulationPlan:
    cuts: list[Cut] = field(default_factory=list)
    original_face_count: int = 0

    def original_face(self, f: int) -> int:
        """Face of the untriangulated graph containing face ``f``."""
        for cut in reversed(self.cuts):
            if f == cut.new_face:
                f = cut.face
        return f


def _cut(g: PlaneGraph, f: int) -> tuple[PlaneGraph, Cut]:
    walk = g.faces[f]
    n = len(walk)
    cands = []
    for i in range(n):
        v1, v2, v3 = walk[i], walk[(i + 1) % n], walk[(i + 2) % n]
        if not g.has_edge(v1, v3):
            cands.append((tuple(sorted((v1, v3))), i))
    if not cands:
        raise NoValidDiagonal(f"face {f} has no free diagonal")
    _, i = min(cands)
    rot = walk[i:] + walk[:i]
    cut = Cut(f, g.face_count, (rot[0], rot[1], rot[2]), walk)
    return apply_cut(g, cut), cut


def apply_cut(g: PlaneGraph, cut: Cut) -> PlaneGraph:
    faces = list(g.faces)
    walk = faces[cut.face]
    i = walk.index(cut.corners[0])
    rot = walk[i:] + walk[:i]
    faces[cut.face] = rot[2:] + rot[:1]
    faces.append(cut.corners)
    return PlaneGraph(faces, g.vertex_count)


def undo_cut(g: PlaneGraph, cut: Cut) -> PlaneGraph:
    faces = list(g.faces)
    if len(faces) - 1 != cut.new_face:
        raise ValueError("cuts must be undone in reverse order")
    faces.pop()
    faces[cut.face] = cut.before
    return PlaneGraph(faces, g.vertex_count)


def triangulate_tight(g: PlaneGraph) -> tuple[PlaneGraph, TriangulationPlan]:
    """Cut triangles off a largest face until the graph is a triangulation."""
    if not is_tight(g):
        raise NotTight("graph is not tight")
    plan = TriangulationPlan([], g.face_count)
    cur = g
    while True:
        big = [(len(w), -i) for i, w in enumerate(cur.faces) if len(w) > 3]
        if not big:
            return cur, plan
        _, negf = max(big)
        cur, cut = _cut(cur, -negf)
        plan.cuts.append(cut)
        assert is_tight(cur), "cutting a triangle off broke tightness"


def _cyc_path(k: int, s: int, e: int, avoid: int) -> list[int] | None:
    """Shortest walk of positions ``s -> e`` on a k-cycle not through ``avoid``."""
    if s == e:
        return []
    best = None
    for step in (1, -1):
        path = []
        i = s
        while i != e:
            i = (i + step) % k
            if i == avoid:
                path = None
                break
            path.append(i)
        if path is not None and (best is None or len(path) < len(best)):
            best = path
    return best


def _move_plans(walk, arc, target):
    k = len(walk)
    pos = {v: i for i, v in enumerate(walk)}
    a, b = pos[arc[0]], pos[arc[1]]
    c, d = pos[target[0]], pos[target[1]]
    plans = []
    for (x, tx), (y, ty) in (((a, c), (b, d)), ((a, d), (b, c))):
        # move the end at x first, then the end at y, and the reverse order
        for first, second in (((x, tx, y), (y, ty)), ((y, ty, x), (x, tx))):
            s1, e1, other = first
            p1 = _cyc_path(k, s1, e1, other)
            if p1 is None:
                continue
            p2 = _cyc_path(k, second[0], second[1], e1)
            if p2 is None:
                continue
            plans.append((len(p1) + len(p2), [(s1, p1, other), (second[0], p2, e1)]))
    plans.sort(key=lambda p: p[0])
    return plans


def reroute_arc(g: PlaneGraph, t: VertexFaceTour, f: int, target: tuple[int, int],
                locked: Collection[int] = ()) -> VertexFaceTour:
    """Move the arc of face ``f`` onto ``target`` one corner at a time.

    Each step slides one end to the next corner along ``f``; the parity
    change on that boundary edge is absorbed by a recombination walk that
    avoids ``f`` and ``locked``.
    """
    walk = g.faces[f]
    if set(target) == t.arc_set(f):
        return t
    plans = _move_plans(walk, t.arcs[f], target)
    if not plans:
        raise PropagationOverrun(f"cannot route face {f} to {target}")
    lock = set(locked) | {f}
    _, moves = plans[0]
    for start, path, fixed in moves:
        cur = start
        for nxt in path:
            chain = find_chain(g, t, walk[cur], walk[nxt], locked=lock)
            edits = dict(chain)
            edits[f] = (walk[fixed], walk[nxt])
            t = recombine(g, t, edits)
            cur = nxt
    assert t.arc_set(f) == set(target)
    return t


def _check_designation(g: PlaneGraph, f: int, pair) -> None:
    u, v = pair
    if u == v or u not in g.faces[f] or v not in g.faces[f]:
        raise DesignationInvalid(f"pair {pair} is not two corners of face {f}")
    if g.is_triangle(f):
        for w in g.faces[f]:
            for h in g.faces_around_vertex(w):
                if not g.is_triangle(h):
                    raise DesignationInvalid(
                        f"triangle {f} touches non-triangular face {h}")


def reroute_designated_arcs(g: PlaneGraph, t: VertexFaceTour,
                            d: DesignatedPairs) -> VertexFaceTour:
    """Tour whose arc on every designated face is its designated pair."""
    seen: dict[int, int] = {}
    for f, pair in d.items():
        _check_designation(g, f, pair)
        if g.is_triangle(f):
            for w in g.faces[f]:
                if w in seen:
                    raise DesignationInvalid(
                        f"designated triangle {f} shares vertex {w} with face {seen[w]}")
            seen.update((w, f) for w in g.faces[f])
    done = {f for f, pair in d.items() if t.arc_set(f) == set(pair)}
    for f in sorted(d):
        if f in done:
            continue
        t = reroute_arc(g, t, f, d[f], locked=done)
        done.add(f)
    return t


def remove_diagonal_merge(g2: PlaneGraph, t2: VertexFaceTour, cut: Cut
                          ) -> tuple[PlaneGraph, VertexFaceTour]:
    """Undo ``cut`` on graph and tour; the merged face gets a single arc."""
    v1, v2, v3 = cut.corners
    big, tri = cut.face, cut.new_face
    g = undo_cut(g2, cut)
    t2 = reroute_arc(g2, t2, big, (v1, v3))
    tri_arc = t2.arc_set(tri)
    if tri_arc == {v1, v3}:
        # both arcs span the diagonal; the merged arc needs a walk
        walk = g.faces[big]
        k = len(walk)
        i3 = walk.index(v3)
        prefs = [(v2, v3), (v3, walk[(i3 + 1) % k])]
        prefs += [(walk[i], walk[j]) for i in range(k) for j in range(i + 1, k)]
        best = None
        seen = set()
        for order, (x, y) in enumerate(prefs):
            key = frozenset((x, y))
            if key in seen:
                continue
            seen.add(key)
            try:
                chain = find_chain(g, t2, x, y, locked=(big, tri))
            except PropagationOverrun:
                continue
            if best is None or len(chain) < len(best[1]):
                best = ((x, y), chain)
        if best is None:
            raise PropagationOverrun(f"cannot merge face {big} with triangle {tri}")
        arc, chain = best
        edits = dict(chain)
        edits[big] = arc
    else:
        (x,) = tri_arc - {v1, v3}
        (w,) = tri_arc - {x}
        # (x, tri, w) + (w, big, w') -> (x, big, w')
        (other,) = {v1, v3} - {w}
        edits = {big: (x, other)}
    t = recombine(g, t2, edits, drop=(tri,))
    return g, t


def spanning_tour_of_tight(g: PlaneGraph) -> VertexFaceTour:
    g2, plan = triangulate_tight(g)
    log.debug("triangulated with %d cuts", len(plan.cuts))
    t = spanning_tour_of_triangulation(g2)
    cur = g2
    for cut in reversed(plan.cuts):
        cur, t = remove_diagonal_merge(cur, t, cut)
    assert cur == g
    return t


def _common_end_merge(g, t, f1, f2):
    for w in sorted(t.arc_set(f1) & t.arc_set(f2)):
        m1, m2 = t.mate(f1, w), t.mate(f2, w)
        others = []
        seen = set()
        for h in g.faces_around_vertex(w):
            if h in t.arcs and w in t.arcs[h] and h not in (f1, f2, m1, m2) and h not in seen:
                mh = t.mate(h, w)
                seen.update((h, mh))
                others.append((h, mh))
        # either rematching joins the two components; prefer the one whose
        # new passes do not cross each other
        nested = rematch(g, t, w, [(f1, f2), (m1, m2)] + others)
        if not _new_passes_cross(g, nested, w, f1, m1):
            return nested
        return rematch(g, t, w, [(f1, m2), (f2, m1)] + others)
    return None


def _new_passes_cross(g, t, w, fa, fb):
    pa = tuple(sorted((fa, t.mate(fa, w))))
    pb = tuple(sorted((fb, t.mate(fb, w))))
    return any({pa, pb} == {x, y} for x, y in crossings_at(g, t, w))


def hamiltonize(g: PlaneGraph, t: VertexFaceTour,
                d: DesignatedPairs | None = None) -> VertexFaceTour:
    """Merge components across adjacent triangles until one remains.

    A switch or a reflect at two adjacent triangles in different components
    joins them; when neither pattern applies the triangles share an arc end
    and the two passes there are rematched. Arcs of non-triangular and
    designated faces are never touched.
    """
    locked = set(d or ())
    for _ in range(g.face_count + 1):
        comp = component_index(t)
        if len(set(comp.values())) == 1:
            return t
        merged = None
        for (u, v) in g.edges():
            f1, f2 = g.faces_of_edge(u, v)
            if comp[f1] == comp[f2] or not (g.is_triangle(f1) and g.is_triangle(f2)):
                continue
            if f1 not in locked and f2 not in locked:
                for op in (switch, reflect):
                    try:
                        merged = op(g, t, f1, f2)
                        break
                    except PatternMismatch:
                        pass
            if merged is None:
                merged = _common_end_merge(g, t, f1, f2)
            if merged is not None:
                break
        if merged is None:
            # two components meeting at a vertex can always be rematched
            ends = t.ends_at()
            for w, hs in sorted(ends.items()):
                cs = {comp[h[0]] for h in hs}
                if len(cs) > 1:
                    fa = hs[0][0]
                    fb = next(h[0] for h in hs if comp[h[0]] != comp[fa])
                    merged = _common_end_merge(g, t, fa, fb)
                    break
        if merged is None:
            raise PropagationOverrun("components cannot be merged")
        assert len(components(merged)) == len(components(t)) - 1
        t = merged
    raise PropagationOverrun("hamiltonize did not converge")


def _strands(t: VertexFaceTour, v: int, hs) -> dict:
    # for each end at v, the end at v reached by following the tour away
    # from v without passing through v
    out = {}
    for e in hs:
        x = (e[0], 1 - e[1])
        while t.vertex(x) != v:
            p = t.partner[x]
            x = (p[0], 1 - p[1])
        out[e] = x
    return out


def _single_cycle(order, strand, match) -> bool:
    start = order[0]
    cur = start
    count = 0
    while True:
        cur = match[strand[cur]]
        count += 2
        if cur == start:
            break
    return count == len(order)


def _noncrossing_rematch(order, strand):
    """A non-crossing perfect matching on ``order`` (cyclic) forming a single
    cycle together with ``strand``."""
    m = len(order)
    for r in (0, 1):
        match = {}
        for i in range(0, m, 2):
            a, b = order[(i + r) % m], order[(i + r + 1) % m]
            match[a], match[b] = b, a
        if _single_cycle(order, strand, match):
            return match
    # pair two neighbors that are not strand mates and splice their strands
    pts = list(order)
    s = dict(strand)
    match = {}
    while len(pts) > 2:
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            if s[a] != b:
                break
        else:
            raise NoConnectedRewiring("no admissible neighbor pair")
        match[a], match[b] = b, a
        sa, sb = s.pop(a), s.pop(b)
        s[sa], s[sb] = sb, sa
        pts.remove(a)
        pts.remove(b)
    a, b = pts
    match[a], match[b] = b, a
    if not _single_cycle(order, strand, match):
        raise NoConnectedRewiring("rematching disconnected the tour")
    return match


def uncross(g: PlaneGraph, t: VertexFaceTour) -> VertexFaceTour:
    """Rematch passes vertex by vertex so that none interleave, keeping the
    tour connected. Arcs are unchanged."""
    if len(components(t)) != 1:
        raise NoConnectedRewiring("uncross needs a Hamiltonian tour")
    for v in range(g.vertex_count):
        ends = t.ends_at()
        if not crossings_at(g, t, v, ends):
            continue
        pos = {f: i for i, f in enumerate(g.faces_around_vertex(v))}
        hs = sorted(ends[v], key=lambda h: pos[h[0]])
        match = _noncrossing_rematch(hs, _strands(t, v, hs))
        pairs = sorted({tuple(sorted((a[0], b[0]))) for a, b in match.items()})
        t = rematch(g, t, v, pairs)
        assert not crossings_at(g, t, v)
    assert len(components(t)) == 1
    return t


@dataclass(frozen=True)
class FacePath:
    """Directed Hamiltonian face path: ``faces[i]`` is entered at
    ``vertices[i]`` and left at ``vertices[i + 1]`` (cyclically)."""

    vertices: tuple[int, ...]
    faces: tuple[int, ...]

    def steps(self) -> list[tuple[int, int, int]]:
        n = len(self.faces)
        return [(self.vertices[i], self.faces[i], self.vertices[(i + 1) % n])
                for i in range(n)]

    def sequence(self) -> tuple[int, ...]:
        out = []
        for v, f in zip(self.vertices, self.faces):
            out += [v, f]
        return tuple(out + [self.vertices[0]])


def orient(t: VertexFaceTour) -> FacePath:
    """Canonical direction and start of a Hamiltonian tour."""
    (comp,) = components(t)
    verts, faces = list(comp[0::2]), list(comp[1::2])
    n = len(faces)
    i = faces.index(min(faces))
    fwd_v = verts[i:] + verts[:i]
    fwd_f = faces[i:] + faces[:i]
    # reversed traversal: f_i is entered at its old exit
    rev_f = [fwd_f[0]] + fwd_f[1:][::-1]
    rev_v = [fwd_v[1 % n]] + [fwd_v[(n - j + 1) % n] for j in range(1, n)]
    if rev_f < fwd_f:
        return FacePath(tuple(rev_v), tuple(rev_f))
    return FacePath(tuple(fwd_v), tuple(fwd_f))


def hamiltonian_tour(g: PlaneGraph, d: DesignatedPairs | None = None) -> VertexFaceTour:
    """Non-crossing Hamiltonian tour using every designated pair."""
    if not is_tight(g):
        raise NotTight("graph is not tight")
    d = dict(d or {})
    t = spanning_tour_of_tight(g)
    log.debug("spanning tour: %d components", len(components(t)))
    t = reroute_designated_arcs(g, t, d)
    log.debug("designated arcs placed on %d faces", len(d))
    t = hamiltonize(g, t, d)
    log.debug("hamiltonian: crossings %d", crossing_count(g, t))
    t = uncross(g, t)
    assert validate_spanning_tour(g, t) is None
    for f, pair in d.items():
        if t.arc_set(f) != set(pair):
            raise PropagationOverrun(f"designated arc of face {f} was lost")
    return t


def hamiltonian_face_path(g: PlaneGraph, d: DesignatedPairs | None = None) -> FacePath:
    return orient(hamiltonian_tour(g, d))
