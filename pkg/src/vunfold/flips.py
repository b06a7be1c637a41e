"""Diagonal flips, reduction to the standard triangulation, and spanning
tours of plane triangulations.

The standard triangulation on ``n`` vertices uses labels ``a = 0``,
``b = 1`` and ``p_i = i + 1`` for the path ``p_1 .. p_{n-2}``. Its faces are
numbered ``U_1 .. U_{n-3}`` (``a p_i p_{i+1}``), then ``L_1 .. L_{n-3}``
(``b p_i p_{i+1}``), then the caps ``C_L = a b p_1`` and
``C_R = a b p_{n-2}``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .chains import find_chain
from .errors import (
    NotFlippable,
    NotInteriorToTriangles,
    NotTriangulation,
    PropagationOverrun,
)
from .mesh import PlaneGraph, is_triangulation
from .tour import VertexFaceTour, recombine, tour_from_cycles

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlipRecord:
    """One diagonal flip: edge ``removed`` replaced by ``inserted``.

    ``faces`` are the two face ids involved; ``before`` and ``after`` their
    walks on either side of the flip.
    """

    removed: tuple[int, int]
    inserted: tuple[int, int]
    faces: tuple[int, int]
    before: tuple[tuple[int, ...], tuple[int, ...]]
    after: tuple[tuple[int, ...], tuple[int, ...]]

    def inverse(self) -> "FlipRecord":
        return FlipRecord(self.inserted, self.removed, self.faces,
                          self.after, self.before)

    def trace(self) -> str:
        (u, v), (x, y) = self.removed, self.inserted
        return f"flip {u} {v} -> {x} {y}"


@dataclass
class FlipSequence:
    records: list[FlipRecord]
    start_hash: str
    end_hash: str
    # standard label -> vertex id of the end graph
    labels: dict[int, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    def trace(self) -> str:
        return "\n".join(r.trace() for r in self.records)


def _quad(g: PlaneGraph, u: int, v: int):
    if not g.has_edge(u, v):
        raise NotInteriorToTriangles(f"{u}-{v} is not an edge")
    f1, f2 = g.faces_of_edge(u, v)
    if not (g.is_triangle(f1) and g.is_triangle(f2)):
        raise NotInteriorToTriangles(f"edge {u}-{v} is not between two triangles")
    return f1, f2, g.apex(f1, u, v), g.apex(f2, u, v)


def is_flippable(g: PlaneGraph, u: int, v: int) -> bool:
    _, _, x, y = _quad(g, u, v)
    return x != y and not g.has_edge(x, y)


def flip(g: PlaneGraph, u: int, v: int) -> tuple[PlaneGraph, FlipRecord]:
    """Delete ``uv`` and insert ``xy`` where ``uvx`` and ``vuy`` are the faces
    on either side of ``uv``."""
    f1, f2, x, y = _quad(g, u, v)
    if x == y or g.has_edge(x, y):
        raise NotFlippable(f"edge {u}-{v}: apexes {x}, {y} are adjacent")
    # f1 holds u->v->x, f2 holds v->u->y
    rec = FlipRecord((u, v), (x, y), (f1, f2),
                     (g.faces[f1], g.faces[f2]),
                     ((v, x, y), (u, y, x)))
    return apply_record(g, rec), rec


def apply_record(g: PlaneGraph, rec: FlipRecord) -> PlaneGraph:
    f1, f2 = rec.faces
    faces = list(g.faces)
    if faces[f1] != rec.before[0] or faces[f2] != rec.before[1]:
        raise NotFlippable("flip record does not match the graph")
    faces[f1], faces[f2] = rec.after
    return PlaneGraph(faces, g.vertex_count)


def standard_faces(n: int) -> list[tuple[int, int, int]]:
    if n < 4:
        raise ValueError(f"standard triangulation needs n >= 4, got {n}")
    a, b = 0, 1
    p = [None] + [i + 1 for i in range(1, n - 1)]  # p[1] .. p[n-2]
    upper = [(p[i], p[i + 1], a) for i in range(1, n - 2)]
    lower = [(b, p[i + 1], p[i]) for i in range(1, n - 2)]
    return upper + lower + [(a, b, p[1]), (a, p[n - 2], b)]


def standard_triangulation(n: int) -> PlaneGraph:
    return PlaneGraph(standard_faces(n), n)


def standard_seed_tour(n: int) -> VertexFaceTour:
    """The Hamiltonian tour ``(a, U_1, p_2, ..., p_{n-2}, C_R, b, L_{n-3},
    p_{n-3}, ..., p_2, L_1, p_1, C_L, a)`` of the standard triangulation."""
    if n < 4:
        raise ValueError(f"standard triangulation needs n >= 4, got {n}")
    m = n - 3
    U = lambda i: i - 1  # noqa: E731
    L = lambda i: m + i - 1  # noqa: E731
    CL, CR = 2 * m, 2 * m + 1
    p = lambda i: i + 1  # noqa: E731
    seq = [0]
    for i in range(1, m + 1):
        seq += [U(i), p(i + 1)]
    seq += [CR, 1]
    for i in range(m, 0, -1):
        seq += [L(i), p(i)]
    seq += [CL]
    return tour_from_cycles([seq])


def _raise_degree(g: PlaneGraph, a: int) -> tuple[int, int]:
    """An edge whose flip is a step toward making ``a`` universal."""
    rot = g.rotation(a)
    nbrs = set(rot)
    d = len(rot)
    for i in range(d):
        x, y = rot[i], rot[(i + 1) % d]
        z = g.apex(g.adjacent_face_across(g.face_of(a, x), (x, y)), x, y)
        if z != a and z not in nbrs:
            return (x, y)
    # every link edge is blocked by a chord; flip the chord bordering a
    # non-neighbor whose far side along the link is shortest
    pos = {w: i for i, w in enumerate(rot)}
    best = None
    for (x, y) in g.edges():
        if x not in nbrs or y not in nbrs:
            continue
        f1, f2 = g.faces_of_edge(x, y)
        p, q = g.apex(f1, x, y), g.apex(f2, x, y)
        for far, near in ((p, q), (q, p)):
            if far in nbrs and near != a and near not in nbrs:
                if g.has_edge(far, near):
                    continue
                dxy = (pos[y] - pos[x]) % d
                dxp = (pos[far] - pos[x]) % d
                length = dxy if dxp < dxy else d - dxy
                if best is None or length < best[0]:
                    best = (length, (x, y))
    if best is None:
        raise PropagationOverrun(f"no degree-raising flip found at vertex {a}")
    return best[1]


def _relabel(g: PlaneGraph, a: int, b: int) -> dict[int, int]:
    n = g.vertex_count
    rot = list(g.rotation(b))
    k = rot.index(a)
    path = rot[k + 1:] + rot[:k]
    target = {_norm(f) for f in standard_faces(n)}
    target_sets = {frozenset(f) for f in standard_faces(n)}
    for cand in (path, path[::-1]):
        labels = {0: a, 1: b}
        labels.update({i + 2: w for i, w in enumerate(cand)})
        inv = {w: s for s, w in labels.items()}
        mapped = {_norm(tuple(inv[w] for w in f)) for f in g.faces}
        if mapped == target:
            return labels
    for cand in (path, path[::-1]):
        labels = {0: a, 1: b}
        labels.update({i + 2: w for i, w in enumerate(cand)})
        inv = {w: s for s, w in labels.items()}
        if {frozenset(inv[w] for w in f) for f in g.faces} == target_sets:
            return labels
    raise NotTriangulation("reduction did not reach the standard triangulation")


def _norm(f):
    i = f.index(min(f))
    return tuple(f[i:]) + tuple(f[:i])


def wagner_flip_sequence(g: PlaneGraph) -> FlipSequence:
    """Flips taking ``g`` to a relabeled standard triangulation.

    A max-degree vertex ``a`` is made adjacent to everything, then its
    highest-degree neighbor ``b``.
    """
    if not is_triangulation(g):
        raise NotTriangulation("graph has non-triangular faces")
    n = g.vertex_count
    cap = 2 * n * n  # promised length bound, enforced as we go
    cur = g
    records: list[FlipRecord] = []
    a = max(range(n), key=lambda v: (cur.degree(v), -v))
    while cur.degree(a) < n - 1:
        u, v = _raise_degree(cur, a)
        cur, rec = flip(cur, u, v)
        records.append(rec)
        if len(records) > cap:
            raise PropagationOverrun(f"more than {cap} flips")
    b = max(cur.rotation(a), key=lambda v: (cur.degree(v), -v))
    while cur.degree(b) < n - 1:
        rot = cur.rotation(b)
        nbrs = set(rot)
        for i in range(len(rot)):
            x, y = rot[i], rot[(i + 1) % len(rot)]
            if a in (x, y):
                continue
            w = cur.apex(cur.adjacent_face_across(cur.face_of(b, x), (x, y)), x, y)
            if w != b and w not in nbrs:
                cur, rec = flip(cur, x, y)
                records.append(rec)
                break
        else:
            raise PropagationOverrun(f"no degree-raising flip found at vertex {b}")
        if len(records) > cap:
            raise PropagationOverrun(f"more than {cap} flips")
    labels = _relabel(cur, a, b)
    return FlipSequence(records, g.graph_hash(), cur.graph_hash(), labels)


def replay(g: PlaneGraph, seq: FlipSequence) -> PlaneGraph:
    for rec in seq.records:
        g = apply_record(g, rec)
    return g


def transfer_tour_across_flip(g: PlaneGraph, t: VertexFaceTour,
                              rec: FlipRecord) -> VertexFaceTour:
    """Carry a spanning tour of ``g`` to the graph obtained by ``rec``.

    When the two old arcs fit the new faces unchanged they are kept (the
    direct replacement). Otherwise the two faces take any new arcs with the
    same end parity, and only when no such pair exists is the parity
    difference pushed through a walk of triangular recombinations in the
    surrounding fans.
    """
    g2 = apply_record(g, rec)
    f1, f2 = rec.faces
    B1, B2 = set(rec.after[0]), set(rec.after[1])
    a1, a2 = t.arc_set(f1), t.arc_set(f2)
    odd = a1 ^ a2
    if a1 <= B1 and a2 <= B2:
        return recombine(g2, t, {f1: tuple(t.arcs[f1]), f2: tuple(t.arcs[f2])})
    if a1 <= B2 and a2 <= B1:
        return recombine(g2, t, {f1: tuple(t.arcs[f2]), f2: tuple(t.arcs[f1])})
    cands = [(frozenset(p), frozenset(q))
             for p in itertools.combinations(sorted(B1), 2)
             for q in itertools.combinations(sorted(B2), 2)]
    for b1, b2 in cands:
        if b1 ^ b2 == odd:
            return recombine(g2, t, {f1: tuple(sorted(b1)), f2: tuple(sorted(b2))})
    best = None
    for b1, b2 in cands:
        rest = odd ^ b1 ^ b2
        if len(rest) != 2:
            continue
        x, y = sorted(rest)
        try:
            chain = find_chain(g2, t, x, y, locked=(f1, f2))
        except PropagationOverrun:
            continue
        if best is None or len(chain) < len(best[2]):
            best = (b1, b2, chain)
    if best is None:
        raise PropagationOverrun(f"cannot carry tour across {rec.trace()}")
    b1, b2, chain = best
    edits = dict(chain)
    edits[f1] = tuple(sorted(b1))
    edits[f2] = tuple(sorted(b2))
    return recombine(g2, t, edits)


def _seed_on(end: PlaneGraph, labels: dict[int, int]) -> VertexFaceTour:
    n = end.vertex_count
    seed = standard_seed_tour(n)
    by_set = {frozenset(f): i for i, f in enumerate(end.faces)}
    fmap = {i: by_set[frozenset(labels[s] for s in f)]
            for i, f in enumerate(standard_faces(n))}
    arcs = {fmap[f]: (labels[a], labels[b]) for f, (a, b) in seed.arcs.items()}
    partner = {(fmap[h[0]], h[1]): (fmap[p[0]], p[1]) for h, p in seed.partner.items()}
    return VertexFaceTour(arcs, partner)


def spanning_tour_of_triangulation(g: PlaneGraph,
                                   seq: FlipSequence | None = None) -> VertexFaceTour:
    """Seed the standard tour at the end of the flip sequence and carry it
    back across each flip in reverse."""
    if seq is None:
        seq = wagner_flip_sequence(g)
    log.debug("%d flips to the standard triangulation", len(seq))
    for rec in seq.records:
        log.debug("%s", rec.trace())
    end = replay(g, seq)
    t = _seed_on(end, seq.labels)
    cur = end
    for rec in reversed(seq.records):
        inv = rec.inverse()
        t = transfer_tour_across_flip(cur, t, inv)
        cur = apply_record(cur, inv)
    return t
