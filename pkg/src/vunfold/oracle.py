"""Brute-force ground truth for small plane graphs.

Everything here is rebuilt from the bare definitions: a spanning tour is a
choice of two distinct corners per face together with a perfect matching of
the arc-ends at every vertex. None of the construction code is used, so the
results can check it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import InstanceTooLarge, InvalidRecombination, PatternMismatch
from .mesh import PlaneGraph
from .tour import VertexFaceTour, reflect, switch

MAX_FACES = 10
MAX_DEGREE_SUM = 40


@dataclass(frozen=True)
class OracleTour:
    """Arcs as sorted pairs indexed by face; ``pairs`` holds one
    ``(v, f, f2)`` with ``f < f2`` per matched pair of ends at ``v``."""

    arcs: tuple[tuple[int, int], ...]
    pairs: frozenset[tuple[int, int, int]]

    def to_tour(self) -> VertexFaceTour:
        arcs = dict(enumerate(self.arcs))
        partner = {}
        for v, f, f2 in self.pairs:
            h1 = (f, self.arcs[f].index(v))
            h2 = (f2, self.arcs[f2].index(v))
            partner[h1] = h2
            partner[h2] = h1
        return VertexFaceTour(arcs, partner)

    @classmethod
    def from_tour(cls, t: VertexFaceTour) -> "OracleTour":
        n = len(t.arcs)
        arcs = tuple(tuple(sorted(t.arcs[f])) for f in range(n))
        pairs = set()
        for h, q in t.partner.items():
            f, f2 = sorted((h[0], q[0]))
            pairs.add((t.arcs[h[0]][h[1]], f, f2))
        return cls(arcs, frozenset(pairs))


@dataclass
class TourEnumeration:
    graph_hash: str
    tours: list[OracleTour]
    component_counts: list[int]
    crossing_counts: list[int]
    _index: dict[OracleTour, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.tours)}

    def __len__(self) -> int:
        return len(self.tours)

    def index(self, t) -> int | None:
        if isinstance(t, VertexFaceTour):
            t = OracleTour.from_tour(t)
        return self._index.get(t)

    def __contains__(self, t) -> bool:
        return self.index(t) is not None

    def hamiltonian_noncrossing(self) -> list[OracleTour]:
        return [t for t, c, x in zip(self.tours, self.component_counts,
                                     self.crossing_counts) if c == 1 and x == 0]


def _guard(g: PlaneGraph) -> None:
    dsum = sum(len(w) for w in g.faces)
    if g.face_count > MAX_FACES or dsum > MAX_DEGREE_SUM:
        raise InstanceTooLarge(
            f"F={g.face_count}, degree sum {dsum} exceeds "
            f"F<={MAX_FACES}, sum<={MAX_DEGREE_SUM}")


def _matchings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in _matchings(rest):
            yield [(a, items[i])] + m


def face_cycle_at(g: PlaneGraph, v: int) -> list[int]:
    """Faces around ``v`` in cyclic order, read directly off the face walks."""
    succ = {}
    for f, walk in enumerate(g.faces):
        k = len(walk)
        for i, w in enumerate(walk):
            if w == v:
                succ[walk[(i + 1) % k]] = (f, walk[i - 1])
    # walking from the edge to b, face f, arrives at the edge to walk[i-1]
    start = next(iter(succ))
    order = []
    b = start
    while True:
        f, nb = succ[b]
        order.append(f)
        b = nb
        if b == start:
            break
    return order


def count_components(t: OracleTour) -> int:
    mate = {}
    for v, f, f2 in t.pairs:
        mate[v, f] = f2
        mate[v, f2] = f
    seen = set()
    comps = 0
    for f0 in range(len(t.arcs)):
        if f0 in seen:
            continue
        comps += 1
        f, at = f0, t.arcs[f0][0]
        while f not in seen:
            seen.add(f)
            a, b = t.arcs[f]
            out = b if at == a else a
            f = mate[out, f]
            at = out
    return comps


def count_crossings(g: PlaneGraph, t: OracleTour) -> int:
    by_vertex: dict[int, list[tuple[int, int]]] = {}
    for v, f, f2 in t.pairs:
        by_vertex.setdefault(v, []).append((f, f2))
    total = 0
    for v, passes in by_vertex.items():
        pos = {f: i for i, f in enumerate(face_cycle_at(g, v))}
        for (a, b), (c, d) in itertools.combinations(passes, 2):
            lo, hi = sorted((pos[a], pos[b]))
            inside_c = lo < pos[c] < hi
            inside_d = lo < pos[d] < hi
            if inside_c != inside_d:
                total += 1
    return total


def _tours(g: PlaneGraph) -> Iterator[OracleTour]:
    choices = [list(itertools.combinations(sorted(w), 2)) for w in g.faces]
    for arcs in itertools.product(*choices):
        ends: dict[int, list[int]] = {}
        for f, (a, b) in enumerate(arcs):
            ends.setdefault(a, []).append(f)
            ends.setdefault(b, []).append(f)
        if any(len(fs) % 2 for fs in ends.values()):
            continue
        verts = sorted(ends)
        per_vertex = [list(_matchings(ends[v])) for v in verts]
        for combo in itertools.product(*per_vertex):
            pairs = frozenset((v, min(p), max(p))
                              for v, m in zip(verts, combo) for p in m)
            yield OracleTour(tuple(arcs), pairs)


def enumerate_spanning_tours(g: PlaneGraph) -> TourEnumeration:
    """Every spanning tour of ``g``."""
    _guard(g)
    tours = list(_tours(g))
    comps = [count_components(t) for t in tours]
    cross = [count_crossings(g, t) for t in tours]
    return TourEnumeration(g.graph_hash(), tours, comps, cross)


def exists_hamiltonian_noncrossing(g: PlaneGraph) -> tuple[bool, OracleTour | None]:
    """Whether some tour has one component and no crossing, with a witness."""
    _guard(g)
    for t in _tours(g):
        if count_components(t) == 1 and count_crossings(g, t) == 0:
            return True, t
    return False, None


@dataclass
class ClosureReport:
    closed: bool
    tours: int
    moves: int
    escapes: list[tuple[int, str, int, int]]


def _adjacent_triangles(g: PlaneGraph) -> list[tuple[int, int]]:
    out = []
    for f, f2 in itertools.permutations(range(g.face_count), 2):
        if len(g.faces[f]) == 3 and len(g.faces[f2]) == 3:
            if len(set(g.faces[f]) & set(g.faces[f2])) == 2:
                out.append((f, f2))
    return out


def closure_under_recombination(g: PlaneGraph) -> ClosureReport:
    """Apply every switch and reflect to every tour; all results must be
    tours again."""
    enum = enumerate_spanning_tours(g)
    pairs = _adjacent_triangles(g)
    moves = 0
    escapes = []
    for i, ot in enumerate(enum.tours):
        t = ot.to_tour()
        for f, f2 in pairs:
            for name, op in (("switch", switch), ("reflect", reflect)):
                try:
                    t2 = op(g, t, f, f2)
                except PatternMismatch:
                    continue
                except InvalidRecombination:
                    moves += 1
                    escapes.append((i, name, f, f2))
                    continue
                moves += 1
                if t2 not in enum:
                    escapes.append((i, name, f, f2))
    return ClosureReport(not escapes, len(enum), moves, escapes)
