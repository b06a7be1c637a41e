"""Vertex-face tours and triangular recombinations.

A tour gives every face one *arc*: an ordered pair of distinct corners of
that face. The two ends of an arc are addressed by handles ``(face, side)``
with ``side`` 0 or 1. At every vertex the handles located there are
perfectly matched; following arc, matched handle, arc, ... decomposes the
tour into closed alternating vertex/face sequences, its components.

Since a face hosts at most one end at a given vertex, an end is also
identified by the pair ``(face, vertex)``, which is what the crossing
predicates use.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Collection, Iterable, Mapping, Sequence

from .errors import InvalidRecombination, PatternMismatch
from .mesh import PlaneGraph

Handle = tuple[int, int]


class VertexFaceTour:
    """One arc per face plus a perfect matching of arc-ends per vertex.

    Treat as an immutable value: operations return new tours.
    """

    __slots__ = ("arcs", "partner")

    def __init__(self, arcs: Mapping[int, tuple[int, int]],
                 partner: Mapping[Handle, Handle]):
        self.arcs: dict[int, tuple[int, int]] = dict(arcs)
        self.partner: dict[Handle, Handle] = dict(partner)

    def __repr__(self):
        return f"VertexFaceTour(arcs={len(self.arcs)}, components={len(components(self))})"

    def __eq__(self, other):
        if not isinstance(other, VertexFaceTour):
            return NotImplemented
        return canonical_key(self) == canonical_key(other)

    def __hash__(self):
        return hash(canonical_key(self))

    def vertex(self, h: Handle) -> int:
        return self.arcs[h[0]][h[1]]

    def arc_set(self, f: int) -> frozenset[int]:
        return frozenset(self.arcs[f])

    def ends_at(self) -> dict[int, list[Handle]]:
        out: dict[int, list[Handle]] = defaultdict(list)
        for f, (a, b) in self.arcs.items():
            out[a].append((f, 0))
            out[b].append((f, 1))
        return out

    def mate(self, f: int, v: int) -> int:
        """Face whose end is matched with the end of ``f`` at ``v``."""
        side = self.arcs[f].index(v)
        return self.partner[f, side][0]


def canonical_key(t: VertexFaceTour):
    """Hashable identity of a tour, independent of arc direction."""
    arcs = tuple(sorted((f, tuple(sorted(ab))) for f, ab in t.arcs.items()))
    pairs = frozenset(
        (t.vertex(h), frozenset((h[0], p[0])))
        for h, p in t.partner.items()
    )
    return arcs, pairs


def tour_from_cycles(cycles: Iterable[Sequence[int]]) -> VertexFaceTour:
    """Build a tour from closed sequences ``(v1, f1, v2, f2, ..., vk, fk)``.

    A trailing repeat of ``v1`` is accepted and ignored.
    """
    arcs: dict[int, tuple[int, int]] = {}
    partner: dict[Handle, Handle] = {}
    for cyc in cycles:
        seq = list(cyc)
        if len(seq) % 2 == 1 and len(seq) > 1 and seq[-1] == seq[0]:
            seq = seq[:-1]
        if len(seq) < 2 or len(seq) % 2:
            raise ValueError(f"malformed cycle {cyc!r}")
        k = len(seq) // 2
        verts = seq[0::2]
        faces = seq[1::2]
        for i in range(k):
            f = faces[i]
            if f in arcs:
                raise ValueError(f"face {f} appears twice")
            arcs[f] = (verts[i], verts[(i + 1) % k])
        for i in range(k):
            # exit of face i meets entry of face i+1 at verts[i+1]
            a = (faces[i], 1)
            b = (faces[(i + 1) % k], 0)
            partner[a] = b
            partner[b] = a
    return VertexFaceTour(arcs, partner)


def validate_spanning_tour(g: PlaneGraph, t: VertexFaceTour) -> str | None:
    """Return ``None`` if ``t`` is a spanning tour of ``g``, else the first
    violation found."""
    for f in range(g.face_count):
        if f not in t.arcs:
            return f"face not covered: {f}"
    for f in t.arcs:
        if not 0 <= f < g.face_count:
            return f"unknown face {f}"
    for f, (a, b) in t.arcs.items():
        if a == b:
            return f"arc of face {f} has equal ends {a}"
        walk = g.faces[f]
        if a not in walk or b not in walk:
            return f"non-incident end: arc ({a}, {b}) on face {f}"
    for f in t.arcs:
        for s in (0, 1):
            h = (f, s)
            p = t.partner.get(h)
            if p is None:
                return f"unmatched end: face {f} at vertex {t.vertex(h)}"
            if p[0] not in t.arcs or p[1] not in (0, 1):
                return f"unmatched end: face {f} paired with unknown {p}"
            if t.partner.get(p) != h:
                return f"unmatched end: pairing not symmetric at face {f}"
            if p == h or p[0] == f:
                return f"unmatched end: face {f} paired with itself"
            if t.vertex(p) != t.vertex(h):
                return (f"unmatched end: face {f} end at {t.vertex(h)} paired "
                        f"across to vertex {t.vertex(p)}")
    if len(t.partner) != 2 * len(t.arcs):
        return "unmatched end: stray pairing entries"
    return None


def is_valid(g: PlaneGraph, t: VertexFaceTour) -> bool:
    return validate_spanning_tour(g, t) is None


def components(t: VertexFaceTour) -> list[tuple[int, ...]]:
    """Closed sequences ``(v1, f1, ..., vk, fk)``, each started at its
    lowest face id and following that face's stored direction."""
    seen: set[int] = set()
    out = []
    for f0 in sorted(t.arcs):
        if f0 in seen:
            continue
        start = (f0, 0)
        cur = start
        seq: list[int] = []
        while True:
            f, s = cur
            seen.add(f)
            seq += [t.vertex(cur), f]
            nxt = t.partner[f, 1 - s]
            if nxt == start:
                break
            cur = nxt
            if len(seq) > 2 * len(t.arcs) + 2:
                raise InvalidRecombination("pairing does not close into cycles")
        out.append(tuple(seq))
    return out


def component_index(t: VertexFaceTour) -> dict[int, int]:
    """Map face id to the index of its component in :func:`components`."""
    idx = {}
    for i, comp in enumerate(components(t)):
        for f in comp[1::2]:
            idx[f] = i
    return idx


def is_hamiltonian(t: VertexFaceTour) -> bool:
    return len(components(t)) == 1


def tour_to_text(t: VertexFaceTour) -> str:
    lines = []
    for comp in components(t):
        lines.append("(" + " ".join(str(x) for x in comp + comp[:1]) + ")")
    return "\n".join(lines)


def tour_from_text(text: str) -> VertexFaceTour:
    cycles = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise ValueError(f"bad tour line {line!r}")
        cycles.append([int(x) for x in line[1:-1].split()])
    return tour_from_cycles(cycles)


def _fan_pos(g: PlaneGraph, v: int) -> dict[int, int]:
    return {f: i for i, f in enumerate(g.faces_around_vertex(v))}


def recombine(g: PlaneGraph, t: VertexFaceTour,
              arcs: Mapping[int, tuple[int, int]],
              pairs: Mapping[int, Sequence[tuple[int, int]]] | None = None,
              check: bool = True, drop: Collection[int] = ()) -> VertexFaceTour:
    """Apply a batch of arc replacements atomically.

    ``arcs`` maps faces to their new vertex pair. An arc end keeps its
    pairing when its vertex is unchanged. Ends that move, and the partners
    they leave behind, are re-matched at each vertex: by ``pairs[v]`` (a
    list of face pairs) when given, otherwise consecutively in the fan order
    around ``v``. Faces in ``drop`` lose their arc (used when two faces are
    merged). The result is validated; the input tour is never modified.
    """
    new_arcs = dict(t.arcs)
    moved: set[Handle] = set()
    for f in drop:
        del new_arcs[f]
        moved.update(((f, 0), (f, 1)))
    for f, (a, b) in arcs.items():
        if f not in t.arcs:
            raise InvalidRecombination(f"unknown face {f}")
        oa, ob = t.arcs[f]
        if a == ob or b == oa:
            a, b = b, a
        new_arcs[f] = (a, b)
        if a != oa:
            moved.add((f, 0))
        if b != ob:
            moved.add((f, 1))
    if not moved and not pairs and not drop:
        out = VertexFaceTour(new_arcs, t.partner)
    else:
        partner = dict(t.partner)
        dangling: dict[int, list[Handle]] = defaultdict(list)
        for h in moved:
            p = partner.pop(h)
            if p not in moved:
                partner.pop(p, None)
                dangling[t.vertex(p)].append(p)
        for h in moved:
            if h[0] in new_arcs:
                dangling[new_arcs[h[0]][h[1]]].append(h)
        for v, plist in (pairs or {}).items():
            here = {h[0]: h for h in dangling.get(v, [])}
            for fa, fb in plist:
                if fa not in here or fb not in here:
                    raise InvalidRecombination(
                        f"faces {fa}, {fb} have no loose ends at vertex {v}")
                ha, hb = here.pop(fa), here.pop(fb)
                partner[ha] = hb
                partner[hb] = ha
        for v, hs in dangling.items():
            hs = [h for h in hs if h not in partner]
            if not hs:
                continue
            if len(hs) % 2:
                raise InvalidRecombination(f"odd number of loose ends at vertex {v}")
            pos = _fan_pos(g, v)
            try:
                hs.sort(key=lambda h: pos[h[0]])
            except KeyError as exc:
                raise InvalidRecombination(f"end not incident to vertex {v}") from exc
            for i in range(0, len(hs), 2):
                partner[hs[i]] = hs[i + 1]
                partner[hs[i + 1]] = hs[i]
        out = VertexFaceTour(new_arcs, partner)
    if check:
        err = validate_spanning_tour(g, out)
        if err is not None:
            raise InvalidRecombination(err)
    return out


def rematch(g: PlaneGraph, t: VertexFaceTour, v: int,
            pairs: Sequence[tuple[int, int]], check: bool = True) -> VertexFaceTour:
    """Replace the matching of ends at ``v`` by ``pairs`` (face pairs).

    Arcs are untouched. ``pairs`` must cover every end at ``v``.
    """
    here = {}
    for f, (a, b) in t.arcs.items():
        if a == v:
            here[f] = (f, 0)
        elif b == v:
            here[f] = (f, 1)
    partner = dict(t.partner)
    covered = set()
    for fa, fb in pairs:
        if fa not in here or fb not in here or fa == fb:
            raise InvalidRecombination(f"faces {fa}, {fb} have no ends at {v}")
        partner[here[fa]] = here[fb]
        partner[here[fb]] = here[fa]
        covered.update((fa, fb))
    if covered != set(here) or len(covered) != 2 * len(pairs):
        raise InvalidRecombination(f"pairs do not form a perfect matching at {v}")
    out = VertexFaceTour(t.arcs, partner)
    if check:
        err = validate_spanning_tour(g, out)
        if err is not None:
            raise InvalidRecombination(err)
    return out


def _shared_edge(g: PlaneGraph, f: int, f2: int) -> tuple[int, int, int, int]:
    """For adjacent triangles return ``(u, v, x, y)`` with ``f = uvx`` and
    ``f2 = uvy``."""
    if not (g.is_triangle(f) and g.is_triangle(f2)) or f == f2:
        raise PatternMismatch(f"faces {f}, {f2} are not two distinct triangles")
    common = set(g.faces[f]) & set(g.faces[f2])
    if len(common) != 2:
        raise PatternMismatch(f"faces {f}, {f2} do not share an edge")
    u, v = sorted(common)
    if g.adjacent_face_across(f, (u, v)) != f2:
        raise PatternMismatch(f"faces {f}, {f2} do not share an edge")
    return u, v, g.apex(f, u, v), g.apex(f2, u, v)


def switch(g: PlaneGraph, t: VertexFaceTour, f: int, f2: int) -> VertexFaceTour:
    """Switching at adjacent triangles ``f = uvx`` and ``f2 = uvy``:
    ``(u, f, x), (v, f2, y)`` become ``(v, f, x), (u, f2, y)``."""
    u, v, x, y = _shared_edge(g, f, f2)
    af, af2 = t.arc_set(f), t.arc_set(f2)
    for p, q in ((u, v), (v, u)):
        if af == {p, x} and af2 == {q, y}:
            # f's end leaves p and f2's end takes its place, and vice versa
            return recombine(g, t, {f: (q, x), f2: (p, y)})
    raise PatternMismatch(f"no switching pattern at faces {f}, {f2}")


def reflect(g: PlaneGraph, t: VertexFaceTour, f: int, f2: int) -> VertexFaceTour:
    """Reflecting at adjacent triangles ``f = uvx`` and ``f2 = uvy``:
    ``(u, f, x), (u, f2, y)`` become ``(v, f, x), (v, f2, y)``."""
    u, v, x, y = _shared_edge(g, f, f2)
    af, af2 = t.arc_set(f), t.arc_set(f2)
    for p, q in ((u, v), (v, u)):
        if af == {p, x} and af2 == {p, y}:
            return recombine(g, t, {f: (q, x), f2: (q, y)})
    raise PatternMismatch(f"no reflecting pattern at faces {f}, {f2}")


def passes_at(t: VertexFaceTour, v: int, ends: dict[int, list[Handle]] | None = None
              ) -> list[tuple[int, int]]:
    """Matched pairs of faces at ``v``, each pair sorted, in sorted order."""
    hs = (ends if ends is not None else t.ends_at()).get(v, [])
    out = set()
    for h in hs:
        p = t.partner[h]
        out.add(tuple(sorted((h[0], p[0]))))
    return sorted(out)


def _interleave(pos: dict[int, int], p1: tuple[int, int], p2: tuple[int, int]) -> bool:
    a, b = sorted((pos[p1[0]], pos[p1[1]]))
    c, d = pos[p2[0]], pos[p2[1]]
    return (a < c < b) != (a < d < b)


def crossings_at(g: PlaneGraph, t: VertexFaceTour, v: int,
                 ends: dict[int, list[Handle]] | None = None
                 ) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """All pairs of passes at ``v`` whose faces interleave around ``v``."""
    ps = passes_at(t, v, ends)
    if len(ps) < 2:
        return []
    pos = _fan_pos(g, v)
    out = []
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if _interleave(pos, ps[i], ps[j]):
                out.append((ps[i], ps[j]))
    return out


def is_noncrossing(g: PlaneGraph, t: VertexFaceTour) -> bool:
    ends = t.ends_at()
    return all(not crossings_at(g, t, v, ends) for v in ends)


def crossing_count(g: PlaneGraph, t: VertexFaceTour) -> int:
    ends = t.ends_at()
    return sum(len(crossings_at(g, t, v, ends)) for v in ends)
