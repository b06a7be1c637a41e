import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vunfold.errors import InvalidRecombination, PatternMismatch
from vunfold.mesh import build_plane_graph
from vunfold.oracle import OracleTour, enumerate_spanning_tours
from vunfold.shapes import builtin_shape
from vunfold.tour import (
    VertexFaceTour,
    component_index,
    components,
    crossing_count,
    crossings_at,
    is_noncrossing,
    is_valid,
    recombine,
    reflect,
    rematch,
    switch,
    tour_from_cycles,
    tour_from_text,
    tour_to_text,
    validate_spanning_tour,
)

from conftest import A, B, C, D, TETRA_FACES

# (1,A,2)(2,B,4)(4,D,3)(3,C,1) with vertices shifted down by one
TETRA_TOUR = [0, A, 1, B, 3, D, 2, C]


def test_tetra_tour_valid(tetra):
    t = tour_from_cycles([TETRA_TOUR])
    assert validate_spanning_tour(tetra, t) is None
    (comp,) = components(t)
    assert len(comp) == 8
    assert is_noncrossing(tetra, t)


def test_tetra_tour_in_enumeration(tetra):
    assert tour_from_cycles([TETRA_TOUR]) in enumerate_spanning_tours(tetra)


def test_broken_pairing_reported(tetra):
    t = tour_from_cycles([TETRA_TOUR])
    partner = dict(t.partner)
    # unpair the two ends at vertex 1 (vertex 2 in 1-based labels)
    for h in [(A, 1), (B, 0)]:
        del partner[h]
    msg = validate_spanning_tour(tetra, VertexFaceTour(t.arcs, partner))
    assert msg.startswith("unmatched end")


def test_missing_face_reported(tetra):
    t = tour_from_cycles([TETRA_TOUR])
    arcs = {f: ab for f, ab in t.arcs.items() if f != D}
    partner = {h: p for h, p in t.partner.items() if h[0] != D and p[0] != D}
    assert validate_spanning_tour(tetra, VertexFaceTour(arcs, partner)).startswith(
        "face not covered")


def test_non_incident_end(tetra):
    t = tour_from_cycles([[0, A, 3, B, 1, D, 2, C]])
    assert "non-incident" in validate_spanning_tour(tetra, t)


def test_two_components_on_pyramid(pyramid4):
    g = pyramid4.graph
    e = enumerate_spanning_tours(g)
    i = e.component_counts.index(2)
    assert len(components(e.tours[i].to_tour())) == 2


def _tetra_switch_tour():
    # A = {1,3}, B = {2,4}, completed by D = {2,3}, C = {1,4} (1-based labels)
    return tour_from_cycles([[0, A, 2, D, 1, B, 3, C]])


def test_switch_example(tetra):
    t = _tetra_switch_tour()
    assert is_valid(tetra, t)
    t2 = switch(tetra, t, A, B)
    assert t2.arc_set(A) == {1, 2} and t2.arc_set(B) == {0, 3}
    assert t2.arcs[C] == t.arcs[C] and t2.arcs[D] == t.arcs[D]
    assert is_valid(tetra, t2)


def test_switch_involution_example(tetra):
    t = _tetra_switch_tour()
    t3 = switch(tetra, switch(tetra, t, A, B), A, B)
    assert {f: t3.arc_set(f) for f in range(4)} == {f: t.arc_set(f) for f in range(4)}


def test_switch_pattern_mismatch(tetra):
    # (3,A,2),(2,B,4): the arcs share an end, no switching pattern
    t = VertexFaceTour({A: (2, 1), B: (1, 3), C: (0, 2), D: (2, 3)}, {})
    with pytest.raises(PatternMismatch):
        switch(tetra, t, A, B)


def test_reflect_pattern_has_no_tetra_tour(tetra):
    # the reflecting configuration (1,A,3),(1,B,4) cannot be completed to a
    # spanning tour of the tetrahedron: parity fails at vertex 2
    e = enumerate_spanning_tours(tetra)
    assert not any(ot.arcs[A] == (0, 2) and ot.arcs[B] == (0, 3) for ot in e.tours)


def test_reflect_example_octahedron(octahedron):
    g = octahedron.graph
    e = enumerate_spanning_tours(g)
    done = 0
    for ot in e.tours[::7]:
        t = ot.to_tour()
        for f in range(g.face_count):
            for f2 in range(g.face_count):
                if f == f2 or len(set(g.faces[f]) & set(g.faces[f2])) != 2:
                    continue
                u, v = sorted(set(g.faces[f]) & set(g.faces[f2]))
                for p, q in ((u, v), (v, u)):
                    if p in t.arcs[f] and p in t.arcs[f2] and q not in t.arcs[f] \
                            and q not in t.arcs[f2]:
                        t2 = reflect(g, t, f, f2)
                        x = g.apex(f, u, v)
                        y = g.apex(f2, u, v)
                        assert t2.arc_set(f) == {q, x} and t2.arc_set(f2) == {q, y}
                        back = reflect(g, t2, f, f2)
                        assert back.arc_set(f) == t.arc_set(f)
                        assert back.arc_set(f2) == t.arc_set(f2)
                        done += 1
    assert done > 0


def test_reflect_pattern_mismatch(tetra):
    t = _tetra_switch_tour()  # A = {1,3}, B = {2,4}: ends on different shared corners
    with pytest.raises(PatternMismatch):
        reflect(tetra, t, A, B)


def test_recombine_singleton_is_switch(tetra):
    t = _tetra_switch_tour()
    assert recombine(tetra, t, {A: (1, 2), B: (0, 3)}) == switch(tetra, t, A, B)


def test_recombine_rejects_invalid(tetra):
    t = _tetra_switch_tour()
    with pytest.raises(InvalidRecombination):
        recombine(tetra, t, {A: (0, 1)})
    with pytest.raises(InvalidRecombination):
        recombine(tetra, t, {7: (0, 1)})


def test_recombine_leaves_input_alone(tetra):
    t = _tetra_switch_tour()
    before = dict(t.arcs), dict(t.partner)
    with pytest.raises(InvalidRecombination):
        recombine(tetra, t, {A: (0, 1)})
    switch(tetra, t, A, B)
    assert (dict(t.arcs), dict(t.partner)) == before


def _octa_vertex_fan(g):
    v = 0
    fan = g.faces_around_vertex(v)
    return v, fan


def test_crossing_at_octahedron_vertex(octahedron):
    g = octahedron.graph
    v, (f1, f2, f3, f4) = _octa_vertex_fan(g)
    e = enumerate_spanning_tours(g)
    crossed = nested = 0
    for ot in e.tours:
        pairs = {(f, f2_) for (w, f, f2_) in ot.pairs if w == v}
        t = ot.to_tour()
        if pairs == {tuple(sorted((f1, f3))), tuple(sorted((f2, f4)))}:
            assert len(crossings_at(g, t, v)) == 1
            assert not is_noncrossing(g, t)
            crossed += 1
        elif pairs == {tuple(sorted((f1, f2))), tuple(sorted((f3, f4)))}:
            assert crossings_at(g, t, v) == []
            nested += 1
        elif len(pairs) == 1:
            assert crossings_at(g, t, v) == []
    assert crossed and nested


def test_rematch_changes_only_pairing(octahedron):
    g = octahedron.graph
    v, (f1, f2, f3, f4) = _octa_vertex_fan(g)
    e = enumerate_spanning_tours(g)
    ot = next(o for o in e.tours if sum(1 for p in o.pairs if p[0] == v) == 2)
    t = ot.to_tour()
    t2 = rematch(g, t, v, [(f1, f3), (f2, f4)])
    assert t2.arcs == t.arcs
    assert len(crossings_at(g, t2, v)) == 1
    with pytest.raises(InvalidRecombination):
        rematch(g, t, v, [(f1, f3)])


def test_text_round_trip(octahedron):
    e = enumerate_spanning_tours(octahedron.graph)
    for ot in e.tours[::97]:
        t = ot.to_tour()
        assert tour_from_text(tour_to_text(t)) == t


SMALL = ["tetrahedron", "octahedron", "pyramid:4", "pyramid:5", "standard:5",
         "standard:6", "standard:7", "antiprism:3"]


@st.composite
def tour_and_moves(draw):
    name = draw(st.sampled_from(SMALL))
    seed = draw(st.integers(0, 2**32 - 1))
    steps = draw(st.integers(1, 30))
    return name, seed, steps


def _random_walk(g, t, rng, steps):
    tri = [f for f in range(g.face_count) if g.is_triangle(f)]
    adj = [(f, h) for f in tri for h in tri
           if f != h and len(set(g.faces[f]) & set(g.faces[h])) == 2]
    for _ in range(steps):
        f, h = rng.choice(adj)
        op = rng.choice([switch, reflect])
        try:
            t = op(g, t, f, h)
        except PatternMismatch:
            continue
    return t


@settings(max_examples=200)
@given(tour_and_moves())
def test_switch_reflect_properties(args):
    from vunfold.tight import spanning_tour_of_tight
    name, seed, steps = args
    g = builtin_shape(name).graph
    rng = random.Random(seed)
    t = _random_walk(g, spanning_tour_of_tight(g), rng, steps)
    assert is_valid(g, t)
    tri = [f for f in range(g.face_count) if g.is_triangle(f)]
    for f in tri:
        for h in tri:
            if f == h or len(set(g.faces[f]) & set(g.faces[h])) != 2:
                continue
            for op in (switch, reflect):
                try:
                    t2 = op(g, t, f, h)
                except PatternMismatch:
                    continue
                assert is_valid(g, t2)
                back = op(g, t2, f, h)
                assert all(back.arc_set(x) == t.arc_set(x) for x in range(g.face_count))
                ci = component_index(t)
                n0, n1 = len(components(t)), len(components(t2))
                if ci[f] != ci[h]:
                    assert n1 == n0 - 1
                else:
                    assert n1 - n0 in (0, 1)


def test_crossing_count_matches_oracle(octahedron):
    from vunfold.oracle import count_crossings
    g = octahedron.graph
    e = enumerate_spanning_tours(g)
    for ot in e.tours[::31]:
        assert crossing_count(g, ot.to_tour()) == count_crossings(g, ot)


def test_oracle_tour_conversion(tetra):
    t = tour_from_cycles([TETRA_TOUR])
    assert OracleTour.from_tour(t).to_tour() == t


def test_graph_fixture_faces():
    assert build_plane_graph(TETRA_FACES).faces == tuple(tuple(f) for f in TETRA_FACES)
