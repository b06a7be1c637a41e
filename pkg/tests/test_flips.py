import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vunfold.errors import NotFlippable, NotInteriorToTriangles, NotTriangulation
from vunfold.flips import (
    apply_record,
    flip,
    is_flippable,
    replay,
    spanning_tour_of_triangulation,
    standard_faces,
    standard_seed_tour,
    standard_triangulation,
    transfer_tour_across_flip,
    wagner_flip_sequence,
)
from vunfold.mesh import is_three_connected
from vunfold.oracle import enumerate_spanning_tours
from vunfold.shapes import builtin_shape, random_triangulation
from vunfold.tour import components, is_noncrossing, is_valid, tour_from_cycles


def ends_at_standard(g, seq):
    """The replayed graph is the standard triangulation under seq.labels."""
    end = replay(g, seq)
    want = {frozenset(seq.labels[x] for x in f) for f in standard_faces(g.vertex_count)}
    return {frozenset(f) for f in end.faces} == want


def test_k4_not_flippable():
    g = standard_triangulation(4)
    for u, v in g.edges():
        assert not is_flippable(g, u, v)
    with pytest.raises(NotFlippable):
        flip(g, 0, 1)


def test_octahedron_all_flippable(octahedron):
    g = octahedron.graph
    assert all(is_flippable(g, u, v) for u, v in g.edges())


def test_pyramid_base_edge(pyramid4):
    g = pyramid4.graph
    (base,) = [f for f in range(g.face_count) if len(g.faces[f]) == 4]
    u, v = g.faces[base][:2]
    with pytest.raises(NotInteriorToTriangles):
        is_flippable(g, u, v)


def test_flip_inverse_identity(octahedron):
    g = octahedron.graph
    for u, v in g.edges():
        g2, rec = flip(g, u, v)
        assert not g2.has_edge(u, v) and g2.has_edge(*rec.inserted)
        assert apply_record(g2, rec.inverse()).faces == g.faces


def test_icosahedron_random_flip_counts():
    g = builtin_shape("icosahedron").graph
    rng = random.Random(3)
    for _ in range(10):
        u, v = rng.choice(g.edges())
        if is_flippable(g, u, v):
            g2, _ = flip(g, u, v)
            assert (g2.vertex_count, g2.edge_count, g2.face_count) == (12, 30, 20)
            assert is_three_connected(g2)


def test_standard_small():
    g = standard_triangulation(4)
    assert (g.vertex_count, g.edge_count, g.face_count) == (4, 6, 4)
    g = standard_triangulation(6)
    assert (g.vertex_count, g.edge_count, g.face_count) == (6, 12, 8)
    assert g.degree(0) == g.degree(1) == 5
    with pytest.raises(ValueError):
        standard_triangulation(3)


def test_seed_tour_n4():
    # (a, U_1, p_2, C_R, b, L_1, p_1, C_L, a) with U_1=0, L_1=1, C_L=2, C_R=3
    want = tour_from_cycles([[0, 0, 3, 3, 1, 1, 2, 2]])
    assert standard_seed_tour(4) == want


@pytest.mark.parametrize("n", range(4, 13))
def test_seed_tour_hamiltonian(n):
    g = standard_triangulation(n)
    t = standard_seed_tour(n)
    assert is_valid(g, t)
    assert len(components(t)) == 1
    assert is_noncrossing(g, t)


def test_seed_in_oracle_enumeration():
    g = standard_triangulation(4)
    assert standard_seed_tour(4) in enumerate_spanning_tours(g)


def test_wagner_standard_is_empty():
    for n in (4, 7, 10):
        seq = wagner_flip_sequence(standard_triangulation(n))
        assert len(seq) == 0
        assert ends_at_standard(standard_triangulation(n), seq)


def test_wagner_octahedron(octahedron):
    g = octahedron.graph
    seq = wagner_flip_sequence(g)
    assert len(seq) >= 1
    assert ends_at_standard(g, seq)


def test_wagner_icosahedron():
    g = builtin_shape("icosahedron").graph
    seq = wagner_flip_sequence(g)
    assert len(seq) <= 2 * 12 ** 2
    assert ends_at_standard(g, seq)
    assert seq.trace().splitlines()[0].startswith("flip ")


def test_wagner_rejects_non_triangulation(pyramid4):
    with pytest.raises(NotTriangulation):
        wagner_flip_sequence(pyramid4.graph)


@settings(max_examples=40)
@given(st.integers(5, 40), st.integers(0, 10**6))
def test_wagner_bound_random(n, seed):
    g = random_triangulation(n, seed)
    seq = wagner_flip_sequence(g)
    assert len(seq) <= 2 * n * n
    assert ends_at_standard(g, seq)


def test_transfer_direct_replacement(octahedron):
    # arcs that already fit the flipped faces are carried over untouched
    g = octahedron.graph
    e = enumerate_spanning_tours(g)
    seen = 0
    for ot in e.tours[::13]:
        t = ot.to_tour()
        for u, v in g.edges():
            g2, rec = flip(g, u, v)
            f1, f2 = rec.faces
            B1, B2 = set(rec.after[0]), set(rec.after[1])
            if t.arc_set(f1) <= B1 and t.arc_set(f2) <= B2:
                t2 = transfer_tour_across_flip(g, t, rec)
                assert all(t2.arcs[f] == t.arcs[f] for f in range(g.face_count))
                assert is_valid(g2, t2)
                seen += 1
    assert seen


@settings(max_examples=150)
@given(st.data())
def test_transfer_random_pairs(data):
    g = data.draw(st.sampled_from(["octahedron", "standard:6", "standard:7", "icosahedron"]))
    g = builtin_shape(g).graph
    seed = data.draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    # a scrambled valid tour: the pipeline tour moved across random flips
    t = spanning_tour_of_triangulation(g)
    cur = g
    for _ in range(rng.randint(1, 6)):
        u, v = rng.choice(cur.edges())
        if not is_flippable(cur, u, v):
            continue
        nxt, rec = flip(cur, u, v)
        t = transfer_tour_across_flip(cur, t, rec)
        assert is_valid(nxt, t)
        back = transfer_tour_across_flip(nxt, t, rec.inverse())
        assert is_valid(cur, back)
        cur = nxt


def test_spanning_tour_standard_is_seed():
    for n in (4, 6, 9):
        assert spanning_tour_of_triangulation(standard_triangulation(n)) == standard_seed_tour(n)


def test_spanning_tour_octahedron(octahedron):
    g = octahedron.graph
    t = spanning_tour_of_triangulation(g)
    assert is_valid(g, t)
    assert t in enumerate_spanning_tours(g)


def test_spanning_tour_icosahedron_fast():
    g = builtin_shape("icosahedron").graph
    t0 = time.perf_counter()
    t = spanning_tour_of_triangulation(g)
    assert time.perf_counter() - t0 < 1.0
    assert is_valid(g, t)
