import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vunfold.errors import ArcMismatch, DegenerateTriangle, NotLongestPair
from vunfold.layout import (
    FlatFace,
    LinearLayout,
    flatten_face,
    interiors_overlap,
    layout_face_path,
    longest_span_endpoints,
    place_face,
    place_polygon_in_slab,
    place_triangle,
    unfold,
    verify_layout,
)
from vunfold.shapes import builtin_shape
from vunfold.tight import hamiltonian_face_path


@pytest.fixture
def tetra_poly():
    return builtin_shape("tetrahedron")


def cross2(a, b):
    return float(a[0] * b[1] - a[1] * b[0])


def flat(pts, ids=None):
    pts = np.asarray(pts, dtype=float)
    return FlatFace(0, tuple(ids or range(len(pts))), pts)


def regular(k, r=1.0):
    return [(r * math.cos(2 * math.pi * i / k), r * math.sin(2 * math.pi * i / k))
            for i in range(k)]


def assert_in_slab(pf, tol=1e-12):
    xs = pf.corners[:, 0]
    assert pf.corner(pf.entry)[0] == pytest.approx(pf.x_left, abs=tol)
    assert pf.corner(pf.exit)[0] == pytest.approx(pf.x_right, abs=tol)
    assert xs.min() >= pf.x_left - tol and xs.max() <= pf.x_right + tol


def assert_congruent(f, pf):
    # same pairwise distances and same orientation
    for i in range(len(f)):
        for j in range(len(f)):
            a = np.linalg.norm(f.corners[i] - f.corners[j])
            b = np.linalg.norm(pf.corners[i] - pf.corners[j])
            assert b == pytest.approx(a, rel=1e-12, abs=1e-12)

    def area(c):
        return np.sum(c[:, 0] * np.roll(c[:, 1], -1) - np.roll(c[:, 0], -1) * c[:, 1])
    assert np.sign(area(f.corners)) == np.sign(area(pf.corners))


def test_unit_square():
    f = flat([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert longest_span_endpoints(f) == (0, 2)
    pf = place_polygon_in_slab(f, 0, 2)
    assert pf.width == pytest.approx(math.sqrt(2), abs=1e-12)
    assert pf.corner(1)[0] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert pf.corner(3)[0] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert_in_slab(pf)
    assert_congruent(f, pf)


def test_regular_pentagon():
    f = flat(regular(5, 1 / (2 * math.sin(math.pi / 5))))
    u, v = longest_span_endpoints(f)
    pf = place_polygon_in_slab(f, u, v)
    assert pf.width == pytest.approx(1.6180339887, abs=1e-9)
    assert_in_slab(pf)


def test_rectangle():
    f = flat([(0, 0), (3, 0), (3, 1), (0, 1)])
    pf = place_polygon_in_slab(f, 0, 2)
    assert pf.width == pytest.approx(math.sqrt(10), abs=1e-12)
    assert_in_slab(pf)
    with pytest.raises(NotLongestPair):
        place_polygon_in_slab(f, 0, 1)
    with pytest.raises(ArcMismatch):
        place_face(f, 0, 1)


def test_equilateral_triangle():
    f = flat(regular(3))
    for p in range(3):
        for q in range(3):
            if p == q:
                continue
            pf = place_triangle(f, p, q)
            assert_in_slab(pf)
            assert_congruent(f, pf)
            assert pf.width > 0


def test_obtuse_sliver():
    f = flat([(0, 0), (1, 0), (10, 0.1)])
    pf = place_triangle(f, 0, 1)
    x = pf.corners[:, 0]
    assert x[0] <= x[2] <= x[1]
    assert_in_slab(pf)
    assert_congruent(f, pf)


def test_triangle_errors():
    f = flat([(0, 0), (1, 0), (0, 1)])
    with pytest.raises(ArcMismatch):
        place_triangle(f, 0, 0)
    with pytest.raises(ArcMismatch):
        place_triangle(f, 0, 7)
    with pytest.raises(DegenerateTriangle):
        place_triangle(flat([(0, 0), (1, 0), (2, 0)]), 0, 1)
    with pytest.raises(ArcMismatch):
        place_triangle(flat([(0, 0), (1, 0), (1, 1), (0, 1)]), 0, 2)


def _feasible_by_sampling(P, Q, R, n=20000):
    # brute-force scan of directions
    ok = []
    for k in range(n):
        a = 2 * math.pi * k / n
        d = np.array([math.cos(a), math.sin(a)])
        if (R - P) @ d >= 0 and (Q - R) @ d >= 0:
            ok.append(a)
    return ok


@settings(max_examples=200)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=6, max_size=6),
       st.permutations([0, 1, 2]))
def test_random_triangle_placement(xy, perm):
    pts = np.array(xy).reshape(3, 2)
    a2 = abs(cross2(pts[1] - pts[0], pts[2] - pts[0]))
    scale = max(np.sum((pts[i] - pts[j]) ** 2) for i in range(3) for j in range(3))
    if a2 <= 1e-6 * scale or scale < 1e-6:
        return
    if cross2(pts[1] - pts[0], pts[2] - pts[0]) < 0:
        pts = pts[::-1].copy()
    f = flat(pts)
    p, q, r = perm
    pf = place_triangle(f, p, q)
    x = pf.corners[:, 0]
    assert x[p] - 1e-9 <= x[r] <= x[q] + 1e-9
    assert_in_slab(pf, tol=1e-9)
    assert_congruent(f, pf)


def test_direction_exists_in_sampled_set():
    P, Q, R = np.array([0.0, 0]), np.array([1.0, 0]), np.array([10, 0.1])
    assert _feasible_by_sampling(P, Q, R)


@settings(max_examples=100)
@given(st.integers(4, 9), st.lists(st.floats(0.1, 1.0), min_size=9, max_size=9),
       st.floats(0.5, 3))
def test_random_convex_polygon(k, gaps, r):
    angles = np.cumsum(gaps[:k])
    angles = 2 * math.pi * angles / angles[-1]
    pts = [(r * math.cos(a), r * math.sin(a)) for a in angles]
    f = flat(pts)
    u, v = longest_span_endpoints(f)
    pf = place_polygon_in_slab(f, u, v)
    assert_in_slab(pf, tol=1e-9)
    assert_congruent(f, pf)


def test_flatten_preserves_shape(antiprism5):
    for f in range(antiprism5.face_count):
        ff = flatten_face(antiprism5, f)
        src = antiprism5.face_points(f)
        for i in range(len(ff)):
            for j in range(len(ff)):
                assert np.linalg.norm(ff.corners[i] - ff.corners[j]) == pytest.approx(
                    np.linalg.norm(src[i] - src[j]), abs=1e-12)


def test_tetrahedron_layout(tetra_poly):
    l = unfold(tetra_poly)
    assert len(l.placed) == 4
    assert verify_layout(l, tetra_poly) is None
    for a, b in zip(l.placed, l.placed[1:]):
        assert a.x_right == b.x_left
        assert np.array_equal(a.corner(a.exit), b.corner(b.entry))


def test_antiprism_widths(antiprism5):
    l = unfold(antiprism5)
    widths = sorted(pf.width for pf in l.placed)
    assert widths[-2:] == pytest.approx([1.6180339887] * 2, abs=1e-9)
    assert widths[:-2] == pytest.approx([1.0] * 10, abs=1e-9)
    assert verify_layout(l, antiprism5) is None


@pytest.mark.parametrize("name", ["octahedron", "icosahedron", "pyramid:6",
                                  "antiprism:7", "snub-cube", "standard:9"])
def test_corpus_layouts_verify(name):
    p = builtin_shape(name)
    assert verify_layout(unfold(p), p) is None


def _replace(l, i, pf):
    placed = list(l.placed)
    placed[i] = pf
    return LinearLayout(tuple(placed), l.shared, l.name)


def test_nudged_face_rejected(antiprism5):
    l = unfold(antiprism5)
    bad = _replace(l, 3, l.placed[3].translated(0.01, 0))
    assert "consecutive" in verify_layout(bad, antiprism5)


def test_lifted_face_rejected(antiprism5):
    l = unfold(antiprism5)
    bad = _replace(l, 3, l.placed[3].translated(0, 0.01))
    assert "coincident" in verify_layout(bad, antiprism5)


def test_reflected_face_rejected(antiprism5):
    l = unfold(antiprism5)
    pf = l.placed[2]
    c = pf.corners.copy()
    c[:, 1] = -c[:, 1]
    mirrored = type(pf)(pf.face, pf.vertices, c, pf.x_left, pf.x_right, pf.entry, pf.exit)
    msg = verify_layout(_replace(l, 2, mirrored), antiprism5)
    assert "mirror" in msg


def test_stretched_face_rejected(antiprism5):
    l = unfold(antiprism5)
    pf = l.placed[0]
    stretched = type(pf)(pf.face, pf.vertices, pf.corners * [1, 1.001],
                         pf.x_left, pf.x_right, pf.entry, pf.exit)
    assert "congruent" in verify_layout(_replace(l, 0, stretched), antiprism5)


def test_missing_face_rejected(tetra_poly):
    l = unfold(tetra_poly)
    short = LinearLayout(l.placed[:3], l.shared[:2], l.name)
    assert "exactly once" in verify_layout(short, tetra_poly)


def test_overlap_detected():
    sq = np.array([(0, 0), (2, 0), (2, 2), (0, 2)], dtype=float)
    assert interiors_overlap(sq, sq + [1, 1])
    assert not interiors_overlap(sq, sq + [2, 0])  # shared edge only
    assert not interiors_overlap(sq, sq + [2, 2])  # shared corner only
    tri = np.array([(1, 1), (3, 1), (1, 3)], dtype=float)
    assert interiors_overlap(sq, tri)
    # non-convex: an L shape and a square in its notch
    ell = np.array([(0, 0), (4, 0), (4, 1), (1, 1), (1, 4), (0, 4)], dtype=float)
    notch = np.array([(1, 1), (3, 1), (3, 3), (1, 3)], dtype=float)
    assert not interiors_overlap(ell, notch)
    assert interiors_overlap(ell, notch - [0.5, 0])


def test_overlapping_layout_rejected(tetra_poly):
    l = unfold(tetra_poly)
    # pile every face onto the first slab
    placed = [pf.translated(l.placed[0].x_left - pf.x_left, 0) for pf in l.placed]
    bad = LinearLayout(tuple(placed), (), l.name)
    assert verify_layout(bad) is not None


def test_layout_from_step_list(tetra_poly):
    path = hamiltonian_face_path(tetra_poly.graph)
    a = layout_face_path(tetra_poly, path)
    b = layout_face_path(tetra_poly, path.steps())
    for x, y in zip(a.placed, b.placed):
        assert np.array_equal(x.corners, y.corners)
