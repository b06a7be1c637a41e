"""Vertex unfoldings of tight polyhedra.

A polyhedron is *tight* when no two of its non-triangular faces share a
vertex. Every tight polyhedron has a non-crossing Hamiltonian vertex-face
tour, and laying the faces of that tour out left to right, one vertical slab
per face, gives a non-overlapping vertex unfolding.

>>> from vunfold import builtin_shape, unfold, verify_layout
>>> p = builtin_shape("antiprism:5")
>>> layout = unfold(p)
>>> verify_layout(layout, p) is None
True
"""

from .errors import UnfoldError
from .fileio import LayoutRecord, parse_off, write_off, write_svg
from .layout import (
    LinearLayout,
    designated_longest_pairs,
    layout_face_path,
    unfold,
    verify_layout,
)
from .mesh import PlaneGraph, Polyhedron, build_plane_graph, is_tight, is_triangulation
from .shapes import builtin_shape
from .tight import FacePath, hamiltonian_face_path, hamiltonian_tour
from .tour import VertexFaceTour, components, is_noncrossing, validate_spanning_tour

__all__ = [
    "FacePath",
    "LayoutRecord",
    "LinearLayout",
    "PlaneGraph",
    "Polyhedron",
    "UnfoldError",
    "VertexFaceTour",
    "build_plane_graph",
    "builtin_shape",
    "components",
    "designated_longest_pairs",
    "hamiltonian_face_path",
    "hamiltonian_tour",
    "is_noncrossing",
    "is_tight",
    "is_triangulation",
    "layout_face_path",
    "parse_off",
    "unfold",
    "validate_spanning_tour",
    "verify_layout",
    "write_off",
    "write_svg",
]
