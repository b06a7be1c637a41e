"""Enumerate every spanning tour of a small polyhedron and poke at them.

Shows how many tours are Hamiltonian and non-crossing, where the pipeline's
tour sits among them, and what a switch does to the component count.

Run:  python3 demos/tour_playground.py [shape]
"""

import collections
import sys

from vunfold.errors import PatternMismatch
from vunfold.oracle import enumerate_spanning_tours
from vunfold.shapes import builtin_shape
from vunfold.tight import hamiltonian_tour, orient
from vunfold.tour import component_index, components, switch, tour_to_text

name = sys.argv[1] if len(sys.argv) > 1 else "octahedron"
g = builtin_shape(name).graph
e = enumerate_spanning_tours(g)
print(f"{name}: {len(e)} spanning tours")
print("  by component count:", dict(sorted(collections.Counter(e.component_counts).items())))
print("  Hamiltonian and non-crossing:", len(e.hamiltonian_noncrossing()))

t = hamiltonian_tour(g)
print("pipeline tour:", tour_to_text(t), "-> index", e.index(t))
print("face order:", orient(t).faces)

# what happens to the number of components under a switch
delta = collections.Counter()
tri = [f for f in range(g.face_count) if g.is_triangle(f)]
for ot in e.tours:
    t = ot.to_tour()
    ci = component_index(t)
    for f in tri:
        for h in tri:
            if f == h or len(set(g.faces[f]) & set(g.faces[h])) != 2:
                continue
            try:
                t2 = switch(g, t, f, h)
            except PatternMismatch:
                continue
            same = "same component" if ci[f] == ci[h] else "two components"
            delta[same, len(components(t2)) - len(components(t))] += 1
print("switch: (where the faces were, change in components) -> count")
for k, v in sorted(delta.items()):
    print("  ", k, v)
