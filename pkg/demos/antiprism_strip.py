"""Unfold the pentagonal antiprism into a strip and print the slab widths.

Run:  python3 demos/antiprism_strip.py [out.svg]
"""

import sys

from vunfold import builtin_shape, unfold, verify_layout, write_svg

p = builtin_shape("antiprism:5")
layout = unfold(p)
print(f"{p.name}: {p.vertex_count} vertices, {p.face_count} faces")
for pf in layout.placed:
    kind = "pentagon" if len(pf.vertices) == 5 else "triangle"
    print(f"  face {pf.face:2d} {kind:8s} enter {pf.entry} leave {pf.exit} "
          f"width {pf.width:.12f}")
print("strip width", round(layout.width, 12))
print("verify:", verify_layout(layout, p) or "ok")

out = sys.argv[1] if len(sys.argv) > 1 else "antiprism5.svg"
write_svg(layout, out, guides=True)
print("wrote", out)
