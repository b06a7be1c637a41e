"""Write a hand-made OFF model, then drive the command line on it.

The model is a hexagonal pyramid with a shallow apex: one hexagon, six
triangles, tight because it has a single non-triangular face.

Run:  python3 demos/custom_off.py [workdir]
"""

import math
import pathlib
import sys
import tempfile

from vunfold.cli import cmd

work = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp())
work.mkdir(parents=True, exist_ok=True)

ring = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3), 0.0) for k in range(6)]
verts = ring + [(0.0, 0.0, 0.3)]
faces = [list(range(5, -1, -1))] + [[k, (k + 1) % 6, 6] for k in range(6)]
lines = ["OFF", f"{len(verts)} {len(faces)} 12"]
lines += [" ".join(repr(c) for c in v) for v in verts]
lines += [" ".join(str(x) for x in [len(f)] + f) for f in faces]
off = work / "hexpyramid.off"
off.write_text("\n".join(lines) + "\n")

for argv in (["check", str(off)],
             ["unfold", str(off), "-o", str(work / "hex.svg"),
              "--json", str(work / "hex.layout"), "--guides"],
             ["verify", str(off), str(work / "hex.layout")]):
    print("$ vunfold", " ".join(argv), flush=True)
    print("exit", cmd(argv))
print("files in", work)
