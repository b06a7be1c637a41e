"""OFF models, tour certificates, layout records and SVG output."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import IndexOutOfRange, NonManifold, OffSyntaxError, UnfoldError
from .layout import LinearLayout, PlacedFace
from .mesh import PlaneGraph, Polyhedron, make_polyhedron
from .tour import (
    VertexFaceTour,
    components,
    is_noncrossing,
    tour_from_text,
    tour_to_text,
    validate_spanning_tour,
)


def _content_lines(text: str):
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def _orient_faces(faces: list[list[int]]) -> list[list[int]]:
    """Flip faces so every edge is used once in each direction."""
    owner: dict[frozenset, list[int]] = {}
    for f, walk in enumerate(faces):
        k = len(walk)
        for i in range(k):
            owner.setdefault(frozenset((walk[i], walk[(i + 1) % k])), []).append(f)
    for e, fs in owner.items():
        if len(fs) != 2:
            raise NonManifold(f"edge {tuple(sorted(e))} lies on {len(fs)} faces")

    def directed(walk):
        k = len(walk)
        return {(walk[i], walk[(i + 1) % k]) for i in range(k)}

    out = [list(w) for w in faces]
    done = [False] * len(out)
    for root in range(len(out)):
        if done[root]:
            continue
        done[root] = True
        queue = deque([root])
        while queue:
            f = queue.popleft()
            df = directed(out[f])
            for (a, b) in df:
                (h,) = [x for x in owner[frozenset((a, b))] if x != f]
                same = (a, b) in directed(out[h])
                if not done[h]:
                    if same:
                        out[h].reverse()
                    done[h] = True
                    queue.append(h)
                elif same:
                    raise NonManifold("faces cannot be oriented consistently")
    return out


def _volume(faces, xyz) -> float:
    vol = 0.0
    for walk in faces:
        a = xyz[walk[0]]
        for i in range(1, len(walk) - 1):
            vol += float(np.dot(a, np.cross(xyz[walk[i]], xyz[walk[i + 1]])))
    return vol


def parse_off(text: str, name: str = "") -> Polyhedron:
    """Read an ASCII OFF model, fixing the winding so faces point outward."""
    lines = list(_content_lines(text))
    if not lines:
        raise OffSyntaxError(1, "empty file")
    ln, head = lines[0]
    tok = head.split()
    if tok[0] != "OFF":
        raise OffSyntaxError(ln, "missing OFF header")
    rest = lines[1:]
    if len(tok) > 1:
        rest = [(ln, " ".join(tok[1:]))] + rest
    if not rest:
        raise OffSyntaxError(ln, "missing counts line")
    ln, counts = rest[0]
    try:
        nv, nf = (int(x) for x in counts.split()[:2])
    except ValueError:
        raise OffSyntaxError(ln, "counts line must be 'V F E'") from None
    body = rest[1:]
    if len(body) < nv + nf:
        last = body[-1][0] if body else ln
        raise OffSyntaxError(last, f"expected {nv} vertices and {nf} faces")
    xyz = np.empty((nv, 3))
    for k in range(nv):
        ln, line = body[k]
        try:
            xyz[k] = [float(x) for x in line.split()[:3]]
        except ValueError:
            raise OffSyntaxError(ln, "bad vertex line") from None
    faces = []
    for ln, line in body[nv:nv + nf]:
        try:
            vals = [int(x) for x in line.split()]
            k = vals[0]
            walk = vals[1:1 + k]
        except (ValueError, IndexError):
            raise OffSyntaxError(ln, "bad face line") from None
        if len(walk) != k or k < 3:
            raise OffSyntaxError(ln, f"face needs {k} >= 3 indices")
        for i in walk:
            if not 0 <= i < nv:
                raise IndexOutOfRange(f"line {ln}: vertex index {i} not in 0..{nv - 1}")
        faces.append(walk)
    faces = _orient_faces(faces)
    if _volume(faces, xyz) < 0:
        faces = [w[::-1] for w in faces]
    return make_polyhedron(faces, xyz, name)


def write_off(p: Polyhedron) -> str:
    """OFF text; coordinates are written so they read back bit-identically."""
    out = ["OFF", f"{p.vertex_count} {p.face_count} {p.graph.edge_count}"]
    for x, y, z in p.coords:
        out.append(f"{float(x)!r} {float(y)!r} {float(z)!r}")
    for walk in p.graph.faces:
        out.append(" ".join(str(v) for v in (len(walk), *walk)))
    return "\n".join(out) + "\n"


def read_off(path, name: str | None = None) -> Polyhedron:
    path = Path(path)
    return parse_off(path.read_text(), name if name is not None else path.stem)


# tour certificates

def certificate_text(g: PlaneGraph, t: VertexFaceTour) -> str:
    ham = int(len(components(t)) == 1)
    nc = int(is_noncrossing(g, t))
    return f"tour F={g.face_count} hamiltonian={ham} noncrossing={nc}\n" + tour_to_text(t)


def parse_certificate(text: str) -> tuple[dict[str, str], VertexFaceTour]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("tour "):
        raise OffSyntaxError(1, "certificate must start with 'tour'")
    try:
        header = dict(kv.split("=", 1) for kv in lines[0].split()[1:])
        return header, tour_from_text("\n".join(lines[1:]))
    except ValueError as e:
        raise OffSyntaxError(2, f"malformed certificate: {e}") from None


def check_certificate(g: PlaneGraph, text: str) -> str | None:
    """Recheck a certificate from scratch; None when it holds."""
    header, t = parse_certificate(text)
    if header.get("F") != str(g.face_count):
        return "certificate face count does not match the model"
    bad = validate_spanning_tour(g, t)
    if bad:
        return bad
    if len(components(t)) != 1:
        return "tour is not Hamiltonian"
    if not is_noncrossing(g, t):
        return "tour crosses itself"
    return None


# layout records

def _g(x: float) -> str:
    return "%.17g" % x


@dataclass
class LayoutRecord:
    name: str
    faces: list[PlacedFace]
    certificate: str
    verdict: str

    @classmethod
    def from_layout(cls, l: LinearLayout, certificate: str = "",
                    verdict: str = "ok") -> "LayoutRecord":
        return cls(l.name, list(l.placed), certificate, verdict)

    def layout(self) -> LinearLayout:
        shared = tuple((i - 1, i, pf.entry) for i, pf in enumerate(self.faces) if i)
        return LinearLayout(tuple(self.faces), shared, self.name)

    def to_text(self) -> str:
        out = [f"layout {self.name}", f"faces {len(self.faces)}"]
        for pf in self.faces:
            out.append(f"face {pf.face} entry {pf.entry} exit {pf.exit} "
                       f"slab {_g(pf.x_left)} {_g(pf.x_right)}")
            for v, (x, y) in zip(pf.vertices, pf.corners):
                out.append(f"corner {v} {_g(x)} {_g(y)}")
        cert = self.certificate.strip().splitlines()
        out.append(f"certificate {len(cert)}")
        out.extend(cert)
        out.append(f"verdict {self.verdict}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LayoutRecord":
        lines = text.splitlines()
        pos = 0

        def take(key):
            nonlocal pos
            while pos < len(lines) and not lines[pos].strip():
                pos += 1
            if pos >= len(lines):
                raise OffSyntaxError(pos, f"expected '{key}'")
            line = lines[pos]
            head, _, rest = line.partition(" ")
            if head != key:
                raise OffSyntaxError(pos + 1, f"expected '{key}', got {line!r}")
            pos += 1
            return rest

        try:
            name = take("layout")
            n = int(take("faces"))
            faces = []
            for _ in range(n):
                tok = take("face").split()
                fid, entry, exit_ = int(tok[0]), int(tok[2]), int(tok[4])
                xl, xr = float(tok[6]), float(tok[7])
                verts, pts = [], []
                while pos < len(lines) and lines[pos].startswith("corner "):
                    _, v, x, y = lines[pos].split()
                    verts.append(int(v))
                    pts.append((float(x), float(y)))
                    pos += 1
                faces.append(PlacedFace(fid, tuple(verts), np.array(pts, dtype=float),
                                        xl, xr, entry, exit_))
            k = int(take("certificate"))
            cert = "\n".join(lines[pos:pos + k])
            pos += k
            verdict = take("verdict")
        except (ValueError, IndexError) as e:
            raise OffSyntaxError(pos + 1, f"malformed layout record: {e}") from None
        return cls(name, faces, cert, verdict)


def write_layout(rec: LayoutRecord, path) -> None:
    Path(path).write_text(rec.to_text())


def read_layout(path) -> LayoutRecord:
    return LayoutRecord.from_text(Path(path).read_text())


# SVG

def svg_text(l: LinearLayout, guides: bool = False) -> str:
    """SVG 1.1 drawing of a layout; y points up as in the plane."""
    if not l.placed:
        raise UnfoldError("cannot draw an empty layout")
    x0, y0, x1, y1 = l.bounds()
    w, h = x1 - x0, y1 - y0
    pad = 0.02 * max(w, h)
    vx, vy = x0 - pad, -y1 - pad
    vw, vh = w + 2 * pad, h + 2 * pad
    sw = 0.002 * max(w, h)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{vx:.6f} {vy:.6f} {vw:.6f} {vh:.6f}">',
        f"<title>{escape(l.name or 'vertex unfolding')}</title>",
    ]
    if guides:
        xs = sorted({pf.x_left for pf in l.placed} | {pf.x_right for pf in l.placed})
        out.append(f'<g stroke="#bbbbbb" stroke-width="{sw / 2:.6f}" '
                   f'stroke-dasharray="{4 * sw:.6f}">')
        for x in xs:
            out.append(f'<line x1="{x:.6f}" y1="{vy:.6f}" x2="{x:.6f}" y2="{vy + vh:.6f}"/>')
        out.append("</g>")
    out.append(f'<g fill="#dfe8f5" stroke="#1f3b63" stroke-width="{sw:.6f}" '
               f'stroke-linejoin="round">')
    for pf in l.placed:
        pts = " ".join(f"{x:.6f},{-y:.6f}" for x, y in pf.corners)
        out.append(f'<polygon id="f{pf.face}" points="{pts}"/>')
    out.append("</g>")
    out.append('<g fill="#c0392b">')
    for i, j, v in l.shared:
        x, y = l.placed[i].corner(v)
        out.append(f'<circle cx="{x:.6f}" cy="{-y:.6f}" r="{3 * sw:.6f}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(l, path, guides: bool = False) -> None:
    """Write a layout (or layout record) as SVG."""
    if isinstance(l, LayoutRecord):
        l = l.layout()
    Path(path).write_text(svg_text(l, guides))
