"""Command line: ``vunfold check|tour|unfold|gen|verify``.

Exit status is 0 on success, 1 when the input fails validation and 2 on
usage errors (including unreadable input).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import NonManifold, NotThreeConnected, NotTight, UnfoldError
from .fileio import (
    LayoutRecord,
    certificate_text,
    check_certificate,
    parse_certificate,
    parse_off,
    svg_text,
    write_off,
)
from .layout import designated_longest_pairs, layout_face_path, verify_layout
from .mesh import Polyhedron, is_tight, is_triangulation
from .shapes import SHAPE_NAMES, builtin_shape
from .tight import hamiltonian_tour, orient

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_text(src: str) -> str:
    if src == "-":
        return sys.stdin.read()
    try:
        return Path(src).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {src}: {e.strerror}") from None


def load_model(src: str) -> Polyhedron:
    """OFF file, ``-`` for stdin, or a builtin shape name."""
    if src != "-" and not Path(src).exists() and ("." not in src or ":" in src):
        return builtin_shape(src)
    name = "stdin" if src == "-" else Path(src).stem
    return parse_off(_read_text(src), name)


def _write(dest: str | None, text: str) -> None:
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _parse_designation(s: str) -> tuple[int, tuple[int, int]]:
    try:
        f, u, v = (int(x) for x in s.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected f:u:v, got {s!r}") from None
    return f, (u, v)


def _designations(p: Polyhedron, extra) -> dict[int, tuple[int, int]]:
    d = designated_longest_pairs(p)
    d.update(dict(extra or ()))
    return d


def do_check(args) -> int:
    flags = {"manifold": 1, "three_connected": 1, "tight": 0, "triangulated": 0}
    try:
        p = load_model(args.input)
    except NotThreeConnected as e:
        flags["three_connected"] = 0
        reason = str(e)
    except NonManifold as e:
        flags["manifold"] = flags["three_connected"] = 0
        reason = str(e)
    else:
        flags["tight"] = int(is_tight(p.graph))
        flags["triangulated"] = int(is_triangulation(p.graph))
        reason = None
        print(f"model {p.name} V={p.vertex_count} F={p.face_count} E={p.graph.edge_count}")
    print(" ".join(f"{k}={v}" for k, v in flags.items()))
    if reason:
        print(reason, file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def do_tour(args) -> int:
    p = load_model(args.input)
    if not is_tight(p.graph):
        raise NotTight(f"{p.name}: two non-triangular faces share a vertex")
    t = hamiltonian_tour(p.graph, _designations(p, args.designate))
    _write(args.output, certificate_text(p.graph, t) + "\n")
    return EXIT_OK


def do_unfold(args) -> int:
    p = load_model(args.input)
    if not is_tight(p.graph):
        raise NotTight(f"{p.name}: two non-triangular faces share a vertex")
    t = hamiltonian_tour(p.graph, designated_longest_pairs(p))
    layout = layout_face_path(p, orient(t))
    cert = certificate_text(p.graph, t)
    bad = verify_layout(layout, p)
    if bad is None:
        bad = check_certificate(p.graph, cert)
    if args.json:
        Path(args.json).write_text(
            LayoutRecord.from_layout(layout, cert, bad or "ok").to_text())
    if bad is not None:
        print(f"layout rejected: {bad}", file=sys.stderr)
        return EXIT_INVALID
    _write(args.output, svg_text(layout, guides=args.guides))
    if args.output not in (None, "-"):
        print(f"{p.name}: {len(layout.placed)} faces, strip width {layout.width:.6g}",
              file=sys.stderr)
    return EXIT_OK


def do_gen(args) -> int:
    _write(args.output, write_off(builtin_shape(args.shape)))
    return EXIT_OK


def verify_record(p: Polyhedron, rec: LayoutRecord) -> str | None:
    """Independent check of a layout record against its model."""
    bad = check_certificate(p.graph, rec.certificate)
    if bad:
        return bad
    _, t = parse_certificate(rec.certificate)
    faces = rec.faces
    for i, pf in enumerate(faces):
        if set(t.arcs[pf.face]) != {pf.entry, pf.exit}:
            return f"face {pf.face}: layout arc differs from the tour"
        if i and t.mate(faces[i - 1].face, pf.entry) != pf.face:
            return f"faces {faces[i - 1].face} and {pf.face} are not consecutive in the tour"
    return verify_layout(rec.layout(), p)


def do_verify(args) -> int:
    p = load_model(args.model)
    rec = LayoutRecord.from_text(_read_text(args.layout))
    bad = verify_record(p, rec)
    if bad:
        print(f"invalid: {bad}")
        return EXIT_INVALID
    print(f"ok: {len(rec.faces)} faces")
    return EXIT_OK


def do_oracle(args) -> int:
    from .oracle import closure_under_recombination, enumerate_spanning_tours
    p = load_model(args.input)
    e = enumerate_spanning_tours(p.graph)
    print(f"tours={len(e)} hamiltonian_noncrossing={len(e.hamiltonian_noncrossing())}")
    r = closure_under_recombination(p.graph)
    print(f"closed={int(r.closed)} moves={r.moves}")
    return EXIT_OK if r.closed else EXIT_INVALID


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vunfold", description="Vertex unfoldings of tight polyhedra.")
    ap.add_argument("--trace", action="store_true", help="log pipeline steps to stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser,
                            metavar="{check,tour,unfold,gen,verify}")

    s = sub.add_parser("check", help="report manifold/3-connected/tight/triangulated")
    s.add_argument("input", help="OFF file, '-' or builtin shape name")
    s.set_defaults(run=do_check)

    s = sub.add_parser("tour", help="print a Hamiltonian non-crossing tour certificate")
    s.add_argument("input")
    s.add_argument("--designate", action="append", type=_parse_designation,
                   metavar="F:U:V", help="force face F to be crossed from U to V")
    s.add_argument("-o", "--output")
    s.set_defaults(run=do_tour)

    s = sub.add_parser("unfold", help="unfold to an SVG strip")
    s.add_argument("input")
    s.add_argument("-o", "--output", help="SVG path (default stdout)")
    s.add_argument("--json", metavar="LAYOUT", help="also write the layout record")
    s.add_argument("--guides", action="store_true", help="draw slab boundaries")
    s.add_argument("--trace", action="store_true", dest="trace_sub",
                   help="log pipeline steps to stderr")
    s.set_defaults(run=do_unfold)

    s = sub.add_parser("gen", help="write a builtin shape as OFF",
                       epilog="shapes: " + ", ".join(SHAPE_NAMES))
    s.add_argument("shape")
    s.add_argument("-o", "--output")
    s.set_defaults(run=do_gen)

    s = sub.add_parser("verify", help="recheck a layout record against its model")
    s.add_argument("model")
    s.add_argument("layout")
    s.set_defaults(run=do_verify)

    s = sub.add_parser("oracle")  # hidden: no help entry
    s.add_argument("input")
    s.set_defaults(run=do_oracle)
    return ap


def cmd(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"vunfold: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.trace or getattr(args, "trace_sub", False):
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s",
                            stream=sys.stderr)
    try:
        return args.run(args)
    except UsageError as e:
        print(f"vunfold: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnfoldError as e:
        print(f"vunfold: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(cmd())


if __name__ == "__main__":
    main()
