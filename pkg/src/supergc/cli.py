"""Command line front end: ``supergc run|verify|bch|curvature|catalog``."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import classification as cls
from . import geometry
from . import scenarios
from .frames import FrameData
from .grammar import ParseError, format_expr, parse_document
from .report import Check, IoError, Report, emit
from .rules import rewrite


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(str(exc)) from exc


def cmd_run(args) -> int:
    names = list(scenarios.SCENARIOS) if args.scenario == "all" else [args.scenario]
    reports = scenarios.run_all(names, args.max_passes, args.seed)
    return emit(reports, args.format, args.output, args.timing, args.verbose)


def verify_document(text: str, name: str = "document", max_passes: int = 16) -> Report:
    t = time.perf_counter()
    doc = parse_document(text)
    checks = []
    for k, (gtext, r) in enumerate(doc.evaluate_goals(max_passes)):
        checks.append(Check(f"goal {k + 1}", not r, expected="0",
                            actual=format_expr(r), witness=None if not r else format_expr(r),
                            note=gtext, exprs=(r,)))
    return Report(name, checks, time.perf_counter() - t)


def cmd_verify(args) -> int:
    rep = verify_document(_read(args.file), args.file, args.max_passes)
    return emit(rep, args.format, args.output, args.timing, args.verbose)


_FIELDS = {"phi": "phi", "H": "H", "Q+": "Qp", "Q-": "Qm", "R+": "Rp", "R-": "Rm", "f": "f"}


def curvature_document(text: str, name: str = "document", max_passes: int = 16) -> Report:
    """Curvature data of the frame given by the document's ``let`` fields;
    missing fields stay generic."""
    t = time.perf_counter()
    doc = parse_document(text)
    kw = {attr: doc.symbols.lets[n] for n, attr in _FIELDS.items() if n in doc.symbols.lets}
    fd = FrameData(**kw)
    rep = geometry.curvature_report(fd)
    red = lambda e: rewrite(e, doc.rules, max_passes)
    K, K_det, Hm = red(rep.K), red(rep.K_det), red(rep.Hmean)
    checks = [
        Check("K", True, actual=format_expr(K), exprs=(K,)),
        Check("K = det(SR^-1)", K == K_det, format_expr(K), format_expr(K_det),
              None if K == K_det else format_expr(K - K_det)),
        Check("H mean", True, actual=format_expr(Hm), exprs=(Hm,)),
        Check("g", True, actual=format_expr(red(rep.g_disc))),
        Check("b", True, actual=format_expr(red(rep.b_disc))),
    ]
    return Report(name, checks, time.perf_counter() - t)


def cmd_curvature(args) -> int:
    rep = curvature_document(_read(args.file), args.file, args.max_passes)
    return emit(rep, args.format, args.output, args.timing, True)


def _symbols(args):
    ex = cls.example_symbols()
    for n in args.even or ():
        ex[n] = 0
    for n in args.odd or ():
        ex[n] = 1
    return ex


def cmd_bch(args) -> int:
    ex = _symbols(args)
    X = cls.parse_element(args.x, ex)
    Y = cls.parse_element(args.y, ex)
    checks = []
    try:
        closed = cls.bch_closed(X, Y)
        checks.append(Check("closed form", True, actual=closed.to_text()))
    except cls.NotClosedForm as exc:
        checks.append(Check("closed form", False, note=str(exc)))
    series = cls.bch_series(X, Y, args.order)
    checks.append(Check(f"series to order {args.order}", True, actual=series.to_text()))
    return emit(Report("bch", checks), args.format, args.output, args.timing, True)


def cmd_catalog(args) -> int:
    rec = cls.catalog(args.id)
    if args.format == "json":
        out = json.dumps({"id": rec.id, "element": rec.text, "flags": list(rec.flags),
                          "raw": rec.raw, "shape": rec.shape()}, indent=2) + "\n"
    else:
        out = (f"{rec.id}: {rec.text}\n  flags: {','.join(rec.flags) or '-'}\n"
               f"  raw: {rec.raw}\n")
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            raise IoError(str(exc)) from exc
    else:
        sys.stdout.write(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-passes", type=int, default=16)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized samples")
    common.add_argument("--output", "-o", help="write the report to a file")
    common.add_argument("--timing", action="store_true", help="include run times")
    common.add_argument("--verbose", "-v", action="store_true", help="list passing checks too")

    p = argparse.ArgumentParser(prog="supergc", description="Exact checks for supersymmetric Gauss-Codazzi systems.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="run a built-in scenario")
    r.add_argument("scenario", choices=["all"] + list(scenarios.SCENARIOS))
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", parents=[common], help="check the goals of a document")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("curvature", parents=[common], help="curvature of a frame document")
    c.add_argument("file")
    c.set_defaults(func=cmd_curvature)

    b = sub.add_parser("bch", parents=[common], help="conjugate Y by exp(X)")
    b.add_argument("--x", required=True)
    b.add_argument("--y", required=True)
    b.add_argument("--order", type=int, default=12)
    b.add_argument("--even", nargs="*", help="extra even parameter names")
    b.add_argument("--odd", nargs="*", help="extra odd parameter names")
    b.set_defaults(func=cmd_bch)

    k = sub.add_parser("catalog", parents=[common], help="show a catalog entry")
    k.add_argument("id")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IoError, cls.ClassificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
