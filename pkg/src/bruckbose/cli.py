"""Command-line front end: builds, checks and certificates."""

from __future__ import annotations

import argparse
import os
import sys

from .checks import CHECKS, Certificate, UsageError, dumps, load_fixture, run_check, run_fixture
from .curves import enumerate_special_conics, enumerate_special_nrcs
from .proj import GeometryError
from .spread import bruck_bose, build_spread
from .surface import TheoremViolation, build_ruled_surface, surface_to_subplane

LEMMAS = ("spread-partition", "plane-axioms", "subline-counts", "chords-disjoint",
          "count-conics", "count-nrc", "count-orsp", "count-triples")


def _common(p):
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--mode", choices=("full", "sampled"), default="full")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None, help="sample size in sampled mode")
    p.add_argument("--deep", action="store_true", help="allow multi-hour full runs at q >= 3")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None)
    p.add_argument("--reproducible", action="store_true", help="omit elapsed_ms so output is byte-stable")


def build_parser():
    ap = argparse.ArgumentParser(prog="bruckbose", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spread", help="spread construction")
    sps = sp.add_subparsers(dest="action", required=True)
    b = sps.add_parser("build", help="build the regular 2-spread and write JSON")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run checks and emit certificates")
    vs = v.add_subparsers(dest="action", required=True)
    lem = vs.add_parser("lemma", help="counting and structural checks")
    lem.add_argument("--name", required=True, choices=LEMMAS)
    _common(lem)
    th = vs.add_parser("theorem", help="subplane / ruled surface correspondence")
    th.add_argument("--direction", choices=("forward", "converse", "both"), default="both")
    _common(th)
    ck = vs.add_parser("check", help="any named check, or all")
    ck.add_argument("--name", required=True, choices=CHECKS + ("all",))
    _common(ck)
    fx = vs.add_parser("fixture", help="run a falsification fixture (JSON path or shipped name)")
    fx.add_argument("path")
    fx.add_argument("--format", choices=("json", "text"), default="text")
    fx.add_argument("--out", default=None)
    fx.add_argument("--reproducible", action="store_true")

    bs = sub.add_parser("build-surface", help="build one ruled surface from indices")
    bs.add_argument("--q", type=int, required=True)
    bs.add_argument("--pi", type=int, default=0, help="spread element of the conic")
    bs.add_argument("--conic", type=int, required=True, help="index among special conics of pi")
    bs.add_argument("--sigma", type=int, required=True,
                    help="index among affine 3-spaces about spread elements other than pi")
    bs.add_argument("--nrc", type=int, required=True, help="index among special NRCs of the 3-space")
    bs.add_argument("--out", default=None)
    return ap


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(certs, fmt, timing):
    if fmt == "text":
        return "".join(c.line() + "\n" for c in certs)
    data = [c.to_dict(timing) for c in certs]
    return dumps(data[0] if len(data) == 1 else data)


def _run_verify(args):
    if args.action == "fixture":
        certs = [run_fixture(load_fixture(args.path))]
    else:
        if args.action == "theorem":
            names = ["theorem-forward", "theorem-converse"] if args.direction == "both" else [f"theorem-{args.direction}"]
        else:
            names = [args.name]
        certs = []
        for name in names:
            r = run_check(name, args.q, args.mode, args.seed, args.deep, args.jobs, args.samples)
            certs.extend(r if isinstance(r, list) else [r])
    _emit(_render(certs, args.format, not args.reproducible), args.out)
    return 0 if all(c.passed for c in certs) else 1


def _build_surface(args):
    bb = bruck_bose(args.q)
    spread = bb.spread
    n = len(spread.elements)
    if not 0 <= args.pi < n:
        raise UsageError(f"--pi must be in 0..{n - 1}")
    conics = enumerate_special_conics(spread, args.pi)
    spaces = [L for a in range(n) if a != args.pi for L, _ in bb.spaces_about(a)]
    if not 0 <= args.conic < len(conics):
        raise UsageError(f"--conic must be in 0..{len(conics) - 1}")
    if not 0 <= args.sigma < len(spaces):
        raise UsageError(f"--sigma must be in 0..{len(spaces) - 1}")
    nrcs = enumerate_special_nrcs(bb, spaces[args.sigma])
    if not 0 <= args.nrc < len(nrcs):
        raise UsageError(f"--nrc must be in 0..{len(nrcs) - 1}")
    B = build_ruled_surface(bb, conics[args.conic], nrcs[args.nrc])
    data = {"tower": bb.tower.describe(), **B.to_json(),
            "subplane_points": [list(X) for X in surface_to_subplane(bb, B).points]}
    _emit(dumps(data), args.out)
    return 0


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "spread":
            try:
                model = build_spread(args.q)
            except (ValueError, GeometryError) as exc:
                raise UsageError(str(exc)) from None
            _emit(dumps(model.to_json()), args.out)
            return 0
        if args.command == "verify":
            return _run_verify(args)
        return _build_surface(args)
    except UsageError as exc:
        print(f"bruckbose: error: {exc}", file=sys.stderr)
        return 2
    except TheoremViolation as exc:
        cert = Certificate(name=args.command, q=getattr(args, "q", 0), tower={}, closed_form=None,
                           enumerated=None, passed=False, counterexample={"reason": str(exc), **exc.payload})
        sys.stdout.write(cert.to_json())
        return 1


if __name__ == "__main__":
    sys.exit(main())
