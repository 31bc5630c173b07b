"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import graph as G
from . import verify as V
from .constructions import Preset, PresetError
from .selfsim import WreathError, action_graph, automaton_export
from .spectra import DEFAULT_SEED, DENSE_THRESHOLD, lambda_exact, lambda_iterative, lambda_lanczos, second_eigenvalue

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_preset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", type=Path, help="preset JSON file")
    p.add_argument("--perms", help='inline permutations, e.g. "(1 2);(1 4)(2 3)"')
    p.add_argument("--type", choices=["P", "Q"], help="preset type for --perms")
    p.add_argument("--k", type=int, default=None, help="power exponent (default 1)")
    p.add_argument("--padding", type=int, default=None, help="loop padding for P presets (default 0)")


def _add_level_args(p: argparse.ArgumentParser, default: int) -> None:
    p.add_argument("--levels", type=int, default=default, help=f"number of levels n_max (default {default})")


def _add_numeric_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dense-threshold", type=int, default=DENSE_THRESHOLD)
    p.add_argument("--tol", type=float, default=1e-8, help="eigensolver tolerance")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zigzag-groups",
        description="Self-similar groups whose action graphs are iterated zig-zag or replacement products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write gamma_<n>.edges for n = 1..levels and preset.json")
    _add_preset_args(p)
    _add_level_args(p, 3)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("verify", help="check the product theorem, eigenvalue bounds and corollary")
    _add_preset_args(p)
    _add_level_args(p, 3)
    _add_numeric_args(p)
    p.add_argument("--theorem", choices=["zz", "rp"], help="expected product; must match the preset type")
    p.add_argument("--slack", type=float, default=V.BOUND_SLACK, help="bound slack")
    p.add_argument("--out", type=Path, help="write report.json here instead of stdout")
    p.add_argument("--json", action="store_true", help="print the full JSON report (default: summary)")

    p = sub.add_parser("spectrum", help="lambda of each level")
    _add_preset_args(p)
    _add_level_args(p, 3)
    _add_numeric_args(p)
    p.add_argument("--method", choices=["auto", "dense", "iterative", "lanczos"], default="auto")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("automaton", help="DOT of the generating Mealy automaton (k = 1 presets)")
    _add_preset_args(p)
    p.add_argument("--out", type=Path, help="write automaton.dot here instead of stdout")

    p = sub.add_parser("report", help="per-level expansion table")
    _add_preset_args(p)
    _add_level_args(p, 3)
    _add_numeric_args(p)
    p.add_argument("--json", action="store_true")
    return parser


def load_preset(args: argparse.Namespace) -> Preset:
    if args.preset is not None and args.perms is not None:
        raise UsageError("give either --preset or --perms, not both")
    if args.preset is not None:
        if args.type is not None or args.k is not None or args.padding is not None:
            raise UsageError("--type/--k/--padding conflict with --preset")
        try:
            text = args.preset.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read preset: {exc}") from None
        return Preset.from_json(text)
    if args.perms is None:
        raise UsageError("a preset is required (--preset or --perms)")
    if args.type is None:
        raise UsageError("--perms needs --type P|Q")
    perms = [t.strip() for t in args.perms.split(";")]
    return Preset.parse(args.type, perms, args.k or 1, args.padding or 0)


def _check_levels(n: int) -> None:
    if n < 1:
        raise UsageError("--levels must be >= 1")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_build(args) -> int:
    preset = load_preset(args)
    _check_levels(args.levels)
    rec = preset.recursion()
    out: Path = args.out
    _write(out / "preset.json", preset.to_json())
    for n in range(1, args.levels + 1):
        _write(out / f"gamma_{n}.edges", G.export_edgelist(action_graph(rec, n)))
    return EXIT_OK


def cmd_verify(args) -> int:
    preset = load_preset(args)
    _check_levels(args.levels)
    mode = "zz" if preset.kind == "P" else "rp"
    if args.theorem is not None and args.theorem != mode:
        raise UsageError(f"--theorem {args.theorem} does not match a {preset.kind} preset")
    report = V.run(
        preset,
        args.levels,
        dense_threshold=args.dense_threshold,
        tol=args.tol,
        seed=args.seed,
        slack=args.slack,
    )
    text = json.dumps(report, indent=2) + "\n"
    if args.out is not None:
        _write(args.out / "report.json", text)
    if args.json:
        sys.stdout.write(text)
    else:
        for lv in report["levels"]:
            lam = "n/a" if lv["lambda"] is None else f"{lv['lambda']:.6f}"
            print(f"level {lv['n']}: vertices={lv['vertices']} theorem={lv['theorem']} lambda={lam}")
        print(f"bounds: {'pass' if report['bounds']['ok'] else 'FAIL'}")
        print(f"corollary: {'pass' if report['corollary']['ok'] else 'FAIL'}")
        if report["connectivity"] is not None:
            print(f"connectivity: {'pass' if report['connectivity'] else 'FAIL'}")
        print("OK" if report["ok"] else "FAILED")
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_spectrum(args) -> int:
    preset = load_preset(args)
    _check_levels(args.levels)
    rec = preset.recursion()
    rows = []
    for n in range(1, args.levels + 1):
        g = action_graph(rec, n)
        if args.method == "dense":
            rep = lambda_exact(g, args.dense_threshold)
        elif args.method == "iterative":
            rep = lambda_iterative(g, tol=args.tol, seed=args.seed)
        elif args.method == "lanczos":
            rep = lambda_lanczos(g, seed=args.seed)
        else:
            rep = second_eigenvalue(g, args.dense_threshold, args.tol, args.seed)
        rows.append({"n": n, "vertices": g.n_vertices, **rep.to_dict()})
    if args.json:
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        for r in rows:
            print(f"n={r['n']} vertices={r['vertices']} lambda={r['lambda']:.10f} method={r['method']}")
    return EXIT_OK


def cmd_automaton(args) -> int:
    preset = load_preset(args)
    try:
        dot = automaton_export(preset.recursion()).to_dot()
    except WreathError as exc:
        raise UsageError(str(exc)) from None
    if args.out is not None:
        _write(args.out / "automaton.dot", dot)
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def cmd_report(args) -> int:
    preset = load_preset(args)
    _check_levels(args.levels)
    mode = "zz" if preset.kind == "P" else "rp"
    reports = V.verify_levels(
        preset, args.levels, dense_threshold=args.dense_threshold, tol=args.tol, seed=args.seed
    )
    summary = V.expander_summary(reports, preset.base_graph(), mode)
    if args.json:
        out = {"preset": preset.to_dict(), "levels": [r.to_dict() for r in reports], "expansion": summary}
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
        return EXIT_OK
    print(f"{'n':>3} {'N':>8} {'lambda':>12} {'diam':>6} {'girth':>6} connected")
    for r in reports:
        print(f"{r.n:>3} {r.vertices:>8} {r.lam:>12.8f} {V._num(r.diameter)!s:>6} {V._num(r.girth)!s:>6} {r.connected}")
    print(f"lambda(base) = {summary['lambda_base']:.8f}")
    print(f"ceiling {summary['ceiling']}: {summary['ceiling_check']}")
    print(summary["scope"])
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "automaton": cmd_automaton,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, PresetError, V.VerifyError, WreathError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
