"""Command-line front end: run verification suites and generate instance files."""

import argparse
import json
import sys

from . import instances
from .errors import PGLError
from .suites import MUTATIONS, SuiteConfig, run_suite, suite_names


def _dims(text):
    try:
        return [int(d) for d in text.split(",") if d.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --dim value {text!r}") from exc


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser():
    ap = argparse.ArgumentParser(prog="pgl", description="Seeded verification suites for Poisson and groupoid structures.")
    ap.add_argument("--suite", help="suite name, or 'all'")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=_seed, default=0)
    ap.add_argument("--dim", type=_dims, default=[], help="comma separated dimensions")
    ap.add_argument("--tol", type=float, default=None, help="relative tolerance (default $PGL_TOL or 1e-9)")
    ap.add_argument("--report", metavar="PATH", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--instance", metavar="PATH", help="JSON instance file used by the suite")
    ap.add_argument("--list-suites", action="store_true")
    ap.add_argument("--mutate", action="store_true", help="run the suite's corrupted variant")
    ap.add_argument("--gen", metavar="KIND", help=f"generate an instance ({', '.join(instances.KINDS)})")
    ap.add_argument("--out", metavar="PATH", help="output path for --gen (default stdout)")
    return ap


def format_text(rep):
    lines = [
        f"suite {rep['suite']}  seed {rep['seed']}  trials {rep['trials']}  tol {rep['tol']:g}",
    ]
    if rep.get("mutation"):
        lines.append(f"mutation: {rep['mutation']}")
    for c in rep["per_check"]:
        r = "nan" if c["residual"] is None else f"{c['residual']:.3e}"
        lines.append(f"  {'PASS' if c['pass'] else 'FAIL'}  {c['name']:<48s} {r:>10s}  (tol {c['tol']:.1e})")
    mr = "nan" if rep["max_residual"] is None else f"{rep['max_residual']:.3e}"
    lines.append(f"failures {rep['failures']}  max_residual {mr}  {rep['wall_time_ms']} ms")
    return "\n".join(lines) + "\n"


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)

    if args.list_suites:
        for name in suite_names():
            extra = f"  [mutation: {MUTATIONS[name]}]" if name in MUTATIONS else ""
            print(f"{name}{extra}")
        return 0

    if args.gen:
        try:
            text = instances.gen_instance(args.gen, args.dim, args.seed, args.out)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return 2
        if args.out is None:
            sys.stdout.write(text)
        return 0

    if not args.suite:
        ap.print_usage(sys.stderr)
        print("error: --suite, --gen or --list-suites is required", file=sys.stderr)
        return 2
    if args.suite not in suite_names():
        print(f"error: unknown suite '{args.suite}'; use --list-suites", file=sys.stderr)
        return 2

    try:
        inst = instances.load_instance(args.instance) if args.instance else None
        cfg = SuiteConfig(
            suite=args.suite,
            trials=args.trials,
            seed=args.seed,
            dims=args.dim,
            tol=args.tol,
            report_path=args.report,
            format=args.format,
            instance=inst,
            mutate=args.mutate,
        )
        rep = run_suite(cfg)
    except (PGLError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    text = json.dumps(rep, indent=1) + "\n" if cfg.format == "json" else format_text(rep)
    if cfg.report_path:
        with open(cfg.report_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep["failures"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
