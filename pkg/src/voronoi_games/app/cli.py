"""
Command-line front end.

    voronoi-games experiment --variant one_way_1d --objective max --n 10 100 --m 2
    voronoi-games checks [--only NAME ...] [--list] [--slow] [--mutate NAME]
    voronoi-games reduce FORMULA OUT [--eps 1/32] [--pad-to 4]
    voronoi-games pne INSTANCE [--method auto|enumerate|search]
    voronoi-games eval INSTANCE DISTRIBUTION

Data (CSV, JSON) goes to stdout or --out; progress lines go to stderr.
"""

import argparse
import contextlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from voronoi_games.config.settings import settings
from voronoi_games.errors import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, VoronoiGameError
from voronoi_games.eval.checks import list_checks, run_checks
from voronoi_games.games import GameVariant, Objective
from voronoi_games.services import ExperimentConfig, ExperimentService, GameService
from voronoi_games.telemetry.otel import init_tracing, shutdown_tracing


def _err(message: str) -> None:
    print(message, file=sys.stderr)


@contextlib.contextmanager
def _output(out: Optional[Path]):
    if out is None:
        yield sys.stdout
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as f:
        yield f


def _emit_json(payload: dict, out: Optional[Path]) -> None:
    with _output(out) as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def _fail(result: dict) -> int:
    _err(f"❌ Error: {result['error']}")
    return result.get("exit_code", EXIT_INPUT_ERROR)


def cmd_experiment(args: argparse.Namespace) -> int:
    try:
        config = ExperimentConfig.preset(
            args.variant,
            args.objective,
            paper_scale=args.paper_scale,
            n_values=args.n,
            m_values=args.m,
            instances=args.instances,
            attempts=args.attempts,
            max_passes=args.passes,
            seed=args.seed,
            out=args.out,
        )
    except ValidationError as e:
        _err(f"❌ Error: invalid experiment settings: {e.error_count()} problem(s)")
        for problem in e.errors():
            _err(f"   {'.'.join(str(p) for p in problem['loc'])}: {problem['msg']}")
        return EXIT_INPUT_ERROR

    _err("=" * 80)
    _err(f"Experiment: {config.variant.value} / {config.objective.value}")
    _err(f"n={config.n_values} m={config.m_values} instances={config.instances} "
         f"attempts={config.attempts} passes={config.max_passes} seed={config.seed}")
    _err("=" * 80)

    result = ExperimentService(args.workers).run(config)
    if not result["found"]:
        return _fail(result)

    for row in result["rows"]:
        if row["threshold"] != config.attempts:
            continue
        band = row["within_band"]
        mark = "✓" if band is None or band else "⚠"
        reference = "" if row["reference_rate"] is None else f" (reference {row['reference_rate']:.3f})"
        _err(f"{mark} n={row['n']:<6} m={row['m']}  rate {row['rate']:.3f}{reference}  "
             f"max passes {row['max_passes_observed']}")

    with _output(config.out) as f:
        ExperimentService.write_csv(result["rows"], f, result["seed"])
    if config.out is not None:
        _err(f"\nResults saved to: {config.out}")
    return EXIT_OK


def cmd_checks(args: argparse.Namespace) -> int:
    if args.list:
        for name, description, slow in list_checks():
            print(f"{name:<24} {description}{' [slow]' if slow else ''}")
        return EXIT_OK
    try:
        with _output(args.out) as f:
            results = run_checks(
                only=args.only,
                seed=args.seed,
                scale=args.scale,
                include_slow=args.slow,
                mutate=args.mutate or (),
                out=f,
                verbose=False,
            )
    except KeyError as e:
        _err(f"❌ Error: {e.args[0]}")
        return EXIT_INPUT_ERROR
    except VoronoiGameError as e:
        _err(f"❌ Error: {e}")
        return e.exit_code

    _err("=" * 80)
    _err(f"Checks (seed={args.seed if args.seed is not None else settings.seed})")
    _err("=" * 80)
    for r in results:
        _err(f"{'✓' if r.passed else '❌'} {r.name:<24} {r.detail} ({r.seconds:.1f}s)")
    failed = [r.name for r in results if not r.passed]
    _err(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        _err(f"Failed: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    result = GameService(seed=args.seed).reduce(args.formula, args.output, eps=args.eps, pad_to=args.pad_to)
    if not result["found"]:
        return _fail(result)
    _err(f"✓ {result['player_count']} players ({result['compact_player_count']} in the 2k + 6l count), eps={result['eps']}")
    _err(f"  instance: {result['instance']}")
    _err(f"  roles:    {result['roles']}")
    _emit_json(result, None)
    return EXIT_OK


def cmd_pne(args: argparse.Namespace) -> int:
    result = GameService(seed=args.seed).find_pne(args.instance, method=args.method, budget=args.budget)
    if not result["found"]:
        return _fail(result)
    if result["count"] == 0:
        _err(f"✓ 0 PNE ({result['method']}, exhaustive)")
    else:
        scope = "complete" if result["complete"] else "first found"
        _err(f"✓ {result['count']} PNE ({result['method']}, {scope})")
    _emit_json(result, args.out)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    result = GameService(seed=args.seed).evaluate(args.instance, args.distribution)
    if not result["found"]:
        return _fail(result)
    _err(f"✓ {len(result['rows'])} candidate rows")
    _emit_json(result, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voronoi-games", description="Voronoi choice games")
    parser.add_argument("--trace", action="store_true", help="write OpenTelemetry spans to traces/")
    parser.add_argument("--workers", type=int, default=None, help="process-pool width for experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("experiment", help="best-response success tables over random instances")
    p.add_argument("--variant", type=GameVariant, default=GameVariant.ONE_WAY_1D,
                   choices=list(GameVariant), metavar="{" + ",".join(v.value for v in GameVariant) + "}")
    p.add_argument("--objective", type=Objective, default=Objective.MAXIMIZE,
                   choices=list(Objective), metavar="{max,min}")
    p.add_argument("--n", type=int, nargs="+", default=None)
    p.add_argument("--m", type=int, nargs="+", default=None)
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--passes", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--paper-scale", "--full-scale", dest="paper_scale", action="store_true",
                   help="the published grid: more sizes and 1000 instances per cell")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("checks", help="numeric checks of closed forms, estimators and oracles")
    p.add_argument("--only", nargs="+", default=None, metavar="NAME")
    p.add_argument("--list", action="store_true")
    p.add_argument("--slow", action="store_true", help="include the slow checks")
    p.add_argument("--scale", type=float, default=1.0, help="sample-size multiplier")
    p.add_argument("--mutate", nargs="+", default=None, metavar="NAME",
                   help="negate the exact reference values of these checks")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_checks)

    p = sub.add_parser("reduce", help="build the game of a monotone 1-in-3 formula")
    p.add_argument("formula", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--eps", type=Fraction, default=None)
    p.add_argument("--pad-to", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="recorded in the output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pne", help="list the pure Nash equilibria of an instance")
    p.add_argument("instance", type=Path)
    p.add_argument("--method", choices=["auto", "enumerate", "search"], default="auto")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None, help="recorded in the output")
    p.set_defaults(func=cmd_pne)

    p = sub.add_parser("eval", help="expected utilities under a product distribution")
    p.add_argument("instance", type=Path)
    p.add_argument("distribution", type=Path)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None, help="recorded in the output")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.trace:
        init_tracing()
    try:
        return args.func(args)
    finally:
        if args.trace:
            shutdown_tracing()


if __name__ == "__main__":
    sys.exit(main())
