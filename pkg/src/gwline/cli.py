"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 counterexample inequalities not
strict, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .core import CostParams, Permutation, PointConfiguration, ValidationError, assignment_objective
from .core import gm_objective, rearrangement_residual
from .counterexample import RegimeError, SearchExhaustedError, verify_proposition
from .experiments import (
    default_epsilon_grid,
    fmt_float,
    monte_carlo_study,
    sweep_epsilon,
    sweep_to_csv,
    write_atomic,
)
from .solvers import evaluate_baselines, solve_brute_force, solve_local_search

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ASSERTION = 2
EXIT_IO = 3

# sweeps include the brute-force column by default up to this size
SWEEP_AUTO_BRUTE_MAX_N = 9


class InputError(ValidationError):
    pass


@dataclass(frozen=True)
class PointsFile:
    x: PointConfiguration
    y: PointConfiguration

    @classmethod
    def load(cls, path: str) -> "PointsFile":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data, source=path)

    @classmethod
    def from_dict(cls, data, source: str = "points") -> "PointsFile":
        if not isinstance(data, dict) or "x" not in data or "y" not in data:
            raise InputError(f'{source}: expected an object {{"x": [...], "y": [...]}}')
        try:
            x = PointConfiguration(data["x"])
            y = PointConfiguration(data["y"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"{source}: {exc}") from exc
        if len(x) != len(y):
            raise InputError(f"{source}: x has {len(x)} points but y has {len(y)}")
        return cls(x, y)

    def to_json(self) -> str:
        xs = ", ".join(fmt_float(v) for v in self.x.tolist())
        ys = ", ".join(fmt_float(v) for v in self.y.tolist())
        return f'{{"x": [{xs}], "y": [{ys}]}}\n'


def _perm_list(perms) -> str:
    return " ".join(p.to_string(",") for p in perms)


def cmd_eval(args) -> int:
    pts = PointsFile.load(args.points)
    sigma = Permutation.parse(args.perm)
    cost = CostParams(args.alpha)
    print(f"F = {fmt_float(assignment_objective(pts.x, pts.y, sigma, cost))}")
    print(f"gm = {fmt_float(gm_objective(pts.x, pts.y, sigma, cost))}")
    print(f"rearrangement_residual = {fmt_float(rearrangement_residual(pts.x, pts.y, sigma, cost))}")
    return EXIT_OK


def cmd_solve(args) -> int:
    pts = PointsFile.load(args.points)
    cost = CostParams(args.alpha)
    if args.method == "brute":
        res = solve_brute_force(pts.x, pts.y, cost)
    else:
        res = solve_local_search(pts.x, pts.y, cost, restarts=args.restarts, seed=args.seed)
    f_id, f_aid = evaluate_baselines(pts.x, pts.y, cost)
    print(f"method = {res.method.value}")
    print(f"best = {fmt_float(res.best_value)}")
    print(f"maximizers = {_perm_list(res.maximizers)}")
    print(f"evaluations = {res.evaluations}")
    print(f"F_id = {fmt_float(f_id)}")
    print(f"F_a-id = {fmt_float(f_aid)}")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    try:
        rec = verify_proposition(args.n, args.alpha, None if args.auto_eps else args.eps)
    except (RegimeError, SearchExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    print(f"n = {rec.n}")
    print(f"alpha = {fmt_float(rec.alpha)}")
    print(f"epsilon = {fmt_float(rec.epsilon)}")
    print(f"F_id = {fmt_float(rec.f_id)}")
    print(f"F_a-id = {fmt_float(rec.f_aid)}")
    print(f"f_cyc = {fmt_float(rec.f_cyc)}")
    print(f"max = {fmt_float(rec.best_value)}")
    print(f"max - F_id = {fmt_float(rec.best_value - rec.f_id)}")
    print(f"maximizers = {_perm_list(rec.maximizers)}")
    print(f"cyc_is_maximizer = {rec.cyc_is_maximizer}")
    print(f"degenerate_gap = {fmt_float(rec.degenerate_gap)}")
    print(f"holds = {rec.holds}")
    if args.emit_points:
        write_atomic(args.emit_points, PointsFile(PointConfiguration(rec.x), PointConfiguration(rec.y)).to_json())
    return EXIT_OK if rec.holds else EXIT_ASSERTION


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse epsilon grid {text!r}") from exc


def cmd_sweep(args) -> int:
    if args.n <= 3:
        raise InputError("--n must be greater than 3")
    grid = _parse_grid(args.grid) if args.grid else default_epsilon_grid(args.n)
    brute = args.brute if args.brute is not None else args.n <= SWEEP_AUTO_BRUTE_MAX_N
    rows = sweep_epsilon(args.n, args.alpha, grid, with_brute_force=brute)
    for row in rows:
        if row.error:
            print(f"warning: epsilon={fmt_float(row.epsilon)}: {row.error}", file=sys.stderr)
    text = sweep_to_csv(rows)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    report = monte_carlo_study(args.n, args.alpha, args.trials, args.seed, args.dist, workers=args.workers)
    text = report.to_json()
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input, not a failed assertion
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gwline", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate F, the Gromov-Monge objective and the rearrangement residual")
    p.add_argument("points", help='JSON file {"x": [...], "y": [...]}')
    p.add_argument("perm", help="1-based permutation, e.g. 3,1,2")
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", help="maximize F over all permutations")
    p.add_argument("points")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--method", choices=("brute", "local"), default="brute")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("counterexample", help="check that neither id nor a-id is optimal on the cyclic family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--eps", type=float)
    g.add_argument("--auto-eps", action="store_true")
    p.add_argument("--emit-points", metavar="FILE")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("sweep", help="tabulate f_id, f_cyc and the maximum along an epsilon grid (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--grid", help="comma-separated epsilon values (default: 20 halvings of 2/(n-3))")
    p.add_argument("--brute", action=argparse.BooleanOptionalAction, default=None,
                   help=f"include the exact maximum (default: on for n <= {SWEEP_AUTO_BRUTE_MAX_N})")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("montecarlo", help="count how often id or a-id is optimal on random points (JSON)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", default="uniform", help="uniform or gaussian")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_montecarlo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "counterexample" and args.eps is None:
        args.auto_eps = True
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
