"""Command-line front end.

    mobius-quad integrate --weight omega:4 --n 64 --f "x^2"
    mobius-quad nodes --n 8 --weight omega:2
    mobius-quad exactness --upsilon 2,4,6,8,10
    mobius-quad reference --weight omega:6 --preset f2 --tol 1e-10
    mobius-quad converge --preset f1 --upsilon 6 --n-min 16 --n-max 16384 --csv f1.csv
    mobius-quad converge --figures out/

Any flag may also come from ``--config FILE`` (``key = value`` lines, keys
spelled like the long flags); flags on the command line win.

Exit status: 0 success, 2 bad input (flags, expressions, weight specs),
3 numerical failure, 4 a failed check (exactness table).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import experiments
from .convergence import ConvergenceStudy, predict_rate_experiment, run_sweep
from .errors import (CrossCheckFailure, DomainViolation, ExprError, MobiusQuadError,
                     NoConvergence, NonFiniteSample, NonFiniteWeight, NotIntegrable,
                     WeightError, WeightOverflow, WeightSpecError)
from .exprparse import compile_integrand
from .mobius import MobiusMap
from .presets import get_preset
from .quadrature import integrate, make_rule
from .reference import exact_moment, reference_integral
from .weightfn import format_weight_spec, make_omega, parse_weight_spec

SCHEMA = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_CHECK_FAILED = 4

COMMANDS = ("integrate", "nodes", "exactness", "reference", "converge")


class UsageError(MobiusQuadError, ValueError):
    pass


# configuration -----------------------------------------------------------

@dataclass
class RunConfig:
    """Everything a run depends on; mirrors the long flags one to one."""

    command: str
    weight: str | None = None
    gamma: float = 1.0
    n: str | None = None
    upsilon: str | None = None
    f: str | None = None
    preset: str | None = None
    tol: float | None = None
    n_min: int | None = None
    n_max: int | None = None
    n_step: int | None = None
    csv: str | None = None
    output: str | None = None
    summary: str | None = None
    figures: str | None = None
    emit_gnuplot: bool = False
    no_cross_check: bool = False

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> RunConfig:
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in names})

    def to_config_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None or v is False:
                continue
            key = f.name.replace("_", "-")
            lines.append(f"{key} = {'true' if v is True else v}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("_", "-")] = value
    return out


_BOOL_FLAGS = {"emit-gnuplot", "no-cross-check"}
_EXCLUSIVE = {"f", "preset"}


def _config_tokens(cfg: dict[str, str], cli_args: list[str]) -> list[str]:
    given = {a[2:].split("=", 1)[0] for a in cli_args if a.startswith("--")}
    skip = set(given)
    if given & _EXCLUSIVE:
        skip |= _EXCLUSIVE
    tokens = []
    for key, value in cfg.items():
        if key in ("command", "config") or key in skip:
            continue
        if key in _BOOL_FLAGS:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(f"--{key}")
        else:
            tokens += [f"--{key}", value]
    return tokens


# argument parsing --------------------------------------------------------

def _add_integrand(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--f", help="integrand expression in x, e.g. 'abs(x)*cos(x+1)'")
    g.add_argument("--preset", choices=("f1", "f2"), help="built-in experiment integrand")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobius-quad", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="key = value file with default flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="apply the rule once")
    p.add_argument("--weight", default="omega:2")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--n", required=True)
    _add_integrand(p)

    p = sub.add_parser("nodes", help="export nodes and weights as CSV")
    p.add_argument("--weight", default="omega:2")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--n", required=True)
    p.add_argument("--output", "-o", help="CSV path (default stdout)")

    p = sub.add_parser("exactness", help="polynomial exactness table for omega weights")
    p.add_argument("--upsilon", default="2,4,6,8,10", help="comma-separated even integers")
    p.add_argument("--n", help="comma-separated node counts (default: smallest admissible per upsilon)")
    p.add_argument("--gamma", type=float, default=1.0, help="must be 1")

    p = sub.add_parser("reference", help="double-exponential reference value")
    p.add_argument("--weight", default="omega:2")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--no-cross-check", action="store_true")
    _add_integrand(p)

    p = sub.add_parser("converge", help="convergence study over a range of n")
    p.add_argument("--upsilon", help="weight exponent of omega (with --preset)")
    p.add_argument("--weight", help="weight spec (with --f; default omega:<upsilon>)")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--n-min", type=int, default=16)
    p.add_argument("--n-max", type=int, default=16384)
    p.add_argument("--n-step", type=int, help="unit-step grid n-min, n-min+step, ... instead of doubling")
    p.add_argument("--tol", type=float, default=1e-12, help="reference tolerance when no fixture exists")
    p.add_argument("--csv", help="write n,approx,abs_error here")
    p.add_argument("--summary", help="also write the JSON summary to this file")
    p.add_argument("--emit-gnuplot", action="store_true", help="write <csv>.gp next to the CSV")
    p.add_argument("--figures", metavar="DIR", help="reproduce the three figure bundles into DIR")
    _add_integrand(p)
    return parser


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if known.config:
        cfg = parse_config_text(Path(known.config).read_text(encoding="utf-8"))
        cmd_idx = next((i for i, a in enumerate(rest) if a in COMMANDS), None)
        if cmd_idx is None:
            if "command" not in cfg:
                parser.error("no command given on the command line or in the config file")
            rest = [cfg["command"]] + rest
            cmd_idx = 0
        head, tail = rest[: cmd_idx + 1], rest[cmd_idx + 1:]
        rest = head + _config_tokens(cfg, tail) + tail
    return parser.parse_args(rest)


# helpers -----------------------------------------------------------------

def _num(v: float) -> str:
    return f"{v:.17g}"


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _integrand(args):
    if args.preset:
        return get_preset(args.preset), args.preset
    if args.f:
        return compile_integrand(args.f), args.f
    raise UsageError("an integrand is required: --f EXPR or --preset f1|f2")


def _single_n(args) -> int:
    ns = _ints(args.n)
    if len(ns) != 1:
        raise UsageError("--n takes a single integer here")
    return ns[0]


def _emit(payload: dict, out=None, path: str | None = None) -> None:
    text = json.dumps({"schema": SCHEMA, **payload}, indent=2)
    print(text, file=out or sys.stdout)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")


def study_summary(study: ConvergenceStudy, **extra) -> dict:
    return {
        **extra,
        "reference": study.reference.value,
        "reference_method": study.reference.method.value,
        "fitted_rate": study.fitted_rate,
        "predicted_rate": study.predicted_rate,
        "regime": study.regime.value if study.regime else None,
        "exponential_rate": study.exponential_rate,
    }


def study_csv(study: ConvergenceStudy) -> str:
    lines = ["n,approx,abs_error"]
    lines += [f"{p.n},{_num(p.approx)},{_num(p.abs_error)}" for p in study.points]
    return "\n".join(lines) + "\n"


def gnuplot_script(series: list[tuple[str, str]], title: str, semilog: bool = False) -> str:
    """Plot script for ``(csv_filename, label)`` pairs sharing one axis."""
    out = [
        f"set title {json.dumps(title)}",
        "set datafile separator ','",
        "set logscale y" if semilog else "set logscale xy",
        "set format y '10^{%L}'",
        "set xlabel 'n'",
        "set ylabel 'absolute error'",
        "set key bottom left",
    ]
    plots = [f"'{csv}' using 1:3 skip 1 with linespoints title {json.dumps(label)}"
             for csv, label in series]
    out.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(out) + "\n"


# commands ----------------------------------------------------------------

def cmd_integrate(args) -> int:
    weight = parse_weight_spec(args.weight)
    f, src = _integrand(args)
    n = _single_n(args)
    value = integrate(make_rule(weight, MobiusMap(args.gamma), n), f)
    _emit({"command": "integrate", "n": n, "gamma": args.gamma,
           "weight": format_weight_spec(weight), "f": src, "value": value})
    return EXIT_OK


def cmd_nodes(args) -> int:
    weight = parse_weight_spec(args.weight)
    rule = make_rule(weight, MobiusMap(args.gamma), _single_n(args))
    lines = ["j,theta,x,w"]
    for j, (t, x, w) in enumerate(zip(rule.thetas, rule.nodes_x, rule.weights_w), 1):
        lines.append(f"{j},{_num(t)},{_num(x)},{_num(w)}")
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


EXACTNESS_TOL = 1e-13


def exactness_table(upsilons: list[int], ns: list[int] | None = None) -> list[dict]:
    """Rows of the exactness check; ``ns=None`` uses the smallest admissible n per upsilon."""
    rows = []
    for u in upsilons:
        if u <= 0 or u % 2:
            raise UsageError(f"exactness needs even positive upsilon, got {u}")
        for n in (ns if ns else [u // 2]):
            if u > 2 * n:
                rows.append({"upsilon": u, "n": n, "m": None, "status": "SKIP",
                             "reason": "upsilon <= 2n violated"})
                continue
            rule = make_rule(make_omega(u), MobiusMap(1.0), n)
            for m in range(u - 1):
                exact = exact_moment(m, u)
                q = integrate(rule, lambda x, m=m: x**m)
                dev = abs(q - exact)
                ok = dev <= EXACTNESS_TOL * (1 + abs(exact))
                rows.append({"upsilon": u, "n": n, "m": m, "quadrature": q, "exact": exact,
                             "deviation": dev, "status": "PASS" if ok else "FAIL"})
    return rows


def cmd_exactness(args) -> int:
    if args.gamma != 1.0:
        raise UsageError("the exactness property holds for gamma = 1 only")
    ups = _ints(args.upsilon)
    ns = _ints(args.n) if args.n else None
    rows = exactness_table(ups, ns)
    print(f"{'upsilon':>7} {'n':>5} {'m':>3} {'quadrature':>24} {'exact':>24} {'deviation':>10}  status")
    for r in rows:
        if r["status"] == "SKIP":
            print(f"{r['upsilon']:>7} {r['n']:>5} {'-':>3} {'':>24} {'':>24} {'':>10}  SKIP ({r['reason']})")
        else:
            print(f"{r['upsilon']:>7} {r['n']:>5} {r['m']:>3} {_num(r['quadrature']):>24} "
                  f"{_num(r['exact']):>24} {r['deviation']:10.2e}  {r['status']}")
    checked = [r for r in rows if r["status"] != "SKIP"]
    failed = [r for r in checked if r["status"] == "FAIL"]
    worst = max((r["deviation"] for r in checked), default=0.0)
    print(f"checked {len(checked)}, failed {len(failed)}, max deviation {worst:.3e}")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_reference(args) -> int:
    weight = parse_weight_spec(args.weight)
    f, src = _integrand(args)
    res = reference_integral(f, weight, tol=args.tol, gamma=args.gamma,
                             cross_check=not args.no_cross_check)
    _emit({"command": "reference", "weight": format_weight_spec(weight), "gamma": args.gamma,
           "f": src, "tol": args.tol, "value": res.value, "est_error": res.est_error,
           "method": res.method.value, "evaluations": res.evaluations})
    return EXIT_OK


def _sweep_ns(args) -> list[int]:
    lo, hi = args.n_min, args.n_max
    if lo < 1 or hi < lo:
        raise UsageError("need 1 <= n-min <= n-max")
    if args.n_step:
        return list(range(lo, hi + 1, args.n_step))
    ns = []
    n = lo
    while n <= hi:
        ns.append(n)
        n *= 2
    return ns


def _write_study(study: ConvergenceStudy, csv_path: str | None, emit_gnuplot: bool,
                 label: str, semilog: bool = False) -> None:
    if csv_path is None:
        return
    path = Path(csv_path)
    path.write_text(study_csv(study), encoding="utf-8")
    if emit_gnuplot:
        gp = path.with_suffix(path.suffix + ".gp")
        gp.write_text(gnuplot_script([(path.name, label)], label, semilog), encoding="utf-8")


def cmd_converge(args) -> int:
    if args.figures:
        return cmd_converge_figures(Path(args.figures))
    ns = _sweep_ns(args)
    if args.preset:
        if args.upsilon is None:
            raise UsageError("--preset needs --upsilon")
        u = float(args.upsilon)
        cfg = experiments.SweepConfig(args.preset, u, tuple(ns), args.gamma)
        ref = experiments.resolve_reference(args.preset, u, args.gamma, tol=args.tol)
        study = experiments.run_experiment(cfg, reference=ref)
        weight_text, src = format_weight_spec(make_omega(u)), args.preset
    else:
        f, src = _integrand(args)
        if args.weight:
            weight = parse_weight_spec(args.weight)
        elif args.upsilon is not None:
            weight = make_omega(float(args.upsilon))
        else:
            raise UsageError("--f needs --weight or --upsilon")
        ref = reference_integral(f, weight, tol=args.tol, gamma=args.gamma, cross_check=False)
        study = run_sweep(f, weight, MobiusMap(args.gamma), ns, ref)
        weight_text = format_weight_spec(weight)
    _write_study(study, args.csv, args.emit_gnuplot, f"{src}, {weight_text}",
                 semilog=args.n_step is not None)
    _emit(study_summary(study, command="converge", f=src, weight=weight_text, gamma=args.gamma,
                        n=study.ns), path=args.summary)
    return EXIT_OK


def _u_tag(u: float) -> str:
    return f"{u:g}".replace(".", "p")


def cmd_converge_figures(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    report = []
    for number, bundle in experiments.FIGURES.items():
        series = []
        summaries = []
        for cfg, study in experiments.run_figure(number):
            name = f"figure{number}_{cfg.preset}_u{_u_tag(cfg.upsilon)}.csv"
            (outdir / name).write_text(study_csv(study), encoding="utf-8")
            series.append((name, f"upsilon = {cfg.upsilon:g}"))
            pred = predict_rate_experiment(cfg.preset, cfg.upsilon)
            summaries.append(study_summary(study, preset=cfg.preset, upsilon=cfg.upsilon,
                                           predicted_exponential=pred.exponential, csv=name))
        semilog = number == 3
        (outdir / f"figure{number}.gp").write_text(
            gnuplot_script(series, f"figure {number}: {bundle.preset}", semilog), encoding="utf-8")
        (outdir / f"figure{number}.json").write_text(
            json.dumps({"schema": SCHEMA, "figure": number, "studies": summaries}, indent=2) + "\n",
            encoding="utf-8")
        report.append({"figure": number, "studies": summaries})
    _emit({"command": "converge", "figures": report})
    return EXIT_OK


HANDLERS = {
    "integrate": cmd_integrate,
    "nodes": cmd_nodes,
    "exactness": cmd_exactness,
    "reference": cmd_reference,
    "converge": cmd_converge,
}

_NUMERICAL = (NonFiniteSample, NonFiniteWeight, NoConvergence, CrossCheckFailure,
              DomainViolation, WeightOverflow, NotIntegrable, ArithmeticError)
_INPUT = (UsageError, ExprError, WeightSpecError, WeightError, ValueError, OSError)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return HANDLERS[args.command](args)
    except _NUMERICAL as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _INPUT as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
