"""Command-line entry point: ``gapcycles <group> <command> [flags]``."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .cycle import DEFAULT_JMAX, DrivingTermCensus, census_of_stage, enumerate_gap_cycle
from .dynamics import (
    LAMBDA_CEILING,
    lambda_bounds_log10,
    lambda_exact,
    format_magnitude,
    lambda_invert_log10,
    propagate_range,
)
from .errors import CapacityError
from .pipeline import (
    COMPARISONS,
    DEFAULT_CENSUS_PRIME,
    DEFAULT_GMAX,
    cached_census,
    class_model,
    model_class_ratios_at,
    run_comparison,
)
from .primesieve import PAIR_WINDOWS, pair_census
from .residue import asymptotic_class_ratios, class_table_csv, digit_pair_classes, gap_classes

DEFAULT_DEGREE = -1  # full expansion; 11 gives the twelve-term truncation


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_cycle_enumerate(args) -> int:
    first = True
    for chunk in enumerate_gap_cycle(args.p):
        text = " ".join(map(str, chunk.tolist()))
        sys.stdout.write(text if first else " " + text)
        first = False
    sys.stdout.write("\n")
    return 0


def cmd_cycle_census(args) -> int:
    census = census_of_stage(args.p, args.gmax, args.jmax)
    _emit(census.to_text(), args.out)
    return 0


def cmd_dynamics_propagate(args) -> int:
    census = DrivingTermCensus.from_text(Path(args.census).read_text())
    prop = propagate_range(
        census, args.to, args.mode, drop_inadmissible=args.drop_inadmissible
    )
    text = prop.to_text()
    if prop.mode == "normalized":
        # ratio values: rewrite the count column with fixed precision
        lines = text.splitlines()
        head = [ln for ln in lines if not ln[0].isdigit()]
        body = [
            f"{g} {j} {float(v):.12e}"
            for (g, j), v in sorted(prop.census.counts.items())
        ]
        text = "\n".join(head + body) + "\n"
    _emit(text, args.out)
    if prop.dropped:
        print(f"# dropped gaps: {' '.join(map(str, prop.dropped))}", file=sys.stderr)
    return 0


def _parse_magnitude(text: str) -> float:
    """log10 of a positive number written as an int, a float or ``1e15``."""
    mant, _, exp = text.lower().partition("e")
    value = float(mant) if mant else 1.0
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive value, got {text!r}")
    return math.log10(value) + (int(exp) if exp else 0)


def cmd_dynamics_lambda(args) -> int:
    p0 = args.p0
    if args.invert is not None:
        lo, hi = lambda_invert_log10(args.invert, p0)
        print("lambda,p0,p_low,p_high")
        print(f"{args.invert:.10g},{p0},{format_magnitude(lo)},{format_magnitude(hi)}")
        return 0
    if args.pk is None:
        raise SystemExit("dynamics lambda: give --pk or --invert")
    log_pk = _parse_magnitude(args.pk)
    low, high = lambda_bounds_log10(p0, log_pk)
    exact = ""
    if log_pk <= math.log10(LAMBDA_CEILING):
        pk = int(round(10**log_pk))
        exact = f"{lambda_exact(p0, pk).value:.10f}"
    print("p0,pk,lambda_exact,lambda_low,lambda_high")
    print(f"{p0},{format_magnitude(log_pk)},{exact},{low:.10f},{high:.10f}")
    return 0


def cmd_residue_table(args) -> int:
    base = args.base
    asym = asymptotic_class_ratios(base, args.gmax).ratios
    current = None
    if args.at_prime is not None:
        census = cached_census(args.census, args.gmax)
        current = model_class_ratios_at(
            census,
            base,
            args.at_prime,
            degree=args.degree,
            correct_large_factors=args.correct_large_factors,
        )
    if args.format == "csv":
        sys.stdout.write(class_table_csv(base, current, asym))
        return 0
    scheme = digit_pair_classes(base)
    label = f"W_h({args.at_prime}#)" if current is not None else ""
    print(f"{'h':>4}  {'pairs':<40} {label:>12} {'W_h(inf)':>10}")
    for h in gap_classes(base):
        pairs = " ".join(f"({a},{b})" for a, b in scheme.pair_map.get(h, ()))
        cur = f"{current[h]:.4f}" if current is not None else ""
        print(f"{h:>4}  {pairs:<40} {cur:>12} {float(asym[h]):>10.4f}")
    return 0


def cmd_sieve_pairs(args) -> int:
    census = pair_census(args.n, args.base, args.window)
    sys.stdout.write(census.to_csv())
    return 0


def parse_grid(spec: str) -> list[float]:
    """``a,b,c`` | ``lin:start:stop:count`` | ``log:start:stop:count``."""
    kind, _, rest = spec.partition(":")
    if kind in ("lin", "log"):
        start, stop, count = rest.split(":")
        fn = np.linspace if kind == "lin" else np.geomspace
        values = fn(float(start), float(stop), int(count)).tolist()
    else:
        values = [float(x) for x in spec.split(",") if x]
    if not values or any(not 0 < v <= 1 for v in values):
        raise argparse.ArgumentTypeError("lambda grid values must lie in (0, 1]")
    return values


def curves_csv(
    census: DrivingTermCensus,
    base: int,
    gmax: int,
    degree: int | None,
    grid: list[float],
    correct_large_factors: bool = False,
) -> str:
    """One row per lambda: lambda, p_low, p_high, then W_h in gap-class order."""
    model = class_model(census, base, gmax, degree, correct_large_factors)
    classes = gap_classes(base)
    p0 = census.stage_prime
    lines = [
        f"# base={base} gmax={gmax} p0={p0} degree={'full' if degree is None else degree} "
        f"correct_large_factors={int(correct_large_factors)}",
        f"# degree clamped for {len(model.clamped)} gaps"
        + (f": {' '.join(map(str, model.clamped))}" if model.clamped else ""),
        "lambda,p_low,p_high," + ",".join(f"W_{h}" for h in classes),
    ]
    for lam in grid:
        if lam < 1:
            lo, hi = lambda_bounds_inverse(lam, p0)
        else:
            lo = hi = str(p0)
        w = model.ratios(lam).ratios
        lines.append(f"{lam:.8g},{lo},{hi}," + ",".join(f"{float(w[h]):.6f}" for h in classes))
    return "\n".join(lines) + "\n"


def lambda_bounds_inverse(lam: float, p0: int) -> tuple[str, str]:
    try:
        lo, hi = lambda_invert_log10(lam, p0)
    except ValueError:
        return "", ""
    return format_magnitude(lo), format_magnitude(hi)


def cmd_curves(args) -> int:
    census = cached_census(args.census, args.gmax)
    degree = None if args.degree < 0 else args.degree
    text = curves_csv(
        census, args.base, args.gmax, degree, args.lambda_grid, args.correct_large_factors
    )
    _emit(text, args.out)
    return 0


def cmd_compare(args) -> int:
    kwargs = {}
    if args.table in ("t4", "base3", "base8"):
        kwargs = {
            "census_prime": args.census,
            "correct_large_factors": args.correct_large_factors,
        }
    report = run_comparison(args.table, **kwargs)
    text = report.to_csv()
    _emit(text, args.out)
    if not report.passed:
        print(f"{args.table}: {len(report.failures())} rows outside tolerance:", file=sys.stderr)
        for r in report.failures():
            print(
                f"  {r.label}: expected {r.expected} computed {r.computed} ({r.tolerance})",
                file=sys.stderr,
            )
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gapcycles", description=__doc__)
    sub = ap.add_subparsers(dest="group", required=True)

    cycle = sub.add_parser("cycle", help="enumerate G(p#) and census its driving terms")
    csub = cycle.add_subparsers(dest="command", required=True)
    p = csub.add_parser("enumerate", help="print the gaps of G(p#)")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_cycle_enumerate)
    p = csub.add_parser("census", help="write a CENSUS v1 file")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--gmax", type=int, required=True)
    p.add_argument("--jmax", type=int, default=DEFAULT_JMAX)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_cycle_census)

    dyn = sub.add_parser("dynamics", help="propagate censuses and evaluate lambda")
    dsub = dyn.add_subparsers(dest="command", required=True)
    p = dsub.add_parser("propagate", help="advance a census to a later stage")
    p.add_argument("--census", required=True)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "normalized"], default="exact")
    p.add_argument("--drop-inadmissible", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_dynamics_propagate)
    p = dsub.add_parser("lambda", help="a_2^k between p0 and pk, or its inverse")
    p.add_argument("--p0", type=int, default=37)
    p.add_argument("--pk", help="target prime, e.g. 1000000 or 1e15")
    p.add_argument("--invert", type=float, help="lambda to map back to a prime range")
    p.set_defaults(func=cmd_dynamics_lambda)

    res = sub.add_parser("residue", help="class tables of gaps modulo a base")
    rsub = res.add_subparsers(dest="command", required=True)
    p = rsub.add_parser("table")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--gmax", type=int, default=DEFAULT_GMAX)
    when = p.add_mutually_exclusive_group()
    when.add_argument("--at-prime", type=int)
    when.add_argument("--infinity", action="store_true")
    p.add_argument("--census", type=int, default=DEFAULT_CENSUS_PRIME, choices=[19, 23])
    p.add_argument("--degree", type=int, default=None, help="truncation degree (default full)")
    p.add_argument("--correct-large-factors", action="store_true")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_residue_table)

    sv = sub.add_parser("sieve", help="empirical last-digit pair counts")
    ssub = sv.add_subparsers(dest="command", required=True)
    p = ssub.add_parser("pairs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--window", choices=PAIR_WINDOWS, default="above-base")
    p.set_defaults(func=cmd_sieve_pairs)

    p = sub.add_parser("curves", help="W_h against lambda as CSV")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--gmax", type=int, default=DEFAULT_GMAX)
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="-1 for full degree")
    p.add_argument("--lambda-grid", type=parse_grid, default=parse_grid("log:1e-4:1:41"))
    p.add_argument("--census", type=int, default=DEFAULT_CENSUS_PRIME, choices=[19, 23])
    p.add_argument("--correct-large-factors", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("compare", help="compare against published tables")
    p.add_argument("--table", choices=COMPARISONS, required=True)
    p.add_argument("--census", type=int, default=DEFAULT_CENSUS_PRIME, choices=[19, 23])
    p.add_argument("--correct-large-factors", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CapacityError) as exc:
        print(f"gapcycles: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
