"""Command-line front end.

Three subcommands:

* ``bound``  - bound the extreme singular values of one matrix file
* ``bench``  - sweep synthetic matrices and emit one CSV row per sample
* ``verify`` - run bounds and oracle together and assert every invariant

Exit codes: 0 on success (every requested run converged or stalled on an
exact eigenvalue), 1 on input or usage errors, 2 when an iteration ran out
of budget, 3 when ``verify`` caught an invariant violation.

All floats are printed through ``repr`` (shortest round-trip form), and the
human output formats the same numbers the JSON document carries.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

from . import formats
from .iterate import (
    STATUS_MAX_ITER,
    ConvergenceTrace,
    IterationConfig,
    run_lower,
    run_upper,
)
from .matrix import BoundContext, ComplexMatrix, SingularMatrixError, build_context, frobenius_sq
from .oracle import MAX_ORACLE_DIM, Spectrum, singular_values
from .seeds import (
    SEED_KINDS,
    SeedChoice,
    lin_xie_root,
    upper_seed,
    yu_gu_lower,
    zou_lower,
)

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MAX_ITER = 2
EXIT_VERIFY = 3

_ENV_THREADS = "SVBOUND_THREADS"


class InputError(Exception):
    """Anything wrong with the user's input: bad file, bad flag combination."""


def _fmt(x: float) -> str:
    return repr(float(x))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svbound",
        description="Monotone two-sided bounds on the extreme singular values of a complex matrix.",
    )
    sub = parser.add_subparsers(dest="command")

    common_format = dict(
        choices=["auto", formats.FORMAT_MATRIX_MARKET, formats.FORMAT_CSV],
        default="auto",
        help="input format; 'auto' sniffs for a MatrixMarket banner (default: auto)",
    )

    p_bound = sub.add_parser("bound", help="bound sigma_min and/or sigma_max of one matrix")
    p_bound.add_argument("input", help="path to the matrix file, or '-' for standard input")
    p_bound.add_argument("--format", **common_format)
    p_bound.add_argument(
        "--mode", choices=["lower", "upper", "both"], default="both",
        help="which bound(s) to refine (default: both)",
    )
    p_bound.add_argument(
        "--seed", choices=list(SEED_KINDS), default=None,
        help="seed choice; defaults to lin-xie for the lower run and frobenius for the upper",
    )
    p_bound.add_argument(
        "--seed-value", type=float, default=None,
        help="starting bound for --seed custom",
    )
    p_bound.add_argument("--tol-rel", type=float, default=1e-14, help="relative stopping tolerance")
    p_bound.add_argument("--max-iter", type=int, default=100_000, help="iteration budget per direction")
    p_bound.add_argument(
        "--output", choices=["human", "json", "csv"], default="human",
        help="report format (default: human)",
    )
    p_bound.add_argument(
        "--verify", action="store_true",
        help="also run the eigenvalue oracle and report sigma_min/sigma_max",
    )

    p_bench = sub.add_parser("bench", help="sweep synthetic matrices, CSV to stdout")
    p_bench.add_argument("--spec-file", default=None, help="JSON file holding the sweep spec")
    p_bench.add_argument("--n-range", default="2:8", help="matrix sizes as LO:HI (default 2:8)")
    p_bench.add_argument(
        "--spread-range", default="1:10", help="sigma_max/sigma_min range as LO:HI (default 1:10)"
    )
    p_bench.add_argument("--samples", type=int, default=100, help="number of samples (default 100)")
    p_bench.add_argument("--rng-seed", type=int, default=0, help="base seed (default 0)")

    p_verify = sub.add_parser("verify", help="assert every bound invariant against the oracle")
    p_verify.add_argument("input", help="path to the matrix file, or '-' for standard input")
    p_verify.add_argument("--format", **common_format)
    p_verify.add_argument("--tol-rel", type=float, default=1e-14, help="relative stopping tolerance")
    p_verify.add_argument("--max-iter", type=int, default=100_000, help="iteration budget per direction")
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_matrix(path: str, fmt: str) -> ComplexMatrix:
    text = _read_input(path)
    if fmt == "auto":
        fmt = formats.detect_format(text)
    try:
        return formats.parse_matrix(text, fmt)
    except (formats.MatrixParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _trace_dict(trace: ConvergenceTrace) -> dict:
    return {
        "trace": [
            {"k": r.k, "lambda": r.lam, "a": r.a, "correction": r.correction}
            for r in trace.iterates
        ],
        "status": trace.status,
        "bound": trace.final_bound,
    }


def _seed_choice(args) -> Optional[SeedChoice]:
    if args.seed is None:
        if args.seed_value is not None:
            raise InputError("--seed-value requires --seed custom")
        return None
    if args.seed == "custom":
        if args.seed_value is None:
            raise InputError("--seed custom requires --seed-value")
        return SeedChoice.custom(args.seed_value)
    if args.seed_value is not None:
        raise InputError("--seed-value requires --seed custom")
    return SeedChoice(args.seed)


def cmd_bound(args) -> int:
    matrix = _load_matrix(args.input, args.format)
    if not matrix.is_square:
        raise InputError(f"bound needs a square matrix, got {matrix.rows}x{matrix.cols}")

    if matrix.rows == 1:
        # Convenience outside the n >= 2 library contract: the only singular
        # value of a 1x1 matrix is the entry's modulus.
        value = abs(complex(matrix.array[0, 0]))
        if value == 0.0:
            raise InputError("matrix is singular: the single entry is zero")
        report = {
            "input": args.input,
            "context": {"n": 1, "frob_sq": value * value, "log_abs_det": math.log(value)},
            "sigma_min": value,
            "sigma_max": value,
        }
        if args.output == "json":
            print(json.dumps(report, indent=2))
        elif args.output == "csv":
            print("direction,k,lambda,a,correction")
        else:
            print(f"n=1: sigma_min = sigma_max = {_fmt(value)}")
        return EXIT_OK

    try:
        ctx = build_context(matrix)
    except (SingularMatrixError, ValueError) as exc:
        raise InputError(str(exc)) from exc

    seed = _seed_choice(args)
    config_kwargs = dict(tol_rel=args.tol_rel, max_iter=args.max_iter)
    if args.mode == "both":
        # A custom seed names one number; it cannot serve both directions.
        if seed is not None and seed.kind == "custom":
            raise InputError("--seed custom is a single value; pick --mode lower or --mode upper")
        lower_cfg = IterationConfig(
            seed=seed if seed is not None and seed.kind != "frobenius" else None, **config_kwargs
        )
        upper_cfg = IterationConfig(
            seed=seed if seed is not None and seed.kind == "frobenius" else None, **config_kwargs
        )
    else:
        lower_cfg = upper_cfg = IterationConfig(seed=seed, **config_kwargs)

    report: dict = {
        "input": args.input,
        "context": {
            "n": ctx.n,
            "frob_sq": ctx.frob_sq,
            "log_abs_det": 0.5 * ctx.log_det_sq.log_mag,
        },
        "seeds": {
            "l": yu_gu_lower(ctx),
            "l0": zou_lower(ctx),
            "a": lin_xie_root(ctx),
            "frob": upper_seed(ctx),
        },
    }
    exit_code = EXIT_OK
    if args.mode in ("lower", "both"):
        try:
            trace = run_lower(ctx, lower_cfg)
        except ValueError as exc:  # seed/direction mismatch or a bad custom seed
            raise InputError(str(exc)) from exc
        report["lower"] = _trace_dict(trace)
        if trace.status == STATUS_MAX_ITER:
            exit_code = EXIT_MAX_ITER
    if args.mode in ("upper", "both"):
        try:
            trace = run_upper(ctx, upper_cfg)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        report["upper"] = _trace_dict(trace)
        if trace.status == STATUS_MAX_ITER:
            exit_code = EXIT_MAX_ITER

    if args.verify:
        if ctx.n > MAX_ORACLE_DIM:
            raise InputError(f"--verify uses the oracle, which is limited to n <= {MAX_ORACLE_DIM}")
        spectrum = singular_values(matrix)
        report["oracle"] = {"sigma_min": spectrum.sigma_min, "sigma_max": spectrum.sigma_max}

    if args.output == "json":
        print(json.dumps(report, indent=2))
    elif args.output == "csv":
        _print_bound_csv(report)
    else:
        _print_bound_human(report)
    return exit_code


def _print_bound_csv(report: dict) -> None:
    print("direction,k,lambda,a,correction")
    for direction in ("lower", "upper"):
        block = report.get(direction)
        if block is None:
            continue
        for row in block["trace"]:
            print(
                f"{direction},{row['k']},{_fmt(row['lambda'])},{_fmt(row['a'])},{_fmt(row['correction'])}"
            )


def _print_bound_human(report: dict) -> None:
    ctxd = report["context"]
    print(f"input: {report['input']} (n={ctxd['n']})")
    print(f"frob_sq={_fmt(ctxd['frob_sq'])} log|det|={_fmt(ctxd['log_abs_det'])}")
    seeds = report["seeds"]
    print(
        "seeds: l=" + _fmt(seeds["l"]) + " l0=" + _fmt(seeds["l0"])
        + " a=" + _fmt(seeds["a"]) + " frob=" + _fmt(seeds["frob"])
    )
    for direction in ("lower", "upper"):
        block = report.get(direction)
        if block is None:
            continue
        print(f"{direction} trace:")
        for row in block["trace"]:
            print(
                f"  k={row['k']} lambda={_fmt(row['lambda'])} a={_fmt(row['a'])}"
                f" correction={_fmt(row['correction'])}"
            )
        print(f"{direction}: bound={_fmt(block['bound'])} status={block['status']}"
              f" iterations={len(block['trace'])}")
    oracle = report.get("oracle")
    if oracle is not None:
        print(f"oracle: sigma_min={_fmt(oracle['sigma_min'])} sigma_max={_fmt(oracle['sigma_max'])}")
        if "lower" in report:
            gap = oracle["sigma_min"] - report["lower"]["bound"]
            print(f"oracle: sigma_min - lower_bound = {_fmt(gap)}")
        if "upper" in report:
            gap = report["upper"]["bound"] - oracle["sigma_max"]
            print(f"oracle: upper_bound - sigma_max = {_fmt(gap)}")


def _parse_range(text: str, what: str, cast):
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"{what} must look like LO:HI, got {text!r}")
    try:
        return cast(parts[0]), cast(parts[1])
    except ValueError:
        raise InputError(f"{what} must hold numbers, got {text!r}") from None


def cmd_bench(args) -> int:
    from .ensemble import BENCH_COLUMNS, SweepSpec, bench_sweep

    if args.spec_file is not None:
        try:
            with open(args.spec_file, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot load spec file {args.spec_file}: {exc}") from exc
        try:
            spec = SweepSpec(
                n_range=tuple(raw.get("n_range", (2, 8))),
                spread_range=tuple(raw.get("spread_range", (1.0, 10.0))),
                samples=int(raw.get("samples", 100)),
                base_seed=int(raw.get("base_seed", 0)),
            )
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad spec file: {exc}") from exc
    else:
        n_lo, n_hi = _parse_range(args.n_range, "--n-range", int)
        s_lo, s_hi = _parse_range(args.spread_range, "--spread-range", float)
        try:
            spec = SweepSpec(
                n_range=(n_lo, n_hi),
                spread_range=(s_lo, s_hi),
                samples=args.samples,
                base_seed=args.rng_seed,
            )
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    max_workers = _env_threads()
    rows = bench_sweep(spec, max_workers=max_workers)
    print(",".join(BENCH_COLUMNS))
    for row in rows:
        print(
            ",".join(
                [
                    str(row.seed),
                    str(row.n),
                    _fmt(row.cond),
                    _fmt(row.l),
                    _fmt(row.l0),
                    _fmt(row.a),
                    _fmt(row.lower_bound),
                    str(row.lower_iters),
                    row.lower_status,
                    _fmt(row.upper_bound),
                    str(row.upper_iters),
                    row.upper_status,
                    _fmt(row.sigma_min),
                    _fmt(row.sigma_max),
                ]
            )
        )
    return EXIT_OK


def _env_threads() -> Optional[int]:
    raw = os.environ.get(_ENV_THREADS)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{_ENV_THREADS} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"{_ENV_THREADS} must be positive, got {value}")
    return value


def cmd_verify(args) -> int:
    matrix = _load_matrix(args.input, args.format)
    if not matrix.is_square:
        raise InputError(f"verify needs a square matrix, got {matrix.rows}x{matrix.cols}")
    if matrix.rows > MAX_ORACLE_DIM:
        raise InputError(f"oracle limited to n <= {MAX_ORACLE_DIM}, got n={matrix.rows}")
    if matrix.rows < 2:
        raise InputError("verify needs n >= 2")
    try:
        ctx = build_context(matrix)
    except (SingularMatrixError, ValueError) as exc:
        raise InputError(str(exc)) from exc

    spectrum = singular_values(matrix)
    config = IterationConfig(tol_rel=args.tol_rel, max_iter=args.max_iter)
    lower = run_lower(ctx, config)
    upper = run_upper(ctx, config)
    failures = _verify_failures(ctx, spectrum, lower, upper)
    if failures:
        name, detail = failures[0]
        print(f"verify failed: {name}: {detail}", file=sys.stderr)
        return EXIT_VERIFY
    print(
        f"verify ok: n={ctx.n} sigma_min={_fmt(spectrum.sigma_min)} sigma_max={_fmt(spectrum.sigma_max)}"
        f" lower={_fmt(lower.final_bound)} ({lower.status}, {lower.iterations} iters)"
        f" upper={_fmt(upper.final_bound)} ({upper.status}, {upper.iterations} iters)"
    )
    return EXIT_OK


def _verify_failures(
    ctx: BoundContext,
    spectrum: Spectrum,
    lower: ConvergenceTrace,
    upper: ConvergenceTrace,
) -> list[tuple[str, str]]:
    """Every invariant the run must satisfy, checked in order; first hit wins."""
    failures: list[tuple[str, str]] = []
    slack = 1e-9
    s_min, s_max = spectrum.sigma_min, spectrum.sigma_max

    l = yu_gu_lower(ctx)
    l0 = zou_lower(ctx)
    a = lin_xie_root(ctx)
    if not (0.0 < l < l0 < a <= s_min * (1.0 + slack)):
        failures.append(
            ("seed-chain", f"expected 0 < l < l0 < a <= sigma_min, got l={l!r} l0={l0!r} a={a!r} "
                           f"sigma_min={s_min!r}")
        )

    lams = [r.lam for r in lower.iterates]
    if any(b < x for x, b in zip(lams, lams[1:])) or lower.final_lambda < (lams[-1] if lams else 0.0):
        failures.append(("lower-monotone", "lower lambda sequence decreased"))
    ceiling = s_min * s_min * (1.0 + slack)
    worst = max([*lams, lower.final_lambda], default=0.0)
    if worst > ceiling:
        failures.append(
            ("lower-sandwich", f"lower iterate lambda={worst!r} exceeds sigma_min^2={s_min * s_min!r}")
        )

    lams_up = [r.lam for r in upper.iterates]
    if any(b > x for x, b in zip(lams_up, lams_up[1:])) or (
        lams_up and upper.final_lambda > lams_up[-1]
    ):
        failures.append(("upper-monotone", "upper lambda sequence increased"))
    floor = s_max * s_max * (1.0 - slack)
    worst_up = min([*lams_up, upper.final_lambda], default=math.inf)
    if worst_up < floor:
        failures.append(
            ("upper-sandwich", f"upper iterate lambda={worst_up!r} fell under sigma_max^2={s_max * s_max!r}")
        )

    eig_tol = 1e-6 * ctx.frob_sq
    if lower.status != STATUS_MAX_ITER:
        nearest = min(abs(lower.final_lambda - v * v) for v in spectrum.values)
        if nearest > eig_tol:
            failures.append(
                ("lower-limit-identification",
                 f"converged lambda={lower.final_lambda!r} is {nearest!r} from the nearest Gram eigenvalue")
            )
    if upper.status != STATUS_MAX_ITER:
        nearest = min(abs(upper.final_lambda - v * v) for v in spectrum.values)
        if nearest > eig_tol:
            failures.append(
                ("upper-limit-identification",
                 f"converged lambda={upper.final_lambda!r} is {nearest!r} from the nearest Gram eigenvalue")
            )

    mass = sum(v * v for v in spectrum.values)
    if abs(mass - ctx.frob_sq) > 1e-10 * ctx.frob_sq:
        failures.append(
            ("oracle-frobenius-consistency",
             f"sum of squared singular values {mass!r} != frob_sq {ctx.frob_sq!r}")
        )
    if spectrum.sigma_min > 0:
        log_prod_sq = 2.0 * sum(math.log(v) for v in spectrum.values)
        if abs(log_prod_sq - ctx.log_det_sq.log_mag) > 1e-8 * max(1.0, abs(ctx.log_det_sq.log_mag)):
            failures.append(
                ("oracle-determinant-consistency",
                 f"log prod sigma^2 = {log_prod_sq!r} != log|det A|^2 = {ctx.log_det_sq.log_mag!r}")
            )
    return failures


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_INPUT
    handler = {"bound": cmd_bound, "bench": cmd_bench, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_INPUT


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
