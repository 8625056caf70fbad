"""Command-line front end.

Subcommands: ``screen`` ranks the features of a CSV dataset, ``simulate``
writes a benchmark dataset, ``bench`` / ``eigen`` / ``tstat`` run the
replicated studies. Exit codes: 0 success, 1 argument error, 2 data error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import run_eigen_study, run_study, run_tstat_study
from .dataio import (
    load_dataset_csv,
    metadata_path,
    write_dataset_csv,
    write_metadata_json,
)
from .datagen import SimSetting, generate_dataset
from .exceptions import (
    BoundaryError,
    ConvergenceError,
    DataFileError,
    DegenerateFeatureError,
    SaturationError,
    SupportError,
)
from .families import get_family
from .screening import (
    compute_screening,
    default_top_d,
    rank_agreement,
    select_by_threshold,
    select_top_d,
)
from .scenarios import get_scenario

EXIT_OK = 0
EXIT_ARGUMENT = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

_DATA_ERRORS = (DataFileError, SupportError)
_NUMERICAL_ERRORS = (
    SaturationError,
    BoundaryError,
    DegenerateFeatureError,
    ConvergenceError,
)


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; we reserve 2 for data errors
    def error(self, message):
        raise _ArgumentError(message)


def _fmt(x) -> str:
    return f"{x:.6g}"


def _workers(value):
    # 0 = auto-detect hardware parallelism (joblib's -1)
    return -1 if value == 0 else value


def _check_out_path(path):
    # validate before any computation so long runs cannot fail at write time
    if path is None:
        return
    parent = Path(path).parent
    if not parent.is_dir():
        raise ValueError(f"output directory does not exist: {parent}")


def _add_setting_flags(parser, require=False):
    parser.add_argument("--table", help="named scenario from the built-in registry")
    parser.add_argument("--design", choices=("S1", "S2", "S3"))
    parser.add_argument("--n", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--rho", type=float)
    parser.add_argument("--s", type=int)
    parser.add_argument("--pattern", help='coefficient pattern, e.g. "(1,1.3,1)"')
    parser.add_argument(
        "--family", choices=("gaussian", "bernoulli", "poisson"), default=None
    )
    parser.required_setting = require


def _resolve_setting(args, seed) -> SimSetting:
    """Build the SimSetting from --table, with explicit flags overriding."""
    fields = {
        "design": args.design,
        "n": args.n,
        "p": args.p,
        "q": args.q,
        "rho": args.rho,
        "s": args.s,
        "beta_pattern": args.pattern,
        "family": args.family,
    }
    if args.table:
        scenario = get_scenario(args.table)
        base = {
            "design": scenario.design,
            "n": scenario.n,
            "p": scenario.p,
            "q": scenario.q,
            "rho": scenario.rho,
            "s": scenario.s,
            "beta_pattern": scenario.pattern,
            "family": scenario.family,
        }
        base.update({k: v for k, v in fields.items() if v is not None})
        fields = base
    else:
        missing = [k for k, v in fields.items() if v is None and k not in ("q", "rho")]
        if missing:
            raise ValueError(
                "missing setting flags (or use --table): "
                + ", ".join(f"--{m.replace('beta_pattern', 'pattern')}" for m in missing)
            )
        fields["q"] = fields["q"] or 0
        fields["rho"] = fields["rho"] or 0.0
    return SimSetting(seed=seed, **fields)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glmscreen", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_screen = sub.add_parser("screen", help="rank the features of a CSV dataset")
    p_screen.add_argument("input", help="CSV file with a header row")
    p_screen.add_argument(
        "--response", required=True, help="response column name or index"
    )
    p_screen.add_argument(
        "--family",
        choices=("gaussian", "bernoulli", "poisson"),
        default="gaussian",
    )
    p_screen.add_argument(
        "--method", choices=("mmle", "mlr", "both"), default="mmle"
    )
    p_screen.add_argument("--threshold", type=float, default=None)
    p_screen.add_argument(
        "--top-d",
        type=int,
        default=None,
        help="selection size (default ceil(n / log n))",
    )
    p_screen.add_argument(
        "--standardize",
        action=argparse.BooleanOptionalAction,
        default=True,
    )
    p_screen.add_argument("--workers", type=int, default=1)
    p_screen.add_argument(
        "--out", required=True, help="output path (.jsonl for JSON lines, else CSV)"
    )

    p_sim = sub.add_parser("simulate", help="write a simulated dataset")
    _add_setting_flags(p_sim)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", required=True, help="dataset CSV path")

    for name, help_text in (
        ("bench", "replicated screening study (MMS records, MMMS/RSD summary)"),
        ("eigen", "largest sample-covariance eigenvalue per replication"),
        ("tstat", "oracle-model minimum |t| per replication"),
    ):
        p_run = sub.add_parser(name, help=help_text)
        _add_setting_flags(p_run)
        p_run.add_argument("--reps", type=int, default=100)
        p_run.add_argument("--seed", type=int, default=0)
        p_run.add_argument("--workers", type=int, default=1)
        p_run.add_argument("--out", help="output prefix for records/summary files")
        if name == "bench":
            p_run.add_argument(
                "--method", choices=("mmle", "mlr", "both"), default="both"
            )
            p_run.add_argument(
                "--standardize",
                action=argparse.BooleanOptionalAction,
                default=True,
            )

    return parser


def cmd_screen(args) -> int:
    _check_out_path(args.out)
    X, y, names = load_dataset_csv(args.input, args.response)
    family = get_family(args.family)
    family.validate_response(y)
    if args.threshold is not None and args.top_d is not None:
        raise ValueError("choose either --threshold or --top-d, not both")
    methods = ("mmle", "mlr") if args.method == "both" else (args.method,)
    results = compute_screening(
        X,
        y,
        family,
        methods=methods,
        standardize=args.standardize,
        n_jobs=_workers(args.workers),
    )
    primary = results[methods[0]]
    n, p = X.shape
    selections = {}
    for m in methods:
        if args.threshold is not None:
            selections[m] = select_by_threshold(results[m], args.threshold)
        else:
            d = args.top_d if args.top_d is not None else min(p, default_top_d(n))
            selections[m] = select_top_d(results[m], d)

    rank_of = {}
    for m in methods:
        inverse = np.empty(p, dtype=np.int64)
        inverse[results[m].ranking] = np.arange(1, p + 1)
        rank_of[m] = inverse

    rows = []
    for j in primary.ranking:
        j = int(j)
        row = {"feature_id": j, "feature": names[j]}
        for m in methods:
            suffix = f"_{m}" if len(methods) > 1 else ""
            row[f"utility{suffix}"] = float(results[m].utilities[j])
            row[f"rank{suffix}"] = int(rank_of[m][j])
            row[f"selected{suffix}"] = j in selections[m]
        row["flagged"] = j in primary.flagged
        rows.append(row)

    if str(args.out).endswith(".jsonl"):
        with open(args.out, "w") as fh:
            for row in rows:
                fh.write(json.dumps(row) + "\n")
    else:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            for row in rows:
                writer.writerow(
                    {
                        k: (int(v) if isinstance(v, bool) else v)
                        for k, v in row.items()
                    }
                )

    for m in methods:
        print(f"{m}: selected {len(selections[m])} of {p} features")
    if len(methods) > 1:
        rho = rank_agreement(results["mmle"].utilities, results["mlr"].utilities)
        print(f"method agreement (Spearman): {_fmt(rho)}")
    if primary.flagged:
        print(f"flagged (non-converged) fits: {len(primary.flagged)}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    _check_out_path(args.out)
    setting = _resolve_setting(args, args.seed)
    X, y = generate_dataset(setting)
    write_dataset_csv(args.out, X, y)
    meta = metadata_path(args.out)
    write_metadata_json(meta, setting)
    print(f"wrote {args.out} ({setting.n} rows, {setting.p} features) and {meta}")
    return EXIT_OK


def _write_records_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_bench(args) -> int:
    _check_out_path(args.out)
    setting = _resolve_setting(args, args.seed)
    methods = ("mmle", "mlr") if args.method == "both" else (args.method,)
    records, summaries = run_study(
        setting,
        n_reps=args.reps,
        methods=methods,
        n_jobs=_workers(args.workers),
        standardize=args.standardize,
    )
    if args.out:
        _write_records_csv(
            f"{args.out}.records.csv",
            ["replication", "method", "mms", "runtime_ms"],
            [(r.replication, r.method, r.mms, r.runtime_ms) for r in records],
        )
        with open(f"{args.out}.summary.json", "w") as fh:
            json.dump(
                {
                    m: {
                        "mmms": s.mmms,
                        "rsd": s.rsd,
                        "n_reps": s.n_reps,
                        "n_skipped": s.n_skipped,
                    }
                    for m, s in summaries.items()
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    print(
        f"setting: {setting.design} n={setting.n} p={setting.p} q={setting.q} "
        f"rho={_fmt(setting.rho)} s={setting.s} family={setting.family}"
    )
    print(f"{'method':<8}{'reps':>6}{'skipped':>9}{'MMMS':>10}{'RSD':>10}")
    for m, s in summaries.items():
        print(
            f"{m:<8}{s.n_reps:>6}{s.n_skipped:>9}{_fmt(s.mmms):>10}{_fmt(s.rsd):>10}"
        )
    if args.out:
        print(f"wrote {args.out}.records.csv and {args.out}.summary.json")
    return EXIT_OK


def cmd_eigen(args) -> int:
    _check_out_path(args.out)
    setting = _resolve_setting(args, args.seed)
    records, (median, rsd) = run_eigen_study(
        setting, n_reps=args.reps, n_jobs=_workers(args.workers)
    )
    if args.out:
        _write_records_csv(
            f"{args.out}.records.csv",
            ["replication", "lambda_max"],
            [(r, repr(lam)) for r, lam in records],
        )
        with open(f"{args.out}.summary.json", "w") as fh:
            json.dump(
                {"median": median, "rsd": rsd, "n_reps": len(records)}, fh, indent=2
            )
            fh.write("\n")
    print(
        f"max eigenvalue over {len(records)} replications: "
        f"median {_fmt(median)}, rsd {_fmt(rsd)}"
    )
    if args.out:
        print(f"wrote {args.out}.records.csv and {args.out}.summary.json")
    return EXIT_OK


def cmd_tstat(args) -> int:
    _check_out_path(args.out)
    setting = _resolve_setting(args, args.seed)
    records, (median, rsd), n_failed = run_tstat_study(
        setting, n_reps=args.reps, n_jobs=_workers(args.workers)
    )
    if args.out:
        _write_records_csv(
            f"{args.out}.records.csv",
            ["replication", "min_abs_t"],
            [(r, repr(t)) for r, t in records],
        )
        with open(f"{args.out}.summary.json", "w") as fh:
            json.dump(
                {
                    "median": median,
                    "rsd": rsd,
                    "n_converged": len(records),
                    "n_failed": n_failed,
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    print(
        f"oracle min |t| over {len(records)} replications: median {_fmt(median)}, "
        f"rsd {_fmt(rsd)}, failed fits excluded: {n_failed}"
    )
    if args.out:
        print(f"wrote {args.out}.records.csv and {args.out}.summary.json")
    return EXIT_OK


_COMMANDS = {
    "screen": cmd_screen,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "eigen": cmd_eigen,
    "tstat": cmd_tstat,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except ValueError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
