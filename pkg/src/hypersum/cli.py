"""Command-line front end: ``hypersum eval | sweep | verify-all``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from hypersum import acceptance
from hypersum.hyper_core import DEFAULT_CONFIG, DOUBLE_CONFIG, HypersumError, SeriesConfig
from hypersum.theorems import _FIXED_LAMBDA, _FIXED_NU, CASE_IDS, TheoremCase, verify

COLUMNS = (
    "id", "mu", "nu", "lambda", "k", "lmax", "lhs", "rhs",
    "residual", "oracle", "oracle_delta", "digits_lost", "error",
)

_NO_LAMBDA = ("T1", "T2", "C2a", "C2b")


def _config(precision: str) -> SeriesConfig:
    return DOUBLE_CONFIG if precision == "double" else DEFAULT_CONFIG


def _fmt(value) -> str:
    # repr is the shortest round-trip form, never more than 17 significant digits
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _float_list(text: str) -> list[float]:
    try:
        return [_parse_number(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_number(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def _number(text: str) -> float:
    try:
        return _parse_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _id_list(text: str) -> list[str]:
    ids = [item.strip() for item in text.split(",") if item.strip()]
    bad = [i for i in ids if i not in CASE_IDS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown theorem id(s) {', '.join(bad)}; choose from {', '.join(CASE_IDS)}")
    return ids


@dataclass(frozen=True)
class SweepSpec:
    ids: tuple[str, ...]
    mus: tuple[float, ...]
    nus: tuple[float, ...]
    lams: tuple[float, ...]
    ks: tuple[float, ...]
    L_max: int
    tol: float
    with_oracle: bool
    fmt: str
    out: str | None
    precision: str = "extended"

    def cases(self) -> tuple[list[TheoremCase], list[str]]:
        """Constraint-respecting cross product, plus messages for skipped combinations."""
        cases, skipped, seen = [], [], set()
        for cid in self.ids:
            nus = (None,) if cid in _FIXED_NU else self.nus or (None,)
            lams = (None,) if cid in _NO_LAMBDA or cid in _FIXED_LAMBDA else self.lams or (None,)
            for mu, nu, lam, k in product(self.mus, nus, lams, self.ks):
                key = (cid, mu, nu, lam, k)
                if key in seen:
                    continue
                seen.add(key)
                try:
                    cases.append(TheoremCase(cid, mu, nu, lam, k, self.L_max))
                except HypersumError as exc:
                    skipped.append(f"skipped {cid} mu={mu!r} nu={nu!r} lambda={lam!r} k={k!r}: {exc}")
        return cases, skipped


def _row(case: TheoremCase, tol: float, with_oracle: bool, precision: str) -> dict:
    mu, nu, lam = case.mu_nu_lam
    row = {c: None for c in COLUMNS}
    row.update(id=case.id, mu=mu, nu=nu, k=float(case.k), lmax=case.L_max)
    row["lambda"] = lam
    try:
        rep = verify(case, with_oracle=with_oracle, tol=tol, cfg=_config(precision))
    except HypersumError as exc:
        row["error"] = str(exc)
        return row
    row.update(
        lmax=rep.case.L_max,
        lhs=rep.lhs,
        rhs=rep.rhs,
        residual=rep.relative_residual,
        oracle=rep.oracle,
        oracle_delta=rep.oracle_delta,
        digits_lost=rep.digits_lost,
    )
    return row


def _row_job(args):
    return _row(*args)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    try:
        case = TheoremCase(args.theorem, args.mu, args.nu, args.lam, args.k, args.lmax)
    except HypersumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    row = _row(case, args.tol, args.oracle, args.precision)
    if row["error"]:
        print(f"error: {row['error']}", file=sys.stderr)
        return 1
    if args.format:
        _emit(render([row], args.format), args.out)
        return 0
    lines = [f"{name}: {_fmt(row[name])}" for name in COLUMNS if name != "error"]
    if not args.oracle:
        lines = [ln for ln in lines if not ln.startswith(("oracle:", "oracle_delta:"))]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        ids=tuple(args.theorem),
        mus=tuple(args.mu),
        nus=tuple(args.nu or ()),
        lams=tuple(args.lam or ()),
        ks=tuple(args.k),
        L_max=args.lmax,
        tol=args.tol,
        with_oracle=args.oracle,
        fmt=args.format or "csv",
        out=args.out,
        precision=args.precision,
    )
    cases, skipped = spec.cases()
    for msg in skipped:
        print(msg, file=sys.stderr)
    if not cases:
        print("error: no valid cases after constraint filtering", file=sys.stderr)
        return 1
    jobs = [(case, spec.tol, spec.with_oracle, spec.precision) for case in cases]
    workers = args.workers or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_row_job(job) for job in jobs]
    _emit(render(rows, spec.fmt), spec.out)
    return 0 if any(row["error"] is None for row in rows) else 1


def cmd_verify_all(args) -> int:
    numbers = acceptance.select(args.only)
    if not numbers:
        print("error: --only matched no criteria", file=sys.stderr)
        return 1
    results = acceptance.run(numbers, tol=args.tol, workers=args.workers, echo=print)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypersum",
        description="Evaluate and verify 3F4 summation theorems against their series and quadrature oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lmax", type=_positive_int, default=40, help="truncation order L_max (default 40)")
    common.add_argument("--tol", type=_number, default=1e-9, help="relative residual target (default 1e-9)")
    common.add_argument("--oracle", action="store_true", help="also evaluate the quadrature oracle")
    common.add_argument("--format", choices=("csv", "json"), help="machine-readable output")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--precision", choices=("extended", "double"), default="extended",
                        help="series arithmetic: double-double (default) or plain double")

    ev = sub.add_parser("eval", parents=[common], help="evaluate one case")
    ev.add_argument("--theorem", required=True, choices=CASE_IDS)
    ev.add_argument("--mu", type=_number, required=True)
    ev.add_argument("--nu", type=_number)
    ev.add_argument("--lambda", dest="lam", type=_number)
    ev.add_argument("--k", type=_number, required=True)
    ev.set_defaults(func=cmd_eval)

    sw = sub.add_parser("sweep", parents=[common], help="evaluate a cross product of cases")
    sw.add_argument("--theorem", type=_id_list, required=True, help="comma-separated case ids")
    sw.add_argument("--mu", type=_float_list, required=True, help="comma-separated values")
    sw.add_argument("--nu", type=_float_list)
    sw.add_argument("--lambda", dest="lam", type=_float_list)
    sw.add_argument("--k", type=_float_list, required=True)
    sw.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1)
    sw.set_defaults(func=cmd_sweep)

    va = sub.add_parser("verify-all", help="run the acceptance criteria")
    va.add_argument("--tol", type=_number, default=None, help="replace every criterion threshold with this value")
    va.add_argument("--only", type=lambda s: [x for x in s.split(",") if x.strip()],
                    help="comma-separated criterion numbers or tags (T1, T2, T3, corollaries, limits, ...)")
    va.add_argument("--workers", type=_positive_int, default=None)
    va.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
