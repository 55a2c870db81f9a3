"""Command-line front end: compute values, emit tables, run verification.

Exit codes are a stable contract: 0 for success / all cells passing,
1 for an identity failure (verify or bench disagreement), 2 for usage
errors, including violated preconditions on indices.

Verification reports written to stdout or --out are deterministic for a
given configuration and seed (timings are zeroed in the serialized form;
bench prints real timings separately).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

from .kernel import FactoredRational, ParseError, emit, parse_signed_monomial
from .integrals import (
    GTable,
    InvalidOrderError,
    NotADivisorError,
    s_direct,
)
from .deformed import (
    LambdaContext,
    SYMBOLIC,
    g_def_closed_form,
    g_def_recurrence,
    h_chain_sum,
)
from .series import z_value
from .report import Checker, reports_to_json
from .verify import SUITE_NAMES, run_suite

__all__ = ["main", "RunConfig"]


@dataclass
class RunConfig:
    """Knobs shared by the driver commands."""

    max_order: int = 10
    mode: str = "exact"
    seed: int = 0
    ctx: LambdaContext = SYMBOLIC
    fmt: str = "json"
    out: str | None = None

    def checker(self) -> Checker:
        return Checker(mode=self.mode, seed=self.seed)


def _load_lambda_spec(path: str) -> LambdaContext:
    """Read a parameter table {"lam": {"2": "L", "4": "A*tau^4"}}; values
    are signed monomials in the tiny expression grammar."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"lam"} \
            or not isinstance(doc["lam"], dict):
        raise ParseError(f"{path}: expected an object with a 'lam' table")
    table = {}
    for key, expr in doc["lam"].items():
        try:
            i = int(key)
        except ValueError:
            raise ParseError(f"{path}: index {key!r} is not an integer") \
                from None
        if not isinstance(expr, str):
            raise ParseError(f"{path}: value for lam_{i} must be a string")
        table[i] = parse_signed_monomial(expr)
    try:
        return LambdaContext.of_table(table)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _format_value(val: FactoredRational, fmt: str,
                  indices: tuple[int, ...]) -> str:
    if fmt == "latex":
        return emit(val, "latex")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(list(indices) + [emit(val)])
        return buf.getvalue().rstrip("\n")
    return emit(val)


def _cmd_compute(args) -> int:
    cfg: RunConfig = args.cfg
    kind = args.kind
    idx = args.indices
    need = 1 if kind == "z" else 2
    if len(idx) != need:
        print(f"error: compute {kind} takes {need} "
              f"{'index' if need == 1 else 'indices'}", file=sys.stderr)
        return 2
    if kind == "g":
        val = GTable(args.route).value(idx[0], idx[1])
    elif kind == "g-deformed":
        fn = g_def_closed_form if args.route == "closed" else g_def_recurrence
        val = fn(idx[0], idx[1], cfg.ctx)
    elif kind == "h":
        val = h_chain_sum(idx[0], idx[1], cfg.ctx)
    elif kind == "s":
        val = s_direct(idx[0], idx[1])
    else:
        val = z_value(idx[0])
    _write_out(_format_value(val, cfg.fmt, tuple(idx)), cfg.out)
    return 0


def _table_cells(kind: str, max_order: int, route: str, ctx: LambdaContext):
    if kind == "g":
        table = GTable(route if route != "closed" else "closed")
        fn = table.value
    elif kind == "g-deformed":
        fn = (lambda k, m: g_def_closed_form(k, m, ctx)) \
            if route == "closed" else \
            (lambda k, m: g_def_recurrence(k, m, ctx))
    else:
        fn = lambda k, m: h_chain_sum(k, m, ctx)
    for k in range(1, max_order + 1):
        for m in range(k, max_order + 1):
            yield k, m, fn(k, m)


def _cmd_table(args) -> int:
    cfg: RunConfig = args.cfg
    kind = args.kind
    route = args.route if kind != "h" else "chain-sum"
    cells = list(_table_cells(kind, cfg.max_order, args.route, cfg.ctx))
    if cfg.fmt == "json":
        doc = {
            "kind": kind,
            "max": cfg.max_order,
            "route": route,
            "cells": [{"k": k, "m": m, "value": json.loads(emit(v))}
                      for k, m, v in cells],
        }
        _write_out(json.dumps(doc, separators=(",", ":")), cfg.out)
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# kind={kind} max={cfg.max_order} route={route}\n")
        writer = csv.writer(buf)
        writer.writerow(["k", "m", "value"])
        for k, m, v in cells:
            writer.writerow([k, m, emit(v)])
        _write_out(buf.getvalue().rstrip("\n"), cfg.out)
    else:
        name = {"g": "G", "g-deformed": "G", "h": "H"}[kind]
        lines = [f"% kind={kind} max={cfg.max_order} route={route}"]
        for k, m, v in cells:
            lines.append(f"{name}_{{{k},{m}}} = {emit(v, 'latex')}")
        _write_out("\n".join(lines), cfg.out)
    return 0


def _cmd_verify(args) -> int:
    cfg: RunConfig = args.cfg
    checker = cfg.checker()
    reports = run_suite(args.suite, cfg.max_order, checker)
    _write_out(reports_to_json(reports), cfg.out)
    ok = all(r.all_passed for r in reports)
    for r in reports:
        passed, failed = r.counts
        status = "PASS" if failed == 0 else "FAIL"
        print(f"{status} {r.identity}: {passed}/{len(r.cells)} cells",
              file=sys.stderr)
        fail = r.first_failure()
        if fail is not None:
            print(f"  first failing cell {fail.indices}: "
                  f"{fail.detail or 'no detail'}", file=sys.stderr)
    if checker.disagreements:
        for line in checker.disagreements:
            print(f"mode disagreement: {line}", file=sys.stderr)
        return 1
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    cfg: RunConfig = args.cfg
    names = [n for n in SUITE_NAMES if n != "all"]
    rows = []
    failures = 0
    disagreements = 0
    for name in names:
        timings = {}
        cells = 0
        for mode in ("exact", "modp"):
            checker = Checker(mode=mode, seed=cfg.seed)
            start = time.perf_counter()
            reports = run_suite(name, cfg.max_order, checker)
            timings[mode] = (time.perf_counter() - start) * 1000.0
            cells = sum(len(r.cells) for r in reports)
            failures += sum(r.counts[1] for r in reports)
        if cfg.mode == "both":
            checker = Checker(mode="both", seed=cfg.seed)
            reports = run_suite(name, cfg.max_order, checker)
            failures += sum(r.counts[1] for r in reports)
            disagreements += len(checker.disagreements)
        rows.append((name, cells, timings["exact"], timings["modp"]))
    width = max(len(n) for n in names)
    print(f"{'suite':<{width}}  {'cells':>5}  {'exact ms':>10}  {'modp ms':>10}")
    for name, cells, ex, mp in rows:
        print(f"{name:<{width}}  {cells:>5}  {ex:>10.1f}  {mp:>10.1f}")
    if disagreements:
        print(f"{disagreements} mode disagreements", file=sys.stderr)
        return 1
    return 0 if failures == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcmot",
        description="Exact arc-integral values and identity verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--max", type=int, default=10, dest="max_order",
                       help="order bound N (default 10)")
        p.add_argument("--mode", choices=Checker.MODES, default="exact",
                       help="equality strategy (default exact)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for modp sampling (default 0)")
        p.add_argument("--lambda", dest="lambda_spec", metavar="SPEC.json",
                       help="parameter table file for the deformed values")
        p.add_argument("--out", help="write output to this path")
        if fmt:
            p.add_argument("--format", choices=("json", "latex", "csv"),
                           default="json", dest="fmt")

    p_compute = sub.add_parser("compute", help="one exact value")
    p_compute.add_argument("kind",
                           choices=("g", "g-deformed", "h", "s", "z"))
    p_compute.add_argument("indices", type=int, nargs="+",
                           help="k m (g, g-deformed, h), a k (s), or n (z)")
    p_compute.add_argument("--route", choices=GTable.ROUTES,
                           default="recurrence")
    common(p_compute)
    p_compute.set_defaults(func=_cmd_compute)

    p_table = sub.add_parser("table", help="the full triangle up to --max")
    p_table.add_argument("kind", choices=("g", "g-deformed", "h"))
    p_table.add_argument("--route", choices=GTable.ROUTES,
                         default="recurrence")
    common(p_table)
    p_table.set_defaults(func=_cmd_table)

    p_verify = sub.add_parser("verify", help="run an identity suite")
    p_verify.add_argument("suite", nargs="?", default="all",
                          choices=SUITE_NAMES)
    common(p_verify, fmt=False)
    p_verify.set_defaults(func=_cmd_verify)

    p_bench = sub.add_parser("bench",
                             help="exact vs modp timings per suite")
    common(p_bench, fmt=False)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(max_order=args.max_order, mode=args.mode, seed=args.seed,
                    fmt=getattr(args, "fmt", "json"), out=args.out)
    if args.max_order < 1:
        print("error: --max must be >= 1", file=sys.stderr)
        return 2
    try:
        if args.lambda_spec:
            cfg.ctx = _load_lambda_spec(args.lambda_spec)
        args.cfg = cfg
        return args.func(args)
    except (InvalidOrderError, NotADivisorError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
