"""Command-line front end.

Exit codes: 0 success, 2 condition failure, 3 catalog mismatch, 4 invalid
cycle, 64 usage / parse error, 65 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from .candidates import OptimizerConfig
from .catalog import CATALOG, CatalogFormatError, load_catalog, verify_catalog_against_matrix
from .cycles import (
    CycleVector,
    InvalidCycleError,
    cycle_to_json,
    is_minimal,
    load_cycle,
    structure_violations,
)
from .formula import approximation_error, candidate_grid
from .function_model import (
    BUILTINS,
    FunctionSource,
    GridFormatError,
    builtin,
    check_delta_conditions,
    load_grid,
)
from .lp_oracle import GridSpec, GridTooLarge, extract_dual_cycle, grid_error, uniform_grid

EXIT_OK = 0
EXIT_CONDITION = 2
EXIT_CATALOG = 3
EXIT_CYCLE = 4
EXIT_USAGE = 64
EXIT_GUARD = 65

AGREEMENT_TOL = 1e-6


class UsageError(Exception):
    pass


def parse_function_spec(spec: str) -> FunctionSource:
    """``builtin:NAME[:k=v,...]`` or ``grid:PATH``."""
    kind, _, rest = spec.partition(":")
    if kind == "grid":
        if not rest:
            raise UsageError("grid spec needs a path")
        try:
            return load_grid(rest)
        except (OSError, GridFormatError) as exc:
            raise UsageError(f"cannot load grid {rest!r}: {exc}") from exc
    if kind != "builtin":
        raise UsageError(f"function spec must start with 'builtin:' or 'grid:', got {spec!r}")
    name, _, plist = rest.partition(":")
    if name not in BUILTINS:
        raise UsageError(f"unknown builtin {name!r}; known: {', '.join(BUILTINS)}")
    params = {}
    if plist:
        for item in plist.split(","):
            k, eq, v = item.partition("=")
            if not eq or not k:
                raise UsageError(f"bad parameter {item!r}; expected k=v")
            try:
                params[k.strip()] = float(v)
            except ValueError as exc:
                raise UsageError(f"parameter {k!r} is not a number: {v!r}") from exc
    try:
        return builtin(name, params)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def parse_grid_arg(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) not in (1, 3):
        raise UsageError(f"--grid expects N or NX,NY,NZ, got {text!r}")
    try:
        ns = [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"--grid expects integers, got {text!r}") from exc
    if any(n < 2 for n in ns):
        raise UsageError("every grid axis needs at least 2 nodes")
    return uniform_grid(*ns)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _write_report(path: str | None, doc: dict) -> None:
    if path:
        Path(path).write_text(_dump(doc) + "\n")


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.stages: dict[str, float] = {}
        self._t = time.perf_counter()

    def lap(self, name: str) -> None:
        now = time.perf_counter()
        self.stages[name] = now - self._t
        self._t = now

    def attach(self, doc: dict) -> dict:
        if self.enabled:
            doc["timings"] = self.stages
        return doc


def run_report(
    f: FunctionSource,
    delta,
    formula=None,
    lp=None,
    clock: _Clock | None = None,
) -> dict:
    """RunReport document; ``agreement`` is recomputed from the stored numbers."""
    doc: dict = {"function": f.descriptor(), "delta": delta.to_json() if delta else None}
    if formula is not None:
        doc["candidates"] = formula.candidates.to_json()
        doc["catalog_table"] = formula.evaluation.table()
        doc["best_entry"] = formula.best_id
        doc["E_formula"] = formula.value
    if lp is not None:
        cyc = extract_dual_cycle(lp)
        doc["lp"] = {
            "grid": lp.grid.to_json(),
            "t": lp.t,
            "dual_cycle": {"points": [list(p) for p in cyc.points], "weights": [float(w) for w in cyc.weights]},
        }
    if formula is not None and lp is not None:
        doc["agreement_tol"] = AGREEMENT_TOL
        doc["agreement"] = abs(doc["E_formula"] - doc["lp"]["t"]) <= AGREEMENT_TOL
    if clock is not None:
        clock.attach(doc)
    return doc


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_check(args) -> int:
    f = parse_function_spec(args.fn)
    rep = check_delta_conditions(f, n=args.grid, tol=args.tol)
    print(_dump({"function": f.descriptor(), **rep.to_json()}))
    return EXIT_OK if rep.satisfied_weak else EXIT_CONDITION


def _config(args) -> OptimizerConfig:
    kw = {}
    if args.scan is not None:
        kw["scan"] = args.scan
    if args.refine_tol is not None:
        kw["refine_tol"] = args.refine_tol
    return OptimizerConfig(**kw)


def cmd_error(args) -> int:
    f = parse_function_spec(args.fn)
    clock = _Clock(not args.no_timings)
    delta = check_delta_conditions(f)
    clock.lap("delta_check")
    if not delta.satisfied_weak and not args.force:
        print(f"{f.descriptor()}: mixed-difference conditions fail (worst {delta.worst_violation:.3e}); use --force", file=sys.stderr)
        _write_report(args.report, run_report(f, delta, clock=clock))
        return EXIT_CONDITION
    res = approximation_error(f, _config(args))
    clock.lap("formula")
    lp = None
    if args.cross_check:
        try:
            lp = grid_error(f, candidate_grid(res.candidates))
        except GridTooLarge as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_GUARD
        clock.lap("lp_cross_check")
    print(f"E = {res.value!r}  best entry {res.best_id}")
    if lp is not None:
        print(f"t* on candidate grid = {lp.t!r}")
    _write_report(args.report, run_report(f, delta, res, lp, clock))
    return EXIT_OK


def cmd_error_lp(args) -> int:
    f = parse_function_spec(args.fn)
    if args.grid_from_u:
        grid = candidate_grid(approximation_error(f).candidates)
    else:
        grid = parse_grid_arg(args.grid)
    try:
        sol = grid_error(f, grid)
    except GridTooLarge as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_GUARD
    print(f"t* = {sol.t!r}  grid {'x'.join(map(str, grid.shape))}")
    _write_report(args.report, sol.to_json())
    return EXIT_OK


def cmd_catalog_verify(args) -> int:
    try:
        cat = load_catalog(args.catalog) if args.catalog else CATALOG
    except (OSError, CatalogFormatError) as exc:
        print(f"cannot load catalog: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = verify_catalog_against_matrix(cat)
    doc = rep.to_json()
    print(_dump(doc))
    _write_report(args.report, doc)
    if not rep.ok:
        ids = sorted({str(m["id"]) for m in rep.mismatches})
        print(f"catalog mismatch: {', '.join(ids) or 'count/rank'}", file=sys.stderr)
        return EXIT_CATALOG
    return EXIT_OK


def cmd_cycle_verify(args) -> int:
    try:
        s = load_cycle(args.file)
    except InvalidCycleError as exc:
        sums = {f"{axis}={value!r}": str(total) for (axis, value), total in (exc.sums or {}).items()}
        print(_dump({"cycle": False, "error": str(exc), "nonzero_plane_sums": sums}), file=sys.stderr)
        return EXIT_CYCLE
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"cannot parse {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    weak = not isinstance(s, CycleVector)
    strict = s.strip_zeros()
    doc = {
        "cycle": True,
        "weak": weak,
        "points": len(s),
        "minimal": is_minimal(strict),
        "structure_violations": structure_violations(strict),
        "normalized": cycle_to_json(strict),
    }
    print(_dump(doc))
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seplinf", description="Uniform approximation by sums of univariate functions on the unit cube.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check the mixed-difference conditions on a grid")
    c.add_argument("--fn", required=True)
    c.add_argument("--grid", type=int, default=16)
    c.add_argument("--tol", type=float, default=None)
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("error", help="closed-form error via candidate set and catalog")
    e.add_argument("--fn", required=True)
    e.add_argument("--scan", type=int, default=None)
    e.add_argument("--refine-tol", type=float, default=None)
    e.add_argument("--report")
    e.add_argument("--force", action="store_true")
    e.add_argument("--cross-check", action="store_true", help="also solve the LP on the candidate grid")
    e.add_argument("--no-timings", action="store_true")
    e.set_defaults(run=cmd_error)

    l = sub.add_parser("error-lp", help="grid LP error")
    l.add_argument("--fn", required=True)
    g = l.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid")
    g.add_argument("--grid-from-u", action="store_true")
    l.add_argument("--report")
    l.set_defaults(run=cmd_error_lp)

    v = sub.add_parser("catalog-verify", help="regenerate the catalog from the face matrix")
    v.add_argument("--catalog", help="catalog text file (default: bundled)")
    v.add_argument("--report")
    v.set_defaults(run=cmd_catalog_verify)

    y = sub.add_parser("cycle-verify", help="check a cycle JSON file")
    y.add_argument("--file", required=True)
    y.set_defaults(run=cmd_cycle_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
