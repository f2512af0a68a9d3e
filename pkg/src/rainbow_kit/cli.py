"""Command-line front end.

Exit codes: 0 success, 1 bound or conjecture violation, 2 input error,
3 search budget exhausted.  Verbosity comes from ``RAINBOW_KIT_LOG``
(a logging level name, default ``WARNING``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .core import FamilyClass, dumps_canonical, family_from_json, family_to_json, validate_family
from .gen import GenerationError, GenSpec, gen_random_paths, gen_sharpness_paths
from .localsearch import local_search_run, threshold
from .monopath import (
    PathInstance,
    find_monotone_ss_forest,
    find_monotone_ss_treegrow,
    find_monotone_st,
    is_rainbow_monotone,
)
from .oracle import (
    BudgetExceeded,
    HuntConfig,
    SearchBudget,
    derive_seed,
    exists_monotone_path_exact,
    search_counterexamples,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

CSV_VERSION = "rainbow-kit verify-bounds v1"
CSV_COLUMNS = [
    "trial", "instance_id", "n", "r", "class", "seed",
    "q_greedy", "q_fixpoint", "threshold", "slack", "moves_applied", "elapsed_ms",
]

log = logging.getLogger("rainbow_kit")


class InputError(Exception):
    pass


def _setup_logging() -> None:
    level = os.environ.get("RAINBOW_KIT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"instance file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        a = int(lo)
        b = int(hi) if hi else a
    except ValueError:
        raise InputError(f"--n expects N or LO:HI, got {text!r}") from None
    if a < 1 or b < a:
        raise InputError(f"bad --n range {text!r}")
    return a, b


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def bound_class(f, max_j: int) -> FamilyClass:
    """Class-specific bounds are only guaranteed for fixpoints with ``max_j = 3``."""
    if f.r == 2 and max_j >= 3:
        return f.declared_class
    return FamilyClass.GENERAL


def solve_record(f, instance_id: str, max_j: int, seed: int, timing: bool = True) -> dict:
    res = local_search_run(f, max_j=max_j, seed=seed)
    th = threshold(f.n, f.r, bound_class(f, max_j)).threshold
    q = len(res.selection)
    return {
        "instance_id": instance_id,
        "n": f.n,
        "r": f.r,
        "class": f.declared_class.value,
        "q_greedy": res.greedy_size,
        "q_fixpoint": q,
        "threshold": th,
        "moves_applied": res.moves_applied,
        "elapsed_ms": round(res.elapsed_ms, 3) if timing else 0,
        "pass": q >= th,
    }


# commands -------------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    f = family_from_json(_load_json(args.instance)) if args.instance else _build_gen(args, args.seed).build()
    problems = validate_family(f)
    if problems:
        for p in problems:
            print(f"invalid instance: {p}", file=sys.stderr)
        return EXIT_INPUT
    name = Path(args.instance).stem if args.instance else f"gen-{f.declared_class.value}"
    rec = solve_record(f, name, args.max_j, args.seed, timing=not args.no_timing)
    _emit(json.dumps(rec) + "\n", args.out)
    return EXIT_OK if rec["pass"] else EXIT_VIOLATION


def _build_gen(args: argparse.Namespace, seed: int, n: Optional[int] = None) -> GenSpec:
    if n is None:
        n = _parse_range(args.n)[0]
    kind = "latin" if args.gen == "latin" else args.cls
    return GenSpec(kind=kind, n=n, r=args.r, seed=seed)


def _verify_trial(job: tuple) -> dict:
    trial, spec_json, max_j, timing = job
    spec = GenSpec(**spec_json)
    f = spec.build()
    rec = solve_record(f, f"{spec.kind}-n{spec.n}-t{trial}", max_j, spec.seed, timing)
    rec["trial"] = trial
    rec["seed"] = spec.seed
    rec["slack"] = rec["q_fixpoint"] - rec["threshold"]
    return rec


def cmd_verify_bounds(args: argparse.Namespace) -> int:
    lo, hi = _parse_range(args.n)
    jobs = []
    for t in range(args.trials):
        s = derive_seed(args.seed, t)
        n = lo + s % (hi - lo + 1)
        jobs.append((t, _build_gen(args, s, n).to_json(), args.max_j, not args.no_timing))
    try:
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                records = list(pool.map(_verify_trial, jobs))
        else:
            records = [_verify_trial(j) for j in jobs]
    except GenerationError as exc:
        print(f"generator failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    _emit(buf.getvalue(), args.out)
    violations = [r for r in records if r["slack"] < 0]
    summary = {
        "trials": len(records),
        "violations": len(violations),
        "min_slack": min((r["slack"] for r in records), default=None),
    }
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_find_path(args: argparse.Namespace) -> int:
    try:
        inst = PathInstance.from_json(_load_json(args.instance))
    except ValueError as exc:
        raise InputError(f"invalid path instance: {exc}") from None
    result: dict = {"algo": args.algo, "m": inst.m, "Y": len(inst.Y)}
    budget = SearchBudget(time_limit_ms=args.budget_ms)
    if args.algo == "oracle":
        try:
            path = exists_monotone_path_exact(inst, budget)
        except BudgetExceeded as exc:
            result["status"] = "budget exhausted"
            result["detail"] = str(exc)
            _emit(json.dumps(result) + "\n", args.out)
            return EXIT_BUDGET
        result["status"] = "found" if path else "certified none"
    else:
        algo = find_monotone_st if inst.T is not None else (
            find_monotone_ss_treegrow if args.algo == "treegrow" else find_monotone_ss_forest)
        try:
            path = algo(inst)
        except BudgetExceeded as exc:
            result.update(status="no guarantee", detail=f"exact fallback: {exc}")
            _emit(json.dumps(result) + "\n", args.out)
            return EXIT_BUDGET
        # below the path-count guarantee the algorithms fall back to exact search
        result["status"] = "found" if inst.guarantee() else "no guarantee"
    if path is not None:
        result["path"] = path.to_json()
        result["valid"] = is_rainbow_monotone(path, inst)
    _emit(json.dumps(result) + "\n", args.out)
    if path is not None and not result["valid"]:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_hunt(args: argparse.Namespace) -> int:
    lo, hi = _parse_range(args.n) if args.n else (1, 5)
    config = HuntConfig(
        n_min=lo,
        n_max=hi,
        matching_max=args.matching_max,
        budget=SearchBudget(time_limit_ms=args.budget_ms),
    )
    report = search_counterexamples(
        args.target, config, trials=args.trials, seed=args.seed, workers=args.workers, archive_dir=args.out
    )
    print(json.dumps(report.summary()))
    if report.violations:
        return EXIT_VIOLATION
    return EXIT_BUDGET if report.timeouts else EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.gen in ("random", "latin"):
        data = family_to_json(_build_gen(args, args.seed).build())
    elif args.gen == "paths":
        data = gen_random_paths(args.y, n_s=args.s, seed=args.seed).to_json()
    else:
        data = gen_sharpness_paths(args.y, args.variant).to_json()
    _emit(dumps_canonical(data) + "\n", args.out)
    return EXIT_OK


# parser --------------------------------------------------------------------------


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gen", choices=["random", "latin"], default="random")
    p.add_argument("--class", dest="cls", default="general",
                   choices=["general", "bipartite", "pairwise_disjoint"])
    p.add_argument("--n", default="10", help="N or LO:HI")
    p.add_argument("--r", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rainbow-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="local search on one instance")
    p.add_argument("--instance")
    _add_gen_flags(p)
    p.add_argument("--max-j", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-bounds", help="batch check of fixpoint sizes against the bounds")
    _add_gen_flags(p)
    p.add_argument("--max-j", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0")
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("find-path", help="rainbow-monotone path in a path instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=["treegrow", "forest", "oracle"], default="treegrow")
    p.add_argument("--budget-ms", type=int, default=60_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_find_path)

    p = sub.add_parser("hunt", help="seeded counterexample search")
    p.add_argument("--target", choices=["conj_ab", "conj_paths"], required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--n", help="family size N or LO:HI for conj_ab (default 1:5)")
    p.add_argument("--matching-max", type=int, default=3, help="largest |M| for conj_paths")
    p.add_argument("--budget-ms", type=int, default=60_000)
    p.add_argument("--out", help="directory for violation archives")
    p.set_defaults(func=cmd_hunt)

    p = sub.add_parser("gen", help="write a generated instance as JSON")
    p.add_argument("--gen", choices=["random", "latin", "paths", "sharpness"], default="random")
    p.add_argument("--class", dest="cls", default="general",
                   choices=["general", "bipartite", "pairwise_disjoint"])
    p.add_argument("--n", default="10")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--y", type=int, default=4, help="|Y| for path instances, m for sharpness")
    p.add_argument("--s", type=int, default=2, help="|S| for random path instances")
    p.add_argument("--variant", choices=["ss_double", "st_single"], default="ss_double")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
