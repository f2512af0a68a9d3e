"""Exact backtracking solvers and the conjecture-search harness.

Each exhaustive search has three outcomes: a witness, a certified ``None``
(search completed), or :class:`BudgetExceeded`.  Timeouts are never
reported as negative answers.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path as FsPath
from typing import Optional

from .alternating import AlternatingPath, AlternatingSystem
from .core import MatchingFamily, RainbowSelection, dumps_canonical, family_to_json
from .gen import gen_random, random_alternating_system
from .localsearch import greedy_rainbow, local_search
from .monopath import LabeledPath, PathInstance

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 5_000_000
    time_limit_ms: int = 60_000

    def __post_init__(self) -> None:
        if self.node_limit <= 0 or self.time_limit_ms <= 0:
            raise ValueError("search budgets must be positive")


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit_ms / 1000.0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise BudgetExceeded(f"node limit {self.budget.node_limit} exceeded")
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"time limit {self.budget.time_limit_ms} ms exceeded")


class _Found(Exception):
    pass


# rainbow matchings -------------------------------------------------------------


def max_rainbow_exact(
    f: MatchingFamily, budget: Optional[SearchBudget] = None
) -> tuple[int, RainbowSelection]:
    """Maximum rainbow matching by branch and bound over matching indices.

    Indices are branched in ascending order of matching size.  A branch is
    cut when the picks so far plus the remaining indices that still have a
    free edge cannot beat the incumbent.
    """
    meter = _Meter(budget or SearchBudget())
    n = f.n
    order = sorted(range(n), key=lambda i: (len(f.matchings[i]), i))
    edges = [sorted(f.matchings[i]) for i in order]
    cap = min(n, len(f.vertices()) // f.r) if n else 0

    best = greedy_rainbow(f)
    best_picks = dict(best.picks)
    picks: dict[int, tuple[int, ...]] = {}
    used: set[int] = set()

    def rec(pos: int) -> None:
        nonlocal best_picks
        meter.tick()
        if len(picks) > len(best_picks):
            best_picks = dict(picks)
            if len(best_picks) >= cap:
                raise _Found
        if pos == n:
            return
        live = sum(1 for k in range(pos, n) if any(used.isdisjoint(e) for e in edges[k]))
        if len(picks) + live <= len(best_picks):
            return
        i = order[pos]
        for e in edges[pos]:
            if used.isdisjoint(e):
                picks[i] = e
                used.update(e)
                rec(pos + 1)
                used.difference_update(e)
                del picks[i]
        rec(pos + 1)

    if len(best_picks) < cap:
        try:
            rec(0)
        except _Found:
            pass
    sel = RainbowSelection(best_picks)
    return len(sel), sel


# monotone paths ------------------------------------------------------------------


def exists_monotone_path_exact(
    instance: PathInstance, budget: Optional[SearchBudget] = None
) -> Optional[LabeledPath]:
    """Exhaustive search over (vertex, last label, visited set)."""
    meter = _Meter(budget or SearchBudget())
    out: dict[int, list[tuple[int, int]]] = {}
    for lab, p in enumerate(instance.paths):
        for u, v in zip(p, p[1:]):
            out.setdefault(u, []).append((lab, v))
    for lst in out.values():
        lst.sort()
    targets, Y = instance.targets, instance.Y
    verts: list[int] = []
    labels: list[int] = []

    def rec(u: int, last: int) -> Optional[LabeledPath]:
        meter.tick()
        for lab, v in out.get(u, ()):
            if lab <= last or v in verts:
                continue
            if v in targets:
                return LabeledPath(tuple(verts + [v]), tuple(labels + [lab]))
            if v in Y:
                verts.append(v)
                labels.append(lab)
                hit = rec(v, lab)
                if hit:
                    return hit
                verts.pop()
                labels.pop()
        return None

    for s in sorted(instance.S):
        verts[:] = [s]
        labels.clear()
        hit = rec(s, -1)
        if hit:
            return hit
    return None


# strongly rainbow augmenting paths ---------------------------------------------------


def find_strongly_rainbow_augmenting(
    system: AlternatingSystem, budget: Optional[SearchBudget] = None
) -> Optional[tuple[AlternatingPath, tuple[int, ...]]]:
    """M-augmenting path whose non-M edges come from paths of distinct sets of ``H``.

    Returns the path and, per non-M edge in path order, the index of the
    set it was drawn from.
    """
    meter = _Meter(budget or SearchBudget())
    M = system.M
    mate: dict[int, int] = {}
    for u, v in M:
        mate[u], mate[v] = v, u
    sources: dict[tuple[int, ...], list[int]] = {}
    for i, group in enumerate(system.H):
        for p in group:
            for e in p.edges:
                if e not in M:
                    lst = sources.setdefault(e, [])
                    if not lst or lst[-1] != i:
                        lst.append(i)
    adj: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for e in sorted(sources):
        u, v = e
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))

    verts: list[int] = []
    labels: list[int] = []
    used: set[int] = set()

    def rec(u: int) -> bool:
        meter.tick()
        for w, e in adj.get(u, ()):
            if w in verts:
                continue
            for lab in sources[e]:
                if lab in used:
                    continue
                if w not in mate:
                    verts.append(w)
                    labels.append(lab)
                    return True
                x = mate[w]
                if x in verts:
                    break
                verts.extend((w, x))
                labels.append(lab)
                used.add(lab)
                if rec(x):
                    return True
                used.discard(lab)
                labels.pop()
                del verts[-2:]
        return False

    for s in sorted(adj):
        if s in mate:
            continue
        verts[:] = [s]
        labels.clear()
        used.clear()
        if rec(s):
            return AlternatingPath(tuple(verts)), tuple(labels)
    return None


# conjecture search -------------------------------------------------------------------


@dataclass(frozen=True)
class HuntConfig:
    n_min: int = 1
    n_max: int = 5
    kinds: tuple[str, ...] = ("general", "bipartite")
    matching_max: int = 3
    budget: SearchBudget = field(default_factory=SearchBudget)


@dataclass
class TrialOutcome:
    trial: int
    seed: int
    status: str  # "ok" | "violation" | "timeout"
    detail: str = ""
    instance: Optional[dict] = None
    transcript_sha256: str = ""


@dataclass
class HuntReport:
    target: str
    trials: int
    seed: int
    outcomes: list[TrialOutcome] = field(default_factory=list)
    archived: list[str] = field(default_factory=list)

    @property
    def violations(self) -> list[TrialOutcome]:
        return [o for o in self.outcomes if o.status == "violation"]

    @property
    def timeouts(self) -> list[TrialOutcome]:
        return [o for o in self.outcomes if o.status == "timeout"]

    def summary(self) -> dict:
        return {
            "target": self.target,
            "trials": self.trials,
            "seed": self.seed,
            "timeouts": len(self.timeouts),
            "violations": len(self.violations),
            "archived": self.archived,
        }


def derive_seed(seed: int, trial: int) -> int:
    """Independent per-trial seed; stable across processes and platforms."""
    digest = hashlib.sha256(f"rainbow-kit:{seed}:{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _sha(obj) -> str:
    return hashlib.sha256(dumps_canonical(obj).encode()).hexdigest()


def trial_family(config: HuntConfig, trial_seed: int) -> MatchingFamily:
    rng = random.Random(trial_seed)
    n = rng.randint(config.n_min, config.n_max)
    kind = rng.choice(config.kinds)
    return gen_random(n, 2, kind, seed=rng.getrandbits(32))


def trial_system(config: HuntConfig, trial_seed: int) -> AlternatingSystem:
    return random_alternating_system(trial_seed, matching_max=config.matching_max)


def _run_trial(args: tuple[str, HuntConfig, int, int]) -> TrialOutcome:
    target, config, trial, trial_seed = args
    try:
        if target == "conj_ab":
            f = trial_family(config, trial_seed)
            inst = family_to_json(f)
            size, witness = max_rainbow_exact(f, config.budget)
            heuristic = len(local_search(f, max_j=1, seed=trial_seed))
            transcript = {"max": size, "witness": witness.to_json(), "local_search": heuristic}
            if size < f.n - 1:
                detail = f"max rainbow matching {size} < n-1 = {f.n - 1}"
            elif size < heuristic:
                detail = f"exact {size} below local search {heuristic}"
            else:
                detail = ""
        elif target == "conj_paths":
            system = trial_system(config, trial_seed)
            inst = system.to_json()
            hit = find_strongly_rainbow_augmenting(system, config.budget)
            transcript = {"witness": None if hit is None else [list(hit[0].vertices), list(hit[1])]}
            detail = "" if hit is not None or system.norm <= 2 * len(system.M) else (
                f"no strongly rainbow augmenting path with ||H||={system.norm} > 2|M|={2 * len(system.M)}"
            )
        else:
            raise ValueError(f"unknown target {target!r}")
    except BudgetExceeded as exc:
        return TrialOutcome(trial, trial_seed, "timeout", str(exc))
    status = "violation" if detail else "ok"
    return TrialOutcome(trial, trial_seed, status, detail, inst if detail else None, _sha(transcript))


def _archive(out_dir: FsPath, target: str, outcome: TrialOutcome, config: HuntConfig) -> str:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{target}-trial{outcome.trial:06d}-{outcome.seed:016x}.json"
    record = {
        "target": target,
        "trial": outcome.trial,
        "seed": outcome.seed,
        "config": {**asdict(config), "kinds": list(config.kinds)},
        "detail": outcome.detail,
        "instance": outcome.instance,
        "transcript_sha256": outcome.transcript_sha256,
    }
    path.write_text(json.dumps(record, indent=1, sort_keys=True) + "\n")
    return str(path)


def search_counterexamples(
    target: str,
    config: Optional[HuntConfig] = None,
    trials: int = 1000,
    seed: int = 0,
    workers: int = 1,
    archive_dir: Optional[str | os.PathLike] = None,
) -> HuntReport:
    """Run seeded trials against ``conj_ab`` or ``conj_paths``.

    ``conj_ab``: exact maximum rainbow matching is at least ``n - 1`` (and
    at least the local-search size).  ``conj_paths``: whenever
    ``||H|| > 2|M|`` a strongly rainbow augmenting path exists.  Each
    violation is written to ``archive_dir`` with its trial seed.
    """
    if target not in ("conj_ab", "conj_paths"):
        raise ValueError(f"unknown target {target!r}")
    config = config or HuntConfig()
    jobs = [(target, config, t, derive_seed(seed, t)) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_trial, jobs, chunksize=max(1, trials // (8 * workers))))
    else:
        outcomes = [_run_trial(job) for job in jobs]
    report = HuntReport(target=target, trials=trials, seed=seed, outcomes=outcomes)
    for o in report.violations:
        log.error("%s violation at trial %d (seed %d): %s", target, o.trial, o.seed, o.detail)
        if archive_dir is not None:
            report.archived.append(_archive(FsPath(archive_dir), target, o, config))
    return report


def replay_instance(target: str, trial_seed: int, config: Optional[HuntConfig] = None) -> str:
    """Canonical JSON of the instance a trial seed produces."""
    config = config or HuntConfig()
    if target == "conj_ab":
        return dumps_canonical(family_to_json(trial_family(config, trial_seed)))
    return dumps_canonical(trial_system(config, trial_seed).to_json())


def sqrt_target(n: int) -> int:
    """Integer form of ``n - sqrt(2n)`` used for the conditional solver check."""
    return n - math.ceil(math.sqrt(2 * n))
