"""Alternating paths for graph matchings (r = 2)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import Edge, MatchingFamily, Matching, RainbowSelection, is_matching, make_edge
from .localsearch import local_search

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlternatingPath:
    vertices: tuple[int, ...]

    @property
    def edges(self) -> list[Edge]:
        return [make_edge(p) for p in zip(self.vertices, self.vertices[1:])]

    def __len__(self) -> int:
        return len(self.vertices) - 1

    def parity(self, M: Iterable[Edge]) -> tuple[bool, ...]:
        """``True`` at each position holding an edge of ``M``."""
        M = set(M)
        return tuple(e in M for e in self.edges)


def _check_graph(*ms: Iterable[Edge]) -> None:
    for m in ms:
        for e in m:
            if len(e) != 2:
                raise ValueError("alternating paths need r=2 matchings")


def is_augmenting(M: Iterable[Edge], path: AlternatingPath) -> bool:
    """Odd-length simple path, non-M edges at even positions, both ends M-exposed."""
    M = set(M)
    vs = path.vertices
    if len(vs) < 2 or len(vs) % 2 != 0 or len(set(vs)) != len(vs):
        return False
    covered = {v for e in M for v in e}
    if vs[0] in covered or vs[-1] in covered:
        return False
    return all((e in M) == (k % 2 == 1) for k, e in enumerate(path.edges))


@dataclass(frozen=True)
class AlternatingSystem:
    """A matching ``M`` and a family ``H`` of sets of disjoint M-augmenting paths."""

    M: Matching
    H: tuple[tuple[AlternatingPath, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "M", frozenset(make_edge(e) for e in self.M))
        object.__setattr__(self, "H", tuple(tuple(group) for group in self.H))
        _check_graph(self.M)
        if not is_matching(self.M):
            raise ValueError("M is not a matching")
        for i, group in enumerate(self.H):
            seen: set[int] = set()
            for p in group:
                if not is_augmenting(self.M, p):
                    raise ValueError(f"path {list(p.vertices)} in H[{i}] is not M-augmenting")
                if seen.intersection(p.vertices):
                    raise ValueError(f"paths of H[{i}] are not pairwise disjoint")
                seen.update(p.vertices)

    @property
    def norm(self) -> int:
        return sum(len(group) for group in self.H)

    def to_json(self) -> dict:
        return {
            "M": [list(e) for e in sorted(self.M)],
            "H": [[list(p.vertices) for p in group] for group in self.H],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlternatingSystem":
        return cls(
            M=frozenset(make_edge(e) for e in data["M"]),
            H=tuple(tuple(AlternatingPath(tuple(p)) for p in group) for group in data["H"]),
        )


@dataclass
class Decomposition:
    augmenting: list[AlternatingPath] = field(default_factory=list)
    other: list[AlternatingPath] = field(default_factory=list)
    cycles: list[tuple[int, ...]] = field(default_factory=list)


def symdiff_decompose(M: Iterable[Edge], F: Iterable[Edge]) -> Decomposition:
    """Split the components of ``M xor F`` into M-augmenting paths, other paths, and cycles.

    Paths are oriented from their smaller endpoint; cycles start at their
    smallest vertex and do not repeat it at the end.
    """
    M, F = frozenset(M), frozenset(F)
    _check_graph(M, F)
    diff = M ^ F
    adj: dict[int, list[int]] = {}
    for u, v in diff:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    out = Decomposition()
    seen: set[int] = set()

    def walk(start: int) -> list[int]:
        verts = [start]
        prev, cur = None, start
        while True:
            nxt = [w for w in adj[cur] if w != prev and w not in seen.union(verts)]
            if not nxt:
                return verts
            prev, cur = cur, nxt[0]
            verts.append(cur)

    for s in sorted(v for v in adj if len(adj[v]) == 1):
        if s in seen:
            continue
        verts = walk(s)
        seen.update(verts)
        if verts[-1] < verts[0]:
            verts.reverse()
        path = AlternatingPath(tuple(verts))
        n_m = sum(path.parity(M))
        if len(path) - n_m == n_m + 1:
            out.augmenting.append(path)
        else:
            out.other.append(path)
    for s in sorted(adj):
        if s in seen:
            continue
        verts = walk(s)
        seen.update(verts)
        out.cycles.append(tuple(verts))
    return out


def augment(M: Iterable[Edge], path: AlternatingPath) -> Matching:
    M = frozenset(M)
    if not is_augmenting(M, path):
        raise ValueError(f"path {list(path.vertices)} is not M-augmenting")
    return M ^ frozenset(path.edges)


# conditional solver ----------------------------------------------------------


def default_path_budget(n: int) -> int:
    return math.ceil(math.sqrt(2 * n)) + 1


def _augment_selection(
    sel: RainbowSelection, path: AlternatingPath, labels: Sequence[int], owners: Sequence[int]
) -> RainbowSelection:
    index_of = {e: i for i, e in sel.picks.items()}
    edges = path.edges
    removed = [index_of[e] for e in edges[1::2]]
    added = [(owners[lab], e) for e, lab in zip(edges[0::2], labels)]
    return sel.replace(removed, added)


def conjecture_driven_solver(
    f: MatchingFamily,
    path_budget: Optional[int] = None,
    max_j: int = 1,
    seed: Optional[int] = 0,
    budget=None,
    trace: Optional[list] = None,
    start: Optional[RainbowSelection] = None,
) -> RainbowSelection:
    """Enlarge a local-search fixpoint by strongly rainbow augmenting paths.

    Each round, every unrepresented ``F_i`` contributes the M-augmenting
    paths of ``M xor F_i`` (at most ``path_budget`` of them), and the exact
    search looks for an augmenting path whose non-M edges come from
    distinct ``i``.  A non-M edge drawn from ``F_i``'s set is assigned to
    ``F_i``; M-edges flipped out release their indices.  Stops once
    ``|M| >= n - 1``, when the family of path sets is no larger than
    ``2|M|``, or when the search finds nothing (then a counterexample
    candidate is reported in ``trace``).  ``start`` replaces the
    local-search starting point.
    """
    from .oracle import BudgetExceeded, SearchBudget, find_strongly_rainbow_augmenting

    if f.r != 2:
        raise ValueError("the alternating-path solver needs r=2")
    budget = budget or SearchBudget()
    cap = path_budget if path_budget is not None else default_path_budget(f.n)
    sel = start if start is not None else local_search(f, max_j=max_j, seed=seed)
    rounds = 0
    while len(sel) < f.n - 1:
        rounds += 1
        M = frozenset(sel.picks.values())
        groups, owners = [], []
        for i in sel.unrepresented(f.n):
            aug = symdiff_decompose(M, f.matchings[i]).augmenting[:cap]
            if aug:
                groups.append(tuple(aug))
                owners.append(i)
        system = AlternatingSystem(M=M, H=tuple(groups))
        record = {"round": rounds, "q": len(sel), "norm_H": system.norm}
        if system.norm <= 2 * len(M):
            record["status"] = "hypothesis_unmet"
            _emit(trace, record)
            break
        try:
            hit = find_strongly_rainbow_augmenting(system, budget)
        except BudgetExceeded:
            record["status"] = "budget_exceeded"
            _emit(trace, record)
            break
        if hit is None:
            record["status"] = "counterexample_candidate"
            record["system"] = system.to_json()
            # a fresh, larger search must agree before anyone trusts it
            recheck = SearchBudget(budget.node_limit * 10, budget.time_limit_ms * 10)
            try:
                record["reverified"] = find_strongly_rainbow_augmenting(system, recheck) is None
            except BudgetExceeded:
                record["reverified"] = False
            log.warning("strongly rainbow augmenting path not found with ||H||=%d > 2|M|=%d",
                        system.norm, 2 * len(M))
            _emit(trace, record)
            break
        path, labels = hit
        sel = _augment_selection(sel, path, labels, owners)
        record["status"] = "augmented"
        _emit(trace, record)
    return sel


def _emit(trace: Optional[list], record: dict) -> None:
    log.debug("solver round %s", record)
    if trace is not None:
        trace.append(record)
