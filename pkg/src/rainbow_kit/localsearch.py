"""Swap-based local search for large rainbow matchings.

A rainbow selection ``R`` of size ``q`` is improved by *j -> j+1 swaps*: drop
``j`` picks and insert ``j + 1`` pairwise disjoint edges taken from ``j + 1``
distinct unrepresented matchings.  ``j = 0`` is a plain insertion.  A
selection admitting no swap with ``j <= max_j`` is a *fixpoint*; fixpoints
with ``max_j = 1`` meet the general bound, ``max_j = 3`` the bounds for
{C3, C5}-free graphs and for pairwise disjoint matchings.
"""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional

from .core import Edge, FamilyClass, MatchingFamily, RainbowSelection

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SwapMove:
    removed: tuple[int, ...]
    added: tuple[tuple[int, Edge], ...]

    @property
    def j(self) -> int:
        return len(self.removed)


def apply_move(sel: RainbowSelection, move: SwapMove) -> RainbowSelection:
    return sel.replace(move.removed, move.added)


# greedy -----------------------------------------------------------------------


def greedy_rainbow(f: MatchingFamily, seed: Optional[int] = None) -> RainbowSelection:
    """Scan ``F_0, F_1, ...`` and pick any edge disjoint from the picks so far.

    Without a seed the smallest available edge is taken; with a seed the
    choice among available edges is uniform.  The result has at least
    ``ceil(n / r)`` edges: each pick blocks at most ``r`` edges of any later
    matching.
    """
    rng = random.Random(seed) if seed is not None else None
    used: set[int] = set()
    picks: dict[int, Edge] = {}
    for i, m in enumerate(f.matchings):
        avail = [e for e in sorted(m) if used.isdisjoint(e)]
        if not avail:
            continue
        e = rng.choice(avail) if rng else avail[0]
        picks[i] = e
        used.update(e)
    return RainbowSelection(picks)


# wastefulness --------------------------------------------------------------


@dataclass
class WastefulReport:
    """Which unrepresented matchings each edge of ``R`` serves.

    ``T[e]``: unrepresented ``G`` having ``r`` edges that meet ``e`` and no
    other edge of ``R``.  ``HW[e]``: unrepresented ``G`` for which ``e`` lies
    in a half-wasteful pair, with ``HW_pairs`` holding one witness triple
    ``(g_e, g_f, g_ef)`` per ``(pair, G)``.  ``B_graph`` is the incidence
    ``(G, e)`` for ``G in HW[e]``.  HW data is only computed for graphs.
    """

    T: dict[Edge, set[int]]
    HW: dict[Edge, set[int]]
    HW_pairs: dict[frozenset[Edge], dict[int, tuple[Edge, Edge, Edge]]]
    B_graph: set[tuple[int, Edge]] = field(default_factory=set)

    def T_of(self, g: int) -> set[Edge]:
        return {e for e, gs in self.T.items() if g in gs}

    def W_of(self, g: int) -> set[Edge]:
        return {e for e, gs in self.HW.items() if g in gs}

    def degree_B(self, e: Edge) -> int:
        return sum(1 for _, x in self.B_graph if x == e)

    def sum_T(self) -> int:
        return sum(len(v) for v in self.T.values())

    def sum_HW(self) -> int:
        return sum(len(v) for v in self.HW.values())


def _owner_map(sel: RainbowSelection) -> dict[int, Edge]:
    return {v: e for e in sel.picks.values() for v in e}


def _touched(g: Edge, owner: dict[int, Edge]) -> frozenset[Edge]:
    return frozenset(owner[v] for v in g if v in owner)


def analyze_wastefulness(f: MatchingFamily, sel: RainbowSelection) -> WastefulReport:
    R = sel.edges()
    owner = _owner_map(sel)
    T: dict[Edge, set[int]] = {e: set() for e in R}
    HW: dict[Edge, set[int]] = {e: set() for e in R}
    pairs: dict[frozenset[Edge], dict[int, tuple[Edge, Edge, Edge]]] = {}
    for g_idx in sel.unrepresented(f.n):
        private: dict[Edge, list[Edge]] = {}
        shared: dict[frozenset[Edge], list[Edge]] = {}
        for g in sorted(f.matchings[g_idx]):
            hit = _touched(g, owner)
            if len(hit) == 1:
                private.setdefault(next(iter(hit)), []).append(g)
            elif len(hit) == 2:
                shared.setdefault(hit, []).append(g)
        for e, gs in private.items():
            if len(gs) >= f.r:
                T[e].add(g_idx)
        if f.r != 2:
            continue
        for pair, gefs in shared.items():
            e, f_ = sorted(pair)
            if e in private and f_ in private:
                pairs.setdefault(pair, {})[g_idx] = (private[e][0], private[f_][0], gefs[0])
                HW[e].add(g_idx)
                HW[f_].add(g_idx)
    B = {(g, e) for e, gs in HW.items() for g in gs}
    return WastefulReport(T=T, HW=HW, HW_pairs=pairs, B_graph=B)


# moves ------------------------------------------------------------------------


class _Candidates:
    """Unrepresented edges indexed by the set of picks they meet.

    An added edge must avoid every kept pick, so for a removal set ``D`` the
    candidates are exactly the edges whose touched-pick set is a subset of
    ``D``.  Bucketing by touched set makes that a handful of lookups.
    """

    def __init__(self, f: MatchingFamily, sel: RainbowSelection):
        owner = {v: i for i, e in sel.picks.items() for v in e}
        self.buckets: dict[frozenset[int], list[tuple[int, Edge]]] = {}
        for g_idx in sel.unrepresented(f.n):
            for g in sorted(f.matchings[g_idx]):
                hit = frozenset(owner[v] for v in g if v in owner)
                if len(hit) <= 3:
                    self.buckets.setdefault(hit, []).append((g_idx, g))

    def for_removal(self, removed: tuple[int, ...]) -> dict[int, list[Edge]]:
        by_index: dict[int, list[Edge]] = {}
        for k in range(len(removed) + 1):
            for sub in combinations(removed, k):
                for g_idx, g in self.buckets.get(frozenset(sub), ()):
                    by_index.setdefault(g_idx, []).append(g)
        for es in by_index.values():
            es.sort()
        return by_index


def _disjoint_choices(
    by_index: dict[int, list[Edge]], count: int
) -> Iterator[tuple[tuple[int, Edge], ...]]:
    """All ``count``-tuples of pairwise disjoint edges from distinct indices, in lex order."""
    indices = sorted(by_index)
    chosen: list[tuple[int, Edge]] = []
    used: set[int] = set()

    def rec(start: int) -> Iterator[tuple[tuple[int, Edge], ...]]:
        if len(chosen) == count:
            yield tuple(chosen)
            return
        need = count - len(chosen)
        for pos in range(start, len(indices) - need + 1):
            i = indices[pos]
            for g in by_index[i]:
                if used.isdisjoint(g):
                    chosen.append((i, g))
                    used.update(g)
                    yield from rec(pos + 1)
                    used.difference_update(g)
                    chosen.pop()

    yield from rec(0)


def enumerate_moves(f: MatchingFamily, sel: RainbowSelection, max_j: int = 1) -> Iterator[SwapMove]:
    """Yield every valid swap with ``j <= max_j`` removed picks.

    Order: by ``j``, then lexicographically by removed indices, then by
    added ``(index, edge)`` tuples.  The stream is lazy, so taking the first
    move never pays for the larger exchanges.
    """
    if not 1 <= max_j <= 3:
        raise ValueError("max_j must be between 1 and 3")
    n_unrep = f.n - len(sel)
    cands = _Candidates(f, sel)
    picked = sel.indices()
    for j in range(max_j + 1):
        if j + 1 > n_unrep or j > len(picked):
            break
        for removed in combinations(picked, j):
            by_index = cands.for_removal(removed)
            if len(by_index) < j + 1:
                continue
            for added in _disjoint_choices(by_index, j + 1):
                yield SwapMove(removed=removed, added=added)


@dataclass
class LocalSearchResult:
    selection: RainbowSelection
    greedy_size: int
    moves_applied: int
    elapsed_ms: float
    moves: list[SwapMove] = field(default_factory=list)


def improve(
    f: MatchingFamily, sel: RainbowSelection, max_j: int = 1
) -> tuple[RainbowSelection, list[SwapMove]]:
    """Apply the first available swap until ``sel`` is a fixpoint.

    Every swap adds one pick, so there are at most ``n - len(sel)`` rounds.
    """
    applied: list[SwapMove] = []
    while True:
        move = next(enumerate_moves(f, sel, max_j), None)
        if move is None:
            return sel, applied
        sel = apply_move(sel, move)
        applied.append(move)


def local_search_run(f: MatchingFamily, max_j: int = 1, seed: Optional[int] = 0) -> LocalSearchResult:
    """Greedy start, then :func:`improve`."""
    t0 = time.perf_counter()
    start = greedy_rainbow(f, seed)
    sel, applied = improve(f, start, max_j)
    log.debug("local search n=%d q %d -> %d with %d moves", f.n, len(start), len(sel), len(applied))
    return LocalSearchResult(
        selection=sel,
        greedy_size=len(start),
        moves_applied=len(applied),
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        moves=applied,
    )


def local_search(f: MatchingFamily, max_j: int = 1, seed: Optional[int] = 0) -> RainbowSelection:
    return local_search_run(f, max_j, seed).selection


def is_fixpoint(f: MatchingFamily, sel: RainbowSelection, max_j: int) -> bool:
    return next(enumerate_moves(f, sel, max_j), None) is None


# thresholds ---------------------------------------------------------------------


@dataclass(frozen=True)
class BoundSpec:
    n: int
    r: int
    instance_class: FamilyClass
    bound: Fraction
    threshold: int


def bound_value(n: int, r: int, instance_class: FamilyClass | str = FamilyClass.GENERAL) -> Fraction:
    """The real lower bound ``b`` (a fixpoint satisfies ``q > b``), exactly."""
    cls = FamilyClass(instance_class)
    if n < 1 or r < 2:
        raise ValueError("need n >= 1 and r >= 2")
    if cls is FamilyClass.GENERAL:
        return (n - Fraction(1, 2) - Fraction(3, 4 * r - 6)) / (r - Fraction(1, 2))
    if r != 2:
        raise ValueError(f"class {cls.value} is only defined for r=2")
    if cls in (FamilyClass.C3C5_FREE, FamilyClass.BIPARTITE):
        return Fraction(3 * n, 4) - Fraction(9, 4)
    return Fraction(3 * n, 4) - Fraction(9, 2)


def threshold(n: int, r: int, instance_class: FamilyClass | str = FamilyClass.GENERAL) -> BoundSpec:
    """Smallest integer strictly above the bound for this class."""
    b = bound_value(n, r, instance_class)
    return BoundSpec(n=n, r=r, instance_class=FamilyClass(instance_class), bound=b, threshold=math.floor(b) + 1)


def general_root(n: int, r: int) -> float:
    """Smaller root ``q_1`` of ``(2r-1) q^2 - (n + 2rn + r) q + 2n^2``.

    Every j=1 fixpoint satisfies ``q >= q_1``; the closed-form bound sits
    strictly below ``q_1``.
    """
    a = 2 * r - 1
    b = n + 2 * r * n + r
    disc = b * b - 8 * a * n * n
    return (b - math.sqrt(disc)) / (2 * a)


def counting_inequality_holds(n: int, r: int, q: int) -> bool:
    """``(2n - q(2r-1)) (n - q) <= r q``, which every j=1 fixpoint satisfies."""
    return (2 * n - q * (2 * r - 1)) * (n - q) <= r * q
