"""Domain types for families of matchings, validation, and orthogonality.

Edges are sorted tuples of integer vertex ids, so two edges with the same
vertex set compare (and hash) equal.  A matching is a frozenset of edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

Edge = tuple[int, ...]
Matching = frozenset[Edge]


class FamilyClass(str, Enum):
    GENERAL = "general"
    C3C5_FREE = "c3c5_free"
    PAIRWISE_DISJOINT = "pairwise_disjoint"
    BIPARTITE = "bipartite"


def make_edge(vertices: Iterable[int]) -> Edge:
    """Canonical (sorted) edge from any iterable of vertex ids."""
    return tuple(sorted(int(v) for v in vertices))


def make_matching(edges: Iterable[Iterable[int]]) -> Matching:
    return frozenset(make_edge(e) for e in edges)


def vertices_of(edges: Iterable[Edge]) -> set[int]:
    out: set[int] = set()
    for e in edges:
        out.update(e)
    return out


def is_matching(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for e in edges:
        if seen.intersection(e):
            return False
        seen.update(e)
    return True


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class MatchingFamily:
    """An ordered family of matchings ``(F_0, ..., F_{n-1})`` of an r-uniform hypergraph.

    ``declared_class`` is trusted metadata; :func:`validate_family` checks it.
    """

    r: int
    matchings: tuple[Matching, ...]
    declared_class: FamilyClass = FamilyClass.GENERAL

    @classmethod
    def from_lists(
        cls,
        matchings: Sequence[Iterable[Iterable[int]]],
        r: Optional[int] = None,
        declared_class: FamilyClass | str = FamilyClass.GENERAL,
    ) -> "MatchingFamily":
        ms = tuple(make_matching(m) for m in matchings)
        if r is None:
            sizes = {len(e) for m in ms for e in m}
            r = sizes.pop() if len(sizes) == 1 else 2
        return cls(r=r, matchings=ms, declared_class=FamilyClass(declared_class))

    @property
    def n(self) -> int:
        return len(self.matchings)

    def __len__(self) -> int:
        return len(self.matchings)

    def __getitem__(self, i: int) -> Matching:
        return self.matchings[i]

    def union_edges(self) -> set[Edge]:
        return {e for m in self.matchings for e in m}

    def vertices(self) -> set[int]:
        return vertices_of(self.union_edges())


@dataclass(frozen=True)
class RainbowSelection:
    """Partial choice ``index -> edge`` whose picked edges are pairwise disjoint.

    Treat instances as immutable; :meth:`replace` builds the successor.
    """

    picks: Mapping[int, Edge] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.picks)

    @property
    def size(self) -> int:
        return len(self.picks)

    def indices(self) -> list[int]:
        return sorted(self.picks)

    def edges(self) -> list[Edge]:
        return [self.picks[i] for i in sorted(self.picks)]

    def covered(self) -> set[int]:
        return vertices_of(self.picks.values())

    def unrepresented(self, n: int) -> list[int]:
        return [i for i in range(n) if i not in self.picks]

    def replace(self, removed: Iterable[int], added: Iterable[tuple[int, Edge]]) -> "RainbowSelection":
        picks = dict(self.picks)
        for i in removed:
            del picks[i]
        for i, e in added:
            if i in picks:
                raise ValueError(f"index {i} already represented")
            picks[i] = e
        return RainbowSelection(picks)

    def to_json(self) -> dict:
        return {"picks": [[i, list(self.picks[i])] for i in sorted(self.picks)]}


def validate_selection(f: MatchingFamily, sel: RainbowSelection) -> list[Violation]:
    out = []
    for i, e in sel.picks.items():
        if not 0 <= i < f.n:
            out.append(Violation("selection", f"index {i} out of range"))
        elif e not in f.matchings[i]:
            out.append(Violation("selection", f"edge {list(e)} not in F[{i}]"))
    if not is_matching(sel.picks.values()):
        out.append(Violation("selection", "picked edges are not pairwise disjoint"))
    return out


def odd_short_cycles(edges: Iterable[Edge]) -> list[tuple[int, ...]]:
    """All simple cycles of length 3 or 5 in the graph spanned by ``edges``.

    Each cycle is reported once, starting at its smallest vertex.
    """
    adj: dict[int, set[int]] = {}
    for e in edges:
        if len(e) != 2:
            raise ValueError("cycle search needs a graph (r=2)")
        u, v = e
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    found: set[tuple[int, ...]] = set()

    def extend(path: list[int]) -> None:
        start, last = path[0], path[-1]
        if len(path) in (3, 5) and start in adj[last]:
            # orientation-free canonical form
            rev = (start,) + tuple(reversed(path[1:]))
            found.add(min(tuple(path), rev))
        if len(path) == 5:
            return
        for w in adj[last]:
            if w > start and w not in path:
                path.append(w)
                extend(path)
                path.pop()

    for s in sorted(adj):
        extend([s])
    return sorted(found, key=lambda c: (len(c), c))


def _is_bipartite(edges: Iterable[Edge]) -> bool:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    side: dict[int, int] = {}
    for s in adj:
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in side:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    return False
    return True


def validate_family(f: MatchingFamily) -> list[Violation]:
    """Check every structural invariant of ``f``; the empty list means valid."""
    out: list[Violation] = []
    if f.r < 2:
        out.append(Violation("uniformity", f"r={f.r} must be at least 2"))
    for i, m in enumerate(f.matchings):
        for e in sorted(m):
            if len(e) != f.r:
                out.append(Violation("uniformity", f"edge {list(e)} in F[{i}] has {len(e)} vertices, expected {f.r}"))
            if len(set(e)) != len(e):
                out.append(Violation("edge", f"edge {list(e)} in F[{i}] repeats a vertex"))
            if any(v < 0 for v in e):
                out.append(Violation("edge", f"edge {list(e)} in F[{i}] has a negative vertex id"))
        for a, b in combinations(sorted(m), 2):
            if set(a) & set(b):
                out.append(Violation("disjointness", f"edges intersect within F[{i}]: {list(a)} and {list(b)}"))
    if out:
        return out

    cls = f.declared_class
    if cls is FamilyClass.PAIRWISE_DISJOINT:
        for i, j in combinations(range(f.n), 2):
            common = f.matchings[i] & f.matchings[j]
            if common:
                shown = [list(e) for e in sorted(common)]
                out.append(Violation("pairwise_disjoint", f"F[{i}] and F[{j}] share edges {shown}"))
    if cls in (FamilyClass.C3C5_FREE, FamilyClass.BIPARTITE):
        if f.r != 2:
            out.append(Violation("class", f"class {cls.value} requires r=2"))
            return out
        union = f.union_edges()
        if cls is FamilyClass.BIPARTITE and not _is_bipartite(union):
            out.append(Violation("bipartite", "union graph has an odd cycle"))
        for cyc in odd_short_cycles(union):
            out.append(Violation("cycle", f"union graph contains C{len(cyc)} through {list(cyc)}"))
    return out


def _check_uniform(*groups: Iterable[Edge]) -> Optional[int]:
    sizes = {len(e) for g in groups for e in g}
    if len(sizes) > 1:
        raise ValueError(f"uniformity mismatch: edge sizes {sorted(sizes)}")
    return sizes.pop() if sizes else None


def orthogonal(a: Iterable[Edge], b: Iterable[Edge]) -> bool:
    """True iff every edge of ``a`` meets every edge of ``b`` in exactly one vertex."""
    a, b = list(a), list(b)
    _check_uniform(a, b)
    return all(len(set(x) & set(y)) == 1 for x in a for y in b)


def _disjoint_cross_pair(a: Iterable[Edge], b: Iterable[Edge]) -> Optional[tuple[Edge, Edge]]:
    for x in sorted(a):
        for y in sorted(b):
            if not set(x) & set(y):
                return x, y
    return None


def find_noncrossing_pair(
    h: Edge, systems: Sequence[Iterable[Edge]]
) -> Optional[tuple[int, Edge, int, Edge]]:
    """Find ``(i, a, j, b)`` with ``a`` in ``systems[i]``, ``b`` in ``systems[j]``, ``i != j`` and ``a``, ``b`` disjoint.

    Every system must be a matching of size r orthogonal to ``{h}``.  With at
    least r+1 systems a pair always exists.  Every system covers the same
    r-1 outer vertices per edge, and two cross-intersecting systems put a
    fixed outer vertex on edges through distinct vertices of ``h``; among
    r+1 systems a pigeonhole collision, or a system missing that vertex,
    pinpoints two non-crossing systems without scanning all pairs.
    """
    h = make_edge(h)
    r = len(h)
    systems = [sorted(make_edge(e) for e in s) for s in systems]
    for idx, s in enumerate(systems):
        _check_uniform([h], s)
        if len(s) != r or not is_matching(s) or not orthogonal([h], s):
            raise ValueError(f"system {idx} is not a size-{r} matching orthogonal to {list(h)}")

    if len(systems) <= r:
        for i, j in combinations(range(len(systems)), 2):
            pair = _disjoint_cross_pair(systems[i], systems[j])
            if pair:
                return i, pair[0], j, pair[1]
        return None

    hset = set(h)
    outer = next(v for v in systems[0][0] if v not in hset)
    seen: dict[Optional[int], int] = {}
    candidate: Optional[tuple[int, int]] = None
    for idx, s in enumerate(systems[: r + 1]):
        through = next((e for e in s if outer in e), None)
        label = None if through is None else next(v for v in through if v in hset)
        if label is None:
            candidate = (0, idx)
            break
        if label in seen:
            candidate = (seen[label], idx)
            break
        seen[label] = idx
    if candidate is None:  # pragma: no cover - excluded by pigeonhole
        raise AssertionError("pigeonhole failed; systems are not orthogonal to h")
    i, j = candidate
    pair = _disjoint_cross_pair(systems[i], systems[j])
    if pair is None:  # pragma: no cover
        raise AssertionError("located systems are cross-intersecting")
    return i, pair[0], j, pair[1]


# JSON interchange -----------------------------------------------------------


def family_to_json(f: MatchingFamily) -> dict:
    return {
        "r": f.r,
        "class": f.declared_class.value,
        "matchings": [[list(e) for e in sorted(m)] for m in f.matchings],
    }


def family_from_json(data: Mapping) -> MatchingFamily:
    """Parse the instance schema ``{"r", "class", "matchings"}``.

    Raises ``ValueError`` naming the offending field on malformed input.
    """
    if not isinstance(data, Mapping):
        raise ValueError("instance must be a JSON object")
    for key in ("r", "matchings"):
        if key not in data:
            raise ValueError(f"missing field '{key}'")
    r = data["r"]
    if not isinstance(r, int) or isinstance(r, bool):
        raise ValueError("field 'r' must be an integer")
    try:
        cls = FamilyClass(data.get("class", "general"))
    except ValueError:
        raise ValueError(f"field 'class' has unknown value {data.get('class')!r}") from None
    raw = data["matchings"]
    if not isinstance(raw, list):
        raise ValueError("field 'matchings' must be a list")
    ms = []
    for i, m in enumerate(raw):
        if not isinstance(m, list):
            raise ValueError(f"field 'matchings[{i}]' must be a list of edges")
        edges = []
        for k, e in enumerate(m):
            if not isinstance(e, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
                raise ValueError(f"field 'matchings[{i}][{k}]' must be a list of integers")
            edges.append(make_edge(e))
        m_set = frozenset(edges)
        if len(m_set) != len(edges):
            raise ValueError(f"field 'matchings[{i}]' repeats an edge")
        ms.append(m_set)
    return MatchingFamily(r=r, matchings=tuple(ms), declared_class=cls)


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
