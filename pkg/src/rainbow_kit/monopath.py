"""Rainbow-monotone directed paths.

A path sequence ``P_0, ..., P_{m-1}`` is given on a vertex set split into
terminals and inner vertices ``Y``.  A *rainbow-monotone* path uses edges
``e_0, e_1, ...`` (in path order) with ``e_k`` an edge of ``P_{j_k}`` and
``j_0 < j_1 < ...``.  Labels are 0-based path indices.

Two constructive algorithms find an S-S such path whenever
``m >= 2|Y| + 1``; a single-forest variant finds an S-T path whenever
``m > |Y|``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

log = logging.getLogger(__name__)

Path = tuple[int, ...]


@dataclass(frozen=True)
class PathInstance:
    """Terminals ``S`` (and ``T``), inner vertices ``Y``, and the ordered path sequence.

    With ``T=None`` the paths are S-S paths; otherwise S-T paths with
    ``S`` and ``T`` disjoint.  Construction validates every path.
    """

    S: frozenset[int]
    Y: frozenset[int]
    paths: tuple[Path, ...]
    T: Optional[frozenset[int]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "S", frozenset(self.S))
        object.__setattr__(self, "Y", frozenset(self.Y))
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))
        if self.T is not None:
            object.__setattr__(self, "T", frozenset(self.T))
        problems = self.violations()
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def targets(self) -> frozenset[int]:
        return self.S if self.T is None else self.T

    @property
    def m(self) -> int:
        return len(self.paths)

    def violations(self) -> list[str]:
        out = []
        if self.S & self.Y:
            out.append("S and Y intersect")
        if self.T is not None:
            if self.S & self.T:
                out.append("S and T intersect")
            if self.T & self.Y:
                out.append("T and Y intersect")
        for i, p in enumerate(self.paths):
            if len(p) < 2:
                out.append(f"path {i} has fewer than two vertices")
                continue
            if len(set(p)) != len(p):
                out.append(f"path {i} repeats a vertex")
            if p[0] not in self.S:
                out.append(f"path {i} does not start in S")
            if p[-1] not in self.targets:
                out.append(f"path {i} does not end in {'S' if self.T is None else 'T'}")
            if any(v not in self.Y for v in p[1:-1]):
                out.append(f"path {i} has an interior vertex outside Y")
        return out

    def guarantee(self) -> bool:
        """Whether the path count alone guarantees a rainbow-monotone path."""
        if self.T is None:
            return self.m >= 2 * len(self.Y) + 1
        return self.m > len(self.Y)

    def to_json(self) -> dict:
        d = {"S": sorted(self.S), "Y": sorted(self.Y), "paths": [list(p) for p in self.paths]}
        if self.T is not None:
            d["T"] = sorted(self.T)
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> "PathInstance":
        for key in ("S", "Y", "paths"):
            if key not in data:
                raise ValueError(f"missing field '{key}'")
        T = data.get("T")
        return cls(
            S=frozenset(data["S"]),
            Y=frozenset(data["Y"]),
            paths=tuple(tuple(p) for p in data["paths"]),
            T=None if T is None else frozenset(T),
        )


@dataclass(frozen=True)
class LabeledPath:
    vertices: Path
    labels: tuple[int, ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "labels": list(self.labels)}


def _path_edges(p: Path) -> set[tuple[int, int]]:
    return set(zip(p, p[1:]))


def is_rainbow_monotone(candidate: LabeledPath, instance: PathInstance) -> bool:
    """Check labels, edge membership, strict increase, and the endpoint/interior rule.

    Raises ``ValueError`` when a label references no path of the instance.
    """
    vs, labels = candidate.vertices, candidate.labels
    for lab in labels:
        if not 0 <= lab < instance.m:
            raise ValueError(f"dangling label {lab}")
    if len(vs) < 2 or len(labels) != len(vs) - 1 or len(set(vs)) != len(vs):
        return False
    if vs[0] not in instance.S or vs[-1] not in instance.targets:
        return False
    if any(v not in instance.Y for v in vs[1:-1]):
        return False
    if any(b <= a for a, b in zip(labels, labels[1:])):
        return False
    return all(e in _path_edges(instance.paths[lab]) for e, lab in zip(candidate.edges, labels))


# tree bookkeeping ----------------------------------------------------------------

Tree = dict[int, Optional[tuple[int, int]]]  # vertex -> (parent, label); root -> None


def _tree_path(tree: Tree, v: int) -> tuple[list[int], list[int]]:
    verts, labels = [v], []
    while tree[v] is not None:
        v, lab = tree[v]
        verts.append(v)
        labels.append(lab)
    return verts[::-1], labels[::-1]


def _extend(tree: Tree, x: int, y: int, label: int) -> LabeledPath:
    verts, labels = _tree_path(tree, x)
    return LabeledPath(tuple(verts + [y]), tuple(labels + [label]))


def check_tree_state(trees: Mapping[int, Tree], Y: frozenset[int]) -> None:
    """Assert no Y vertex lies in three trees and every root path is label-increasing."""
    counts = Counter(v for t in trees.values() for v in t if v in Y)
    assert all(c <= 2 for c in counts.values()), f"Y vertex in more than two trees: {counts}"
    for root, tree in trees.items():
        assert tree[root] is None
        for v in tree:
            _, labels = _tree_path(tree, v)
            assert all(a < b for a, b in zip(labels, labels[1:])), f"non-monotone tree at {root}"


def _fallback(instance: PathInstance, algo: str) -> Optional[LabeledPath]:
    if instance.guarantee():
        raise AssertionError(f"{algo} exhausted the sequence despite the path-count guarantee")
    log.warning("%s: m=%d, |Y|=%d gives no guarantee; falling back to exact search",
                algo, instance.m, len(instance.Y))
    from .oracle import exists_monotone_path_exact

    return exists_monotone_path_exact(instance)


def find_monotone_ss_treegrow(instance: PathInstance, debug: bool = False) -> Optional[LabeledPath]:
    """Grow one rainbow-monotone tree per terminal until an S-S path appears.

    For each path ``P`` (from ``p`` to ``q``), let ``X`` be the tree of ``p``
    together with the Y vertices already in two trees.  The first edge
    ``xy`` of ``P`` leaving ``X`` is hung below ``x``: in the tree of ``p``
    if ``x`` is there, otherwise in the tree (smallest root) containing
    ``x`` but not ``y``.  No Y vertex enters a third tree, so each
    non-terminating path adds one to a total bounded by ``2|Y|``.  Hanging
    an edge whose head is a terminal closes an S-S path at once.

    Returns ``None`` only when ``m < 2|Y| + 1`` and exact search finds nothing.
    """
    if instance.T is not None:
        raise ValueError("treegrow expects an S-S instance")
    S = instance.S
    trees: dict[int, Tree] = {s: {s: None} for s in sorted(S)}
    count: Counter[int] = Counter()
    for i, P in enumerate(instance.paths):
        p, q = P[0], P[-1]
        for s, tree in trees.items():
            if s != q and q in tree:
                verts, labels = _tree_path(tree, q)
                return LabeledPath(tuple(verts), tuple(labels))
        X = set(trees[p]) | {y for y, c in count.items() if c == 2}
        x, y = next((a, b) for a, b in zip(P, P[1:]) if a in X and b not in X)
        if x in trees[p]:
            root = p
        else:
            root = min(s for s, t in trees.items() if x in t and y not in t)
        if y in S:
            return _extend(trees[root], x, y, i)
        trees[root][y] = (x, i)
        count[y] += 1
        if debug:
            check_tree_state(trees, instance.Y)
    return _fallback(instance, "treegrow")


def find_monotone_st(instance: PathInstance) -> Optional[LabeledPath]:
    """Single-forest growth for S-T instances (``S`` and ``T`` disjoint).

    Each path hangs its first edge leaving the forest; reaching ``T``
    finishes.  Every Y vertex joins at most one tree, so ``|Y| + 1`` paths
    always suffice.
    """
    if instance.T is None:
        raise ValueError("find_monotone_st expects an S-T instance")
    T = instance.T
    forest: Tree = {s: None for s in instance.S}
    for i, P in enumerate(instance.paths):
        x, y = next((a, b) for a, b in zip(P, P[1:]) if a in forest and b not in forest)
        if y in T:
            return _extend(forest, x, y, i)
        forest[y] = (x, i)
    return _fallback(instance, "find_monotone_st")


def _root_of(forest: Tree, v: int) -> int:
    while forest[v] is not None:
        v = forest[v][0]
    return v


def _contract_and_route(instance: PathInstance, forest: Tree, t: int, wasted: list[int]) -> LabeledPath:
    """Route into terminal ``t`` through its own tree using the wasted paths.

    Everything outside the tree of ``t`` becomes one source ``z``; each
    wasted path contributes ``z`` followed by its tail inside the tree.
    """
    inside = {v for v in forest if _root_of(forest, v) == t}
    z = max(max(p) for p in instance.paths) + 1
    clipped: list[Path] = []
    entry: list[int] = []  # last vertex of each wasted path before its tail
    for j in wasted:
        P = instance.paths[j]
        k = len(P) - 1
        while P[k - 1] in inside:
            k -= 1
        clipped.append((z, *P[k:]))
        entry.append(P[k - 1])
    sub = PathInstance(S=frozenset({z}), Y=frozenset(inside - {t}), paths=tuple(clipped), T=frozenset({t}))
    route = find_monotone_st(sub)
    if route is None:  # pragma: no cover - excluded by the path count
        raise AssertionError("S-T subroutine failed on the contracted instance")
    first = route.labels[0]
    u = entry[first]
    head_verts, head_labels = _tree_path(forest, u)
    return LabeledPath(
        tuple(head_verts) + route.vertices[1:],
        tuple(head_labels) + tuple(wasted[lab] for lab in route.labels),
    )


def find_monotone_ss_forest(instance: PathInstance) -> Optional[LabeledPath]:
    """Grow one forest; paths that cannot extend it are banked at their terminal.

    A path lying entirely inside the forest is recorded as wasted at its
    terminal ``t``.  Once ``t`` holds more wasted paths than its tree has
    non-root vertices, the complement of that tree is contracted and the
    S-T subroutine finds a monotone route into ``t`` (see
    :func:`_contract_and_route`), which is then prefixed by the forest path
    to the uncontracted entry vertex.
    """
    if instance.T is not None:
        raise ValueError("forest algorithm expects an S-S instance")
    forest: Tree = {s: None for s in instance.S}
    tree_size = {s: 1 for s in instance.S}
    wasted: dict[int, list[int]] = {s: [] for s in instance.S}
    for i, P in enumerate(instance.paths):
        step = next(((a, b) for a, b in zip(P, P[1:]) if a in forest and b not in forest), None)
        if step is not None:
            x, y = step
            forest[y] = (x, i)
            tree_size[_root_of(forest, x)] += 1
            continue
        t = P[-1]
        wasted[t].append(i)
        if len(wasted[t]) > tree_size[t] - 1:
            return _contract_and_route(instance, forest, t, wasted[t])
    return _fallback(instance, "forest")


# strongly rainbow paths -------------------------------------------------------------


def _disjoint_paths(paths: Sequence[Path]) -> bool:
    seen: set[int] = set()
    for p in paths:
        if seen.intersection(p):
            return False
        seen.update(p)
    return True


def strongly_rainbow_from_monotone(
    S: frozenset[int], Y: frozenset[int], H: Sequence[Sequence[Path]]
) -> Optional[LabeledPath]:
    """Strongly rainbow S-S path for a family of sets of disjoint paths.

    All paths of ``H[i]`` are placed before those of ``H[j]`` for ``i < j``
    and the monotone search runs on the flattened sequence; labels of the
    result are indices into ``H``.  Distinct paths of one set are vertex
    disjoint, so consecutive edges never come from the same set and labels
    are pairwise distinct.
    """
    flat: list[Path] = []
    owner: list[int] = []
    for i, group in enumerate(H):
        group = [tuple(p) for p in group]
        if not _disjoint_paths(group):
            raise ValueError(f"paths of set {i} are not pairwise vertex disjoint")
        flat.extend(group)
        owner.extend([i] * len(group))
    inst = PathInstance(S=S, Y=Y, paths=tuple(flat))
    mono = find_monotone_ss_treegrow(inst)
    if mono is None:
        return None
    return LabeledPath(mono.vertices, tuple(owner[lab] for lab in mono.labels))


def is_strongly_rainbow(candidate: LabeledPath, S: frozenset[int], Y: frozenset[int], H: Sequence[Sequence[Path]]) -> bool:
    vs, labels = candidate.vertices, candidate.labels
    if len(vs) < 2 or len(labels) != len(vs) - 1 or len(set(vs)) != len(vs):
        return False
    if vs[0] not in S or vs[-1] not in S or any(v not in Y for v in vs[1:-1]):
        return False
    if len(set(labels)) != len(labels):
        return False
    for e, lab in zip(candidate.edges, labels):
        if not 0 <= lab < len(H) or not any(e in _path_edges(tuple(p)) for p in H[lab]):
            return False
    return True
