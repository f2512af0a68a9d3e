"""Seeded instance generators.

Every generator takes an explicit seed and draws from its own
``random.Random``; equal arguments give identical instances.  The random
models here are engineering choices for exercising the solvers, not
distributions with any extremal meaning.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass
from itertools import permutations
from typing import Iterator, Optional

from .alternating import AlternatingPath, AlternatingSystem
from .core import FamilyClass, MatchingFamily, make_edge, validate_family
from .monopath import PathInstance


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    r: int = 2
    seed: int = 0
    pool: Optional[int] = None
    density: Optional[float] = None

    def to_json(self) -> dict:
        return asdict(self)

    def build(self) -> MatchingFamily:
        if self.kind == "latin":
            return gen_latin(self.n, self.seed)
        return gen_random(self.n, self.r, self.kind, self.seed, pool=self.pool, density=self.density)


# Latin squares -------------------------------------------------------------------


def cyclic_latin_square(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def shuffled_latin_square(n: int, rng: random.Random) -> list[list[int]]:
    rows = list(range(n))
    cols = list(range(n))
    syms = list(range(n))
    rng.shuffle(rows)
    rng.shuffle(cols)
    rng.shuffle(syms)
    base = cyclic_latin_square(n)
    return [[syms[base[rows[i]][cols[j]]] for j in range(n)] for i in range(n)]


def all_latin_squares(n: int) -> Iterator[list[list[int]]]:
    """Every n x n Latin square on symbols ``0..n-1`` (meant for n <= 4)."""
    if n > 5:
        raise ValueError("exhaustive enumeration is only supported for n <= 5")
    rows = list(permutations(range(n)))

    def rec(square: list[tuple[int, ...]]) -> Iterator[list[list[int]]]:
        if len(square) == n:
            yield [list(r) for r in square]
            return
        for row in rows:
            if all(row[j] != prev[j] for prev in square for j in range(n)):
                square.append(row)
                yield from rec(square)
                square.pop()

    yield from rec([])


def latin_family(square: list[list[int]]) -> MatchingFamily:
    """Row ``i`` becomes the perfect matching ``{column j -- symbol L[i][j]}`` of K_{n,n}.

    Columns are vertices ``0..n-1`` and symbols ``n..2n-1``; a rainbow
    perfect matching is exactly a transversal.
    """
    n = len(square)
    ms = [frozenset(make_edge((j, n + row[j])) for j in range(n)) for row in square]
    return MatchingFamily(r=2, matchings=tuple(ms), declared_class=FamilyClass.BIPARTITE)


def gen_latin(n: int, seed: Optional[int] = None) -> MatchingFamily:
    """Row matchings of the cyclic square (``seed=None``) or of a seeded shuffle of it."""
    if n < 1:
        raise ValueError("n must be positive")
    square = cyclic_latin_square(n) if seed is None else shuffled_latin_square(n, random.Random(seed))
    return latin_family(square)


# random families ------------------------------------------------------------------


def default_pool(n: int, r: int) -> int:
    return r * n + math.ceil(n / 2)


def _random_matching(pool: list[int], n: int, r: int, rng: random.Random) -> frozenset:
    verts = rng.sample(pool, n * r)
    return frozenset(make_edge(verts[k * r:(k + 1) * r]) for k in range(n))


def _bipartite_family(n: int, pool: int, rng: random.Random) -> list[frozenset]:
    half = pool // 2
    left = list(range(half))
    right = list(range(half, pool))
    if min(len(left), len(right)) < n:
        raise ValueError("vertex pool too small for a bipartite family")
    out = []
    for _ in range(n):
        ls = rng.sample(left, n)
        rs = rng.sample(right, n)
        out.append(frozenset(make_edge(p) for p in zip(ls, rs)))
    return out


def _disjoint_family(
    n: int, r: int, rng: random.Random, density: Optional[float], retries: int
) -> list[frozenset]:
    nv = 2 * n * r
    degree = density if density is not None else 1.5 * n
    target = math.ceil(nv * degree / r)
    for _ in range(retries):
        edges: set = set()
        while len(edges) < target:
            edges.add(make_edge(rng.sample(range(nv), r)))
        order = sorted(edges)
        rng.shuffle(order)
        # first-fit proper colouring; each colour class is a matching
        busy: list[set[int]] = [set() for _ in range(nv)]
        classes: dict[int, list] = {}
        for e in order:
            c = 0
            while any(c in busy[v] for v in e):
                c += 1
            for v in e:
                busy[v].add(c)
            classes.setdefault(c, []).append(e)
        big = [sorted(cls) for _, cls in sorted(classes.items()) if len(cls) >= n]
        if len(big) >= n:
            chosen = rng.sample(big, n)
            return [frozenset(rng.sample(cls, n)) for cls in chosen]
    raise GenerationError(f"no {n} colour classes of size {n} after {retries} attempts")


def gen_random(
    n: int,
    r: int = 2,
    kind: str | FamilyClass = "general",
    seed: int = 0,
    pool: Optional[int] = None,
    density: Optional[float] = None,
    retries: int = 50,
) -> MatchingFamily:
    """``n`` matchings of size ``n`` in an r-uniform hypergraph.

    ``general`` samples each matching independently from a pool of
    ``r*n + ceil(n/2)`` vertices; ``bipartite`` (r=2) joins random n-subsets
    of the two halves of the pool; ``pairwise_disjoint`` takes colour classes
    of a greedy proper colouring of a random hypergraph on ``2*n*r`` vertices.
    """
    kind = FamilyClass(kind)
    rng = random.Random(seed)
    size = pool if pool is not None else default_pool(n, r)
    if kind is FamilyClass.GENERAL:
        if size < n * r:
            raise ValueError("vertex pool too small")
        ms = [_random_matching(list(range(size)), n, r, rng) for _ in range(n)]
    elif kind is FamilyClass.BIPARTITE:
        if r != 2:
            raise ValueError("bipartite families need r=2")
        ms = _bipartite_family(n, max(size, 2 * n), rng)
    elif kind is FamilyClass.PAIRWISE_DISJOINT:
        ms = _disjoint_family(n, r, rng, density, retries)
    else:
        raise ValueError(f"no random model for class {kind.value}")
    f = MatchingFamily(r=r, matchings=tuple(ms), declared_class=kind)
    problems = validate_family(f)
    if problems:  # pragma: no cover - generator bug
        raise GenerationError("; ".join(map(str, problems)))
    return f


# path instances --------------------------------------------------------------------


def gen_sharpness_paths(m: int, variant: str = "ss_double") -> PathInstance:
    """Path sequences with no rainbow-monotone path, one path short of the guarantee.

    ``st_single``: ``s -> y_1 -> ... -> y_m -> t`` repeated m times, with
    ``s = 0``, ``t = 1``.  ``ss_double``: S = {u=0, v=1}, m copies of
    ``u -> y_1 -> ... -> y_m -> v`` followed by m copies of the reverse
    ``v -> y_m -> ... -> y_1 -> u``.  The ``y_k`` are vertices ``2..m+1``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    ys = list(range(2, m + 2))
    if variant == "st_single":
        path = tuple([0, *ys, 1])
        return PathInstance(S=frozenset({0}), Y=frozenset(ys), paths=(path,) * m, T=frozenset({1}))
    if variant == "ss_double":
        fwd = tuple([0, *ys, 1])
        back = tuple(reversed(fwd))
        return PathInstance(S=frozenset({0, 1}), Y=frozenset(ys), paths=(fwd,) * m + (back,) * m)
    raise ValueError(f"unknown sharpness variant {variant!r}")


def random_path(
    start: int, end: int, ys: list[int], rng: random.Random, max_len: Optional[int] = None
) -> tuple[int, ...]:
    cap = len(ys) if max_len is None else min(max_len, len(ys))
    k = rng.randint(0, cap)
    return (start, *rng.sample(ys, k), end)


def gen_random_paths(
    n_y: int,
    n_s: int = 2,
    m: Optional[int] = None,
    seed: int = 0,
    max_len: Optional[int] = None,
) -> PathInstance:
    """Random S-S path sequence; ``m`` defaults to ``2 * n_y + 1``.

    S is ``0..n_s-1`` and Y is ``n_s..n_s+n_y-1``.
    """
    if n_s < 2:
        raise ValueError("an S-S path needs |S| >= 2")
    rng = random.Random(seed)
    S = list(range(n_s))
    Y = list(range(n_s, n_s + n_y))
    m = 2 * n_y + 1 if m is None else m
    paths = []
    for _ in range(m):
        a, b = rng.sample(S, 2)
        paths.append(random_path(a, b, Y, rng, max_len))
    return PathInstance(S=frozenset(S), Y=frozenset(Y), paths=tuple(paths))


def gen_random_st_paths(
    n_y: int, n_s: int = 1, n_t: int = 1, m: Optional[int] = None, seed: int = 0
) -> PathInstance:
    """Random S-T path sequence with disjoint S and T; ``m`` defaults to ``n_y + 1``."""
    rng = random.Random(seed)
    S = list(range(n_s))
    T = list(range(n_s, n_s + n_t))
    Y = list(range(n_s + n_t, n_s + n_t + n_y))
    m = n_y + 1 if m is None else m
    paths = [random_path(rng.choice(S), rng.choice(T), Y, rng) for _ in range(m)]
    return PathInstance(S=frozenset(S), Y=frozenset(Y), paths=tuple(paths), T=frozenset(T))


# alternating systems -------------------------------------------------------------------


def random_augmenting_path(
    mate_pairs: list[tuple[int, int]], exposed: list[int], rng: random.Random
) -> AlternatingPath:
    """Exposed vertex, a random run of M-edges (random orientation), another exposed vertex."""
    a, b = rng.sample(exposed, 2)
    k = rng.randint(1 if mate_pairs and rng.random() < 0.8 else 0, len(mate_pairs))
    verts = [a]
    for u, v in rng.sample(mate_pairs, k):
        verts.extend((u, v) if rng.random() < 0.5 else (v, u))
    verts.append(b)
    return AlternatingPath(tuple(verts))


def random_alternating_system(
    seed: int,
    matching_max: int = 3,
    exposed_max: int = 4,
    set_max: int = 3,
) -> AlternatingSystem:
    """Random ``(M, H)`` with ``|M| <= matching_max`` and ``||H|| = 2|M| + 1``.

    M pairs vertices ``2k, 2k+1``; the exposed vertices follow.  Each set
    of ``H`` keeps the sampled augmenting paths disjoint from those already
    in it.
    """
    rng = random.Random(seed)
    size = rng.randint(1, matching_max)
    pairs = [(2 * k, 2 * k + 1) for k in range(size)]
    exposed = list(range(2 * size, 2 * size + rng.randint(2, exposed_max)))
    target = 2 * size + 1
    groups: list[tuple[AlternatingPath, ...]] = []
    total = 0
    while total < target:
        want = min(rng.randint(1, set_max), target - total)
        group: list[AlternatingPath] = []
        used: set[int] = set()
        for _ in range(4 * want):
            if len(group) == want:
                break
            p = random_augmenting_path(pairs, exposed, rng)
            if used.isdisjoint(p.vertices):
                group.append(p)
                used.update(p.vertices)
        groups.append(tuple(group))
        total += len(group)
    return AlternatingSystem(M=frozenset(pairs), H=tuple(groups))
