"""Slow, obviously-correct reference implementations used as test oracles."""

from __future__ import annotations

from itertools import combinations, permutations, product

from rainbow_kit.core import MatchingFamily, RainbowSelection, make_edge


def max_rainbow(f: MatchingFamily) -> int:
    """Try every choice of (edge or nothing) per matching."""
    best = 0
    options = [[None, *sorted(m)] for m in f.matchings]
    for choice in product(*options):
        picked = [e for e in choice if e is not None]
        verts = [v for e in picked for v in e]
        if len(verts) == len(set(verts)):
            best = max(best, len(picked))
    return best


def short_odd_cycles(edges) -> set[tuple[int, ...]]:
    """Cycles of length 3 and 5 found by trying every vertex tuple."""
    es = {frozenset(e) for e in edges}
    verts = sorted({v for e in es for v in e})
    found = set()
    for k in (3, 5):
        for tup in permutations(verts, k):
            if tup[0] != min(tup):
                continue
            if all(frozenset((tup[i], tup[(i + 1) % k])) in es for i in range(k)):
                rev = (tup[0],) + tuple(reversed(tup[1:]))
                found.add(min(tup, rev))
    return found


def all_moves(f: MatchingFamily, sel: RainbowSelection, max_j: int) -> list[tuple]:
    """Every (removed, added) swap, by trying all index and edge combinations."""
    out = []
    unrep = sel.unrepresented(f.n)
    picked = sel.indices()
    for j in range(max_j + 1):
        for removed in combinations(picked, j):
            kept = [sel.picks[i] for i in picked if i not in removed]
            kept_v = {v for e in kept for v in e}
            for idx in combinations(unrep, j + 1):
                for edges in product(*(sorted(f.matchings[i]) for i in idx)):
                    verts = [v for e in edges for v in e]
                    if len(set(verts)) == len(verts) and kept_v.isdisjoint(verts):
                        out.append((removed, tuple(zip(idx, edges))))
    return out


def monotone_path_exists(S, Y, paths, T=None) -> bool:
    """Try every increasing label sequence and every edge choice along it."""
    targets = S if T is None else T
    edge_sets = [list(zip(p, p[1:])) for p in paths]
    m = len(paths)
    for length in range(1, len(Y) + 2):
        for labels in combinations(range(m), length):
            for edges in product(*(edge_sets[k] for k in labels)):
                if any(edges[i][1] != edges[i + 1][0] for i in range(length - 1)):
                    continue
                vs = [edges[0][0]] + [e[1] for e in edges]
                if len(set(vs)) != len(vs):
                    continue
                if vs[0] in S and vs[-1] in targets and vs[0] != vs[-1] and all(v in Y for v in vs[1:-1]):
                    return True
    return False


def strongly_rainbow_augmenting_exists(M, H) -> bool:
    """Walk every simple path of the union graph and test each label assignment."""
    M = {make_edge(e) for e in M}
    covered = {v for e in M for v in e}
    label_sets: dict[tuple, set[int]] = {}
    for i, group in enumerate(H):
        for p in group:
            for e in p.edges:
                if e not in M:
                    label_sets.setdefault(e, set()).add(i)
    union = set(M) | set(label_sets)
    adj: dict[int, set[int]] = {}
    for u, v in union:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    def ok(vs) -> bool:
        es = [make_edge(p) for p in zip(vs, vs[1:])]
        if len(es) % 2 == 0:
            return False
        if vs[0] in covered or vs[-1] in covered:
            return False
        if any((e in M) != (k % 2 == 1) for k, e in enumerate(es)):
            return False
        free = [sorted(label_sets[e]) for e in es[0::2] if e in label_sets]
        if len(free) != len(es[0::2]):
            return False
        return any(len(set(c)) == len(c) for c in product(*free))

    def dfs(vs) -> bool:
        if len(vs) >= 2 and ok(vs):
            return True
        for w in adj.get(vs[-1], ()):
            if w not in vs and dfs(vs + [w]):
                return True
        return False

    return any(dfs([s]) for s in adj if s not in covered)


def components(M, F) -> tuple[int, int, int]:
    """(augmenting, other paths, cycles) counts of M xor F via connected components."""
    M, F = set(M), set(F)
    diff = M ^ F
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for u, v in diff:
        parent[find(u)] = find(v)
    groups: dict[int, list] = {}
    for e in diff:
        groups.setdefault(find(e[0]), []).append(e)
    aug = other = cyc = 0
    for es in groups.values():
        deg: dict[int, int] = {}
        for u, v in es:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        if all(d == 2 for d in deg.values()):
            cyc += 1
            continue
        n_m = sum(1 for e in es if e in M)
        if len(es) - n_m == n_m + 1:
            aug += 1
        else:
            other += 1
    return aug, other, cyc
