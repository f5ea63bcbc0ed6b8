"""Constraint-based pieces: IAMB Markov blankets, Grow-Shrink neighbourhoods and
orientation, and MMPC candidate parent/children sets."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Sequence

from ..data import Dataset
from ..graph import Dag
from ..independence import TESTS
from .config import LearnedStructure, LearnerConfig


class CiTester:
    """Memoised CI tests on one dataset, compared on the log p-value scale."""

    def __init__(self, data: Dataset, test: str, alpha: float):
        self.data = data
        self.fn = TESTS[test]
        self.log_alpha = math.log(alpha)
        self._cache: dict[tuple[int, int, tuple[int, ...]], float] = {}
        self.calls = 0

    def log_p(self, x: int, y: int, z: Iterable[int] = ()) -> float:
        key = (min(x, y), max(x, y), tuple(sorted(z)))
        val = self._cache.get(key)
        if val is None:
            self.calls += 1
            res = self.fn(self.data, key[0], key[1], key[2], on_degenerate="independent")
            val = res.log_p_value
            self._cache[key] = val
        return val

    def dependent(self, x: int, y: int, z: Iterable[int] = ()) -> bool:
        return self.log_p(x, y, z) < self.log_alpha


def _subsets(items: Sequence[int], max_size: int | None):
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        yield from combinations(items, k)


def iamb_blanket(tester: CiTester, target: int, n: int) -> list[int]:
    """Grow by strongest association (smallest p-value), then shrink."""
    mb: list[int] = []
    while True:
        best, best_lp = None, math.inf
        for x in range(n):
            if x == target or x in mb:
                continue
            lp = tester.log_p(target, x, mb)
            if lp < best_lp:
                best, best_lp = x, lp
        if best is None or best_lp >= tester.log_alpha:
            break
        mb.append(best)
    changed = True
    while changed:
        changed = False
        for x in sorted(mb):
            rest = [m for m in mb if m != x]
            if not tester.dependent(target, x, rest):
                mb.remove(x)
                changed = True
                break
    return sorted(mb)


def symmetrize(sets: Sequence[Iterable[int]]) -> list[set[int]]:
    """AND rule: keep y in S(x) only if x is in S(y)."""
    sets = [set(s) for s in sets]
    return [{y for y in s if x in sets[y]} for x, s in enumerate(sets)]


def grow_shrink_neighbours(
    tester: CiTester, blankets: Sequence[set[int]], max_cond: int | None = None
) -> tuple[list[set[int]], dict[tuple[int, int], tuple[int, ...]]]:
    """Y is a neighbour of X iff no subset of the smaller of the two blankets
    (minus each other) separates them. Separating sets found are returned."""
    n = len(blankets)
    nbrs: list[set[int]] = [set() for _ in range(n)]
    sepsets: dict[tuple[int, int], tuple[int, ...]] = {}
    for x in range(n):
        for y in sorted(blankets[x]):
            if y <= x:
                continue
            bx, by = sorted(blankets[x] - {y}), sorted(blankets[y] - {x})
            cond = bx if len(bx) <= len(by) else by
            sep = None
            for s in _subsets(cond, max_cond):
                if not tester.dependent(x, y, s):
                    sep = s
                    break
            if sep is None:
                nbrs[x].add(y)
                nbrs[y].add(x)
            else:
                sepsets[(x, y)] = tuple(sep)
    return nbrs, sepsets


def orient(
    n: int,
    nbrs: Sequence[set[int]],
    sepsets: dict[tuple[int, int], tuple[int, ...]],
) -> tuple[set[tuple[int, int]], dict[str, int]]:
    """Orient an undirected skeleton into a DAG edge set.

    1. v-structures x -> z <- y for non-adjacent spouses x, y whose separating
       set excludes z (pairs outside each other's blanket are separated by a
       set containing z, so they never form a v-structure);
    2. Meek rules 1 and 2 until nothing changes;
    3. remaining undirected edges default to lower index -> higher index;
    4. edges are inserted in that priority order and any edge that would
       close a directed cycle is inserted reversed.
    """
    directed: dict[tuple[int, int], int] = {}  # (min, max) -> head node
    stats = {"v_structures": 0, "propagated": 0, "defaulted": 0, "reversed": 0}

    def adjacent(a, b):
        return b in nbrs[a]

    for z in range(n):
        for x, y in combinations(sorted(nbrs[z]), 2):
            if adjacent(x, y):
                continue
            key = (min(x, y), max(x, y))
            if key not in sepsets or z in sepsets[key]:
                continue
            ok = True
            for a in (x, y):
                e = (min(a, z), max(a, z))
                if directed.get(e, z) != z:
                    ok = False
            if not ok:
                continue
            for a in (x, y):
                directed[(min(a, z), max(a, z))] = z
            stats["v_structures"] += 1

    def head_of(a, b):
        return directed.get((min(a, b), max(a, b)))

    def points(a, b):
        return head_of(a, b) == b

    changed = True
    while changed:
        changed = False
        for b in range(n):
            for c in sorted(nbrs[b]):
                if head_of(b, c) is not None:
                    continue
                # Meek 1: a -> b - c, a and c non-adjacent  =>  b -> c
                for a in sorted(nbrs[b]):
                    if a != c and points(a, b) and not adjacent(a, c):
                        directed[(min(b, c), max(b, c))] = c
                        stats["propagated"] += 1
                        changed = True
                        break
                if head_of(b, c) is not None:
                    continue
                # Meek 2: b -> a -> c and b - c  =>  b -> c
                for a in sorted(nbrs[b] & nbrs[c]):
                    if points(b, a) and points(a, c):
                        directed[(min(b, c), max(b, c))] = c
                        stats["propagated"] += 1
                        changed = True
                        break

    ordered: list[tuple[int, int]] = []
    for (a, b), h in sorted(directed.items()):
        ordered.append((a, b) if h == b else (b, a))
    for a in range(n):
        for b in sorted(nbrs[a]):
            if a < b and (a, b) not in directed:
                ordered.append((a, b))
                stats["defaulted"] += 1

    edges: set[tuple[int, int]] = set()
    children: list[set[int]] = [set() for _ in range(n)]

    def reaches(src, dst):
        stack, seen = [src], {src}
        while stack:
            u = stack.pop()
            if u == dst:
                return True
            for w in children[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    for u, v in ordered:
        if reaches(v, u):
            u, v = v, u
            stats["reversed"] += 1
        edges.add((u, v))
        children[u].add(v)
    return edges, stats


def iamb(data: Dataset, config: LearnerConfig | None = None) -> LearnedStructure:
    config = config or LearnerConfig(algorithm="iamb")
    n = len(data.variables)
    tester = CiTester(data, config.test, config.alpha)
    blankets = symmetrize([iamb_blanket(tester, t, n) for t in range(n)])
    nbrs, sepsets = grow_shrink_neighbours(tester, blankets, config.max_cond)
    edges, stats = orient(n, nbrs, sepsets)
    dag = Dag(data.nodes, frozenset(edges))
    return LearnedStructure(
        dag,
        {
            "algorithm": "iamb",
            "tests": tester.calls,
            "blankets": {data.names[i]: [data.names[j] for j in sorted(b)] for i, b in enumerate(blankets)},
            **stats,
        },
    )


def mmpc_candidates(tester: CiTester, target: int, n: int, max_cond: int | None = None) -> list[int]:
    """Max-Min Parents and Children of ``target`` (before symmetry correction)."""
    cpc: list[int] = []
    pool = [x for x in range(n) if x != target]
    while pool:
        best, best_lp = None, math.inf
        keep = []
        for x in pool:
            # minimum association over subsets = largest p-value
            worst = max(tester.log_p(target, x, s) for s in _subsets(cpc, max_cond))
            if worst >= tester.log_alpha:
                continue  # independent given some subset: drop for good
            keep.append(x)
            if worst < best_lp:
                best, best_lp = x, worst
        pool = keep
        if best is None:
            break
        cpc.append(best)
        pool.remove(best)
    for x in list(cpc):
        rest = [c for c in cpc if c != x]
        if any(not tester.dependent(target, x, s) for s in _subsets(rest, max_cond)):
            cpc.remove(x)
    return sorted(cpc)


def mmpc(data: Dataset, config: LearnerConfig) -> tuple[list[set[int]], int]:
    n = len(data.variables)
    tester = CiTester(data, config.test, config.alpha)
    pc = symmetrize([mmpc_candidates(tester, t, n, config.max_cond) for t in range(n)])
    return pc, tester.calls
