"""Greedy hill climbing over DAGs with the BDeu score."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..data import Dataset
from ..graph import Dag
from ..rng import generator
from ..scores import FamilyScoreCache
from .config import LearnedStructure, LearnerConfig

TOL = 1e-9

ADD, DELETE, REVERSE = 0, 1, 2


def _descendants(parents: Sequence[set[int]]) -> list[int]:
    """Bitmask of strict descendants for every node."""
    n = len(parents)
    children = [[] for _ in range(n)]
    indeg = [len(p) for p in parents]
    for v, ps in enumerate(parents):
        for u in ps:
            children[u].append(v)
    order = [i for i in range(n) if indeg[i] == 0]
    for u in order:
        for v in children[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    desc = [0] * n
    for u in reversed(order):
        m = 0
        for v in children[u]:
            m |= (1 << v) | desc[v]
        desc[u] = m
    return desc


def _best_move(score, parents, local, allowed, max_parents, tol):
    n = len(parents)
    desc = _descendants(parents)
    best, best_delta = None, 0.0

    def beats(delta):
        # gains within tol of the incumbent are ties, so the first move scanned
        # wins regardless of last-bit rounding (e.g. score-equivalent reversals)
        return delta > best_delta + tol
    for u in range(n):
        for v in range(n):
            if u == v or u in parents[v] or v in parents[u]:
                continue
            if allowed is not None and not allowed[u][v]:
                continue
            if max_parents is not None and len(parents[v]) >= max_parents:
                continue
            if (desc[v] >> u) & 1:
                continue
            delta = score(v, parents[v] | {u}) - local[v]
            if beats(delta):
                best, best_delta = (ADD, u, v), delta
    edges = sorted((u, v) for v in range(n) for u in parents[v])
    for u, v in edges:
        delta = score(v, parents[v] - {u}) - local[v]
        if beats(delta):
            best, best_delta = (DELETE, u, v), delta
    for u, v in edges:
        if allowed is not None and not allowed[v][u]:
            continue
        if max_parents is not None and len(parents[u]) >= max_parents:
            continue
        # another directed path u ~> v would close a cycle once v -> u is added
        if any((desc[c] >> v) & 1 for c in range(n) if c != v and u in parents[c]):
            continue
        delta = (score(v, parents[v] - {u}) - local[v]) + (score(u, parents[u] | {v}) - local[u])
        if beats(delta):
            best, best_delta = (REVERSE, u, v), delta
    return best, best_delta


def _apply(parents, move):
    kind, u, v = move
    if kind == ADD:
        parents[v].add(u)
    elif kind == DELETE:
        parents[v].discard(u)
    else:
        parents[v].discard(u)
        parents[u].add(v)


def climb(
    score: Callable[[int, Sequence[int]], float],
    parents: list[set[int]],
    allowed=None,
    max_parents: int | None = None,
    max_iter: int | None = None,
    tol: float = TOL,
) -> tuple[list[set[int]], int]:
    """Steepest ascent from ``parents`` (modified in place). Returns (parents, steps).

    Moves are scanned as additions, deletions, reversals, each in lexicographic
    (from, to) order; a later move displaces the incumbent only if its gain is
    larger by more than ``tol``, so near-equal gains go to the first one scanned.
    """
    local = [score(v, parents[v]) for v in range(len(parents))]
    steps = 0
    while max_iter is None or steps < max_iter:
        move, _ = _best_move(score, parents, local, allowed, max_parents, tol)
        if move is None:
            break
        _apply(parents, move)
        for v in {move[1], move[2]}:
            local[v] = score(v, parents[v])
        steps += 1
    return parents, steps


def _random_moves(parents, k, rng, allowed, max_parents):
    n = len(parents)
    for _ in range(k):
        desc = _descendants(parents)
        moves = []
        for u in range(n):
            for v in range(n):
                if u == v:
                    continue
                if u in parents[v]:
                    moves.append((DELETE, u, v))
                    other = any((desc[c] >> v) & 1 for c in range(n) if c != v and u in parents[c])
                    if not other and (allowed is None or allowed[v][u]) and (
                        max_parents is None or len(parents[u]) < max_parents
                    ):
                        moves.append((REVERSE, u, v))
                elif v not in parents[u] and not (desc[v] >> u) & 1:
                    if (allowed is None or allowed[u][v]) and (
                        max_parents is None or len(parents[v]) < max_parents
                    ):
                        moves.append((ADD, u, v))
        if not moves:
            return
        _apply(parents, moves[int(rng.integers(len(moves)))])


def hill_climb(
    data: Dataset,
    config: LearnerConfig | None = None,
    allowed: np.ndarray | None = None,
    start: Dag | None = None,
) -> LearnedStructure:
    """BDeu hill climbing from the empty graph (or ``start``).

    ``allowed[u][v]`` restricts additions of ``u -> v``; used by MMHC.
    """
    config = config or LearnerConfig(algorithm="hc")
    n = len(data.variables)
    cache = FamilyScoreCache(data, config.ess)
    if allowed is not None:
        allowed = np.asarray(allowed, dtype=bool).tolist()
    if start is None:
        parents: list[set[int]] = [set() for _ in range(n)]
    else:
        parents = [set(p) for p in start.parent_lists()]
    parents, steps = climb(cache, parents, allowed, config.max_parents, config.max_iter)
    best = [set(p) for p in parents]
    best_score = sum(cache(v, best[v]) for v in range(n))
    if config.restarts:
        rng = generator(config.seed, 0xC11B)
        for _ in range(config.restarts):
            cand = [set(p) for p in best]
            _random_moves(cand, config.perturb, rng, allowed, config.max_parents)
            cand, more = climb(cache, cand, allowed, config.max_parents, config.max_iter)
            steps += more
            total = sum(cache(v, cand[v]) for v in range(n))
            if total > best_score + TOL:
                best, best_score = cand, total
    dag = Dag.from_parents(data.nodes, best)
    return LearnedStructure(
        dag,
        {"algorithm": "hc", "score": best_score, "steps": steps, "score_calls": cache.calls},
    )
