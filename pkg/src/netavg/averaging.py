"""Bootstrap edge confidence, noise-floor baseline and edge orientation."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .data import Dataset, bootstrap_resample, permute_columns
from .graph import Dag, Edge, pair_index
from .learning import LearnedStructure, LearnerConfig, learn
from .rng import derive_seed
from .threshold import ConfidenceProfile, ThresholdReport, report_for_cutoff

Learner = Union[LearnerConfig, Callable[[Dataset], Union[Dag, LearnedStructure]]]

BOOTSTRAP, PERMUTATION = 0, 1


class ReplicateError(RuntimeError):
    def __init__(self, replicate: int, cause: BaseException):
        self.replicate = replicate
        super().__init__(f"replicate {replicate}: {type(cause).__name__}: {cause}")


def _learn_one(data: Dataset, learner: Learner) -> Dag:
    out = learn(data, learner) if isinstance(learner, LearnerConfig) else learner(data)
    return out.dag if isinstance(out, LearnedStructure) else out


def _replicate(data: Dataset, learner: Learner, seed: int, b: int, scheme: int) -> list[Edge]:
    try:
        if scheme == BOOTSTRAP:
            sample = bootstrap_resample(data, derive_seed(seed, b))
        else:
            sample = permute_columns(data, derive_seed(seed, b, PERMUTATION))
        return sorted(_learn_one(sample, learner).edges)
    except Exception as exc:
        raise ReplicateError(b, exc) from exc


_WORKER: dict = {}


def _init_worker(data, learner, seed, scheme):
    _WORKER.update(data=data, learner=learner, seed=seed, scheme=scheme)


def _worker(b: int) -> list[Edge]:
    w = _WORKER
    return _replicate(w["data"], w["learner"], w["seed"], b, w["scheme"])


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None or jobs <= 0:
        return os.cpu_count() or 1
    return jobs


def _run_replicates(data, learner, m, seed, scheme, jobs) -> list[list[Edge]]:
    if m < 1:
        raise ValueError("need at least one replicate")
    jobs = min(resolve_jobs(jobs), m)
    if jobs == 1:
        return [_replicate(data, learner, seed, b, scheme) for b in range(m)]
    with ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker, initargs=(data, learner, seed, scheme)
    ) as pool:
        return list(pool.map(_worker, range(m), chunksize=max(1, m // (4 * jobs))))


def profile_from_graphs(data_or_nodes, graphs: list[list[Edge]], m: int | None = None) -> ConfidenceProfile:
    nodes = getattr(data_or_nodes, "nodes", data_or_nodes)
    n = len(nodes)
    k = n * (n - 1) // 2
    counts = np.zeros((k, 2), dtype=np.int64)
    for edges in graphs:
        for u, v in edges:
            counts[pair_index(u, v, n), 0 if u < v else 1] += 1
    m = len(graphs) if m is None else m
    return ConfidenceProfile(nodes, m, counts.sum(axis=1) / m, counts)


def edge_confidence(
    data: Dataset, learner: Learner, m: int, seed: int, jobs: int | None = 1
) -> ConfidenceProfile:
    """Fraction of ``m`` bootstrap-learned networks containing each pair (either
    direction). Replicate ``b`` resamples with ``derive_seed(seed, b)``, so the
    result does not depend on ``jobs``."""
    graphs = _run_replicates(data, learner, m, seed, BOOTSTRAP, jobs)
    return profile_from_graphs(data, graphs, m)


def noise_floor_profile(
    data: Dataset, learner: Learner, m: int, seed: int, jobs: int | None = 1
) -> ConfidenceProfile:
    """Edge confidences on ``m`` column-permuted copies of the data."""
    graphs = _run_replicates(data, learner, m, seed, PERMUTATION, jobs)
    return profile_from_graphs(data, graphs, m)


def noise_floor_threshold(
    data: Dataset,
    learner: Learner,
    m: int,
    seed: int,
    jobs: int | None = 1,
    profile: ConfidenceProfile | None = None,
) -> ThresholdReport:
    """Keep edges whose confidence exceeds the largest permutation confidence.

    ``profile`` reuses an existing bootstrap profile of ``data``; otherwise one is
    computed with the same ``m`` and ``seed``.
    """
    if profile is None:
        profile = edge_confidence(data, learner, m, seed, jobs)
    floor = noise_floor_profile(data, learner, m, seed, jobs)
    return report_for_cutoff(
        profile, float(floor.p_hat.max()), "noisefloor", floor=floor.p_hat.tolist()
    )


@dataclass(frozen=True)
class AveragedNetwork:
    dag: Dag
    # pairs whose majority orientation was overridden to keep the graph acyclic
    flipped: tuple[Edge, ...] = field(default=())


def assign_directions(profile: ConfidenceProfile, selected) -> AveragedNetwork:
    """Orient every selected pair by its more frequent bootstrap direction.

    Ties go to lower index -> higher index. Pairs are inserted by decreasing
    majority margin (ties in canonical order); a pair whose majority direction
    would close a directed cycle is inserted the other way round, so on any
    cycle the smallest-margin orientation is the one dropped.
    """
    n = len(profile.nodes)
    items = []
    for u, v in sorted(selected):
        if u == v:
            raise ValueError("self-pair selected")
        a, b = min(u, v), max(u, v)
        fwd, back = profile.direction_counts[pair_index(a, b, n)]
        edge = (a, b) if fwd >= back else (b, a)
        items.append((-abs(int(fwd) - int(back)), (a, b), edge))
    items.sort()
    children: list[set[int]] = [set() for _ in range(n)]

    def reaches(src, dst):
        stack, seen = [src], {src}
        while stack:
            x = stack.pop()
            if x == dst:
                return True
            for w in children[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    edges, flipped = set(), []
    for _, pair, (u, v) in items:
        if reaches(v, u):
            u, v = v, u
            flipped.append(pair)
        edges.add((u, v))
        children[u].add(v)
    return AveragedNetwork(Dag(profile.nodes, frozenset(edges)), tuple(sorted(flipped)))
