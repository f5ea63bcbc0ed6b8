"""BDeu score (log marginal likelihood with uniform Dirichlet pseudo-counts)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .data import Dataset
from .graph import Dag


@dataclass(frozen=True)
class ScoreValue:
    log_score: float
    per_node: tuple[float, ...]


def bdeu_family_score(counts: np.ndarray, ess: float) -> float:
    """Local BDeu term from a (parent configurations, child levels) count table.

    Works on an all-zero table (empty data), where every term cancels to 0.
    """
    if ess <= 0:
        raise ValueError("equivalent sample size must be positive")
    return float(kernels.bdeu_from_counts(np.ascontiguousarray(counts, dtype=np.int64), float(ess)))


def bdeu_node_score(data: Dataset, child, parents: Iterable = (), ess: float = 10.0) -> float:
    if ess <= 0:
        raise ValueError("equivalent sample size must be positive")
    c = data.column(child)
    pa = sorted(data.column(p) for p in parents)
    if c in pa:
        raise ValueError("parents must exclude the child")
    return float(kernels.bdeu_score(data.codes, c, pa, data.cards, float(ess)))


def bdeu_network_score(data: Dataset, dag: Dag, ess: float = 10.0) -> ScoreValue:
    if dag.nodes.names != data.names:
        raise ValueError("DAG nodes must match data columns")
    per = tuple(bdeu_node_score(data, v, dag.parents(v), ess) for v in range(len(dag.nodes)))
    return ScoreValue(float(sum(per)), per)


class FamilyScoreCache:
    """Memoised local scores keyed by ``(child, sorted parent tuple)``.

    One instance per dataset; not meant to be shared between threads.
    """

    def __init__(self, data: Dataset, ess: float):
        if ess <= 0:
            raise ValueError("equivalent sample size must be positive")
        self.codes = data.codes
        self.cards = data.cards
        self.ess = float(ess)
        self._cache: dict[tuple[int, tuple[int, ...]], float] = {}
        self.calls = 0

    def __call__(self, child: int, parents: Sequence[int]) -> float:
        key = (child, tuple(sorted(parents)))
        val = self._cache.get(key)
        if val is None:
            self.calls += 1
            val = float(kernels.bdeu_score(self.codes, child, key[1], self.cards, self.ess))
            self._cache[key] = val
        return val

    def __len__(self) -> int:
        return len(self._cache)
