"""Edge-confidence profiles and significance thresholds.

The estimated threshold compares the empirical CDF ``F`` of the edge confidences
with the two-level step function that is 0 below 0, ``t`` on ``[0, 1)`` and 1
from 1 on. Their L1 distance is ``sum_i |F(x_i) - t| (x_{i+1} - x_i)`` over the
partition ``0 <= p_(1) <= ... <= p_(k) <= 1``, a weighted sum of absolute
deviations in ``t``. Its minimiser is therefore the weighted median of the CDF
levels ``F(x_i)`` with interval widths as weights (the midpoint when the median
is an interval). Edges whose confidence is strictly above ``F^{-1}(t)`` are kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Edge, NodeSet, enumerate_possible_edges

_TIE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ConfidenceProfile:
    """Per-edge bootstrap confidences over the canonical pair order.

    ``direction_counts[i] = (#replicates with u -> v, #replicates with v -> u)``
    for the i-th pair ``(u, v)``, ``u < v``.
    """

    nodes: NodeSet
    m: int
    p_hat: np.ndarray
    direction_counts: np.ndarray

    def __post_init__(self):
        k = len(self.nodes) * (len(self.nodes) - 1) // 2
        p = np.asarray(self.p_hat, dtype=float).reshape(-1)
        if p.shape != (k,):
            raise ValueError(f"expected {k} confidences for {len(self.nodes)} nodes, got {p.size}")
        if ((p < 0) | (p > 1) | ~np.isfinite(p)).any():
            raise ValueError("confidences must lie in [0, 1]")
        d = np.asarray(self.direction_counts, dtype=np.int64).reshape(k, 2)
        p.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "p_hat", p)
        object.__setattr__(self, "direction_counts", d)

    @classmethod
    def from_confidences(cls, names, p_hat, m: int = 0) -> ConfidenceProfile:
        """Profile with no direction information (e.g. confidences loaded from a file)."""
        nodes = names if isinstance(names, NodeSet) else NodeSet(names)
        k = len(nodes) * (len(nodes) - 1) // 2
        return cls(nodes, m, np.asarray(p_hat, dtype=float), np.zeros((k, 2), dtype=np.int64))

    @property
    def pairs(self) -> list[Edge]:
        return enumerate_possible_edges(self.nodes)

    @property
    def k(self) -> int:
        return self.p_hat.size

    def cdf(self) -> StepCdf:
        return StepCdf(self.p_hat)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConfidenceProfile)
            and self.nodes == other.nodes
            and self.m == other.m
            and np.array_equal(self.p_hat, other.p_hat)
            and np.array_equal(self.direction_counts, other.direction_counts)
        )


class StepCdf:
    """Right-continuous empirical CDF of a set of confidences in [0, 1]."""

    def __init__(self, values):
        x = np.sort(np.asarray(values, dtype=float).reshape(-1))
        if x.size == 0:
            raise ValueError("need at least one confidence value")
        self.x = x
        self.k = x.size

    def __call__(self, v):
        return np.searchsorted(self.x, v, side="right") / self.k

    def partition(self) -> tuple[np.ndarray, np.ndarray]:
        """CDF level on each interval ``[x_i, x_{i+1})`` of ``{0} u p_(.) u {1}``,
        and the interval widths."""
        pts = np.concatenate(([0.0], self.x, [1.0]))
        levels = np.searchsorted(self.x, pts[:-1], side="right") / self.k
        return levels, np.diff(pts)

    def quantile(self, t: float) -> float:
        """``inf{x in [0, 1] : F(x) >= t}``; 0 for ``t <= 0``."""
        if t <= 0:
            return 0.0
        if t > 1:
            raise ValueError("t must be in [0, 1]")
        levels = np.arange(1, self.k + 1) / self.k
        j = int(np.searchsorted(levels, t, side="left"))
        return float(self.x[min(j, self.k - 1)])


def _as_cdf(obj) -> StepCdf:
    if isinstance(obj, StepCdf):
        return obj
    if isinstance(obj, ConfidenceProfile):
        return obj.cdf()
    return StepCdf(obj)


def l1_objective(t: float, profile) -> float:
    """L1 distance between the confidence ECDF and the ideal step CDF at level t."""
    if not 0.0 <= t <= 1.0 or math.isnan(t):
        raise ValueError(f"t must be in [0, 1], got {t}")
    levels, widths = _as_cdf(profile).partition()
    return float(np.sum(np.abs(levels - t) * widths))


def l1_minimizer(profile) -> float:
    """Weighted median of the ECDF levels, weights = interval widths."""
    levels, widths = _as_cdf(profile).partition()
    half = widths.sum() / 2.0
    cum = np.cumsum(widths)
    j = int(np.searchsorted(cum, half - _TIE_EPS, side="left"))
    if cum[j] > half + _TIE_EPS:
        return float(levels[j])
    # cumulative weight hits exactly one half: every t up to the next level is optimal
    nxt = next((i for i in range(j + 1, len(widths)) if widths[i] > 0), None)
    if nxt is None:
        return float(levels[j])
    return float((levels[j] + levels[nxt]) / 2.0)


@dataclass(frozen=True)
class ThresholdReport:
    t_hat: float
    cutoff: float
    selected: frozenset[Edge]
    l1_value: float
    method: str
    details: dict = field(default_factory=dict, compare=False)

    def sorted_selected(self) -> list[Edge]:
        return sorted(self.selected)


def _select(profile: ConfidenceProfile, cutoff: float) -> frozenset[Edge]:
    pairs = profile.pairs
    return frozenset(pairs[i] for i in np.flatnonzero(profile.p_hat > cutoff))


def estimate_threshold(profile: ConfidenceProfile) -> ThresholdReport:
    cdf = profile.cdf()
    t_hat = l1_minimizer(cdf)
    cutoff = cdf.quantile(t_hat)
    return ThresholdReport(
        t_hat, cutoff, _select(profile, cutoff), l1_objective(t_hat, cdf), "l1"
    )


def report_for_cutoff(profile: ConfidenceProfile, cutoff: float, method: str, **details) -> ThresholdReport:
    """Report for a fixed confidence cut; ``t_hat`` is the ECDF level at the cut."""
    cdf = profile.cdf()
    t = float(cdf(cutoff))
    return ThresholdReport(t, float(cutoff), _select(profile, cutoff), l1_objective(t, cdf), method, details)


def select_with_adhoc_threshold(profile: ConfidenceProfile, t: float) -> ThresholdReport:
    """Conventional cut: keep edges with confidence strictly above ``t``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be in [0, 1], got {t}")
    return report_for_cutoff(profile, t, f"adhoc:{t:g}")
