"""Conditional independence tests based on (conditional) mutual information.

Both tests return ``2 * n * MI`` referenced against a chi-square distribution with
``(r_x - 1)(r_y - 1) * prod(r_z)`` degrees of freedom (full level cardinalities,
clamped at 1). The shrinkage variant estimates the cell probabilities of each
z-stratum with the James-Stein estimator of Hausser and Strimmer, shrinking
towards the uniform distribution over the ``r_x * r_y`` cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import chi2

from .data import Dataset, contingency_counts


class DegenerateColumnError(ValueError):
    """x or y takes a single observed value, so no association can be measured."""


@dataclass(frozen=True)
class CiTestResult:
    statistic: float
    degrees_of_freedom: int
    p_value: float
    mi_estimate: float
    test: str = "mi"
    # natural log of p_value, finite where p_value underflows to 0
    log_p_value: float = 0.0
    # fraction of z-configurations with no observations (df is not reduced for them)
    empty_strata: float = 0.0


def _plogp_mi(p: np.ndarray) -> float:
    """MI of a 2-D probability table; 0 log 0 := 0."""
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    nz = p > 0
    return float(np.sum(p[nz] * np.log(p[nz] / (px @ py)[nz])))


def shrinkage_intensity(counts: np.ndarray) -> float:
    """James-Stein lambda* for one table of counts, clamped to [0, 1]."""
    n = counts.sum()
    if n <= 1:
        return 1.0
    p = counts.ravel() / n
    u = 1.0 / p.size
    den = np.sum((u - p) ** 2)
    if den == 0:
        return 1.0
    num = np.sum(p * (1.0 - p)) / (n - 1)
    return float(min(1.0, max(0.0, num / den)))


def conditional_mi(counts: np.ndarray, shrink: bool | float = False) -> float:
    """Conditional MI in nats from an (x, y, z) count tensor.

    ``shrink`` is False for the ML plug-in estimate, True for the data-driven
    shrinkage intensity, or a fixed intensity in [0, 1].
    """
    if counts.ndim == 2:
        counts = counts[:, :, None]
    n = counts.sum()
    if n == 0:
        return 0.0
    total = 0.0
    for s in range(counts.shape[2]):
        c = counts[:, :, s]
        ns = c.sum()
        if ns == 0:
            continue
        p = c / ns
        if shrink is not False:
            lam = shrinkage_intensity(c) if shrink is True else float(shrink)
            if lam != 0.0:
                p = lam / p.size + (1.0 - lam) * p
        total += (ns / n) * _plogp_mi(p)
    return max(total, 0.0)


def _degrees_of_freedom(data: Dataset, x: int, y: int, z: Sequence[int]) -> int:
    df = (int(data.cards[x]) - 1) * (int(data.cards[y]) - 1)
    for c in z:
        df *= int(data.cards[c])
    return max(df, 1)


def _run(data, x, y, z, shrink, on_degenerate, name) -> CiTestResult:
    xi, yi = data.column(x), data.column(y)
    zi = [data.column(c) for c in z]
    # evaluate on a canonical orientation so swapping x and y is bit-identical
    if xi > yi:
        xi, yi = yi, xi
    counts = contingency_counts(data, xi, yi, zi)
    df = _degrees_of_freedom(data, xi, yi, zi)
    marg_x = counts.sum(axis=(1, 2))
    marg_y = counts.sum(axis=(0, 2))
    if (marg_x > 0).sum() < 2 or (marg_y > 0).sum() < 2:
        if on_degenerate == "raise":
            col = data.names[xi] if (marg_x > 0).sum() < 2 else data.names[yi]
            raise DegenerateColumnError(f"column {col!r} has a single observed level")
        return CiTestResult(0.0, df, 1.0, 0.0, name)
    mi = conditional_mi(counts, shrink)
    stat = 2.0 * data.n * mi
    if stat > 0:
        pval, logp = float(chi2.sf(stat, df)), float(chi2.logsf(stat, df))
    else:
        pval, logp = 1.0, 0.0
    empty = float(np.mean(counts.sum(axis=(0, 1)) == 0))
    return CiTestResult(stat, df, min(max(pval, 0.0), 1.0), mi, name, min(logp, 0.0), empty)


def mi_g2_test(data: Dataset, x, y, z: Sequence = (), on_degenerate: str = "raise") -> CiTestResult:
    """Asymptotic G^2 test: statistic ``2 n MI`` with the ML plug-in MI.

    ``on_degenerate="independent"`` returns statistic 0 / p-value 1 instead of
    raising when x or y is constant in the data.
    """
    return _run(data, x, y, z, False, on_degenerate, "mi")


def mi_shrinkage_test(
    data: Dataset, x, y, z: Sequence = (), on_degenerate: str = "raise"
) -> CiTestResult:
    """Shrinkage MI test (James-Stein cell probabilities per z-stratum)."""
    return _run(data, x, y, z, True, on_degenerate, "mi-sh")


TESTS = {"mi": mi_g2_test, "g2": mi_g2_test, "mi-sh": mi_shrinkage_test, "shrinkage": mi_shrinkage_test}
