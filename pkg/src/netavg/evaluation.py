"""Structure-recovery metrics and the sample-size experiment protocol."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .averaging import Learner, edge_confidence, noise_floor_threshold
from .graph import Dag, Edge, skeleton_of
from .model import DiscreteBayesNet, forward_sample, parameter_count
from .rng import derive_seed
from .threshold import estimate_threshold, select_with_adhoc_threshold

METRICS = ("sensitivity", "specificity", "accuracy", "t_hat")
TSV_COLUMNS = ("n", "n_over_p", "method", "metric", "mean", "ci_low", "ci_high")
DEFAULT_ADHOC = (0.70, 0.80, 0.90, 0.95)


class MissingCellError(KeyError):
    pass


@dataclass(frozen=True)
class EvalMetrics:
    true_positive: int
    false_positive: int
    true_negative: int
    false_negative: int
    sensitivity: float
    specificity: float
    accuracy: float
    n_over_p: float = float("nan")

    @classmethod
    def from_counts(cls, tp: int, fp: int, tn: int, fn: int, n_over_p: float = float("nan")):
        # an empty denominator means there was nothing to get wrong
        sens = tp / (tp + fn) if tp + fn else 1.0
        spec = tn / (tn + fp) if tn + fp else 1.0
        acc = (tp + tn) / (tp + fp + tn + fn)
        return cls(tp, fp, tn, fn, sens, spec, acc, n_over_p)


def compare_to_truth(selected: Iterable[Edge], truth: Dag, n_over_p: float = float("nan")) -> EvalMetrics:
    """Confusion counts over all k possible pairs, ignoring direction."""
    n = len(truth.nodes)
    k = n * (n - 1) // 2
    sel = set()
    for u, v in selected:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"selected pair ({u}, {v}) is not a pair of the truth's {n} nodes")
        sel.add((min(u, v), max(u, v)))
    true = skeleton_of(truth).edges
    tp = len(sel & true)
    fp = len(sel - true)
    fn = len(true - sel)
    return EvalMetrics.from_counts(tp, fp, k - tp - fp - fn, fn, n_over_p)


def parse_method(method: str) -> tuple[str, float | None]:
    if method == "l1":
        return "l1", None
    if method in ("noisefloor", "noise-floor"):
        return "noisefloor", None
    if method.startswith("adhoc:"):
        t = float(method.split(":", 1)[1])
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"ad-hoc threshold must be in [0, 1]: {method}")
        return "adhoc", t
    raise ValueError(f"unknown method {method!r} (use l1, adhoc:<t> or noisefloor)")


def method_label(method: str) -> str:
    kind, t = parse_method(method)
    return f"adhoc:{t:.2f}" if kind == "adhoc" else kind


def mean_ci(values: Sequence[float], level: float = 0.95) -> tuple[float, float, float]:
    """Mean and t-interval; a single value gives a zero-width interval."""
    x = np.asarray(values, dtype=float)
    mean = float(x.mean())
    if x.size < 2:
        return mean, mean, mean
    half = float(stats.t.ppf(0.5 + level / 2, x.size - 1) * x.std(ddof=1) / math.sqrt(x.size))
    return mean, mean - half, mean + half


@dataclass
class ExperimentResult:
    network_parameters: int
    records: list[dict] = field(default_factory=list)

    def summary(self) -> list[dict]:
        groups: dict[tuple, list[dict]] = {}
        for r in self.records:
            groups.setdefault((r["n"], r["method"]), []).append(r)
        rows = []
        for (n, method), recs in groups.items():
            for metric in METRICS:
                mean, lo, hi = mean_ci([r[metric] for r in recs])
                rows.append(
                    {"n": n, "n_over_p": recs[0]["n_over_p"], "method": method,
                     "metric": metric, "mean": mean, "ci_low": lo, "ci_high": hi}
                )
        return rows

    def mean(self, n: int, method: str, metric: str) -> float:
        vals = [r[metric] for r in self.records if r["n"] == n and r["method"] == method]
        if not vals:
            raise MissingCellError((n, method))
        return float(np.mean(vals))


def run_experiment(
    truth_net: DiscreteBayesNet,
    grid: Sequence[int],
    learner: Learner,
    m: int,
    repeats: int,
    seed: int,
    methods: Sequence[str] = ("l1",),
    jobs: int | None = 1,
) -> ExperimentResult:
    """Sample, bootstrap, threshold and score for every (n, repeat) cell.

    The data of cell (n, r) come from ``derive_seed(seed, 0, n, r)`` and its
    bootstrap replicates from ``derive_seed(seed, 1, n, r)``; the noise floor
    reuses the latter master seed with its own permutation streams.
    """
    if not grid:
        raise ValueError("sample-size grid is empty")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    parsed = [(method_label(mth), *parse_method(mth)) for mth in methods]
    p = parameter_count(truth_net)
    result = ExperimentResult(p)
    for n in grid:
        for r in range(repeats):
            where = f"n={n}, repeat={r}"
            try:
                data = forward_sample(truth_net, int(n), derive_seed(seed, 0, n, r))
                boot_seed = derive_seed(seed, 1, n, r)
                profile = edge_confidence(data, learner, m, boot_seed, jobs)
            except Exception as exc:
                raise RuntimeError(f"{where}: {exc}") from exc
            for label, kind, t in parsed:
                if kind == "l1":
                    rep = estimate_threshold(profile)
                elif kind == "adhoc":
                    rep = select_with_adhoc_threshold(profile, t)
                else:
                    try:
                        rep = noise_floor_threshold(data, learner, m, boot_seed, jobs, profile)
                    except Exception as exc:
                        raise RuntimeError(f"{where}, noise floor: {exc}") from exc
                met = compare_to_truth(rep.selected, truth_net.dag, n / p)
                rec = {"n": int(n), "n_over_p": n / p, "repeat": r, "method": label}
                rec.update(asdict(met))
                rec.update(t_hat=rep.t_hat, cutoff=rep.cutoff, n_selected=len(rep.selected))
                result.records.append(rec)
    return result


def threshold_delta_table(result: ExperimentResult, reference: str = "l1") -> list[dict]:
    """Per-cell ``metric(reference) - metric(other)`` for every other method,
    aggregated over repeats (mean and 95% t-interval)."""
    cells: dict[tuple[int, int], dict[str, dict]] = {}
    for rec in result.records:
        cells.setdefault((rec["n"], rec["repeat"]), {})[rec["method"]] = rec
    methods = sorted({rec["method"] for rec in result.records} - {reference})
    deltas: dict[tuple[int, str, str], list[float]] = {}
    n_over_p: dict[int, float] = {}
    for (n, rep), by_method in sorted(cells.items()):
        if reference not in by_method:
            raise MissingCellError(f"n={n}, repeat={rep}: no {reference!r} result")
        ref = by_method[reference]
        n_over_p[n] = ref["n_over_p"]
        for mth in methods:
            if mth not in by_method:
                raise MissingCellError(f"n={n}, repeat={rep}: no {mth!r} result")
            for metric in ("sensitivity", "specificity", "accuracy"):
                deltas.setdefault((n, mth, metric), []).append(ref[metric] - by_method[mth][metric])
    rows = []
    for (n, mth, metric), vals in deltas.items():
        mean, lo, hi = mean_ci(vals)
        rows.append(
            {"n": n, "n_over_p": n_over_p[n], "method": f"{reference}-vs-{mth}",
             "metric": f"delta_{metric}", "mean": mean, "ci_low": lo, "ci_high": hi}
        )
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def format_tsv(rows: Iterable[dict]) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for row in rows:
        lines.append("\t".join(_fmt(row[c]) for c in TSV_COLUMNS))
    return "\n".join(lines) + "\n"
