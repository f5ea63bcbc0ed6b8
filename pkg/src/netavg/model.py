"""Discrete Bayesian networks: CPTs, parameter counting, forward sampling."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .data import Dataset, Variable
from .graph import Dag, NodeSet, topological_sort
from .rng import generator

ROW_TOL = 1e-9
RENORM_TOL = 1e-6
MAX_JOINT_STATES = 10**6


class NetworkError(ValueError):
    """Inconsistent network definition."""


class StateSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cpt:
    """``table[j, k] = P(child = k | parents in configuration j)``.

    Parent configurations are row-major over ``parents`` in listed order (the
    last parent varies fastest).
    """

    child: int
    parents: tuple[int, ...]
    table: np.ndarray

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cpt)
            and self.child == other.child
            and self.parents == other.parents
            and np.array_equal(self.table, other.table)
        )


def _check_rows(name: str, table: np.ndarray) -> np.ndarray:
    if (table < 0).any():
        raise NetworkError(f"CPT of {name!r} has negative entries")
    sums = table.sum(axis=1)
    err = np.abs(sums - 1.0)
    if (err > RENORM_TOL).any():
        j = int(np.argmax(err))
        raise NetworkError(f"CPT of {name!r}: row {j} sums to {sums[j]!r}")
    if (err > ROW_TOL).any():
        warnings.warn(f"renormalising CPT rows of {name!r} (max error {err.max():.2e})")
        table = table / sums[:, None]
    return table


class DiscreteBayesNet:
    def __init__(self, dag: Dag, variables: Sequence[Variable], cpts: Sequence[Cpt]):
        variables = tuple(variables)
        if tuple(v.name for v in variables) != dag.nodes.names:
            raise NetworkError("variable names must match the DAG node order")
        by_child = {c.child: c for c in cpts}
        if sorted(by_child) != list(range(len(variables))):
            raise NetworkError("need exactly one CPT per node")
        cards = [v.cardinality for v in variables]
        fixed = []
        for i, var in enumerate(variables):
            cpt = by_child[i]
            if set(cpt.parents) != set(dag.parents(i)) or len(set(cpt.parents)) != len(cpt.parents):
                raise NetworkError(
                    f"CPT parents of {var.name!r} {[variables[p].name for p in cpt.parents]} "
                    f"do not match DAG parents {[variables[p].name for p in dag.parents(i)]}"
                )
            q = int(np.prod([cards[p] for p in cpt.parents], dtype=np.int64))
            table = np.asarray(cpt.table, dtype=float)
            if table.shape != (q, cards[i]):
                raise NetworkError(
                    f"CPT of {var.name!r} has shape {table.shape}, expected {(q, cards[i])}"
                )
            table = _check_rows(var.name, table)
            table.setflags(write=False)
            fixed.append(Cpt(i, tuple(cpt.parents), table))
        self.dag = dag
        self.variables = variables
        self.cpts = tuple(fixed)
        self.cards = np.array(cards, dtype=np.intp)

    @property
    def nodes(self) -> NodeSet:
        return self.dag.nodes

    def __repr__(self) -> str:
        return f"DiscreteBayesNet(nodes={len(self.variables)}, edges={len(self.dag.edges)})"


def parameter_count(net: DiscreteBayesNet) -> int:
    """Free parameters: sum over nodes of (r_i - 1) * prod(parent cardinalities)."""
    total = 0
    for cpt in net.cpts:
        q = 1
        for p in cpt.parents:
            q *= int(net.cards[p])
        total += (int(net.cards[cpt.child]) - 1) * q
    return total


def forward_sample(net: DiscreteBayesNet, n: int, seed: int) -> Dataset:
    """Ancestral sampling with inverse-CDF draws; one uniform vector per node in
    topological order from a PCG64 stream seeded with ``seed``."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    rng = generator(seed)
    codes = np.zeros((n, len(net.variables)), dtype=np.intc)
    for v in topological_sort(net.dag):
        cpt = net.cpts[v]
        rows = kernels.config_index(codes, cpt.parents, net.cards)
        cum = np.cumsum(cpt.table, axis=1)
        cum[:, -1] = 1.0
        u = rng.random(n)
        draw = (u[:, None] >= cum[rows]).sum(axis=1)
        codes[:, v] = np.minimum(draw, net.cards[v] - 1)
    return Dataset(net.variables, codes)


def exact_joint(net: DiscreteBayesNet) -> dict[tuple[int, ...], float]:
    """Full joint distribution by the chain rule, keyed by level-index tuples."""
    size = int(np.prod(net.cards, dtype=np.float64))
    if size > MAX_JOINT_STATES:
        raise StateSpaceTooLarge(f"{size} joint states exceeds {MAX_JOINT_STATES}")
    configs = np.array(list(itertools.product(*[range(r) for r in net.cards])), dtype=np.intc)
    prob = np.ones(len(configs))
    for cpt in net.cpts:
        rows = kernels.config_index(configs, cpt.parents, net.cards)
        prob *= cpt.table[rows, configs[:, cpt.child]]
    return {tuple(c): float(p) for c, p in zip(configs.tolist(), prob)}
