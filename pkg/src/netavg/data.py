"""Categorical datasets and the two resampling schemes used for averaging."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .graph import NodeSet
from .rng import generator


class DataError(ValueError):
    """Invalid or inconsistent data (bad levels, missing values, shape)."""


@dataclass(frozen=True)
class Variable:
    name: str
    levels: tuple[str, ...]

    def __init__(self, name: str, levels: Sequence[str]):
        levels = tuple(str(v) for v in levels)
        if len(levels) < 2:
            raise DataError(f"variable {name!r} needs at least 2 levels, got {list(levels)}")
        if len(set(levels)) != len(levels):
            raise DataError(f"variable {name!r} has duplicate levels {list(levels)}")
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "levels", levels)

    @property
    def cardinality(self) -> int:
        return len(self.levels)


class Dataset:
    """``n`` rows of level indices over ``N`` categorical variables.

    ``codes`` is an ``(n, N)`` ``intc`` array and is made read-only.
    """

    __slots__ = ("variables", "codes", "nodes", "cards")

    def __init__(self, variables: Sequence[Variable], codes, *, allow_empty: bool = False):
        self.variables = tuple(variables)
        self.nodes = NodeSet(v.name for v in self.variables)
        codes = np.array(codes, dtype=np.intc, copy=True)
        if codes.ndim != 2 or codes.shape[1] != len(self.variables):
            raise DataError(
                f"codes must have shape (n, {len(self.variables)}), got {codes.shape}"
            )
        if codes.shape[0] < 1 and not allow_empty:
            raise DataError("dataset has no rows")
        self.cards = np.array([v.cardinality for v in self.variables], dtype=np.intp)
        if codes.size:
            bad = (codes < 0) | (codes >= self.cards[None, :])
            if bad.any():
                i, j = np.argwhere(bad)[0]
                raise DataError(
                    f"row {i}, column {self.variables[j].name!r}: level index {codes[i, j]} "
                    f"out of range for {self.cards[j]} levels"
                )
        codes.setflags(write=False)
        self.codes = codes

    @classmethod
    def from_labels(
        cls,
        names: Sequence[str],
        rows: Sequence[Sequence[str]],
        levels: dict[str, Sequence[str]] | None = None,
    ) -> Dataset:
        """Build from string cells. Levels default to the sorted distinct labels."""
        rows = [list(r) for r in rows]
        for i, r in enumerate(rows):
            if len(r) != len(names):
                raise DataError(f"row {i + 1}: expected {len(names)} fields, got {len(r)}")
            for j, cell in enumerate(r):
                if cell is None or cell == "" or cell == "NA":
                    raise DataError(f"row {i + 1}, column {names[j]!r}: missing value")
        variables, cols = [], []
        for j, name in enumerate(names):
            col = [r[j] for r in rows]
            lv = list(levels[name]) if levels and name in levels else sorted(set(col))
            if len(lv) < 2:
                raise DataError(
                    f"column {name!r} has a single observed level {lv}; "
                    "declare its level set (e.g. via a network file)"
                )
            lookup = {v: k for k, v in enumerate(lv)}
            try:
                cols.append([lookup[c] for c in col])
            except KeyError as exc:
                row = col.index(exc.args[0]) + 1
                raise DataError(
                    f"row {row}, column {name!r}: unknown level {exc.args[0]!r}"
                ) from None
            variables.append(Variable(name, lv))
        codes = np.array(cols, dtype=np.intc).T.reshape(len(rows), len(names))
        return cls(variables, codes)

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def names(self) -> tuple[str, ...]:
        return self.nodes.names

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, variables={list(self.names)})"

    def column(self, key: int | str) -> int:
        return self.nodes.index(key) if isinstance(key, str) else int(key)

    def labels(self) -> list[list[str]]:
        return [
            [self.variables[j].levels[c] for j, c in enumerate(row)] for row in self.codes.tolist()
        ]

    def with_codes(self, codes) -> Dataset:
        return Dataset(self.variables, codes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Dataset)
            and self.variables == other.variables
            and np.array_equal(self.codes, other.codes)
        )

    __hash__ = None


def bootstrap_resample(data: Dataset, seed: int) -> Dataset:
    """Nonparametric bootstrap: ``n`` rows drawn uniformly with replacement."""
    rows = generator(seed).integers(0, data.n, size=data.n)
    return data.with_codes(data.codes[rows])


def permute_columns(data: Dataset, seed: int) -> Dataset:
    """Shuffle every column independently; column ``j`` uses stream ``(seed, j)``."""
    out = np.empty_like(data.codes)
    for j in range(data.codes.shape[1]):
        out[:, j] = generator(seed, j).permutation(data.codes[:, j])
    return data.with_codes(out)


def contingency_counts(data: Dataset, x, y, z: Sequence = ()) -> np.ndarray:
    """Counts over (levels of x) x (levels of y) x (joint levels of z, row-major)."""
    xi, yi = data.column(x), data.column(y)
    zi = [data.column(c) for c in z]
    if xi == yi:
        raise ValueError("x and y must differ")
    if xi in zi or yi in zi:
        raise ValueError("conditioning set must exclude x and y")
    return kernels.cross_counts(data.codes, xi, yi, zi, data.cards)
