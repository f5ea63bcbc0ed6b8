"""Max-Min Hill Climbing: MMPC candidate sets, then BDeu hill climbing
restricted to candidate pairs."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from .config import LearnedStructure, LearnerConfig
from .constraint import mmpc
from .hc import hill_climb


def mmhc(data: Dataset, config: LearnerConfig | None = None) -> LearnedStructure:
    config = config or LearnerConfig(algorithm="mmhc")
    n = len(data.variables)
    pc, tests = mmpc(data, config)
    allowed = np.zeros((n, n), dtype=bool)
    for x, cands in enumerate(pc):
        for y in cands:
            allowed[x, y] = allowed[y, x] = True
    res = hill_climb(data, config, allowed=allowed)
    diag = dict(res.diagnostics)
    diag.update(
        algorithm="mmhc",
        tests=tests,
        candidates={data.names[i]: [data.names[j] for j in sorted(c)] for i, c in enumerate(pc)},
    )
    return LearnedStructure(res.dag, diag)
