"""Structure learners mapping a ``Dataset`` to a ``LearnedStructure``."""

from __future__ import annotations

from ..data import Dataset
from .config import ALGORITHMS, CI_TESTS, LearnedStructure, LearnerConfig
from .constraint import iamb, mmpc
from .hc import hill_climb
from .mmhc import mmhc

_DISPATCH = {"hc": hill_climb, "iamb": iamb, "mmhc": mmhc}


def learn(data: Dataset, config: LearnerConfig) -> LearnedStructure:
    if len(data.variables) < 2:
        raise ValueError("structure learning needs at least 2 variables")
    return _DISPATCH[config.algorithm](data, config)


__all__ = [
    "ALGORITHMS",
    "CI_TESTS",
    "LearnedStructure",
    "LearnerConfig",
    "hill_climb",
    "iamb",
    "learn",
    "mmhc",
    "mmpc",
]
