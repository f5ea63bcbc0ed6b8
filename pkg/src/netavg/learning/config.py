from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

from ..graph import Dag

ALGORITHMS = ("hc", "iamb", "mmhc")
CI_TESTS = ("mi-sh", "mi")


@dataclass(frozen=True)
class LearnerConfig:
    """Settings for one structure learner.

    ``test`` is ``"mi-sh"`` (shrinkage MI) or ``"mi"`` (asymptotic G^2).
    ``restarts``/``perturb`` add random-restart hill climbing on top of the plain
    greedy search (both 0 by default). ``max_cond`` caps conditioning-set sizes in
    the constraint-based phases; ``None`` means no cap.
    """

    algorithm: str = "hc"
    alpha: float = 0.05
    ess: float = 10.0
    test: str = "mi-sh"
    restarts: int = 0
    perturb: int = 1
    max_parents: int | None = None
    max_cond: int | None = None
    max_iter: int | None = None
    seed: int = 0

    def __post_init__(self):
        algo = self.algorithm.lower()
        object.__setattr__(self, "algorithm", algo)
        errors = []
        if algo not in ALGORITHMS:
            errors.append(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not 0.0 < self.alpha < 1.0:
            errors.append(f"alpha must be in (0, 1), got {self.alpha}")
        if not self.ess > 0:
            errors.append(f"ess must be positive, got {self.ess}")
        if self.test not in CI_TESTS:
            errors.append(f"test must be one of {CI_TESTS}, got {self.test!r}")
        for name in ("restarts", "perturb"):
            if getattr(self, name) < 0:
                errors.append(f"{name} must be >= 0")
        for name in ("max_parents", "max_cond", "max_iter"):
            val = getattr(self, name)
            if val is not None and val < 0:
                errors.append(f"{name} must be >= 0 or None")
        if errors:
            raise ValueError("; ".join(errors))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class LearnedStructure:
    dag: Dag
    diagnostics: dict[str, Any] = field(default_factory=dict)
