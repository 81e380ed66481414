"""Budget constants and run configuration."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from .exceptions import InputError

ENV_PREFIX = "DAGCOVER_"


def log2_floor1(x: float) -> float:
    """log2(x), but never below 1 (keeps size budgets meaningful for tiny inputs)."""
    return max(1.0, math.log2(x)) if x > 0 else 1.0


@dataclass(frozen=True)
class BudgetConstants:
    """Constants in the size budgets of the planar construction.

    ``c1`` bounds paths per vertex, ``c2`` portals per (vertex, path),
    ``c3`` centers per vertex and ``c4`` the extra-edge total. Unset ``c3``
    and ``c4`` follow from the others: every center comes from a (path,
    portal, hierarchy level) triple, and every member costs at most three
    gadget edges in each of two dags.
    """

    c1: float = 8.0
    c2: float = 8.0
    c3: float | None = None
    c4: float | None = None

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4"):
            val = getattr(self, name)
            if val is not None and not (val > 0 and math.isfinite(val)):
                raise InputError(f"constant {name} must be positive, got {val!r}")
        if self.c3 is None:
            object.__setattr__(self, "c3", 2 * self.c1 * self.c2)
        if self.c4 is None:
            object.__setattr__(self, "c4", 6 * self.c3)

    @classmethod
    def from_env(cls, environ=None) -> "BudgetConstants":
        """Read ``DAGCOVER_C1`` .. ``DAGCOVER_C4`` overrides."""
        environ = os.environ if environ is None else environ
        vals = {}
        for name in ("c1", "c2", "c3", "c4"):
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is None or raw == "":
                continue
            try:
                vals[name] = float(raw)
            except ValueError:
                raise InputError(f"{ENV_PREFIX}{name.upper()}={raw!r} is not a number") from None
        return cls(**vals)

    def paths_per_vertex(self, n: int, phi: float) -> float:
        return self.c1 * log2_floor1(n) * log2_floor1(phi)

    def portals_per_path(self, eps: float) -> float:
        return self.c2 / eps

    def centers_per_vertex(self, n: int, eps: float, phi: float) -> float:
        return self.c3 / eps * log2_floor1(phi) * log2_floor1(n) ** 2

    def extra_edges(self, n: int, eps: float, phi: float) -> float:
        return self.c4 * n / eps * log2_floor1(n) ** 2 * log2_floor1(phi)

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4}


@dataclass
class RunConfig:
    """Everything one CLI invocation needs; the seed fixes every random choice."""

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    eps: float | None = None
    t: float | None = None
    seed: int = 0
    threads: int = 1
    constants: BudgetConstants = field(default_factory=BudgetConstants)
