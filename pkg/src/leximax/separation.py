"""Separation oracle for the subset-sum constraints of the staged LPs.

For a level l the LP requires every set of l groups to have total utility at
least T_l.  The l groups with the smallest utilities have the smallest such
total, so checking that one prefix per level certifies all C(m, l) rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .lp_core import FEAS_TOL
from .model import Instance

FEASIBLE = "feasible"
VIOLATED = "violated"


@dataclass(frozen=True)
class BoxViolation:
    index: int


@dataclass(frozen=True)
class CardinalityViolation:
    total: float


@dataclass(frozen=True)
class SubsetViolation:
    level: int
    groups: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class SeparationResult:
    verdict: str
    violation: BoxViolation | CardinalityViolation | SubsetViolation | None = None

    @property
    def feasible(self) -> bool:
        return self.verdict == FEASIBLE


def separate(instance: Instance, x, gamma_targets, tol: float = FEAS_TOL) -> SeparationResult:
    """Return the first violated constraint for ``x``, or feasible.

    ``gamma_targets[l - 1]`` is the right-hand side every size-l group set must
    reach.  Levels beyond ``len(gamma_targets)`` are not checked.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (instance.n,):
        raise DimensionError(f"x has shape {x.shape}, expected ({instance.n},)")
    targets = np.asarray(gamma_targets, dtype=float)
    if targets.ndim != 1 or len(targets) > instance.m:
        raise DimensionError(f"need at most {instance.m} targets, got {targets.shape}")

    for i, xi in enumerate(x):
        if xi < -tol or xi > 1.0 + tol:
            return SeparationResult(VIOLATED, BoxViolation(i))
    total = float(x.sum())
    if abs(total - instance.k) > tol:
        return SeparationResult(VIOLATED, CardinalityViolation(total))

    y = x @ instance.values
    order = np.argsort(y, kind="stable")
    prefix = 0.0
    for level, target in enumerate(targets, start=1):
        prefix += y[order[level - 1]]
        if prefix < target - tol:
            groups = tuple(sorted(int(g) for g in order[:level]))
            return SeparationResult(VIOLATED, SubsetViolation(level, groups, float(prefix), float(target)))
    return SeparationResult(FEASIBLE)
