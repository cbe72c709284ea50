"""Staged LPs for exact and slack-relaxed leximax marginals.

Stage l maximizes gamma_l: every set of l groups must reach
``T_{l-1} + gamma_l`` and every set of l' < l groups must reach the fixed
target ``T_{l'}``, where ``T_l = sum_{s <= l} (gamma*_s - alpha_s)``.  With
``alpha = 0`` this is the cumulative-sum form of exact leximax.

``leximax_marginals`` / ``approx_leximax_marginals`` generate subset rows
lazily through the separation oracle; ``full_enumeration_reference`` writes
every row out and exists to cross-check the lazy path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionError, InfeasibleStageError, NumericalError, SizeLimitError
from .finite_approx import SlackVector
from .lp_core import OPTIMAL, BoundedSimplex, LpProblem, LpRow, LpSolution, solve
from .model import Instance, MarginalVector
from .separation import SubsetViolation, separate

log = logging.getLogger(__name__)

MAX_ENUMERATION_GROUPS = 12

EXACT = "exact"
RECURSIVE = "recursive"
SIGNIFICANT = "significant"


@dataclass(frozen=True)
class GammaVector:
    gammas: tuple

    @property
    def cumulative(self) -> tuple:
        return tuple(float(c) for c in np.cumsum(self.gammas))

    def __len__(self):
        return len(self.gammas)

    def __iter__(self):
        return iter(self.gammas)


@dataclass(frozen=True)
class LeximaxResult:
    x: MarginalVector
    gamma: GammaVector
    stage_cuts: tuple  # subset rows added during each stage (seed rows included)
    mode: str
    alpha: tuple
    targets: tuple  # relaxed cumulative targets T_1..T_m

    @property
    def total_cuts(self) -> int:
        return int(sum(self.stage_cuts))


def _alpha_tuple(instance: Instance, alpha) -> tuple:
    if alpha is None:
        return (0.0,) * instance.m
    if not isinstance(alpha, SlackVector):
        alpha = SlackVector(tuple(alpha))
    if len(alpha) != instance.m:
        raise DimensionError(f"slack vector has length {len(alpha)}, expected {instance.m}")
    return alpha.alpha


def _row(values: np.ndarray, level: int, groups: tuple, stage: int, targets: list) -> LpRow:
    coef = values[:, list(groups)].sum(axis=1)
    if level < stage:
        return LpRow(coef, 0.0, targets[level - 1])
    base = targets[-1] if targets else 0.0
    return LpRow(coef, 1.0, base)


def _start(instance: Instance) -> np.ndarray:
    return np.full(instance.n, instance.k / instance.n)


def _staged_lazy(instance: Instance, alpha: tuple, mode: str) -> LeximaxResult:
    values = instance.values
    m = instance.m
    cuts: dict = {}  # (level, groups) -> None, insertion ordered
    targets: list = []
    gammas: list = []
    stage_cuts = []
    x_prev = _start(instance)

    for stage in range(1, m + 1):
        added = 0
        if stage == 1:
            for j in range(m):
                cuts[(1, (j,))] = None
                added += 1
        else:
            y = x_prev @ values
            seed = (stage, tuple(sorted(int(g) for g in np.argsort(y, kind="stable")[:stage])))
            cuts[seed] = None
            added += 1
        rows = [_row(values, lv, gs, stage, targets) for lv, gs in cuts]
        engine = BoundedSimplex(LpProblem(instance.n, instance.k, rows), x_prev, 0.0)
        base = targets[-1] if targets else 0.0
        while True:
            sol = engine.optimize()
            if sol.status != OPTIMAL:
                raise InfeasibleStageError(
                    f"stage {stage} LP infeasible", stage=stage, rows=engine.num_rows
                )
            check = separate(instance, sol.x.x, targets + [base + sol.gamma])
            if check.feasible:
                break
            v = check.violation
            if not isinstance(v, SubsetViolation):
                raise NumericalError("LP point fails a box or cardinality check", stage=stage)
            key = (v.level, v.groups)
            if key in cuts:
                raise NumericalError("separation repeated an existing cut", stage=stage,
                                     level=v.level, lhs=v.lhs, rhs=v.rhs)
            cuts[key] = None
            added += 1
            engine.add_row(_row(values, v.level, v.groups, stage, targets))
        log.debug("stage %d: gamma=%.12g cuts=%d pivots=%d", stage, sol.gamma, added, sol.iterations)
        gammas.append(sol.gamma)
        targets.append(base + sol.gamma - alpha[stage - 1])
        stage_cuts.append(added)
        x_prev = sol.x.x

    return LeximaxResult(
        x=sol.x,
        gamma=GammaVector(tuple(gammas)),
        stage_cuts=tuple(stage_cuts),
        mode=mode,
        alpha=alpha,
        targets=tuple(targets),
    )


def leximax_marginals(instance: Instance) -> LeximaxResult:
    """Exact leximax marginals via the lazily cut staged LPs."""
    return _staged_lazy(instance, (0.0,) * instance.m, EXACT)


def approx_leximax_marginals(instance: Instance, alpha, mode: str = RECURSIVE) -> LeximaxResult:
    return _staged_lazy(instance, _alpha_tuple(instance, alpha), mode)


def significant_leximax_marginals(instance: Instance, eps: float) -> LeximaxResult:
    return approx_leximax_marginals(instance, SlackVector.constant(eps, instance.m), SIGNIFICANT)


def full_enumeration_reference(instance: Instance, alpha=None) -> LeximaxResult:
    """Same staged LPs with every subset row materialized up front."""
    m = instance.m
    if m > MAX_ENUMERATION_GROUPS:
        raise SizeLimitError(f"full enumeration needs m <= {MAX_ENUMERATION_GROUPS}, got {m}")
    a = _alpha_tuple(instance, alpha)
    values = instance.values
    subsets = {lv: list(combinations(range(m), lv)) for lv in range(1, m + 1)}
    targets: list = []
    gammas: list = []
    stage_rows = []
    warm = LpSolution(OPTIMAL, MarginalVector(_start(instance), instance.k), 0.0, 0)
    for stage in range(1, m + 1):
        rows = [
            _row(values, lv, gs, stage, targets)
            for lv in range(1, stage + 1)
            for gs in subsets[lv]
        ]
        sol = solve(LpProblem(instance.n, instance.k, rows), warm)
        if sol.status != OPTIMAL:
            raise InfeasibleStageError(f"stage {stage} LP infeasible", stage=stage)
        base = targets[-1] if targets else 0.0
        gammas.append(sol.gamma)
        targets.append(base + sol.gamma - a[stage - 1])
        stage_rows.append(len(subsets[stage]))
        warm = LpSolution(OPTIMAL, sol.x, 0.0, 0)
    mode = EXACT if not any(a) else RECURSIVE
    return LeximaxResult(sol.x, GammaVector(tuple(gammas)), tuple(stage_rows), mode, a, tuple(targets))
