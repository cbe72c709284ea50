"""Definition checkers and brute-force oracles over explicit finite solution sets.

All threshold tests are written in "gap" form, ``hi - lo > eps`` or
``hi - lo <= eps``, so that every checker evaluates the same floating-point
expression for the same pair of utilities.  Test instances on coarse decimal
grids then behave exactly as the real-number definitions do.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DimensionError, RangeError, ValidationError
from .model import FiniteInstance


@dataclass(frozen=True)
class SlackVector:
    alpha: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        if any(not np.isfinite(a) or a < 0 for a in alpha):
            raise RangeError(f"slack entries must be finite and non-negative: {alpha}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def constant(cls, eps: float, m: int) -> "SlackVector":
        return cls((eps,) * m)

    def __len__(self):
        return len(self.alpha)

    def __iter__(self):
        return iter(self.alpha)


@dataclass(frozen=True)
class RecursiveChain:
    """Nested solution sets S_0 >= S_1 >= ... >= S_m and the maximum seen at each level."""

    sets: tuple
    level_maxima: tuple

    @property
    def final(self) -> frozenset:
        return self.sets[-1]


@dataclass(frozen=True)
class NoiseMatrix:
    delta: float
    noise: np.ndarray

    def __post_init__(self):
        if not self.delta >= 0:
            raise RangeError(f"noise bound must be non-negative, got {self.delta!r}")
        noise = np.array(self.noise, dtype=float)
        if noise.ndim != 2:
            raise DimensionError(f"noise must be a 2-d matrix, got shape {noise.shape}")
        over = np.argwhere(np.abs(noise) > self.delta)
        if over.size:
            r, c = over[0]
            raise RangeError(f"noise[{r}][{c}] = {noise[r, c]!r} exceeds bound {self.delta!r}")
        noise.setflags(write=False)
        object.__setattr__(self, "noise", noise)

    @classmethod
    def random(cls, rng: np.random.Generator, shape, delta: float) -> "NoiseMatrix":
        return cls(delta, rng.uniform(-delta, delta, size=shape))


def sorted_matrix(inst: FiniteInstance) -> np.ndarray:
    """Row s holds u(S_s, G_[1]) <= ... <= u(S_s, G_[m])."""
    return np.sort(inst.utilities, axis=1, kind="stable")


def _as_alpha(alpha, m: int) -> tuple:
    if not isinstance(alpha, SlackVector):
        alpha = SlackVector(tuple(alpha))
    if len(alpha) != m:
        raise DimensionError(f"slack vector has length {len(alpha)}, expected {m}")
    return alpha.alpha


def _check_solution(inst: FiniteInstance, s: int) -> None:
    if not 0 <= s < inst.num_solutions:
        raise DimensionError(f"solution index {s} outside [0, {inst.num_solutions})")


def exact_leximax_set(inst: FiniteInstance) -> frozenset:
    rows = [tuple(r) for r in sorted_matrix(inst).tolist()]
    best = max(rows)
    return frozenset(i for i, r in enumerate(rows) if r == best)


def is_sig_tradeoff(inst: FiniteInstance, s: int, eps1: float, eps2: float) -> bool:
    """Every eps1-large gain by another solution must cost a worse-off rank more than eps2."""
    if eps1 < 0 or eps2 < 0:
        raise RangeError("eps1 and eps2 must be non-negative")
    _check_solution(inst, s)
    u = sorted_matrix(inst).tolist()
    mine = u[s]
    m = inst.m
    for other in u:
        for i in range(m):
            if other[i] - mine[i] > eps1:
                if not any(mine[j] - other[j] > eps2 for j in range(i)):
                    return False
    return True


def is_tradeoff_approx(inst: FiniteInstance, s: int, eps: float) -> bool:
    if eps < 0:
        raise RangeError("eps must be non-negative")
    _check_solution(inst, s)
    u = sorted_matrix(inst).tolist()
    mine = u[s]
    for other in u:
        for i in range(inst.m):
            if other[i] - mine[i] > eps and not any(mine[j] > other[j] for j in range(i)):
                return False
    return True


def recursive_chain(inst: FiniteInstance, alpha) -> RecursiveChain:
    a = _as_alpha(alpha, inst.m)
    u = sorted_matrix(inst)
    current = frozenset(range(inst.num_solutions))
    sets = [current]
    maxima = []
    for i in range(inst.m):
        top = max(u[t, i] for t in current)
        current = frozenset(t for t in current if top - u[t, i] <= a[i])
        sets.append(current)
        maxima.append(float(top))
    return RecursiveChain(tuple(sets), tuple(maxima))


def greedy_slack(inst: FiniteInstance, s: int) -> tuple:
    """Smallest slack at each level that keeps ``s`` in the chain.

    Any larger slack at a level only admits more competitors, which can only
    raise later maxima, so these values are the cheapest possible certificate.
    """
    _check_solution(inst, s)
    u = sorted_matrix(inst)
    current = range(inst.num_solutions)
    alpha = []
    for i in range(inst.m):
        top = max(u[t, i] for t in current)
        need = top - u[s, i]
        alpha.append(float(need))
        current = [t for t in current if top - u[t, i] <= need]
    return tuple(alpha)


def is_recursive_approx(inst: FiniteInstance, s: int, eps: float) -> bool:
    if eps < 0:
        raise RangeError("eps must be non-negative")
    return all(a <= eps for a in greedy_slack(inst, s))


def significant_set(inst: FiniteInstance, eps: float) -> frozenset:
    if eps < 0:
        raise RangeError("eps must be non-negative")
    return recursive_chain(inst, SlackVector.constant(eps, inst.m)).final


def is_function_slack_significant(inst: FiniteInstance, s: int, a1: float, a2: float) -> bool:
    """Whether some per-solution slack with values in [a1, a2] keeps ``s`` to the end.

    At each level a competitor within a1 of the maximum must stay, one more
    than a2 below must go, and anything in between may go either way.  Keeping
    a competitor can help ``s`` later (it may push out a stronger rival at the
    next level), so no fixed keep/drop rule is optimal and the free choices are
    searched exhaustively.
    """
    if a1 < 0:
        raise RangeError("a1 must be non-negative")
    if a1 > a2:
        raise ValidationError(f"a1={a1} exceeds a2={a2}")
    _check_solution(inst, s)
    u = sorted_matrix(inst)
    m = inst.m

    @lru_cache(maxsize=None)
    def survives(level: int, members: frozenset) -> bool:
        if level == m:
            return True
        col = u[:, level]
        top = max(col[t] for t in members)
        if top - col[s] > a2:
            return False
        forced = []
        optional = []
        for t in members:
            if t == s:
                continue
            gap = top - col[t]
            if gap <= a1:
                forced.append(t)
            elif gap <= a2:
                optional.append(t)
        base = frozenset(forced) | {s}
        for r in range(len(optional) + 1):
            for extra in combinations(optional, r):
                if survives(level + 1, base | frozenset(extra)):
                    return True
        return False

    return survives(0, frozenset(range(inst.num_solutions)))


def is_elementwise_approx(inst: FiniteInstance, s: int, a: float) -> bool:
    if a < 0:
        raise RangeError("a must be non-negative")
    _check_solution(inst, s)
    u = sorted_matrix(inst)
    ref = u[min(exact_leximax_set(inst))]
    return max(float(r - v) for r, v in zip(ref, u[s])) <= a


def perturb(inst: FiniteInstance, noise: NoiseMatrix) -> FiniteInstance:
    """Add bounded noise entrywise.  The result is deliberately not clamped to [0, 1]."""
    if noise.noise.shape != inst.utilities.shape:
        raise DimensionError(
            f"noise has shape {noise.noise.shape}, utilities have {inst.utilities.shape}"
        )
    return FiniteInstance(
        inst.solution_ids,
        inst.group_ids,
        inst.utilities + noise.noise,
        bounded=False,
    )


def random_finite_instance(rng: np.random.Generator, num_solutions: int, m: int,
                           grid: float = 0.05) -> FiniteInstance:
    steps = int(round(1.0 / grid))
    return FiniteInstance.from_utilities(rng.integers(0, steps + 1, size=(num_solutions, m)) / steps)
