"""Dependent rounding of marginals to a cohort of exactly k members.

Each step takes the two lowest-index fractional coordinates (i, j) and moves
probability mass between them so that at least one becomes 0 or 1, choosing
the direction with the probabilities that keep E[x_i] and E[x_j] fixed.
The sum never changes, so the result has exactly sum(x) ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import MarginalVector

SNAP_TOL = 1e-9
INTEGRAL_TOL = 1e-9


@dataclass(frozen=True)
class Cohort:
    selected: tuple
    indicator: np.ndarray

    def __post_init__(self):
        ind = np.asarray(self.indicator, dtype=np.int8)
        ind.setflags(write=False)
        object.__setattr__(self, "indicator", ind)
        object.__setattr__(self, "selected", tuple(int(i) for i in self.selected))

    @classmethod
    def from_indicator(cls, indicator) -> "Cohort":
        ind = np.asarray(indicator, dtype=np.int8)
        return cls(tuple(np.flatnonzero(ind)), ind)

    def __len__(self):
        return len(self.selected)


def _snap(x: np.ndarray) -> None:
    x[np.abs(x) <= SNAP_TOL] = 0.0
    x[np.abs(x - 1.0) <= SNAP_TOL] = 1.0


def _target_size(x: np.ndarray) -> int:
    total = float(x.sum())
    k = round(total)
    if abs(total - k) > INTEGRAL_TOL:
        raise ValidationError(f"marginals sum to {total!r}, which is not an integer")
    return int(k)


def dependent_round_many(x, trials: int, rng_seed: int) -> np.ndarray:
    """Round ``trials`` independent copies of ``x``; returns a (trials, n) 0/1 array.

    All copies share one generator and one pass over the pairing steps, so a
    million small roundings stay cheap.
    """
    xs = np.array(x.x if isinstance(x, MarginalVector) else x, dtype=float)
    k = _target_size(xs)
    rng = np.random.default_rng(rng_seed)
    work = np.tile(xs, (trials, 1))
    _snap(work)
    rows = np.arange(trials)
    n = xs.shape[0]
    for _ in range(n):
        frac = (work > 0.0) & (work < 1.0)
        counts = frac.sum(axis=1)
        active = counts >= 2
        if not active.any():
            break
        r = rows[active]
        f = frac[active]
        i = f.argmax(axis=1)
        f[np.arange(len(r)), i] = False
        j = f.argmax(axis=1)
        xi = work[r, i]
        xj = work[r, j]
        up = np.minimum(1.0 - xi, xj)
        down = np.minimum(xi, 1.0 - xj)
        take_up = rng.random(len(r)) * (up + down) < down
        new_i = np.where(take_up, xi + up, xi - down)
        new_j = np.where(take_up, xj - up, xj + down)
        # the coordinate that hit its bound is set exactly
        new_i = np.where(take_up & (up == 1.0 - xi), 1.0, new_i)
        new_j = np.where(take_up & (up == xj), 0.0, new_j)
        new_i = np.where(~take_up & (down == xi), 0.0, new_i)
        new_j = np.where(~take_up & (down == 1.0 - xj), 1.0, new_j)
        work[r, i] = new_i
        work[r, j] = new_j
        _snap(work)
    # a single leftover fractional entry can only be rounding residue
    out = np.rint(work).astype(np.int8)
    sizes = out.sum(axis=1)
    if np.any(sizes != k):
        bad = int(np.flatnonzero(sizes != k)[0])
        raise ValidationError(f"rounding produced size {sizes[bad]} instead of {k} (trial {bad})")
    return out


def dependent_round(x, rng_seed: int) -> Cohort:
    return Cohort.from_indicator(dependent_round_many(x, 1, rng_seed)[0])
