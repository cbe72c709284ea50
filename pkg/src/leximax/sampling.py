"""Independent Bernoulli cohort sampling and the empirical lower-tail check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .model import Instance, MarginalVector, group_utilities
from .rounding import Cohort

CHUNK = 50_000


def sample_cohort(x: MarginalVector, rng_seed: int) -> Cohort:
    """Include candidate i independently with probability x_i."""
    rng = np.random.default_rng(rng_seed)
    return Cohort.from_indicator(rng.random(len(x.x)) < x.x)


def sample_cohorts(x: MarginalVector, trials: int, rng_seed: int) -> np.ndarray:
    rng = np.random.default_rng(rng_seed)
    return (rng.random((trials, len(x.x))) < x.x).astype(np.int8)


def chernoff_bound(delta: float, n: int) -> float:
    return math.exp(-2.0 * delta * delta / n)


@dataclass(frozen=True)
class GroupTail:
    group: object
    expected_utility: float
    empirical_tail: float
    bound: float
    slack: float  # 4 binomial standard deviations at the bound

    @property
    def within_bound(self) -> bool:
        return self.empirical_tail <= self.bound + self.slack


@dataclass(frozen=True)
class ConcentrationReport:
    delta: float
    trials: int
    seed: int
    groups: tuple

    @property
    def all_within_bound(self) -> bool:
        return all(g.within_bound for g in self.groups)


def tail_counts(instance: Instance, x: MarginalVector, deltas, trials: int, rng_seed: int) -> np.ndarray:
    """Count trials with u(C, G_j) < u(x, G_j) - delta, shape (len(deltas), m).

    One stream of cohorts serves every delta.
    """
    deltas = np.asarray(deltas, dtype=float)
    expected = group_utilities(instance, x)
    thresholds = expected[None, :] - deltas[:, None]
    counts = np.zeros((len(deltas), instance.m), dtype=np.int64)
    rng = np.random.default_rng(rng_seed)
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        picks = (rng.random((size, instance.n)) < x.x).astype(float)
        util = picks @ instance.values
        for d in range(len(deltas)):
            counts[d] += (util < thresholds[d]).sum(axis=0)
        done += size
    return counts


def concentration_report(instance: Instance, x: MarginalVector, delta: float, trials: int,
                         rng_seed: int) -> ConcentrationReport:
    if not delta > 0:
        raise RangeError(f"delta must be positive, got {delta!r}")
    if trials < 1:
        raise RangeError(f"trials must be at least 1, got {trials!r}")
    counts = tail_counts(instance, x, [delta], trials, rng_seed)[0]
    expected = group_utilities(instance, x)
    bound = chernoff_bound(delta, instance.n)
    slack = 4.0 * math.sqrt(bound * (1.0 - bound) / trials)
    groups = tuple(
        GroupTail(gid, float(expected[j]), float(counts[j] / trials), bound, slack)
        for j, gid in enumerate(instance.group_ids)
    )
    return ConcentrationReport(float(delta), int(trials), int(rng_seed), groups)
