"""Exhaustive integer cohort solvers for toy instances, plus the hitting-set reduction."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import CardinalityError, SizeLimitError, ValidationError
from .model import Instance

MAX_CANDIDATES = 20


@dataclass(frozen=True)
class IntegerLeximaxResult:
    cohorts: tuple  # each a sorted tuple of candidate indices
    sorted_vector: tuple


@dataclass(frozen=True)
class IntegerMaxminResult:
    value: float
    cohorts: tuple


def _cohort_utilities(instance: Instance, k: int):
    n = instance.n
    if n > MAX_CANDIDATES:
        raise SizeLimitError(f"brute force limited to n <= {MAX_CANDIDATES}, got {n}")
    if not 1 <= k <= n:
        raise CardinalityError(f"k={k} outside [1, {n}]")
    combos = np.fromiter(
        (i for c in combinations(range(n), k) for i in c), dtype=np.int64, count=comb(n, k) * k
    ).reshape(-1, k)
    # summed in candidate order, so equal cohorts always give identical floats
    util = instance.values[combos].sum(axis=1)
    return combos, util


def integer_leximax_bruteforce(instance: Instance, k: int | None = None) -> IntegerLeximaxResult:
    k = instance.k if k is None else k
    combos, util = _cohort_utilities(instance, k)
    srt = np.sort(util, axis=1)
    # lexsort keys: last key is primary
    order = np.lexsort(srt.T[::-1])
    best = srt[order[-1]]
    hit = np.all(srt == best, axis=1)
    cohorts = tuple(tuple(int(i) for i in combos[r]) for r in np.flatnonzero(hit))
    return IntegerLeximaxResult(cohorts, tuple(float(v) for v in best))


def integer_maxmin_bruteforce(instance: Instance, k: int | None = None) -> IntegerMaxminResult:
    k = instance.k if k is None else k
    combos, util = _cohort_utilities(instance, k)
    worst = util.min(axis=1)
    value = worst.max()
    cohorts = tuple(tuple(int(i) for i in combos[r]) for r in np.flatnonzero(worst == value))
    return IntegerMaxminResult(float(value), cohorts)


def hitting_set_to_instance(universe, collection, k: int = 1) -> Instance:
    """Candidate per universe element, group per set, v_ij = 1 iff element i is in set j."""
    universe = list(universe)
    collection = [frozenset(c) for c in collection]
    if not universe or not collection:
        raise ValidationError("universe and collection must both be nonempty")
    index = {e: i for i, e in enumerate(universe)}
    if len(index) != len(universe):
        raise ValidationError("universe has repeated elements")
    values = np.zeros((len(universe), len(collection)))
    for j, members in enumerate(collection):
        for e in members:
            if e not in index:
                raise ValidationError(f"set {j} contains {e!r}, which is not in the universe")
            values[index[e], j] = 1.0
    return Instance(
        candidate_ids=tuple(str(e) for e in universe),
        group_ids=tuple(f"C{j + 1}" for j in range(len(collection))),
        values=values,
        k=k,
    )


def min_k_with_full_cover(instance: Instance) -> int | None:
    """Smallest k whose best integer cohort gives every group utility >= 1."""
    for k in range(1, instance.n + 1):
        if integer_maxmin_bruteforce(instance, k).value >= 1.0:
            return k
    return None


def min_hitting_set_size(universe, collection) -> int | None:
    universe = list(universe)
    sets = [frozenset(c) for c in collection]
    for size in range(1, len(universe) + 1):
        for pick in combinations(universe, size):
            chosen = set(pick)
            if all(chosen & s for s in sets):
                return size
    return None
