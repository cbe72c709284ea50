"""Core domain types and lexicographic-order semantics.

Comparisons here are exact floating-point comparisons.  Anything that needs a
tolerance takes it as an explicit argument.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .errors import (
    CardinalityError,
    DimensionError,
    DuplicateIdError,
    RangeError,
    ValidationError,
)

MARGINAL_SUM_TOL = 1e-9


class Order(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _frozen_matrix(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise RangeError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _check_unit_range(arr: np.ndarray, name: str) -> None:
    bad = np.argwhere((arr < 0.0) | (arr > 1.0))
    if bad.size:
        r, c = bad[0]
        raise RangeError(f"{name}[{r}][{c}] = {arr[r, c]!r} outside [0, 1]")


def _check_unique(ids: Sequence[Hashable], name: str) -> None:
    seen = set()
    for ident in ids:
        if ident in seen:
            raise DuplicateIdError(f"duplicate identifier {ident!r} in {name}")
        seen.add(ident)


@dataclass(frozen=True)
class Instance:
    """Candidate pool, groups, per-candidate group values and target size k."""

    candidate_ids: tuple
    group_ids: tuple
    values: np.ndarray
    k: int

    def __post_init__(self):
        object.__setattr__(self, "candidate_ids", tuple(self.candidate_ids))
        object.__setattr__(self, "group_ids", tuple(self.group_ids))
        values = _frozen_matrix(self.values, "values")
        object.__setattr__(self, "values", values)
        n, m = len(self.candidate_ids), len(self.group_ids)
        if n < 1 or m < 1:
            raise DimensionError(f"need at least one candidate and one group (n={n}, m={m})")
        if values.shape != (n, m):
            raise DimensionError(f"values has shape {values.shape}, expected ({n}, {m})")
        _check_unit_range(values, "values")
        _check_unique(self.candidate_ids, "candidates")
        _check_unique(self.group_ids, "groups")
        if isinstance(self.k, bool) or int(self.k) != self.k:
            raise CardinalityError(f"k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if not 1 <= self.k <= n:
            raise CardinalityError(f"k={self.k} outside [1, n={n}]")

    @classmethod
    def from_values(cls, values, k: int) -> "Instance":
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 2:
            raise DimensionError(f"values must be a 2-d matrix, got shape {arr.shape}")
        n, m = arr.shape
        return cls(
            candidate_ids=tuple(f"c{i + 1}" for i in range(n)),
            group_ids=tuple(f"G{j + 1}" for j in range(m)),
            values=arr,
            k=k,
        )

    @property
    def n(self) -> int:
        return len(self.candidate_ids)

    @property
    def m(self) -> int:
        return len(self.group_ids)

    def with_k(self, k: int) -> "Instance":
        return Instance(self.candidate_ids, self.group_ids, self.values, k)


@dataclass(frozen=True)
class FiniteInstance:
    """An explicit finite solution set with its utility matrix."""

    solution_ids: tuple
    group_ids: tuple
    utilities: np.ndarray
    # perturbed instances may leave [0, 1]; everything else must stay inside
    bounded: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "solution_ids", tuple(self.solution_ids))
        object.__setattr__(self, "group_ids", tuple(self.group_ids))
        utilities = _frozen_matrix(self.utilities, "utilities")
        object.__setattr__(self, "utilities", utilities)
        s, m = len(self.solution_ids), len(self.group_ids)
        if s < 1 or m < 1:
            raise DimensionError(f"need at least one solution and one group (|S|={s}, m={m})")
        if utilities.shape != (s, m):
            raise DimensionError(f"utilities has shape {utilities.shape}, expected ({s}, {m})")
        if self.bounded:
            _check_unit_range(utilities, "utilities")
        _check_unique(self.solution_ids, "solutions")
        _check_unique(self.group_ids, "groups")

    @classmethod
    def from_utilities(cls, utilities) -> "FiniteInstance":
        arr = np.asarray(utilities, dtype=float)
        if arr.ndim != 2:
            raise DimensionError(f"utilities must be a 2-d matrix, got shape {arr.shape}")
        s, m = arr.shape
        return cls(
            solution_ids=tuple(f"S{i + 1}" for i in range(s)),
            group_ids=tuple(f"G{j + 1}" for j in range(m)),
            utilities=arr,
        )

    @property
    def num_solutions(self) -> int:
        return len(self.solution_ids)

    @property
    def m(self) -> int:
        return len(self.group_ids)


@dataclass(frozen=True)
class MarginalVector:
    """Per-candidate selection probabilities summing to k."""

    x: np.ndarray
    k: float

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.ndim != 1:
            raise DimensionError(f"marginals must be a vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise RangeError("marginals contain non-finite entries")
        bad = np.flatnonzero((x < 0.0) | (x > 1.0))
        if bad.size:
            i = bad[0]
            raise RangeError(f"x[{i}] = {x[i]!r} outside [0, 1]")
        if abs(x.sum() - self.k) > MARGINAL_SUM_TOL:
            raise ValidationError(f"marginals sum to {x.sum()!r}, expected k={self.k}")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class SortedUtilityVector:
    entries: tuple
    permutation: tuple = field(default=())

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def group_utilities(instance: Instance, x) -> np.ndarray:
    """Expected utility of every group under marginals ``x``."""
    xs = x.x if isinstance(x, MarginalVector) else np.asarray(x, dtype=float)
    if xs.shape != (instance.n,):
        raise DimensionError(f"x has shape {xs.shape}, expected ({instance.n},)")
    return xs @ instance.values


def group_utility(instance: Instance, x, j: int) -> float:
    if not 0 <= j < instance.m:
        raise DimensionError(f"group index {j} outside [0, {instance.m})")
    return float(group_utilities(instance, x)[j])


def sorted_utilities(row) -> SortedUtilityVector:
    if isinstance(row, SortedUtilityVector):
        row = row.entries
    arr = np.asarray(row, dtype=float)
    perm = np.argsort(arr, kind="stable")
    return SortedUtilityVector(
        entries=tuple(float(v) for v in arr[perm]),
        permutation=tuple(int(p) for p in perm),
    )


def lex_compare(u, v, tol: float = 0.0) -> Order:
    """Compare two vectors lexicographically.

    Entries whose difference is at most ``tol`` count as equal.
    """
    a = tuple(u)
    b = tuple(v)
    if len(a) != len(b):
        raise DimensionError(f"cannot compare vectors of length {len(a)} and {len(b)}")
    for ai, bi in zip(a, b):
        if abs(ai - bi) <= tol:
            continue
        return Order.GREATER if ai > bi else Order.LESS
    return Order.EQUAL


def random_instance(rng: np.random.Generator, n: int, m: int, k: int | None = None,
                    grid: float = 0.05) -> Instance:
    """Random instance with values on a decimal grid; ``k`` drawn if not given."""
    steps = int(round(1.0 / grid))
    values = rng.integers(0, steps + 1, size=(n, m)) / steps
    if k is None:
        k = int(rng.integers(1, n + 1))
    return Instance.from_values(values, k)
