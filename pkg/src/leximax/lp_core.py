"""Small LP engine for the staged leximax programs.

Every problem has the same skeleton::

    maximize    gamma
    subject to  sum(x) = k
                0 <= x_i <= 1,  -1 <= gamma <= n
                a_r . x - g_r * gamma >= rhs_r      for each row r

It is solved with a dense-tableau bounded-variable primal simplex using
Bland's rule.  Nonbasic variables may sit strictly between their bounds, which
lets a solve start from any feasible point (the previous stage's answer),
and rows can be appended to a live tableau so a cutting-plane loop only pays
for the pivots each new cut requires.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, MalformedProblemError, NumericalError, RangeError
from .model import MarginalVector

log = logging.getLogger(__name__)

FEAS_TOL = 1e-7
OPT_TOL = 1e-9
PIVOT_FLOOR = 1e-12
RATIO_TOL = 1e-9
GAMMA_LOWER = -1.0
REFACTOR_EVERY = 64

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LpRow:
    """``coefficients . x - gamma_coefficient * gamma >= rhs``."""

    coefficients: np.ndarray
    gamma_coefficient: float
    rhs: float

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=float)
        if coef.ndim != 1:
            raise DimensionError("row coefficients must be a vector")
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "gamma_coefficient", float(self.gamma_coefficient))
        object.__setattr__(self, "rhs", float(self.rhs))

    def activity(self, x, gamma: float) -> float:
        return float(self.coefficients @ np.asarray(x, dtype=float) - self.gamma_coefficient * gamma)


@dataclass(frozen=True)
class LpProblem:
    num_candidates: int
    k: float
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        n = self.num_candidates
        if n < 1:
            raise DimensionError("need at least one candidate")
        if not 0 <= self.k <= n:
            raise RangeError(f"k={self.k} outside [0, {n}]")
        for r, row in enumerate(self.rows):
            if row.coefficients.shape != (n,):
                raise DimensionError(
                    f"row {r} has {row.coefficients.shape[0]} coefficients, expected {n}"
                )

    @property
    def gamma_upper(self) -> float:
        return float(self.num_candidates)

    def with_row(self, row: LpRow) -> "LpProblem":
        return LpProblem(self.num_candidates, self.k, self.rows + (row,))


@dataclass(frozen=True)
class LpSolution:
    status: str
    x: MarginalVector | None
    gamma: float
    iterations: int


def check_feasible(problem: LpProblem, x, gamma: float, tol: float = FEAS_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.num_candidates,):
        return False
    if np.any(x < -tol) or np.any(x > 1.0 + tol):
        return False
    if abs(x.sum() - problem.k) > tol:
        return False
    if not GAMMA_LOWER - tol <= gamma <= problem.gamma_upper + tol:
        return False
    return all(row.activity(x, gamma) >= row.rhs - tol for row in problem.rows)


class BoundedSimplex:
    """Live simplex tableau for one ``LpProblem`` that accepts extra rows.

    Columns are ``x_0..x_{n-1}``, ``gamma``, then one surplus column per
    inequality row and artificial columns added on demand.  Row 0 is the
    cardinality equality.
    """

    def __init__(self, problem: LpProblem, start_x=None, start_gamma: float | None = None):
        n = problem.num_candidates
        self.n = n
        self.k = float(problem.k)
        self._rows: list[LpRow] = []
        self.iterations = 0
        self._since_refactor = 0

        if start_x is None:
            x0 = np.full(n, self.k / n)
        else:
            x0 = np.clip(np.asarray(start_x, dtype=float), 0.0, 1.0)
            if x0.shape != (n,):
                raise DimensionError(f"start point has shape {x0.shape}, expected ({n},)")
        g0 = 0.0 if start_gamma is None else float(np.clip(start_gamma, GAMMA_LOWER, n))

        self.lower = np.concatenate([np.zeros(n), [GAMMA_LOWER]])
        self.upper = np.concatenate([np.ones(n), [float(n)]])
        self.z = np.concatenate([x0, [g0]])
        self.artificial = np.zeros(n + 1, dtype=bool)

        # cardinality row, basic variable is an artificial pinned to zero
        resid = self.k - x0.sum()
        sign = 1.0 if resid >= 0 else -1.0
        self.A = np.concatenate([np.ones(n), [0.0], [sign]])[None, :]
        self.b = np.array([self.k])
        self._append_column(0.0, np.inf if abs(resid) > FEAS_TOL else 0.0, abs(resid), artificial=True)
        self.basis = [n + 1]
        self.T = self.A.copy()
        self.T[0] /= sign

        for row in problem.rows:
            self.add_row(row)

    # -- construction -------------------------------------------------------

    def _append_column(self, lo, hi, value, artificial=False):
        self.lower = np.append(self.lower, lo)
        self.upper = np.append(self.upper, hi)
        self.z = np.append(self.z, value)
        self.artificial = np.append(self.artificial, artificial)

    @property
    def problem(self) -> LpProblem:
        return LpProblem(self.n, self.k, tuple(self._rows))

    @property
    def num_rows(self) -> int:
        return len(self._rows)

    def add_row(self, row: LpRow) -> None:
        if row.coefficients.shape != (self.n,):
            raise DimensionError(
                f"row has {row.coefficients.shape[0]} coefficients, expected {self.n}"
            )
        self._rows.append(row)
        x, gamma = self.z[: self.n], self.z[self.n]
        resid = row.activity(x, gamma) - row.rhs

        width = self.A.shape[1]
        if resid >= -FEAS_TOL:
            # surplus is basic; a resid a hair below zero is tolerated
            new = np.zeros(width + 1)
            self._append_column(0.0, np.inf, resid)
            basic, coef = width, -1.0
        else:
            new = np.zeros(width + 2)
            self._append_column(0.0, np.inf, 0.0)
            self._append_column(0.0, np.inf, -resid, artificial=True)
            new[width + 1] = 1.0
            basic, coef = width + 1, 1.0
        new[: self.n] = row.coefficients
        new[self.n] = -row.gamma_coefficient
        new[width] = -1.0

        extra = len(new) - width
        self.A = np.hstack([self.A, np.zeros((self.A.shape[0], extra))])
        self.A = np.vstack([self.A, new])
        self.b = np.append(self.b, row.rhs)
        self.T = np.hstack([self.T, np.zeros((self.T.shape[0], extra))])
        t = new - new[self.basis] @ self.T
        t /= coef
        self.T = np.vstack([self.T, t])
        self.basis.append(basic)

    # -- linear algebra -----------------------------------------------------

    def _refactor(self) -> None:
        B = self.A[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.A)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("singular basis", rows=len(self.basis)) from exc
        nonbasic = np.ones(self.A.shape[1], dtype=bool)
        nonbasic[self.basis] = False
        rhs = self.b - self.A[:, nonbasic] @ self.z[nonbasic]
        self.z[self.basis] = np.linalg.solve(B, rhs)
        self._since_refactor = 0

    def _run(self, cost: np.ndarray) -> None:
        basis = self.basis
        T = self.T
        d = cost - cost[basis] @ T
        in_basis = np.zeros(len(cost), dtype=bool)
        in_basis[basis] = True
        while True:
            z = self.z
            up = (d > OPT_TOL) & (z < self.upper - FEAS_TOL * 1e-3)
            down = (d < -OPT_TOL) & (z > self.lower + FEAS_TOL * 1e-3)
            eligible = np.flatnonzero((up | down) & ~in_basis)
            if eligible.size == 0:
                return
            j = int(eligible[0])
            direction = 1.0 if d[j] > 0 else -1.0
            col = T[:, j] * direction
            zb = z[basis]
            lb = self.lower[basis]
            ub = self.upper[basis]
            ratios = np.full(len(basis), np.inf)
            pos = col > RATIO_TOL
            neg = col < -RATIO_TOL
            ratios[pos] = np.maximum(zb[pos] - lb[pos], 0.0) / col[pos]
            with np.errstate(invalid="ignore"):
                ratios[neg] = np.maximum(ub[neg] - zb[neg], 0.0) / -col[neg]
            own = (self.upper[j] - z[j]) if direction > 0 else (z[j] - self.lower[j])
            t_row = ratios.min() if len(ratios) else np.inf
            if own <= t_row:
                if not np.isfinite(own):
                    raise NumericalError("unbounded direction", column=j)
                z[j] = self.upper[j] if direction > 0 else self.lower[j]
                z[basis] = zb - own * col
                self.iterations += 1
                continue
            ties = np.flatnonzero(ratios <= t_row + 1e-12)
            r = int(min(ties, key=lambda i: basis[i]))
            piv = T[r, j]
            if abs(piv) < PIVOT_FLOOR:
                raise NumericalError("pivot below floor", pivot=float(piv), row=r, column=j,
                                     iteration=self.iterations)
            leaving = basis[r]
            z[j] += direction * t_row
            z[basis] = zb - t_row * col
            z[leaving] = self.lower[leaving] if col[r] > 0 else self.upper[leaving]
            T[r] /= piv
            factor = T[:, j].copy()
            factor[r] = 0.0
            T -= np.outer(factor, T[r])
            d -= d[j] * T[r]
            basis[r] = j
            in_basis[leaving] = False
            in_basis[j] = True
            self.iterations += 1
            self._since_refactor += 1
            if self._since_refactor >= REFACTOR_EVERY:
                self._refactor()
                T = self.T
                d = cost - cost[basis] @ T

    def optimize(self) -> LpSolution:
        if not any(row.gamma_coefficient != 0 for row in self._rows):
            raise MalformedProblemError("no row involves gamma, so the objective is unconstrained")
        active = self.artificial & (self.upper > 0)
        if active.any():
            cost = np.where(active, -1.0, 0.0)
            self._run(cost)
            infeasibility = float(self.z[active].sum())
            self.upper[self.artificial] = 0.0
            if infeasibility > FEAS_TOL:
                log.debug("phase 1 ended with infeasibility %.3g", infeasibility)
                return LpSolution(INFEASIBLE, None, float("nan"), self.iterations)
        cost = np.zeros(len(self.z))
        cost[self.n] = 1.0
        self._run(cost)
        self._refactor()
        return self._extract()

    def _extract(self) -> LpSolution:
        n = self.n
        x = self.z[:n].copy()
        gamma = float(self.z[n])
        problem = self.problem
        if not check_feasible(problem, x, gamma):
            raise NumericalError("solver returned an infeasible point", iterations=self.iterations)
        # basic values may sit a rounding error outside the box
        x = np.clip(x, 0.0, 1.0)
        return LpSolution(OPTIMAL, MarginalVector(x, self.k), gamma, self.iterations)


def solve(problem: LpProblem, warm_start: LpSolution | None = None) -> LpSolution:
    """Maximize gamma.  ``warm_start`` must be feasible for ``problem``."""
    if warm_start is not None and warm_start.x is not None:
        engine = BoundedSimplex(problem, warm_start.x.x, warm_start.gamma)
    else:
        engine = BoundedSimplex(problem)
    return engine.optimize()
