"""Exact rational linear algebra: a two-phase simplex and a linear-system solver.

Everything is computed over ``fractions.Fraction`` with Bland's rule, so the
solver terminates and its optimum is exact. Problems here are desk-scale
(one variable per pure profile), so a dense tableau is fine.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


class LPError(Exception):
    """Exception raised for malformed linear programs."""
    pass


class LPStatus(Enum):
    """Outcome of a linear program."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Optional[Fraction] = None
    solution: Optional[Tuple[Fraction, ...]] = None


class _Tableau:
    """Dense simplex tableau in the form  rows · x = rhs,  x >= 0."""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.objective: List[Fraction] = []
        self.value = Fraction(0)

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        # reduced-cost row: z_j - c_j, value: c_B . rhs
        objective = [-c for c in cost]
        value = Fraction(0)
        for i, var in enumerate(self.basis):
            weight = cost[var]
            if weight:
                objective = [o + weight * a for o, a in zip(objective, self.rows[i])]
                value += weight * self.rhs[i]
        self.objective = objective
        self.value = value

    def pivot(self, row: int, col: int) -> None:
        pivot = self.rows[row][col]
        self.rows[row] = [a / pivot for a in self.rows[row]]
        self.rhs[row] /= pivot
        for k in range(len(self.rows)):
            factor = self.rows[k][col]
            if k != row and factor:
                self.rows[k] = [a - factor * b for a, b in zip(self.rows[k], self.rows[row])]
                self.rhs[k] -= factor * self.rhs[row]
        factor = self.objective[col]
        if factor:
            self.objective = [a - factor * b for a, b in zip(self.objective, self.rows[row])]
            self.value -= factor * self.rhs[row]
        self.basis[row] = col

    def run(self, allowed: Optional[Sequence[bool]] = None) -> LPStatus:
        """Maximize with Bland's rule over the allowed columns."""
        while True:
            entering = None
            for j, reduced in enumerate(self.objective):
                if reduced < 0 and (allowed is None or allowed[j]):
                    entering = j
                    break
            if entering is None:
                return LPStatus.OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (self.rhs[i] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return LPStatus.UNBOUNDED
            self.pivot(best[1], entering)


def maximize(cost: Sequence[Fraction],
             a_ub: Sequence[Sequence[Fraction]] = (),
             b_ub: Sequence[Fraction] = (),
             a_eq: Sequence[Sequence[Fraction]] = (),
             b_eq: Sequence[Fraction] = ()) -> LPResult:
    """Maximize ``cost · x`` subject to ``a_ub x <= b_ub``, ``a_eq x = b_eq``, ``x >= 0``.

    Args:
        cost: Objective coefficients
        a_ub: Inequality constraint rows
        b_ub: Inequality right-hand sides
        a_eq: Equality constraint rows
        b_eq: Equality right-hand sides

    Returns:
        LPResult with exact optimum and one optimal vertex
    """
    n = len(cost)
    if len(a_ub) != len(b_ub) or len(a_eq) != len(b_eq):
        raise LPError("Constraint rows and right-hand sides differ in length")
    if any(len(row) != n for row in list(a_ub) + list(a_eq)):
        raise LPError("Constraint row length differs from the number of variables")

    n_slack = len(a_ub)
    m = len(a_ub) + len(a_eq)
    width = n + n_slack + m
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for k, (row, b) in enumerate(list(zip(a_ub, b_ub)) + list(zip(a_eq, b_eq))):
        line = [Fraction(v) for v in row] + [Fraction(0)] * (n_slack + m)
        if k < n_slack:
            line[n + k] = Fraction(1)
        b = Fraction(b)
        if b < 0:
            line = [-v for v in line]
            b = -b
        line[n + n_slack + k] = Fraction(1)
        rows.append(line)
        rhs.append(b)

    tableau = _Tableau(rows, rhs, [n + n_slack + k for k in range(m)])
    logger.debug(f"Solving LP with {n} variables and {m} constraints")

    # phase 1: maximize minus the sum of artificials
    tableau.set_objective([Fraction(0)] * (n + n_slack) + [Fraction(-1)] * m)
    tableau.run()
    if tableau.value < 0:
        return LPResult(LPStatus.INFEASIBLE)

    artificial = set(range(n + n_slack, width))
    for i in reversed(range(len(tableau.rows))):
        if tableau.basis[i] in artificial:
            column = next((j for j in range(n + n_slack) if tableau.rows[i][j] != 0), None)
            if column is None:
                # redundant row
                del tableau.rows[i]
                del tableau.rhs[i]
                del tableau.basis[i]
            else:
                tableau.pivot(i, column)

    allowed = [j < n + n_slack for j in range(width)]
    tableau.set_objective([Fraction(c) for c in cost] + [Fraction(0)] * (n_slack + m))
    status = tableau.run(allowed)
    if status is LPStatus.UNBOUNDED:
        return LPResult(LPStatus.UNBOUNDED)

    solution = [Fraction(0)] * n
    for i, var in enumerate(tableau.basis):
        if var < n:
            solution[var] = tableau.rhs[i]
    return LPResult(LPStatus.OPTIMAL, tableau.value, tuple(solution))


def solve_linear_system(matrix: Sequence[Sequence[Fraction]],
                        rhs: Sequence[Fraction]) -> Tuple[Optional[Tuple[Fraction, ...]], bool]:
    """Solve ``matrix · x = rhs`` exactly by Gauss-Jordan elimination.

    Returns:
        (solution, unique): solution is None when the system is inconsistent;
        otherwise one solution (free variables set to 0) and whether it is unique.
    """
    if len(matrix) != len(rhs):
        raise LPError("Matrix and right-hand side differ in length")
    rows = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    n = len(matrix[0]) if matrix else 0
    pivots: List[int] = []
    r = 0
    for col in range(n):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col] != 0:
                factor = rows[k][col]
                rows[k] = [a - factor * b for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
    if any(all(v == 0 for v in row[:n]) and row[n] != 0 for row in rows):
        return None, False
    solution = [Fraction(0)] * n
    for k, col in enumerate(pivots):
        solution[col] = rows[k][n]
    return tuple(solution), len(pivots) == n
