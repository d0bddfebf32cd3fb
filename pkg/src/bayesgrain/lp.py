"""
Small dense two-phase simplex solver for programs of the form

    maximize c·x  subject to  A x = b,  x >= 0

over exact rationals or floats. Bland's rule keeps the method finite on
degenerate problems, which are the norm for the barycenter programs solved
here.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from bayesgrain.measures import Prob

LOGGER = logging.getLogger(__name__)

FLOAT_PIVOT_TOLERANCE = 1e-12


class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """
    A program in equality standard form.

    Attributes:
        objective: Coefficients of the maximized linear objective.
        equalities: Rows of the constraint matrix A.
        rhs: Right-hand side b.
    """

    objective: tuple[Prob, ...]
    equalities: tuple[tuple[Prob, ...], ...]
    rhs: tuple[Prob, ...]

    def __post_init__(self) -> None:
        width = len(self.objective)
        if any(len(row) != width for row in self.equalities):
            raise ValueError("constraint rows must match the objective length")
        if len(self.equalities) != len(self.rhs):
            raise ValueError("one right-hand side value per constraint row is required")


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    x: tuple[Prob, ...] | None = None
    value: Prob | None = None


class _Tableau:
    """
    Dense tableau [A | b] with an explicit basis.
    """

    def __init__(self, rows: list[list[Prob]], basis: list[int], exact: bool) -> None:
        self.rows = rows
        self.basis = basis
        self.exact = exact
        self.tol: Prob = Fraction(0) if exact else FLOAT_PIVOT_TOLERANCE

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def pivot(self, i: int, j: int) -> None:
        LOGGER.debug("Pivot row %s on column %s", i, j)
        row = self.rows[i]
        piv = row[j]
        self.rows[i] = row = [v / piv for v in row]
        for k, other in enumerate(self.rows):
            if k == i:
                continue
            factor = other[j]
            if factor:
                self.rows[k] = [a - factor * b for a, b in zip(other, row, strict=True)]
        self.basis[i] = j

    def reduced_costs(self, cost: Sequence[Prob], columns: int) -> list[Prob]:
        zero: Prob = Fraction(0) if self.exact else 0.0
        reduced = []
        for j in range(columns):
            basic = sum(
                (
                    cost[b] * row[j]
                    for b, row in zip(self.basis, self.rows, strict=True)
                ),
                start=zero,
            )
            reduced.append(cost[j] - basic)
        return reduced

    def bland(self, cost: Sequence[Prob], columns: int) -> LPStatus:
        """
        Run primal simplex iterations with Bland's rule, entering only the
        first ``columns`` columns.
        """
        while True:
            reduced = self.reduced_costs(cost, columns)
            entering = next((j for j in range(columns) if reduced[j] > self.tol), None)
            if entering is None:
                return LPStatus.OPTIMAL
            candidates = [
                (row[-1] / row[entering], self.basis[i], i)
                for i, row in enumerate(self.rows)
                if row[entering] > self.tol
            ]
            if not candidates:
                return LPStatus.UNBOUNDED
            _, _, leaving = min(candidates)
            self.pivot(leaving, entering)

    def value(self, cost: Sequence[Prob]) -> Prob:
        return sum(
            (cost[b] * row[-1] for b, row in zip(self.basis, self.rows, strict=True)),
            start=Fraction(0) if self.exact else 0.0,
        )


def _convert(value: Prob, exact: bool) -> Prob:
    return Fraction(value) if exact else float(value)


def solve(program: LinearProgram, exact: bool = True) -> LPSolution:
    """
    Solve a linear program with the two-phase simplex method.

    Args:
        program: The program in equality standard form.
        exact: Use rational arithmetic. Float mode pivots with tolerance
            ``FLOAT_PIVOT_TOLERANCE``.

    Returns:
        The solution with its status; ``x`` and ``value`` are set for optimal
        programs only.
    """
    n = len(program.objective)
    m = len(program.rhs)
    zero: Prob = Fraction(0) if exact else 0.0
    one: Prob = Fraction(1) if exact else 1.0

    rows: list[list[Prob]] = []
    for i, (coefficients, b) in enumerate(
        zip(program.equalities, program.rhs, strict=True)
    ):
        sign = -1 if b < 0 else 1
        artificial = [one if k == i else zero for k in range(m)]
        rows.append(
            [sign * _convert(a, exact) for a in coefficients]
            + artificial
            + [sign * _convert(b, exact)]
        )
    tableau = _Tableau(rows, [n + i for i in range(m)], exact)

    phase_one_cost = [zero] * n + [-one] * m
    tableau.bland(phase_one_cost, n + m)
    if tableau.value(phase_one_cost) < -tableau.tol:
        LOGGER.debug(
            "Phase one ended with infeasibility %s", tableau.value(phase_one_cost)
        )
        return LPSolution(LPStatus.INFEASIBLE)

    # drive artificial variables out of the basis, dropping redundant rows
    i = 0
    while i < len(tableau.rows):
        if tableau.basis[i] < n:
            i += 1
            continue
        row = tableau.rows[i]
        column = next((j for j in range(n) if abs(row[j]) > tableau.tol), None)
        if column is None:
            del tableau.rows[i]
            del tableau.basis[i]
            continue
        tableau.pivot(i, column)
        i += 1

    cost = [_convert(c, exact) for c in program.objective] + [zero] * m
    status = tableau.bland(cost, n)
    if status is LPStatus.UNBOUNDED:
        return LPSolution(LPStatus.UNBOUNDED)
    x = [zero] * n
    for b, row in zip(tableau.basis, tableau.rows, strict=True):
        if b < n:
            x[b] = row[-1]
    return LPSolution(LPStatus.OPTIMAL, tuple(x), tableau.value(cost))
