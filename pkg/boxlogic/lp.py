"""
Exact rational linear programming: maximize `c·x` subject to `A x = b`,
`x ≥ 0`, solved with a two-phase simplex on a sparse tableau of `Fraction`s.
Pivoting follows Bland's rule, so runs terminate and are reproducible.
"""

import logging as log
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .errors import LPError

Rational = Union[Fraction, int]
Row = dict[int, Fraction]


@dataclass
class LinearProgram:
    """
    An equality system over `num_vars` nonnegative variables.
    """

    num_vars: int
    rows: list[Row] = field(default_factory=list)
    rhs: list[Fraction] = field(default_factory=list)

    def add_equality(self, coefficients: Mapping[int, Rational], value: Rational) -> None:
        """
        Adds the row `Σ coefficients[j] x_j = value`. Zero coefficients are
        dropped; duplicate rows are kept (redundancy is removed while solving).
        """
        row = {j: Fraction(c) for j, c in coefficients.items() if c}
        for j in row:
            if not 0 <= j < self.num_vars:
                raise LPError(f"variable {j} out of range (0..{self.num_vars - 1})")
        self.rows.append(row)
        self.rhs.append(Fraction(value))

    def copy(self) -> "LinearProgram":
        # pylint: disable=missing-function-docstring
        return LinearProgram(self.num_vars, [dict(r) for r in self.rows], list(self.rhs))


@dataclass(frozen=True)
class LPResult:
    """
    An optimal basic solution.

    Attributes:
        value (Fraction) : The optimum.
        solution (tuple[Fraction, ...]) : A maximizing vertex.
        pivots (int) : Number of pivots over both phases.
        rank (int) : Rank of the equality system.
    """

    value: Fraction
    solution: tuple[Fraction, ...]
    pivots: int
    rank: int


class SimplexTableau:
    """
    A sparse simplex tableau. Column `j < n` is a structural variable, columns
    `n .. n+m-1` are the artificial variables of phase one.
    """

    def __init__(self, program: LinearProgram) -> None:
        self.n = program.num_vars
        self.rows: list[Row] = []
        self.b: list[Fraction] = []
        self.basis: list[int] = []
        for i, (row, value) in enumerate(zip(program.rows, program.rhs)):
            if value < 0:
                row = {j: -c for j, c in row.items()}
                value = -value
            else:
                row = dict(row)
            row[self.n + i] = Fraction(1)
            self.rows.append(row)
            self.b.append(value)
            self.basis.append(self.n + i)
        self.cost: Row = {}
        self.value = Fraction(0)
        self.pivots = 0

    def copy(self) -> "SimplexTableau":
        """
        An independent copy (the rows are copied, the fractions shared).
        """
        clone = object.__new__(SimplexTableau)
        clone.n = self.n
        clone.rows = [dict(r) for r in self.rows]
        clone.b = list(self.b)
        clone.basis = list(self.basis)
        clone.cost = dict(self.cost)
        clone.value = self.value
        clone.pivots = self.pivots
        return clone

    def set_objective(self, objective: Mapping[int, Fraction]) -> None:
        """
        Sets the reduced cost row for maximizing `objective` relative to the
        current basis.
        """
        cost = {j: c for j, c in objective.items() if c}
        value = Fraction(0)
        for i, bv in enumerate(self.basis):
            cb = objective.get(bv, Fraction(0))
            if not cb:
                continue
            value += cb * self.b[i]
            for j, a in self.rows[i].items():
                cost[j] = cost.get(j, Fraction(0)) - cb * a
        self.cost = {j: c for j, c in cost.items() if c}
        self.value = value

    def pivot(self, i: int, j: int) -> None:
        """
        Makes column `j` basic in row `i`.
        """
        row = self.rows[i]
        piv = row[j]
        if piv != 1:
            for col in row:
                row[col] /= piv
            self.b[i] /= piv
        for k, other in enumerate(self.rows):
            if k == i:
                continue
            f = other.get(j)
            if not f:
                continue
            for col, a in row.items():
                v = other.get(col, Fraction(0)) - f * a
                if v:
                    other[col] = v
                else:
                    other.pop(col, None)
            self.b[k] -= f * self.b[i]
        f = self.cost.get(j)
        if f:
            for col, a in row.items():
                v = self.cost.get(col, Fraction(0)) - f * a
                if v:
                    self.cost[col] = v
                else:
                    self.cost.pop(col, None)
            self.value += f * self.b[i]
        self.basis[i] = j
        self.pivots += 1

    def bland_step(self, allowed: int) -> str:
        """
        Performs one pivot with Bland's rule over the columns `< allowed`.

        Returns:
            (str) 'optimal', 'unbounded' or 'go_on'.
        """
        entering = [j for j, c in self.cost.items() if c > 0 and j < allowed]
        if not entering:
            return 'optimal'
        j = min(entering)
        candidates = [(self.b[i] / row[j], self.basis[i], i)
                      for i, row in enumerate(self.rows) if row.get(j, 0) > 0]
        if not candidates:
            return 'unbounded'
        _, _, i = min(candidates)
        self.pivot(i, j)
        return 'go_on'

    def run(self, allowed: int) -> str:
        # pylint: disable=missing-function-docstring
        while True:
            status = self.bland_step(allowed)
            if status != 'go_on':
                return status

    def drive_out_artificials(self) -> None:
        """
        Pivots artificial variables out of the basis after phase one and
        removes rows that are linear combinations of the others.
        """
        i = 0
        while i < len(self.rows):
            if self.basis[i] < self.n:
                i += 1
                continue
            columns = sorted(j for j, a in self.rows[i].items() if j < self.n and a)
            if columns:
                self.pivot(i, columns[0])
                i += 1
            else:
                del self.rows[i]
                del self.b[i]
                del self.basis[i]

    def solution(self) -> tuple[Fraction, ...]:
        # pylint: disable=missing-function-docstring
        x = [Fraction(0)] * self.n
        for i, bv in enumerate(self.basis):
            if bv < self.n:
                x[bv] = self.b[i]
        return tuple(x)


def maximize(program: LinearProgram,
             objective: Mapping[int, Rational],
             tableau: Optional[SimplexTableau] = None) -> LPResult:
    """
    Maximizes `objective · x` over `{x ≥ 0 : A x = b}`.

    Args:
        program (LinearProgram) : The equality system.
        objective (Mapping[int, Rational]) : Objective coefficients by variable.
        tableau (SimplexTableau, optional) : A feasible tableau (from
                                             `feasible_tableau`) to start
                                             phase two from; it is copied.

    Returns:
        (LPResult) The exact optimum and a maximizing vertex.

    Raises:
        LPError : If the program is infeasible or unbounded.
    """
    t = tableau.copy() if tableau is not None else feasible_tableau(program)
    t.set_objective({j: Fraction(c) for j, c in objective.items()})
    status = t.run(program.num_vars)
    if status == 'unbounded':
        raise LPError("objective is unbounded", status)
    log.debug('LP optimum %s after %d pivots (rank %d)', t.value, t.pivots, len(t.rows))
    return LPResult(t.value, t.solution(), t.pivots, len(t.rows))


def feasible_tableau(program: LinearProgram) -> SimplexTableau:
    """
    Runs phase one and returns a tableau with a feasible basis over the
    structural variables only.

    Raises:
        LPError : If the program is infeasible.
    """
    t = SimplexTableau(program)
    n, m = program.num_vars, len(program.rows)
    t.set_objective({n + i: Fraction(-1) for i in range(m)})
    t.run(n + m)
    if t.value != 0:
        raise LPError(f"equality system is infeasible (phase one optimum {t.value})",
                      "infeasible")
    t.drive_out_artificials()
    for row in t.rows:
        for j in [j for j in row if j >= n]:
            del row[j]
    t.cost = {}
    t.value = Fraction(0)
    return t


def is_feasible(program: LinearProgram) -> bool:
    # pylint: disable=missing-function-docstring
    try:
        feasible_tableau(program)
    except LPError:
        return False
    return True


def rank(program: LinearProgram) -> int:
    """
    The rank of the equality matrix (exact Gaussian elimination).
    """
    pivot_rows: dict[int, Row] = {}
    for original in program.rows:
        row = dict(original)
        while row:
            j = min(row)
            if j not in pivot_rows:
                pivot_rows[j] = {c: a / row[j] for c, a in row.items()}
                break
            f = row[j]
            for c, a in pivot_rows[j].items():
                v = row.get(c, Fraction(0)) - f * a
                if v:
                    row[c] = v
                else:
                    row.pop(c, None)
    return len(pivot_rows)
