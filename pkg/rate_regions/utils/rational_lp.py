"""
Exact rational linear programming.

A dense two-phase tableau simplex over fractions.Fraction with Bland's
anti-cycling rule, plus the small exact linear-algebra helpers (row
reduction, rank, unique solutions) used by vertex enumeration.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Matrix = Sequence[Sequence[Fraction]]


@dataclass
class LPResult:
    """Outcome of an LP: status, optimal value and an optimal point."""

    status: str
    value: Optional[Fraction] = None
    point: Optional[Tuple[Fraction, ...]] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    """
    Rows of the equality system over nonnegative columns, one basic column
    per row, and the reduced-cost row of the current objective.
    """

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int], width: int):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.width = width
        self.reduced = [Fraction(0)] * width
        self.value = Fraction(0)

    def set_objective(self, cost: Sequence[Fraction]):
        # reduced cost d_j = c_B . a_j - c_j, value = c_B . rhs
        self.reduced = [-Fraction(c) for c in cost]
        self.value = Fraction(0)
        for row, rhs, b in zip(self.rows, self.rhs, self.basis):
            cb = cost[b]
            if cb:
                for j, a in enumerate(row):
                    if a:
                        self.reduced[j] += cb * a
                self.value += cb * rhs

    def pivot(self, r: int, c: int):
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            prow = [a / piv for a in prow]
            self.rows[r] = prow
            self.rhs[r] /= piv
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                self.rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
                self.rhs[i] -= f * prhs
        f = self.reduced[c]
        if f:
            self.reduced = [a - f * b if b else a for a, b in zip(self.reduced, prow)]
            self.value -= f * prhs
        self.basis[r] = c

    def run(self, columns: int) -> str:
        """Maximize over the first `columns` columns with Bland's rule."""
        steps = 0
        while True:
            entering = next((j for j in range(columns) if self.reduced[j] < 0), None)
            if entering is None:
                logger.debug(f"simplex optimal after {steps} pivots")
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i], i)
                    if best is None or key < best:
                        best = key
            if best is None:
                return UNBOUNDED
            self.pivot(best[2], entering)
            steps += 1

    def drop_rows(self, keep: List[int]):
        self.rows = [self.rows[i] for i in keep]
        self.rhs = [self.rhs[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]


def _columns(n: int, nonnegative: Optional[Sequence[bool]]) -> List[Tuple[int, int]]:
    """(plus column, minus column or -1) for every original variable."""
    layout, next_col = [], 0
    flags = nonnegative if nonnegative is not None else [False] * n
    for j in range(n):
        if flags[j]:
            layout.append((next_col, -1))
            next_col += 1
        else:
            layout.append((next_col, next_col + 1))
            next_col += 2
    return layout


def _solve(
    objective: Sequence[Fraction],
    A_ub: Matrix,
    b_ub: Sequence[Fraction],
    A_eq: Matrix,
    b_eq: Sequence[Fraction],
    nonnegative: Optional[Sequence[bool]],
) -> LPResult:
    n = len(objective)
    layout = _columns(n, nonnegative)
    structural = max([p for p, _ in layout] + [m for _, m in layout] + [-1]) + 1
    m_ub, m_eq = len(A_ub), len(A_eq)
    slack_start = structural
    art_start = slack_start + m_ub

    def expand(coeffs: Sequence[Fraction]) -> List[Fraction]:
        out = [Fraction(0)] * structural
        for j, (p, q) in enumerate(layout):
            c = Fraction(coeffs[j])
            if c:
                out[p] = c
                if q >= 0:
                    out[q] = -c
        return out

    rows, rhs, basis, needs_artificial = [], [], [], []
    for i, (coeffs, b) in enumerate(zip(A_ub, b_ub)):
        row = expand(coeffs) + [Fraction(0)] * m_ub
        row[slack_start + i] = Fraction(1)
        b = Fraction(b)
        if b < 0:
            row = [-a for a in row]
            b = -b
            needs_artificial.append(len(rows))
            basis.append(-1)
        else:
            basis.append(slack_start + i)
        rows.append(row)
        rhs.append(b)
    for coeffs, b in zip(A_eq, b_eq):
        row = expand(coeffs) + [Fraction(0)] * m_ub
        b = Fraction(b)
        if b < 0:
            row = [-a for a in row]
            b = -b
        needs_artificial.append(len(rows))
        basis.append(-1)
        rows.append(row)
        rhs.append(b)

    width = art_start + len(needs_artificial)
    for row in rows:
        row.extend([Fraction(0)] * len(needs_artificial))
    for k, i in enumerate(needs_artificial):
        rows[i][art_start + k] = Fraction(1)
        basis[i] = art_start + k
    tableau = _Tableau(rows, rhs, basis, width)

    if needs_artificial:
        tableau.set_objective([Fraction(0)] * art_start + [Fraction(-1)] * len(needs_artificial))
        tableau.run(width)
        if tableau.value < 0:
            return LPResult(INFEASIBLE)
        keep = []
        for i in range(len(tableau.rows)):
            if tableau.basis[i] < art_start:
                keep.append(i)
                continue
            column = next((j for j in range(art_start) if tableau.rows[i][j] != 0), None)
            if column is None:
                continue
            tableau.pivot(i, column)
            keep.append(i)
        tableau.drop_rows(keep)
    tableau.rows = [row[:art_start] for row in tableau.rows]
    tableau.reduced = tableau.reduced[:art_start]
    tableau.width = art_start

    cost = expand(objective) + [Fraction(0)] * m_ub
    tableau.set_objective(cost)
    status = tableau.run(art_start)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    values = [Fraction(0)] * art_start
    for i, b in enumerate(tableau.basis):
        values[b] = tableau.rhs[i]
    point = tuple(values[p] - (values[q] if q >= 0 else 0) for p, q in layout)
    return LPResult(OPTIMAL, tableau.value, point)


def maximize(
    objective: Sequence[Fraction],
    A_ub: Matrix = (),
    b_ub: Sequence[Fraction] = (),
    A_eq: Matrix = (),
    b_eq: Sequence[Fraction] = (),
    nonnegative: Optional[Sequence[bool]] = None,
) -> LPResult:
    """
    Maximize objective . x subject to A_ub x <= b_ub and A_eq x = b_eq.

    Args:
        objective: Cost vector; its length fixes the number of variables
        A_ub: Inequality rows
        b_ub: Inequality right-hand sides
        A_eq: Equality rows
        b_eq: Equality right-hand sides
        nonnegative: Optional per-variable flags; unflagged variables are free

    Returns:
        LPResult with status optimal, infeasible or unbounded
    """
    n = len(objective)
    for row in list(A_ub) + list(A_eq):
        if len(row) != n:
            raise ValueError(f"constraint row has {len(row)} entries, expected {n}")
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint rows and right-hand sides differ in length")
    return _solve(objective, A_ub, b_ub, A_eq, b_eq, nonnegative)


def find_feasible_point(
    A_ub: Matrix,
    b_ub: Sequence[Fraction],
    A_eq: Matrix = (),
    b_eq: Sequence[Fraction] = (),
    n: Optional[int] = None,
    nonnegative: Optional[Sequence[bool]] = None,
) -> LPResult:
    """Phase one only: any point of the system, or status infeasible."""
    if n is None:
        rows = list(A_ub) + list(A_eq)
        n = len(rows[0]) if rows else 0
    return maximize([Fraction(0)] * n, A_ub, b_ub, A_eq, b_eq, nonnegative)


def farkas_certificate(
    A_ub: Matrix,
    b_ub: Sequence[Fraction],
    A_eq: Matrix = (),
    b_eq: Sequence[Fraction] = (),
) -> Optional[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]:
    """
    Multipliers proving {A_ub x <= b_ub, A_eq x = b_eq} empty.

    Solves y >= 0, z free, y A_ub + z A_eq = 0, y b_ub + z b_eq = -1. A basic
    solution has minimal support, so the rows with nonzero y form an
    irreducible infeasible subsystem.

    Returns:
        (y, z) or None when the system is feasible
    """
    m_ub, m_eq = len(A_ub), len(A_eq)
    rows = list(A_ub) + list(A_eq)
    n = len(rows[0]) if rows else 0
    constraint_rows = []
    for j in range(n):
        constraint_rows.append([Fraction(r[j]) for r in rows])
    constraint_rows.append([Fraction(b) for b in list(b_ub) + list(b_eq)])
    rhs = [Fraction(0)] * n + [Fraction(-1)]
    flags = [True] * m_ub + [False] * m_eq
    result = maximize([Fraction(0)] * (m_ub + m_eq), (), (), constraint_rows, rhs, flags)
    if result.status != OPTIMAL:
        return None
    return result.point[:m_ub], result.point[m_ub:]


def row_reduce(matrix: Matrix, width: int) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row echelon form.

    Returns:
        (nonzero reduced rows, pivot columns)
    """
    rows = [[Fraction(v) for v in row] for row in matrix]
    pivots: List[int] = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Matrix, width: int) -> int:
    return len(row_reduce(matrix, width)[1])


def solve_linear_system(matrix: Matrix, rhs: Sequence[Fraction], width: int) -> Optional[Tuple[Fraction, ...]]:
    """
    The unique solution of matrix x = rhs, or None when the system is
    inconsistent or underdetermined.
    """
    augmented = [list(row) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    reduced, pivots = row_reduce(augmented, width + 1)
    if width in pivots or len(pivots) != width:
        return None
    solution = [Fraction(0)] * width
    for row, p in zip(reduced, pivots):
        solution[p] = row[width]
    return tuple(solution)
