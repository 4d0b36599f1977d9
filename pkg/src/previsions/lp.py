"""Exact linear programming over the rationals.

A dense two-phase primal simplex for equality-constrained problems in
standard form (``A x = b``, ``x >= 0``), using Bland's anti-cycling
pivot rule.  Every number is a :class:`fractions.Fraction`, so
feasibility, optimality and "is this maximum exactly zero" questions
are decided exactly, with no tolerances anywhere.

When a system is infeasible the solver returns a Farkas certificate: a
vector ``y`` with ``y . A_j <= 0`` for every column ``A_j`` of the
constraint matrix while ``y . b > 0``, which witnesses that ``b`` is
not a nonnegative combination of the columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    """Outcome of one exact solve."""

    status: str
    solution: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    certificate: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status == OPTIMAL


def solve(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    objective: Sequence[Fraction] | None = None,
    maximize: bool = False,
) -> LPResult:
    """Solve ``min/max objective . x`` subject to ``rows . x = rhs, x >= 0``.

    With ``objective=None`` only feasibility is decided and the returned
    solution is an arbitrary basic feasible point.
    """
    a = [[Fraction(v) for v in row] for row in rows]
    b = [Fraction(v) for v in rhs]
    neq = len(a)
    if neq == 0:
        raise ValueError("no constraints")
    nvar = len(a[0])
    if any(len(row) != nvar for row in a):
        raise ValueError("ragged constraint matrix")
    if len(b) != neq:
        raise ValueError("rhs length does not match constraint count")
    if nvar == 0:
        raise ValueError("no variables")

    # Orient every row so the right-hand side is nonnegative, remembering
    # the sign flips so the Farkas certificate can be mapped back.
    signs = []
    for i in range(neq):
        if b[i] < 0:
            a[i] = [-v for v in a[i]]
            b[i] = -b[i]
            signs.append(-_ONE)
        else:
            signs.append(_ONE)

    # Phase 1 tableau: [A | I | b] with one artificial variable per row.
    total = nvar + neq
    tableau = [a[i] + [_ONE if j == i else _ZERO for j in range(neq)] + [b[i]] for i in range(neq)]
    basis = [nvar + i for i in range(neq)]
    bottom = [_ZERO] * (total + 1)
    for j in range(nvar):
        bottom[j] = -sum(tableau[i][j] for i in range(neq))
    bottom[total] = -sum(b)

    status = _minimize(tableau, bottom, basis)
    if status != OPTIMAL:  # pragma: no cover - phase 1 is always bounded
        raise AssertionError("phase 1 cannot be unbounded")
    if -bottom[total] != 0:
        # Infeasible; read the simplex multipliers off the artificial columns.
        certificate = tuple(signs[i] * (_ONE - bottom[nvar + i]) for i in range(neq))
        return LPResult(INFEASIBLE, certificate=certificate)

    # Drive leftover artificial variables out of the basis; rows where that
    # is impossible are redundant (all-zero over the structural columns).
    for r in range(neq):
        if basis[r] >= nvar:
            for j in range(nvar):
                if tableau[r][j] != 0:
                    _pivot(tableau, bottom, basis, r, j)
                    break

    keep = [r for r in range(neq) if basis[r] < nvar]
    tableau = [tableau[r][:nvar] + [tableau[r][total]] for r in keep]
    basis = [basis[r] for r in keep]

    if objective is None:
        return LPResult(OPTIMAL, solution=_extract(tableau, basis, nvar))

    cost = [Fraction(v) for v in objective]
    if len(cost) != nvar:
        raise ValueError("objective length does not match variable count")
    if maximize:
        cost = [-v for v in cost]
    bottom = cost + [_ZERO]
    for r, bv in enumerate(basis):
        if cost[bv] != 0:
            coef = cost[bv]
            row = tableau[r]
            for j in range(nvar + 1):
                bottom[j] -= coef * row[j]

    status = _minimize(tableau, bottom, basis)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    value = -bottom[nvar]
    if maximize:
        value = -value
    return LPResult(OPTIMAL, solution=_extract(tableau, basis, nvar), objective=value)


def _minimize(tableau: list[list[Fraction]], bottom: list[Fraction], basis: list[int]) -> str:
    """Run Bland-rule simplex iterations until optimal or unbounded."""
    width = len(bottom) - 1
    while True:
        enter = next((j for j in range(width) if bottom[j] < 0), None)
        if enter is None:
            return OPTIMAL
        leave = None
        best_ratio = None
        for r, row in enumerate(tableau):
            coef = row[enter]
            if coef > 0:
                ratio = row[-1] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = r
        if leave is None:
            return UNBOUNDED
        _pivot(tableau, bottom, basis, leave, enter)


def _pivot(tableau: list[list[Fraction]], bottom: list[Fraction], basis: list[int], r: int, c: int) -> None:
    row = tableau[r]
    inv = _ONE / row[c]
    tableau[r] = row = [v * inv for v in row]
    for other in tableau:
        if other is not row and other[c] != 0:
            coef = other[c]
            for j in range(len(row)):
                other[j] -= coef * row[j]
    if bottom[c] != 0:
        coef = bottom[c]
        for j in range(len(row)):
            bottom[j] -= coef * row[j]
    basis[r] = c


def _extract(tableau: list[list[Fraction]], basis: list[int], nvar: int) -> tuple[Fraction, ...]:
    x = [_ZERO] * nvar
    for r, bv in enumerate(basis):
        x[bv] = tableau[r][-1]
    return tuple(x)
