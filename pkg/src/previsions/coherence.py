"""Coherence checking for conditional prevision assessments.

An assessment attaches one exact-rational prevision to each member of a
finite family of conditional random quantities.  The check is
geometric: every constituent inside the disjunction of the conditioning
events contributes the point of member values taken there (with the
assessed prevision standing in for members whose conditioning fails),
and the first-level condition is that the prevision vector lies in the
convex hull of those points, i.e. that an exact linear feasibility
system has a solution.  Members whose conditioning events carry zero
mass in *every* solution are then re-checked recursively on their own;
the assessment is coherent when each level is solvable and the
zero-mass set empties out.

Everything runs in exact rational arithmetic.  The recursion hinges on
deciding whether a maximal conditioning mass is exactly zero, which no
floating-point tolerance can do reliably; each mass is the optimum of
one small exact linear program.

When a level is unsolvable, a Farkas certificate of the failed system
is turned into betting stakes witnessing the incoherence: with those
stakes every possible net gain over the level's subfamily is strictly
negative (a Dutch Book).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .crq import CompoundConditional, ConditionalRandomQuantity, Rational
from .events import ConstituentPartition, constituents


class IncoherentAssessmentError(ValueError):
    """An operation required a coherent assessment and did not get one."""


class Assessment:
    """An ordered family of conditional random quantities with previsions.

    Members may be given as quantities or as compound conditionals (their
    realized quantity is used).  Previsions can be passed explicitly or
    taken from the members' prevision slots.
    """

    __slots__ = ("_members", "_previsions")

    def __init__(
        self,
        members: Iterable[ConditionalRandomQuantity | CompoundConditional],
        previsions: Sequence[Rational] | None = None,
    ):
        resolved = tuple(
            m.realized if isinstance(m, CompoundConditional) else m for m in members
        )
        if not resolved:
            raise ValueError("family must be nonempty")
        if previsions is None:
            missing = [i for i, m in enumerate(resolved) if m.prevision is None]
            if missing:
                raise ValueError(f"members {missing} have no prevision set")
            values = tuple(m.prevision for m in resolved)
        else:
            values = tuple(Fraction(p) for p in previsions)
            if len(values) != len(resolved):
                raise ValueError("previsions and members must have equal length")
        self._members = resolved
        self._previsions = values

    @property
    def members(self) -> tuple[ConditionalRandomQuantity, ...]:
        return self._members

    @property
    def previsions(self) -> tuple[Fraction, ...]:
        return self._previsions

    def __len__(self) -> int:
        return len(self._members)

    def sub(self, indices: Sequence[int]) -> "Assessment":
        """The sub-assessment on the given member indices, in order."""
        return Assessment(
            [self._members[i] for i in indices],
            [self._previsions[i] for i in indices],
        )


@dataclass(frozen=True)
class LinearSystem:
    """The exact feasibility system of an assessment.

    One point per constituent inside the disjunction of the conditioning
    events; entry ``i`` of a point is the member's value there when the
    constituent lies inside that member's conditioning event and the
    assessed prevision otherwise.  Solvability of ``sum(w_h * point_h) =
    target, sum(w_h) = 1, w >= 0`` is exactly convex-hull membership of
    the prevision vector.
    """

    points: tuple[tuple[Fraction, ...], ...]
    target: tuple[Fraction, ...]
    membership: tuple[frozenset[int], ...]
    partition: ConstituentPartition

    @property
    def size(self) -> int:
        return len(self.target)

    def constraint_rows(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        """Equality constraints (including total mass one) for the solver."""
        n = self.size
        rows = [[point[i] for point in self.points] for i in range(n)]
        rows.append([Fraction(1)] * len(self.points))
        rhs = list(self.target) + [Fraction(1)]
        return rows, rhs


@dataclass(frozen=True)
class CoherenceLevel:
    """One level of the recursive check, over original member indices."""

    members: tuple[int, ...]
    solvable: bool
    witness: tuple[Fraction, ...] | None
    masses: tuple[Fraction, ...] | None
    zero_mass: tuple[int, ...]


@dataclass(frozen=True)
class DutchBook:
    """Betting stakes extracted from an unsolvable level.

    Staking ``coefficients[i]`` on member ``members[i]`` yields the listed
    net gains over the subfamily's constituents; all of them have the same
    strict sign, so no outcome breaks even.
    """

    members: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    gains: tuple[Fraction, ...]


@dataclass(frozen=True)
class CoherenceReport:
    """Verdict plus the full recursion trace."""

    coherent: bool
    levels: tuple[CoherenceLevel, ...]
    dutch_book: DutchBook | None = None


def build_system(assessment: Assessment) -> LinearSystem:
    """Assemble the feasibility system of an assessment."""
    family = [
        ([event for event, _ in member.cells], member.conditioning)
        for member in assessment.members
    ]
    partition = constituents(family)
    points = []
    membership = []
    for block in partition.inside:
        row = []
        present = set()
        for i, (member, label) in enumerate(zip(assessment.members, block.labels)):
            if label is None:
                row.append(assessment.previsions[i])
            else:
                row.append(member.cells[label][1])
                present.add(i)
        points.append(tuple(row))
        membership.append(frozenset(present))
    return LinearSystem(tuple(points), assessment.previsions, tuple(membership), partition)


def solve_feasibility(system: LinearSystem) -> tuple[Fraction, ...] | None:
    """A nonnegative unit-mass weighting reproducing the target, or None.

    The weights are one exact solution; the solution set is generally a
    polytope.
    """
    result = _solve(system)
    return result.solution if result.feasible else None


def upper_conditioning_masses(system: LinearSystem) -> tuple[Fraction, ...]:
    """For each member, the largest total mass its conditioning event can
    carry over all solutions of the system (one exact LP per member)."""
    rows, rhs = system.constraint_rows()
    masses = []
    for j in range(system.size):
        objective = [
            Fraction(1) if j in present else Fraction(0) for present in system.membership
        ]
        result = lp.solve(rows, rhs, objective, maximize=True)
        if not result.feasible:
            raise ValueError("system is infeasible")
        masses.append(result.objective)
    return tuple(masses)


def check_coherence(assessment: Assessment) -> CoherenceReport:
    """Decide coherence by the recursive zero-mass procedure.

    Level by level: build the feasibility system of the current
    subfamily; if unsolvable the assessment is incoherent (and a Dutch
    Book is extracted from the Farkas certificate); otherwise recurse on
    the members whose maximal conditioning mass is exactly zero, until
    that set is empty.  The zero-mass set is always a proper subset, so
    at most ``len(assessment)`` levels occur.
    """
    indices = tuple(range(len(assessment)))
    levels: list[CoherenceLevel] = []
    while True:
        sub = assessment.sub(indices)
        system = build_system(sub)
        result = _solve(system)
        if not result.feasible:
            levels.append(CoherenceLevel(indices, False, None, None, ()))
            stakes = result.certificate[: len(indices)]
            gains = random_gain(sub, stakes)
            book = DutchBook(indices, tuple(stakes), gains)
            return CoherenceReport(False, tuple(levels), book)
        masses = upper_conditioning_masses(system)
        zero_mass = tuple(indices[j] for j, m in enumerate(masses) if m == 0)
        levels.append(CoherenceLevel(indices, True, result.solution, masses, zero_mass))
        if not zero_mass:
            return CoherenceReport(True, tuple(levels))
        if len(zero_mass) >= len(indices):  # pragma: no cover - impossible
            raise AssertionError("zero-mass set must shrink")
        indices = zero_mass


def random_gain(
    assessment: Assessment, coefficients: Sequence[Rational]
) -> tuple[Fraction, ...]:
    """Net betting gains, one per constituent inside the disjunction.

    Staking ``coefficients[i]`` on member ``i`` means paying
    ``coefficients[i] * prevision[i]`` and receiving the member's
    filled-in value scaled the same way; the gain at a constituent is the
    total received minus the total paid.  Coherence means no choice of
    coefficients makes every gain strictly positive, or every gain
    strictly negative.
    """
    stakes = [Fraction(s) for s in coefficients]
    if len(stakes) != len(assessment):
        raise ValueError("need exactly one coefficient per member")
    system = build_system(assessment)
    gains = []
    for point in system.points:
        gains.append(
            sum(
                s * (value - target)
                for s, value, target in zip(stakes, point, system.target)
            )
        )
    return tuple(gains)


def _solve(system: LinearSystem) -> lp.LPResult:
    rows, rhs = system.constraint_rows()
    return lp.solve(rows, rhs)
